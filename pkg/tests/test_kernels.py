import numpy as np
import pytest

from qctame import kernels

from conftest import brute_count, brute_nearest

rng = np.random.default_rng(20240811)


def _cloud(n, spread=100.0):
    return (rng.uniform(-spread, spread, n) + 1j * rng.uniform(-spread, spread, n)).astype(
        np.complex128
    )


def test_nearest_matches_brute_force(nn_backend):
    pts = _cloud(400)
    qs = _cloud(200, spread=150.0)
    d, idx = kernels.nearest(pts, qs)
    for q, dv, iv in zip(qs, d, idx):
        assert dv == pytest.approx(brute_nearest(pts, q), rel=0, abs=1e-12)
        assert abs(pts[iv] - q) == pytest.approx(dv, rel=0, abs=1e-12)


def test_nearest_on_degenerate_row(nn_backend):
    pts = np.arange(50).astype(np.complex128)  # collinear points
    qs = np.array([0.5 + 3j, -10 + 0j, 49.5 + 0j])
    d, _ = kernels.nearest(pts, qs)
    assert d[0] == pytest.approx(np.hypot(0.5, 3.0))
    assert d[1] == 10.0
    assert d[2] == 0.5


def test_nearest_single_point(nn_backend):
    d, idx = kernels.nearest(np.array([1 + 1j]), np.array([4 + 5j]))
    assert d[0] == 5.0 and idx[0] == 0


def test_count_within_matches_brute_force(nn_backend):
    pts = _cloud(500, spread=20.0)
    centers = _cloud(100, spread=20.0)
    for eps in (0.5, 3.0, 15.0):
        counts = kernels.count_within(pts, centers, eps)
        for c, n in zip(centers, counts):
            assert n == brute_count(pts, c, eps)


def test_count_within_is_strict_at_boundary(nn_backend):
    pts = np.array([0j, 1 + 0j])
    assert kernels.count_within(pts, np.array([0j]), 1.0)[0] == 1
    assert kernels.count_within(pts, np.array([0j]), np.nextafter(1.0, 2.0))[0] == 2


def test_backends_agree_exactly():
    if len(kernels.available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    pts = _cloud(1000)
    qs = _cloud(300)
    old = kernels.backend()
    try:
        kernels.set_backend("grid")
        dg, _ = kernels.nearest(pts, qs)
        cg = kernels.count_within(pts, qs, 7.5)
        kernels.set_backend("numpy")
        dn, _ = kernels.nearest(pts, qs)
        cn = kernels.count_within(pts, qs, 7.5)
    finally:
        kernels.set_backend(old)
    np.testing.assert_allclose(dg, dn, rtol=1e-15, atol=0)
    np.testing.assert_array_equal(cg, cn)


def test_empty_inputs(nn_backend):
    with pytest.raises(ValueError):
        kernels.nearest(np.empty(0, dtype=np.complex128), np.array([0j]))
    assert kernels.count_within(np.empty(0, dtype=np.complex128), np.array([0j]), 1.0)[0] == 0
    d, idx = kernels.nearest(np.array([0j]), np.empty(0, dtype=np.complex128))
    assert d.size == 0 and idx.size == 0
