"""Plane points and scan windows (closed disks and closed squares)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DISK = "disk"
SQUARE = "square"


@dataclass(frozen=True, order=True)
class Point:
    """A point of the plane; ordering is lexicographic in (re, im)."""

    re: float
    im: float

    def __post_init__(self):
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError("point coordinates must be finite")

    @classmethod
    def of(cls, z) -> "Point":
        if isinstance(z, Point):
            return z
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)


def as_complex(z) -> complex:
    return z.z if isinstance(z, Point) else complex(z)


def sort_points(zs: np.ndarray) -> np.ndarray:
    """Sort a complex array lexicographically by (re, im)."""
    zs = np.asarray(zs, dtype=np.complex128)
    if zs.size == 0:
        return zs
    return zs[np.lexsort((zs.imag, zs.real))]


@dataclass(frozen=True)
class Window:
    """Closed disk of radius ``extent`` or closed square of half-side ``extent``.

    The disk of extent r sits inside the square of extent r at the same
    center, which sits inside the disk of extent sqrt(2)*r.
    """

    shape: str
    center: Point
    extent: float

    def __post_init__(self):
        if self.shape not in (DISK, SQUARE):
            raise ValueError(f"unknown window shape {self.shape!r}")
        object.__setattr__(self, "center", Point.of(self.center))
        object.__setattr__(self, "extent", float(self.extent))
        if not (math.isfinite(self.extent) and self.extent > 0):
            raise ValueError("window extent must be strictly positive")

    def bbox(self) -> tuple[float, float, float, float]:
        c, r = self.center, self.extent
        return (c.re - r, c.re + r, c.im - r, c.im + r)

    def contains(self, zs: np.ndarray) -> np.ndarray:
        """Boolean mask of membership in the closed window."""
        zs = np.asarray(zs, dtype=np.complex128)
        dx = zs.real - self.center.re
        dy = zs.imag - self.center.im
        r = self.extent
        if self.shape == SQUARE:
            return (np.abs(dx) <= r) & (np.abs(dy) <= r)
        return dx * dx + dy * dy <= r * r

    def project(self, zs: np.ndarray) -> np.ndarray:
        """Nearest-point projection onto the window (1-Lipschitz)."""
        zs = np.asarray(zs, dtype=np.complex128)
        c, r = self.center.z, self.extent
        if self.shape == SQUARE:
            dx = np.clip(zs.real - c.real, -r, r)
            dy = np.clip(zs.imag - c.imag, -r, r)
            return c + dx + 1j * dy
        d = zs - c
        norm = np.abs(d)
        scale = np.ones_like(norm)
        outside = norm > r
        scale[outside] = r / norm[outside]
        return c + d * scale

    def translate(self, b) -> "Window":
        return Window(self.shape, Point.of(self.center.z + complex(b)), self.extent)


def disk(center, extent: float) -> Window:
    return Window(DISK, Point.of(center), extent)


def square(center, extent: float) -> Window:
    return Window(SQUARE, Point.of(center), extent)


def box_distance(z: complex, cx: float, cy: float, half: float) -> float:
    """Distance from z to the closed axis-aligned square cell of half-side ``half``."""
    dx = max(abs(z.real - cx) - half, 0.0)
    dy = max(abs(z.imag - cy) - half, 0.0)
    return math.hypot(dx, dy)
