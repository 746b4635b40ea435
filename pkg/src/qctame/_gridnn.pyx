# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Uniform-grid kernels for batched planar nearest-neighbor queries.

Points are bucketed into a rectangular cell grid sized for roughly one
point per cell; queries walk Chebyshev rings of cells outward until the
ring's minimum possible distance can no longer beat the best candidate.
Distances are exact (min of dx*dx + dy*dy, square root taken once).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, floor, sqrt

cnp.import_array()

cdef Py_ssize_t MAX_CELLS_PER_POINT = 4


cdef inline Py_ssize_t _clamp(Py_ssize_t v, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    if v < lo:
        return lo
    if v > hi:
        return hi
    return v


cdef class PointGrid:
    """Static cell-bucketed index over a fixed planar point set."""

    cdef double[::1] px
    cdef double[::1] py
    cdef Py_ssize_t n, nx, ny
    cdef double xmin, ymin, cell
    cdef Py_ssize_t[::1] start
    cdef Py_ssize_t[::1] order

    def __init__(self, double[::1] px, double[::1] py):
        cdef Py_ssize_t n = px.shape[0]
        if n == 0:
            raise ValueError("point grid requires at least one point")
        self.px = px
        self.py = py
        self.n = n

        cdef double xmin = px[0], xmax = px[0], ymin = py[0], ymax = py[0]
        cdef Py_ssize_t i
        for i in range(1, n):
            if px[i] < xmin:
                xmin = px[i]
            elif px[i] > xmax:
                xmax = px[i]
            if py[i] < ymin:
                ymin = py[i]
            elif py[i] > ymax:
                ymax = py[i]
        cdef double spanx = xmax - xmin
        cdef double spany = ymax - ymin
        cdef double cell
        if spanx > 0 and spany > 0:
            cell = sqrt(spanx * spany / n)
        elif spanx > 0 or spany > 0:
            cell = (spanx + spany) / n
        else:
            cell = 1.0
        if cell <= 0:
            cell = 1.0
        # cap total cells at MAX_CELLS_PER_POINT * n
        while ((<Py_ssize_t>(spanx / cell) + 1) * (<Py_ssize_t>(spany / cell) + 1)
               > MAX_CELLS_PER_POINT * n + 16):
            cell *= 1.5
        self.xmin = xmin
        self.ymin = ymin
        self.cell = cell
        self.nx = <Py_ssize_t>(spanx / cell) + 1
        self.ny = <Py_ssize_t>(spany / cell) + 1

        cdef cnp.ndarray[cnp.npy_intp, ndim=1] start = np.zeros(self.nx * self.ny + 1, dtype=np.intp)
        cdef cnp.ndarray[cnp.npy_intp, ndim=1] order = np.empty(n, dtype=np.intp)
        self.start = start
        self.order = order

        cdef Py_ssize_t[::1] counts = self.start
        cdef Py_ssize_t c
        for i in range(n):
            c = self._cell_of(px[i], py[i])
            counts[c + 1] += 1
        for i in range(1, self.nx * self.ny + 1):
            counts[i] += counts[i - 1]
        cdef cnp.ndarray[cnp.npy_intp, ndim=1] cursor = np.asarray(start[:-1]).copy()
        cdef Py_ssize_t[::1] cur = cursor
        cdef Py_ssize_t[::1] orderv = self.order
        for i in range(n):
            c = self._cell_of(px[i], py[i])
            orderv[cur[c]] = i
            cur[c] += 1

    cdef inline Py_ssize_t _cell_of(self, double x, double y) noexcept nogil:
        cdef Py_ssize_t ix = _clamp(<Py_ssize_t>floor((x - self.xmin) / self.cell), 0, self.nx - 1)
        cdef Py_ssize_t iy = _clamp(<Py_ssize_t>floor((y - self.ymin) / self.cell), 0, self.ny - 1)
        return ix * self.ny + iy

    cdef inline void _scan_cell(self, Py_ssize_t ix, Py_ssize_t iy, double x, double y,
                                double* best2, Py_ssize_t* besti) noexcept nogil:
        cdef Py_ssize_t c = ix * self.ny + iy
        cdef Py_ssize_t k, j
        cdef double dx, dy, d2
        for k in range(self.start[c], self.start[c + 1]):
            j = self.order[k]
            dx = self.px[j] - x
            dy = self.py[j] - y
            d2 = dx * dx + dy * dy
            if d2 < best2[0]:
                best2[0] = d2
                besti[0] = j

    def query(self, double[::1] qx, double[::1] qy):
        """Exact nearest distances (and indices) for a batch of queries."""
        cdef Py_ssize_t m = qx.shape[0]
        cdef cnp.ndarray[cnp.float64_t, ndim=1] dist = np.empty(m, dtype=np.float64)
        cdef cnp.ndarray[cnp.npy_intp, ndim=1] idx = np.empty(m, dtype=np.intp)
        cdef double[::1] distv = dist
        cdef Py_ssize_t[::1] idxv = idx
        cdef Py_ssize_t q, ix, iy, ring, x0, x1, y0, y1, xx, yy, maxring
        cdef double x, y, best2, base, bound
        with nogil:
            for q in range(m):
                x = qx[q]
                y = qy[q]
                ix = _clamp(<Py_ssize_t>floor((x - self.xmin) / self.cell), 0, self.nx - 1)
                iy = _clamp(<Py_ssize_t>floor((y - self.ymin) / self.cell), 0, self.ny - 1)
                # distance from the query to its (clamped) anchor cell
                base = 0.0
                if x < self.xmin:
                    base = self.xmin - x
                elif x > self.xmin + self.nx * self.cell:
                    base = x - (self.xmin + self.nx * self.cell)
                if y < self.ymin:
                    bound = self.ymin - y
                elif y > self.ymin + self.ny * self.cell:
                    bound = y - (self.ymin + self.ny * self.cell)
                else:
                    bound = 0.0
                if bound > base:
                    base = bound
                best2 = INFINITY
                idxv[q] = -1
                maxring = self.nx + self.ny + 2
                ring = 0
                while ring <= maxring:
                    # cells on Chebyshev ring k sit at least max(base, (k-1)*cell) away
                    if ring > 0:
                        bound = (ring - 1) * self.cell
                        if base > bound:
                            bound = base
                        if bound * bound >= best2:
                            break
                    x0 = _clamp(ix - ring, 0, self.nx - 1)
                    x1 = _clamp(ix + ring, 0, self.nx - 1)
                    y0 = _clamp(iy - ring, 0, self.ny - 1)
                    y1 = _clamp(iy + ring, 0, self.ny - 1)
                    if ring == 0:
                        self._scan_cell(ix, iy, x, y, &best2, &idxv[q])
                    else:
                        if iy - ring >= 0:
                            for xx in range(x0, x1 + 1):
                                self._scan_cell(xx, iy - ring, x, y, &best2, &idxv[q])
                        if iy + ring <= self.ny - 1:
                            for xx in range(x0, x1 + 1):
                                self._scan_cell(xx, iy + ring, x, y, &best2, &idxv[q])
                        y0 = _clamp(iy - ring + 1, 0, self.ny - 1)
                        y1 = _clamp(iy + ring - 1, 0, self.ny - 1)
                        if ix - ring >= 0:
                            for yy in range(y0, y1 + 1):
                                self._scan_cell(ix - ring, yy, x, y, &best2, &idxv[q])
                        if ix + ring <= self.nx - 1:
                            for yy in range(y0, y1 + 1):
                                self._scan_cell(ix + ring, yy, x, y, &best2, &idxv[q])
                    ring += 1
                distv[q] = sqrt(best2)
        return dist, idx

    def count_within(self, double[::1] cx, double[::1] cy, double eps):
        """Counts of points strictly inside the open eps-disk of each center."""
        cdef Py_ssize_t m = cx.shape[0]
        cdef cnp.ndarray[cnp.npy_intp, ndim=1] out = np.zeros(m, dtype=np.intp)
        cdef Py_ssize_t[::1] outv = out
        cdef double eps2 = eps * eps
        cdef Py_ssize_t q, x0, x1, y0, y1, xx, yy, k, j, cnum
        cdef double x, y, dx, dy
        with nogil:
            for q in range(m):
                x = cx[q]
                y = cy[q]
                x0 = _clamp(<Py_ssize_t>floor((x - eps - self.xmin) / self.cell), 0, self.nx - 1)
                x1 = _clamp(<Py_ssize_t>floor((x + eps - self.xmin) / self.cell), 0, self.nx - 1)
                y0 = _clamp(<Py_ssize_t>floor((y - eps - self.ymin) / self.cell), 0, self.ny - 1)
                y1 = _clamp(<Py_ssize_t>floor((y + eps - self.ymin) / self.cell), 0, self.ny - 1)
                for xx in range(x0, x1 + 1):
                    for yy in range(y0, y1 + 1):
                        cnum = xx * self.ny + yy
                        for k in range(self.start[cnum], self.start[cnum + 1]):
                            j = self.order[k]
                            dx = self.px[j] - x
                            dy = self.py[j] - y
                            if dx * dx + dy * dy < eps2:
                                outv[q] += 1
        return out
