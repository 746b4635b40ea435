"""Certified enclosures of exact real quantities."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CertifiedInterval:
    """Pair (lo, hi) bracketing an exactly defined quantity.

    Construction sites are responsible for the enclosure argument (Lipschitz
    grid bounds, outward-rounded arithmetic); this type only enforces shape.
    """

    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def enclose(lo: float, hi: float) -> CertifiedInterval:
    """Build an interval widened outward by one ulp per endpoint.

    Absorbs the final rounding of the endpoint computations themselves.
    """
    return CertifiedInterval(math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf))


def divide_scalar(x: float, iv: CertifiedInterval) -> CertifiedInterval:
    """Outward-rounded x / iv for x >= 0 and iv.lo > 0."""
    if x < 0 or iv.lo <= 0:
        raise ValueError("division requires x >= 0 and a positive interval")
    return enclose(x / iv.hi, x / iv.lo)
