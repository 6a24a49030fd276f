"""Cusp coordinates (r, t) and their identification with the punctured disk.

The cusp is the flat half-cylinder ``{(r, t): t in [0, 1)}`` with the
holomorphic coordinate ``w = t + i r``; the map

    z = exp(2 pi i w) = exp(-2 pi r) exp(2 pi i t)

sends the horocycle ``r = const`` to the circle ``|z| = exp(-2 pi r)`` and the
end ``r -> oo`` to the puncture.  Under this map ``dt`` is ``Re(dz / (2 pi i z))``
and, the map being conformal, the L2 norm of a 1-form on a band equals its
norm on the image annulus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, VerificationError
from .laurent import TWO_PI, Annulus, LaurentSeries, dt_series, evaluate, norm_sq

#: Deepest point of the cusp mouth used by the gluing construction.
R_FLOOR = -math.log(2.0)


@dataclass(frozen=True)
class CuspPoint:
    r: float
    t: float

    def __post_init__(self):
        if not math.isfinite(self.r):
            raise PreconditionError(f"cusp depth must be finite, got {self.r}")
        if not (0.0 <= self.t < 1.0):
            raise PreconditionError(f"horocycle coordinate must lie in [0, 1), got {self.t}")


@dataclass(frozen=True)
class CuspBand:
    """The set of cusp points with ``r_lo <= r <= r_hi``; ``r_hi`` may be infinite."""

    r_lo: float
    r_hi: float

    def __post_init__(self):
        if not (math.isfinite(self.r_lo) and self.r_lo < self.r_hi):
            raise PreconditionError(f"need finite r_lo < r_hi, got [{self.r_lo}, {self.r_hi}]")
        if self.r_lo < R_FLOOR - 1e-12:
            raise PreconditionError(f"band starts below the cusp floor {R_FLOOR}: r_lo = {self.r_lo}")

    @property
    def width(self) -> float:
        return self.r_hi - self.r_lo


def rho_of_r(r):
    """Radius of the horocycle at depth r: ``exp(-2 pi r)``."""
    return np.exp(-TWO_PI * np.asarray(r, dtype=float)) if np.ndim(r) else math.exp(-TWO_PI * r)


def r_of_rho(rho):
    return -np.log(rho) / TWO_PI if np.ndim(rho) else -math.log(rho) / TWO_PI


def disk_from_cusp(pt: CuspPoint) -> complex:
    if pt.r < R_FLOOR - 1e-12:
        raise PreconditionError(f"r = {pt.r} lies below the cusp floor")
    mod = math.exp(-TWO_PI * pt.r)
    ang = TWO_PI * pt.t
    return complex(mod * math.cos(ang), mod * math.sin(ang))


def cusp_from_disk(z: complex) -> CuspPoint:
    z = complex(z)
    if z == 0:
        raise PreconditionError("the puncture has no cusp coordinates")
    t = (math.atan2(z.imag, z.real) / TWO_PI) % 1.0
    if t >= 1.0:  # atan2 of -0.0 rounding can land exactly on 1
        t = 0.0
    return CuspPoint(-math.log(abs(z)) / TWO_PI, t)


def disk_grid(r_values, t_values) -> np.ndarray:
    """z on the tensor grid; rows follow r, columns follow t."""
    r = np.asarray(r_values, dtype=float)[:, None]
    t = np.asarray(t_values, dtype=float)[None, :]
    return np.exp(-TWO_PI * r) * np.exp(1j * TWO_PI * t)


def band_annulus(band: CuspBand) -> Annulus:
    """Image annulus of a band: radii ``(exp(-2 pi r_hi), exp(-2 pi r_lo))``."""
    inner = 0.0 if math.isinf(band.r_hi) else math.exp(-TWO_PI * band.r_hi)
    return Annulus(inner, math.exp(-TWO_PI * band.r_lo))


def band_norm_sq(series: LaurentSeries, band: CuspBand) -> float:
    """Squared L2 norm of Re(f dz) on the band, via the closed form on its annulus."""
    return norm_sq(series, band_annulus(band))


def pullback(series: LaurentSeries, r_values, t_values) -> tuple[np.ndarray, np.ndarray]:
    """Components ``(omega_r, omega_t)`` of Re(f dz) in cusp coordinates.

    From ``dz = 2 pi i z dw``: ``omega_r = -2 pi Re(z f)``, ``omega_t = -2 pi Im(z f)``.
    """
    zf = evaluate(series.shift(1), disk_grid(r_values, t_values))
    return -TWO_PI * zf.real, -TWO_PI * zf.imag


def dt_pullback_check(p: float, band: CuspBand, rtol: float = 1e-12) -> float:
    """Norm of ``p dt`` on the band computed in the disk; must equal ``p**2 * width``."""
    if math.isinf(band.r_hi):
        raise PreconditionError("dt has infinite norm on an unbounded band")
    value = band_norm_sq(dt_series(p), band)
    flat = p * p * band.width
    if abs(value - flat) > rtol * max(abs(flat), 1e-300):
        raise VerificationError(f"disk norm {value!r} != cylinder norm {flat!r} for p={p} on {band}")
    return value
