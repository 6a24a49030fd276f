"""Quadrature oracles, independent of the closed forms in :mod:`cuspforms.laurent`.

Periods are computed with the periodic trapezoid rule on a circle, which is
spectrally accurate for the analytic integrands here.  Norms are computed as
area integrals of ``|f|**2`` in polar coordinates: Gauss-Legendre in the
radius (smooth, non-periodic) times the trapezoid rule in the angle
(trigonometric polynomial, exact once the node count exceeds its degree).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .cusp import CuspBand, pullback
from .errors import PreconditionError
from .gridded import GriddedForm
from .laurent import TWO_PI, Annulus, LaurentSeries, evaluate


@dataclass(frozen=True)
class QuadratureSpec:
    radial_nodes: int = 64
    angular_nodes: int = 256
    contour_nodes: int = 256

    def __post_init__(self):
        for name in ("radial_nodes", "angular_nodes", "contour_nodes"):
            if getattr(self, name) < 4:
                raise PreconditionError(f"{name} must be at least 4, got {getattr(self, name)}")


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=32)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [a, b]."""
    x, w = _leggauss(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def contour_period(series: LaurentSeries, radius: float, spec: QuadratureSpec = DEFAULT_SPEC,
                   annulus: Annulus | None = None) -> float:
    """Trapezoid approximation of the integral of Re(f dz) over ``|z| = radius``.

    With ``z = radius * e^{i theta}``, ``Re(f dz) = -Im(z f(z)) d theta``.
    """
    if not radius > 0.0:
        raise PreconditionError(f"contour radius must be positive, got {radius}")
    if annulus is not None and not (annulus.rho < radius < annulus.outer):
        raise PreconditionError(f"radius {radius} is outside {annulus}")
    n = spec.contour_nodes
    theta = TWO_PI * np.arange(n) / n
    zf = evaluate(series.shift(1), radius * np.exp(1j * theta))
    return (TWO_PI / n) * kernels.neumaier_sum(-zf.imag)


def annulus_norm_sq(series: LaurentSeries, annulus: Annulus,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Tensor-product quadrature of the area integral of ``|f|**2`` over the annulus."""
    if annulus.rho == 0.0 and series.n_min < 0:
        raise PreconditionError("quadrature of negative powers up to the puncture")
    r, wr = gauss_legendre(annulus.rho, annulus.outer, spec.radial_nodes)
    m = spec.angular_nodes
    theta = TWO_PI * np.arange(m) / m
    f = evaluate(series, r[:, None] * np.exp(1j * theta)[None, :])
    integrand = (f.real * f.real + f.imag * f.imag) * (r * wr)[:, None]
    return (TWO_PI / m) * kernels.neumaier_sum(integrand)


def cusp_norm_sq(series: LaurentSeries, band: CuspBand,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """The same norm integrated in flat cusp coordinates: ``int (omega_r^2 + omega_t^2) dt dr``."""
    if math.isinf(band.r_hi):
        raise PreconditionError("cusp quadrature needs a bounded band")
    r, wr = gauss_legendre(band.r_lo, band.r_hi, spec.radial_nodes)
    t = np.arange(spec.angular_nodes) / spec.angular_nodes
    om_r, om_t = pullback(series, r, t)
    integrand = (om_r * om_r + om_t * om_t) * wr[:, None]
    return kernels.neumaier_sum(integrand) / spec.angular_nodes


def grid_exterior_derivative(form: GriddedForm) -> np.ndarray:
    """Centred-difference curl ``d(omega_t)/dr - d(omega_r)/dt`` of a gridded form.

    Second order in both spacings; for a smooth closed form the sup norm is O(h^2).
    """
    if form.comp_r.shape != form.comp_t.shape:
        raise ValueError(f"component shapes differ: {form.comp_r.shape} vs {form.comp_t.shape}")
    return kernels.curl_periodic(form.comp_r, form.comp_t, form.grid.h_r, form.grid.h_t)
