"""Gluing a form with the right period to ``p dt`` across the cusp mouth.

Given ``omega`` with period ``p`` on the band ``[-ln 2, r_hi]``, the difference
``omega - p dt`` is exact, ``= d phi``.  With a cutoff ``g`` equal to 1 for
``r <= -1/2`` and 0 for ``r >= 0`` the form

    alpha = p dt + d(g phi) = p dt + g' phi dr + g d phi

is closed, has period ``p``, agrees with ``omega`` for ``r <= -1/2`` and with
``p dt`` for ``r >= 0``.  Components are assembled as
``alpha_r = g omega_r + g' phi`` and ``alpha_t = g omega_t + (1 - g) p`` so
that both plateaus reproduce their targets bit for bit.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels
from .cusp import R_FLOOR, CuspBand, band_norm_sq, pullback
from .errors import PeriodMismatchError, PreconditionError
from .gridded import CuspGrid, GriddedForm
from .laurent import TWO_PI, LaurentSeries, antiderivative, dt_series, evaluate, exactness_tolerance
from .quadrature import gauss_legendre, grid_exterior_derivative

PLATEAU_END = -0.5


def _h(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0.0
    with np.errstate(over="ignore"):  # -1/s -> -inf for subnormal s, exp gives the correct 0
        out[pos] = np.exp(-1.0 / s[pos])
    return out


def _dh(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0.0
    sp = s[pos]
    # dividing twice keeps 0 / sp**2 from becoming 0/0 when sp * sp underflows
    with np.errstate(over="ignore"):
        out[pos] = np.exp(-1.0 / sp) / sp / sp
    return out


def bump(r):
    """Smooth cutoff: 1 on ``(-oo, -1/2]``, 0 on ``[0, oo)``, nonincreasing between.

    ``g(r) = h(-r) / (h(-r) + h(r + 1/2))`` with ``h(s) = exp(-1/s)`` for
    ``s > 0`` and 0 otherwise; symmetric about ``r = -1/4`` where it equals 1/2.
    """
    r = np.asarray(r, dtype=float)
    u = _h(-r)
    v = _h(r + 0.5)
    g = u / (u + v)
    return float(g) if g.ndim == 0 else g


def bump_derivative(r):
    """Exact derivative of :func:`bump`."""
    r = np.asarray(r, dtype=float)
    u = _h(-r)
    v = _h(r + 0.5)
    du = -_dh(-r)
    dv = _dh(r + 0.5)
    den = u + v
    d = (du * v - u * dv) / (den * den)
    return float(d) if d.ndim == 0 else d


def default_grid(n_r: int = 128, n_t: int = 128, r_hi: float = 0.25) -> CuspGrid:
    return CuspGrid(R_FLOOR, r_hi, n_r, n_t)


def _check_inputs(omega: LaurentSeries, p: float) -> tuple[LaurentSeries, float]:
    diff = omega - dt_series(p)
    if abs(diff[-1].imag) > exactness_tolerance(diff):
        raise PeriodMismatchError(
            f"omega has period {-TWO_PI * omega[-1].imag!r}, which differs from p = {p!r}"
        )
    F, c = antiderivative(diff)
    return F, c


def alpha_components(omega: LaurentSeries, p: float, r_values, t_values) -> tuple[np.ndarray, np.ndarray]:
    """``(alpha_r, alpha_t)`` on the tensor grid ``r_values x t_values``."""
    F, c = _check_inputs(omega, p)
    r = np.asarray(r_values, dtype=float)
    t = np.asarray(t_values, dtype=float)
    om_r, om_t = pullback(omega, r, t)
    z = np.exp(-TWO_PI * r)[:, None] * np.exp(1j * TWO_PI * t)[None, :]
    # ln|z| = -2 pi r exactly on the grid
    phi = np.real(evaluate(F, z)) + (c * (-TWO_PI * r))[:, None]
    g = bump(r)[:, None]
    dg = bump_derivative(r)[:, None]
    alpha_r = g * om_r + dg * phi
    alpha_t = g * om_t + (1.0 - g) * p
    return alpha_r, alpha_t


def build_alpha(omega: LaurentSeries, p: float, grid: CuspGrid | None = None) -> GriddedForm:
    """Sample the glued form ``alpha = p dt + d(g phi)`` on a grid over ``[-ln 2, r_hi]``."""
    grid = default_grid() if grid is None else grid
    if abs(grid.r_lo - R_FLOOR) > 1e-12:
        raise PreconditionError(f"grid must start at the cusp floor {R_FLOOR}, got r_lo={grid.r_lo}")
    if not grid.r_hi > 0.0:
        raise PreconditionError(f"grid must extend past r = 0, got r_hi={grid.r_hi}")
    a_r, a_t = alpha_components(omega, p, grid.r_values, grid.t_values)
    return GriddedForm(grid, a_r, a_t)


def build_alpha_multi(omegas: Sequence[LaurentSeries], periods: Sequence[float],
                      grid: CuspGrid | None = None) -> list[GriddedForm]:
    """One independent gluing per cusp."""
    if len(omegas) != len(periods):
        raise ValueError("need one period per cusp")
    return [build_alpha(om, p, grid) for om, p in zip(omegas, periods)]


def horocycle_periods(alpha: GriddedForm) -> np.ndarray:
    """Trapezoid line integral of ``alpha`` around every horocycle row of the grid."""
    return kernels.neumaier_sum_rows(alpha.comp_t) / alpha.grid.n_t


def alpha_period_check(alpha: GriddedForm, p: float, r0: float | None = None,
                       tol: float = 1e-9) -> float:
    """Period of ``alpha`` on the horocycle nearest ``r0`` (every row when ``r0`` is None).

    Returns the period found, the worst one when all rows are checked, and
    raises :class:`PeriodMismatchError` if it is off by more than ``tol``.
    """
    periods = horocycle_periods(alpha)
    if r0 is None:
        value = periods[int(np.argmax(np.abs(periods - p)))]
    else:
        value = periods[int(np.argmin(np.abs(alpha.r_values - r0)))]
    if abs(value - p) > tol:
        raise PeriodMismatchError(f"horocycle period {value!r} differs from {p!r} by more than {tol}")
    return float(value)


def alpha_norm_sq(omega: LaurentSeries, p: float, r_hi: float = 0.0,
                  panels: int = 16, panel_nodes: int = 24) -> float:
    """Squared L2 norm of ``alpha`` over ``[-ln 2, r_hi]`` in flat cusp coordinates.

    On the plateau ``[-ln 2, -1/2]`` alpha is omega and the closed form is used;
    the transition zone is integrated with composite Gauss-Legendre in r and the
    trapezoid rule in t (exact: the integrand is a trigonometric polynomial);
    beyond ``r = 0`` alpha is ``p dt``.
    """
    if not r_hi >= 0.0:
        raise PreconditionError(f"r_hi must be >= 0, got {r_hi}")
    _check_inputs(omega, p)
    plateau = band_norm_sq(omega, CuspBand(R_FLOOR, PLATEAU_END))

    degree = max(abs(omega.n_min + 1), abs(omega.n_max + 1), 1)
    n_t = max(64, 4 * (degree + 1))
    t = np.arange(n_t) / n_t
    edges = np.linspace(PLATEAU_END, 0.0, panels + 1)
    rs, ws = zip(*(gauss_legendre(a, b, panel_nodes) for a, b in zip(edges[:-1], edges[1:])))
    r = np.concatenate(rs)
    w = np.concatenate(ws)
    a_r, a_t = alpha_components(omega, p, r, t)
    transition = kernels.neumaier_sum((a_r * a_r + a_t * a_t) * w[:, None]) / n_t

    tail = p * p * r_hi
    return kernels.neumaier_sum(np.array([plateau, transition, tail]))


def curl_convergence(omega: LaurentSeries, p: float, base: CuspGrid | None = None,
                     levels: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Discrete-curl sup norms of alpha under repeated grid halving, and observed orders.

    The sup is taken over the nodes of the coarsest grid, which every refinement
    contains, so each level measures the truncation error at the same points.
    Returns ``(sups, orders)`` with ``orders[k] = log2(sups[k] / sups[k+1])``.
    """
    base = default_grid() if base is None else base
    sups = []
    grid = base
    for k in range(levels):
        if k:
            grid = grid.refined()
        curl = grid_exterior_derivative(build_alpha(omega, p, grid))
        step = 2 ** k
        sups.append(float(np.max(np.abs(curl[::step, ::step]))))
    sups = np.array(sups)
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log2(sups[:-1] / sups[1:])
    return sups, orders
