"""Norm minimisation inside a cohomology class, posed as a generic QP.

The class of forms with period ``p`` on an annulus is parametrised by the
harmonic (Laurent) family.  Hodge theory guarantees that the minimiser over
all smooth closed forms in the class is harmonic, so nothing is lost by the
restriction.  Absolute boundary conditions are not imposed: every member of
the family is admissible, and ``dt`` satisfies them anyway.

In the real coordinates ``x = (Re a_n, Im a_n)_n`` the squared norm is the
diagonal quadratic ``sum_n w_n (Re a_n^2 + Im a_n^2)`` with ``w_n`` the norm
of ``z**n``, and the period constraint is the single linear equation
``-2 pi Im(a_{-1}) = p``.  The solver below knows nothing of this structure;
it solves the KKT system of a dense equality-constrained QP.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cusp import CuspBand, band_norm_sq
from .errors import InfeasibleConstraintError, PeriodMismatchError, PreconditionError, VerificationError
from .laurent import (
    TWO_PI,
    Annulus,
    LaurentSeries,
    dt_series,
    exactness_tolerance,
    norm_sq,
    period,
    term_norm_sq,
)


def solve_eqp(G, c, A, b):
    """Solve ``min 1/2 x^T G x + c^T x`` subject to ``A x = b``.

    Direct solve of the KKT system ``[[G, A^T], [A, 0]] [x; -lam] = [-c; b]``.

    Returns
    -------
    x : ndarray
        The minimiser.
    lam : ndarray
        Lagrange multipliers, with ``G x + c = A^T lam``.
    """
    G = np.asarray(G, dtype=float)
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float).reshape(-1, len(c))
    b = np.asarray(b, dtype=float).reshape(-1)
    n, m = len(c), len(b)
    kkt = np.zeros((n + m, n + m))
    kkt[:n, :n] = G
    kkt[:n, n:] = A.T
    kkt[n:, :n] = A
    rhs = np.concatenate([-c, b])
    sol = np.linalg.solve(kkt, rhs)
    return sol[:n], -sol[n:]


@dataclass(frozen=True)
class MinimizationProblem:
    p: float
    annulus: Annulus
    window: tuple[int, int] = (-10, 10)

    def __post_init__(self):
        lo, hi = self.window
        if lo > hi:
            raise PreconditionError(f"empty window {self.window}")
        if not math.isfinite(self.p):
            raise PreconditionError(f"period must be finite, got {self.p}")

    @property
    def indices(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    @property
    def contains_dt(self) -> bool:
        return self.window[0] <= -1 <= self.window[1]


def _weights(problem: MinimizationProblem) -> np.ndarray:
    w = np.array([term_norm_sq(n, 1.0, problem.annulus) for n in problem.indices])
    if not np.all(np.isfinite(w)):
        raise PreconditionError(f"some powers in {problem.window} have infinite norm on {problem.annulus}")
    return np.repeat(w, 2)


def qp_matrices(problem: MinimizationProblem):
    """``(G, c, A, b)`` of the QP in the real coordinates (Re a_n, Im a_n)."""
    w = _weights(problem)
    G = np.diag(2.0 * w)
    c = np.zeros(len(w))
    if problem.contains_dt:
        A = np.zeros((1, len(w)))
        A[0, 2 * (-1 - problem.window[0]) + 1] = -TWO_PI
        b = np.array([problem.p])
    else:
        A = np.zeros((0, len(w)))
        b = np.zeros(0)
    return G, c, A, b


def to_coordinates(series: LaurentSeries, window: tuple[int, int]) -> np.ndarray:
    x = np.empty(2 * (window[1] - window[0] + 1))
    for k, n in enumerate(range(window[0], window[1] + 1)):
        a = series[n]
        x[2 * k] = a.real
        x[2 * k + 1] = a.imag
    return x


def from_coordinates(x, window: tuple[int, int]) -> LaurentSeries:
    x = np.asarray(x, dtype=float)
    return LaurentSeries.from_arrays(window[0], x[0::2], x[1::2])


def minimize_in_class(problem: MinimizationProblem) -> LaurentSeries:
    """The series of least norm on the annulus among those with period ``p``."""
    if not problem.contains_dt and problem.p != 0.0:
        raise InfeasibleConstraintError(
            f"window {problem.window} has no z**-1 term, so period {problem.p} is unattainable"
        )
    G, c, A, b = qp_matrices(problem)
    x, _ = solve_eqp(G, c, A, b)
    return from_coordinates(x, problem.window)


@dataclass(frozen=True)
class OptimalityReport:
    norm_sq: float
    period: float
    constraint_residual: float
    projected_gradient: float
    fd_gradient_error: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def norm_gradient(problem: MinimizationProblem, series: LaurentSeries) -> np.ndarray:
    """Analytic gradient ``2 W x`` of the squared norm in real coordinates."""
    return 2.0 * _weights(problem) * to_coordinates(series, problem.window)


def fd_gradient(problem: MinimizationProblem, series: LaurentSeries, step: float = 1e-6) -> np.ndarray:
    """Central finite differences of :func:`norm_sq` in each real coordinate."""
    x = to_coordinates(series, problem.window)
    g = np.empty_like(x)
    for i in range(len(x)):
        xp, xm = x.copy(), x.copy()
        xp[i] += step
        xm[i] -= step
        fp = norm_sq(from_coordinates(xp, problem.window), problem.annulus)
        fm = norm_sq(from_coordinates(xm, problem.window), problem.annulus)
        g[i] = (fp - fm) / (2.0 * step)
    return g


def optimality_report(problem: MinimizationProblem, series: LaurentSeries,
                      fd_step: float = 1e-6) -> OptimalityReport:
    """First-order diagnostics at ``series``.

    ``projected_gradient`` is the norm of the gradient after removing its
    component along the constraint normal.  ``fd_gradient_error`` is the
    largest ``|fd - analytic| / (1 + |analytic|)`` over the coordinates.
    """
    _, _, A, _ = qp_matrices(problem)
    g = norm_gradient(problem, series)
    if A.shape[0]:
        proj = g - A.T @ np.linalg.solve(A @ A.T, A @ g)
    else:
        proj = g
    fd = fd_gradient(problem, series, fd_step)
    return OptimalityReport(
        norm_sq=norm_sq(series, problem.annulus),
        period=period(series),
        constraint_residual=abs(period(series) - problem.p),
        projected_gradient=float(np.linalg.norm(proj)),
        fd_gradient_error=float(np.max(np.abs(fd - g) / (1.0 + np.abs(g)))),
    )


def period_tolerance(series: LaurentSeries, p: float) -> float:
    return TWO_PI * exactness_tolerance(series) + 4.0 * math.ulp(abs(p))


def eq5_check(p: float, band: CuspBand, competitor: LaurentSeries,
              tol: float = 1e-10) -> tuple[float, float]:
    """``(|p dt|^2, |competitor|^2)`` on the band; the first never exceeds the second.

    ``competitor`` must have period ``p``.  Raises :class:`VerificationError`
    if the inequality fails by more than ``tol``.
    """
    if abs(period(competitor) - p) > period_tolerance(competitor, p):
        raise PeriodMismatchError(f"competitor has period {period(competitor)!r}, expected {p!r}")
    lower = band_norm_sq(dt_series(p), band)
    upper = band_norm_sq(competitor, band)
    if upper - lower < -tol:
        raise VerificationError(f"|p dt|^2 = {lower!r} exceeds competitor norm {upper!r} on {band}")
    return lower, upper
