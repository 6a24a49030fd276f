import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspforms.cusp import CuspBand, band_annulus
from cuspforms.errors import InfeasibleConstraintError, PeriodMismatchError, PreconditionError, VerificationError
from cuspforms.hodge_min import (
    MinimizationProblem,
    eq5_check,
    fd_gradient,
    from_coordinates,
    minimize_in_class,
    norm_gradient,
    optimality_report,
    qp_matrices,
    solve_eqp,
    to_coordinates,
)
from cuspforms.laurent import TWO_PI, Annulus, LaurentSeries, dt_series, norm_sq, term_norm_sq
from cuspforms.sampling import random_series

S = LaurentSeries.from_dict


def test_solve_eqp_small_problem():
    # min x^2 + y^2 subject to x + y = 2  ->  (1, 1), multiplier 2
    x, lam = solve_eqp(2 * np.eye(2), np.zeros(2), [[1.0, 1.0]], [2.0])
    np.testing.assert_allclose(x, [1.0, 1.0])
    np.testing.assert_allclose(lam, [2.0])


def test_solve_eqp_unconstrained():
    x, lam = solve_eqp(np.diag([2.0, 4.0]), np.array([-2.0, 4.0]), np.zeros((0, 2)), np.zeros(0))
    np.testing.assert_allclose(x, [1.0, -1.0])
    assert lam.size == 0


def test_minimizer_is_dt_example():
    sol = minimize_in_class(MinimizationProblem(TWO_PI, Annulus(0.5), (-5, 5)))
    for n in range(-5, 6):
        assert abs(sol[n] - (-1j if n == -1 else 0)) <= 1e-10


@pytest.mark.parametrize("rho", [0.1, 0.5, 0.9])
def test_zero_period_gives_zero(rho):
    assert minimize_in_class(MinimizationProblem(0.0, Annulus(rho), (-4, 4))).is_zero


def test_minimizer_norm_and_perturbation():
    prob = MinimizationProblem(1.0, Annulus(0.2), (-8, 8))
    sol = minimize_in_class(prob)
    best = norm_sq(sol, prob.annulus)
    assert best == pytest.approx(math.log(5) / TWO_PI, rel=1e-14)
    assert norm_sq(sol + S({3: 0.1}), prob.annulus) > best


def test_infeasible_window():
    with pytest.raises(InfeasibleConstraintError):
        minimize_in_class(MinimizationProblem(1.0, Annulus(0.5), (0, 4)))
    assert minimize_in_class(MinimizationProblem(0.0, Annulus(0.5), (0, 4))).is_zero


def test_problem_validation():
    with pytest.raises(PreconditionError):
        MinimizationProblem(1.0, Annulus(0.5), (3, 2))
    with pytest.raises(PreconditionError):
        MinimizationProblem(math.inf, Annulus(0.5))
    with pytest.raises(PreconditionError):
        qp_matrices(MinimizationProblem(1.0, Annulus(0.0), (-3, 3)))


def test_qp_matrices_encode_norm_and_period(rng):
    prob = MinimizationProblem(2.5, Annulus(0.3), (-3, 2))
    G, c, A, b = qp_matrices(prob)
    s = random_series(rng, -3, 2)
    x = to_coordinates(s, prob.window)
    assert 0.5 * x @ G @ x == pytest.approx(norm_sq(s, prob.annulus), rel=1e-13)
    assert (A @ x)[0] == pytest.approx(-TWO_PI * s[-1].imag, rel=1e-15)
    assert b[0] == 2.5


@given(st.integers(-6, 0), st.integers(0, 6), st.lists(st.floats(-1, 1), min_size=14, max_size=14))
def test_coordinates_roundtrip(lo, hi, vals):
    n = hi - lo + 1
    x = np.array((vals * 2)[: 2 * n])
    assert np.array_equal(to_coordinates(from_coordinates(x, (lo, hi)), (lo, hi)), x)


def test_gradients_agree(rng):
    prob = MinimizationProblem(1.0, Annulus(0.4), (-3, 3))
    s = random_series(rng, -3, 3)
    g = norm_gradient(prob, s)
    np.testing.assert_allclose(fd_gradient(prob, s), g, rtol=1e-6, atol=1e-6)


@settings(max_examples=25)
@given(st.floats(-10, 10), st.floats(0.05, 0.95), st.integers(-10, -1), st.integers(-1, 10))
def test_minimizer_property(p, rho, lo, hi):
    prob = MinimizationProblem(p, Annulus(rho), (lo, hi))
    sol = minimize_in_class(prob)
    target = dt_series(p)
    assert max(abs(sol[n] - target[n]) for n in prob.indices) <= 1e-10
    rep = optimality_report(prob, sol)
    assert rep.projected_gradient <= 1e-10
    assert rep.constraint_residual <= 1e-12 * max(1.0, abs(p))


def test_eq5_examples():
    band = CuspBand(0.0, 1.0)
    lo, hi = eq5_check(3.0, band, dt_series(3.0))
    assert lo == hi
    lo, hi = eq5_check(3.0, band, dt_series(3.0) + S({0: 1}))
    assert hi - lo == pytest.approx(term_norm_sq(0, 1, band_annulus(band)), rel=1e-12)


def test_eq5_random_competitors(rng):
    band = CuspBand(0.2, 1.5)
    for _ in range(100):
        pert = random_series(rng, -6, 6)
        comp = dt_series(3.0) + pert - S({-1: 1j * pert[-1].imag})
        lo, hi = eq5_check(3.0, band, comp)
        assert hi >= lo


def test_eq5_errors():
    with pytest.raises(PeriodMismatchError):
        eq5_check(3.0, CuspBand(0.0, 1.0), dt_series(2.0))
    # a competitor that is not of the documented form cannot lose; force a failure via tolerance
    with pytest.raises(VerificationError):
        eq5_check(0.0, CuspBand(0.0, 1.0), S({0: 1e-3}), tol=-1.0)
