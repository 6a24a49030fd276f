"""Library runners for the exit criteria.

Each ``criterion_k(seed, workers)`` returns a JSON-ready report with a
``passed`` flag, summary metrics and per-trial values.  Trials draw from
independent child seeds of one :class:`numpy.random.SeedSequence` and are
mapped in input order, so the report does not depend on ``workers``.
"""
from __future__ import annotations

import itertools
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import exhaustion, glue, hodge_min, sampling
from .cusp import R_FLOOR, pullback
from .gridded import CuspGrid
from .laurent import TWO_PI, Annulus, LaurentSeries, dt_series, norm_sq, period
from .quadrature import QuadratureSpec, annulus_norm_sq, contour_period

DEFAULT_SEED = 20240611


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _rngs(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1, allow_nan=True)


# 1 ---------------------------------------------------------------------------

NORM_RHOS = (0.1, 0.3, 0.5, 0.7, 0.9)


def criterion_1(seed: int = DEFAULT_SEED, workers: int = 1, trials: int = 200,
                tol: float = 1e-8, time_limit: float = 30.0) -> dict:
    """Closed-form norm against tensor Gauss-Legendre quadrature."""
    spec = QuadratureSpec()

    def trial(rng):
        s = sampling.random_series(rng)
        out = []
        for rho in NORM_RHOS:
            ann = Annulus(rho)
            exact = norm_sq(s, ann)
            quad = annulus_norm_sq(s, ann, spec)
            out.append(abs(exact - quad) / abs(exact) if exact else abs(quad))
        return out

    start = time.perf_counter()
    errs = _map(trial, _rngs(seed, trials), workers)
    elapsed = time.perf_counter() - start
    worst = max(max(e) for e in errs)
    return {
        "criterion": 1, "name": "norm closed form vs quadrature",
        "max_rel_error": worst, "tolerance": tol,
        "errors": errs,
        "passed": bool(worst <= tol and elapsed <= time_limit),
        "_elapsed": elapsed,
    }


# 2 ---------------------------------------------------------------------------

PERIOD_RADII = (0.3, 0.5, 0.8)


def criterion_2(seed: int = DEFAULT_SEED + 1, workers: int = 1, trials: int = 200,
                tol: float = 1e-10, nodes: int = 256) -> dict:
    """Coefficient period against the trapezoid contour integral."""
    spec = QuadratureSpec(contour_nodes=nodes)

    def trial(rng):
        s = sampling.random_series(rng)
        p = period(s)
        vals = [contour_period(s, rad, spec) for rad in PERIOD_RADII]
        return [max(abs(v - p) for v in vals), max(vals) - min(vals)]

    res = _map(trial, _rngs(seed, trials), workers)
    gap = max(r[0] for r in res)
    spread = max(r[1] for r in res)
    return {
        "criterion": 2, "name": "period formula vs contour",
        "max_abs_error": gap, "max_radius_spread": spread, "tolerance": tol,
        "trials": res,
        "passed": bool(gap <= tol and spread <= tol),
    }


# 3 ---------------------------------------------------------------------------


def criterion_3(seed: int = DEFAULT_SEED + 2, workers: int = 1, problems: int = 50,
                competitors: int = 100, tol: float = 1e-10) -> dict:
    """The generic QP returns ``p dt`` and no competitor of period ``p`` beats it."""

    def trial(rng):
        p = float(rng.uniform(-10.0, 10.0))
        rho = float(rng.uniform(0.05, 0.95))
        window = sampling.random_window(rng, must_contain=-1)
        prob = hodge_min.MinimizationProblem(p, Annulus(rho), window)
        sol = hodge_min.minimize_in_class(prob)
        target = dt_series(p)
        coeff_err = max(abs(sol[n] - target[n]) for n in prob.indices)
        rep = hodge_min.optimality_report(prob, sol)
        best = norm_sq(sol, prob.annulus)
        worst_slack = math.inf
        for _ in range(competitors):
            pert = sampling.random_series(rng, *window)
            # keep the period: drop the imaginary part of the z^-1 perturbation
            pert = pert - LaurentSeries.from_dict({-1: 1j * pert[-1].imag})
            comp = sol + pert
            worst_slack = min(worst_slack, norm_sq(comp, prob.annulus) - best)
        return {
            "p": p, "rho": rho, "window": list(window),
            "coeff_error": coeff_err,
            "projected_gradient": rep.projected_gradient,
            "constraint_residual": rep.constraint_residual,
            "min_competitor_slack": worst_slack,
        }

    res = _map(trial, _rngs(seed, problems), workers)
    coeff = max(r["coeff_error"] for r in res)
    grad = max(r["projected_gradient"] for r in res)
    slack = min(r["min_competitor_slack"] for r in res)
    return {
        "criterion": 3, "name": "minimiser is p dt",
        "max_coeff_error": coeff, "max_projected_gradient": grad, "min_slack": slack,
        "tolerance": tol, "problems": res,
        "passed": bool(coeff <= tol and grad <= tol and slack >= -tol),
    }


# 4 ---------------------------------------------------------------------------

DT_PERIODS = (0.0, 1.0, TWO_PI, -3.0)
DT_RHOS = (0.9, 0.5, 1e-3, 1e-6)


def _reference_dt_norm(p: float, rho: float) -> float:
    import mpmath as mp

    with mp.workdps(60):
        return float(mp.mpf(p) ** 2 * mp.log(1 / mp.mpf(rho)) / (2 * mp.pi))


def ulp_distance(x: float, y: float) -> int:
    """Number of representable doubles between ``x`` and ``y`` (same sign assumed)."""
    if x == y:
        return 0
    a = np.array([x, y], dtype=np.float64).view(np.int64)
    return int(abs(int(a[0]) - int(a[1])))


def criterion_4(seed: int = DEFAULT_SEED + 3, workers: int = 1, max_ulps: int = 4) -> dict:
    """Norm of ``p dt`` against the 60-digit value of ``p^2 ln(1/rho) / 2 pi``."""
    cases = list(itertools.product(DT_PERIODS, DT_RHOS))

    def trial(case):
        p, rho = case
        got = norm_sq(dt_series(p), Annulus(rho))
        ref = _reference_dt_norm(p, rho)
        return {"p": p, "rho": rho, "value": got, "reference": ref, "ulps": ulp_distance(got, ref)}

    res = _map(trial, cases, workers)
    worst = max(r["ulps"] for r in res)
    return {
        "criterion": 4, "name": "dt norm law",
        "max_ulps": worst, "tolerance_ulps": max_ulps, "cases": res,
        "passed": bool(worst <= max_ulps),
    }


# 5 ---------------------------------------------------------------------------


def criterion_5(seed: int = DEFAULT_SEED + 4, workers: int = 1, trials: int = 20,
                period_tol: float = 1e-9, min_order: float = 1.9) -> dict:
    """Plateaus, horocycle periods and curl convergence of the glued form."""
    base = CuspGrid(R_FLOOR, 0.25, 128, 128)
    deep = base.r_values <= glue.PLATEAU_END
    shallow = base.r_values >= 0.0

    def trial(rng):
        omega, p = sampling.random_glue_input(rng)
        alpha = glue.build_alpha(omega, p, base)
        om_r, om_t = pullback(omega, base.r_values, base.t_values)
        plateau_in = max(float(np.max(np.abs(alpha.comp_r[deep] - om_r[deep]))),
                         float(np.max(np.abs(alpha.comp_t[deep] - om_t[deep]))))
        plateau_out = max(float(np.max(np.abs(alpha.comp_r[shallow]))),
                          float(np.max(np.abs(alpha.comp_t[shallow] - p))))
        periods = glue.horocycle_periods(alpha)
        sups, orders = glue.curl_convergence(omega, p, base, levels=3)
        return {
            "p": p,
            "plateau_input_error": plateau_in,
            "plateau_dt_error": plateau_out,
            "max_period_error": float(np.max(np.abs(periods - p))),
            "curl_sup": sups.tolist(),
            "orders": orders.tolist(),
        }

    res = _map(trial, _rngs(seed, trials), workers)
    plateau = max(max(r["plateau_input_error"], r["plateau_dt_error"]) for r in res)
    per = max(r["max_period_error"] for r in res)
    order = min(min(r["orders"]) for r in res)
    return {
        "criterion": 5, "name": "glued form",
        "max_plateau_error": plateau, "max_period_error": per, "min_order": order,
        "trials": res,
        "passed": bool(plateau == 0.0 and per <= period_tol and order >= min_order),
    }


# 6 ---------------------------------------------------------------------------


def criterion_6(seed: int = DEFAULT_SEED + 5, workers: int = 1, per_class: int = 200,
                rel_tol: float = 1e-6, abs_floor: float = 1e-15) -> dict:
    """Sampled-norm classifier against the coefficient predicate."""
    rho = exhaustion.log_rho_list(1e-1, 1e-6)
    kinds = [k for k in sampling.CLASS_NAMES for _ in range(per_class)]
    rngs = _rngs(seed, len(kinds))

    def trial(job):
        kind, rng = job
        s = sampling.random_classified_series(rng, kind)
        verdict = exhaustion.classify(exhaustion.growth_scan(s, rho), s)
        ref = TWO_PI * s[-1].imag ** 2
        log_err = abs(verdict.fitted_log_coefficient - ref)
        return {
            "kind": kind,
            "truth": verdict.coefficient_tag.value,
            "tag": verdict.tag.value,
            "log_coefficient": verdict.fitted_log_coefficient,
            "log_reference": ref,
            "log_ok": bool(log_err <= max(rel_tol * ref, abs_floor)),
        }

    res = _map(trial, list(zip(kinds, rngs)), workers)
    wrong = sum(r["tag"] != r["truth"] for r in res)
    removable = [r for r in res if r["truth"] == "REMOVABLE_MOD_PDT"]
    log_bad = sum(not r["log_ok"] for r in removable)
    counts = {k: sum(r["truth"] == k for r in res) for k in sampling.CLASS_NAMES}
    return {
        "criterion": 6, "name": "removability classifier",
        "samples": len(res), "class_counts": counts,
        "misclassified": wrong, "log_coefficient_failures": log_bad,
        "trials": res,
        "passed": bool(wrong == 0 and log_bad == 0 and len(res) >= 500 and min(counts.values()) > 0),
    }


# 7 ---------------------------------------------------------------------------

SWEEP_A = (0.0, 1.0)
SWEEP_R_INNER = (1.0, 2.0)
SWEEP_R_OUTER = (2.0, 4.0, 8.0)
CORE_BOUND_RS = (1.0, 2.0, 4.0, 8.0)


def criterion_7(seed: int = DEFAULT_SEED + 6, workers: int = 1, per_tuple: int = 20,
                tol: float = 1e-10) -> dict:
    """Inequality slacks over the sweep and R-independence of the core bound."""
    tuples = list(itertools.product(SWEEP_A, SWEEP_R_INNER, SWEEP_R_OUTER))
    jobs = [(t, k) for t in tuples for k in range(per_tuple)]
    rngs = _rngs(seed, len(jobs))

    def trial(job):
        ((a, r, R), _), rng = job
        p = float(rng.uniform(-5.0, 5.0))
        omega = exhaustion.absolute_bc_representative(p, R, sampling.random_regular_data(rng))
        recs = exhaustion.inequality_suite(omega, p, a, r, R, tol=tol)
        return [rec.to_dict() for rec in recs]

    rows = [row for chunk in _map(trial, list(zip(jobs, rngs)), workers) for row in chunk]
    worst = min(row["slack"] for row in rows)

    core_bound = []
    for a, p in itertools.product(SWEEP_A, (1.0, TWO_PI, -2.5)):
        fam = exhaustion.core_bound_family(p, a, CORE_BOUND_RS)
        lhs = [f[1] for f in fam]
        rhs = [f[2] for f in fam]
        core_bound.append({"a": a, "p": p, "lhs": lhs, "rhs": rhs,
                       "lhs_variation": max(lhs) - min(lhs), "rhs_variation": max(rhs) - min(rhs)})
    variation = max(max(e["lhs_variation"], e["rhs_variation"]) for e in core_bound)
    return {
        "criterion": 7, "name": "inequality suite",
        "rows": len(rows), "negative_slacks": sum(not row["pass"] for row in rows),
        "min_slack": worst, "core_bound_max_variation": variation, "tolerance": tol,
        "records": rows, "core_bound": core_bound,
        "passed": bool(worst >= -tol and variation <= tol),
    }


# 8 ---------------------------------------------------------------------------

RUNNERS = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
           5: criterion_5, 6: criterion_6, 7: criterion_7}


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if not k.startswith("_")}


def run_criteria(ids: Sequence[int] = tuple(RUNNERS), workers: int = 1) -> dict[int, dict]:
    return {k: RUNNERS[k](workers=workers) for k in ids}


def criterion_8(worker_counts: Sequence[int] = (1, 4), ids: Sequence[int] = tuple(RUNNERS),
                baseline: dict[int, dict] | None = None) -> dict:
    """Serialised reports of criteria 1-7 are byte-identical across worker counts.

    ``baseline`` may carry reports already computed with ``worker_counts[0]``.
    """
    texts = {}
    for i, w in enumerate(worker_counts):
        reports = baseline if (i == 0 and baseline is not None) else run_criteria(ids, workers=w)
        texts[w] = {k: dumps_report(strip_timing(reports[k])) for k in ids}
    ref = texts[worker_counts[0]]
    mismatched = sorted({k for w in worker_counts[1:] for k in ids if texts[w][k] != ref[k]})
    return {
        "criterion": 8, "name": "determinism across worker counts",
        "worker_counts": list(worker_counts), "mismatched": mismatched,
        "report_bytes": {str(k): len(ref[k].encode()) for k in ids},
        "passed": not mismatched,
    }
