"""Exit-criteria suite: one test per criterion at its stated tolerance.

Each test appends a single PASS/FAIL line to ``SUMMARY``; the conftest prints
those lines at the end of the pytest run.  ``python tests/test_acceptance.py``
runs the same checks without pytest and prints the lines directly.
"""
import pytest

from cuspforms import acceptance

pytestmark = pytest.mark.acceptance

SUMMARY = []
_BASELINE = {}

METRICS = {
    1: ("max_rel_error", "_elapsed"),
    2: ("max_abs_error", "max_radius_spread"),
    3: ("max_coeff_error", "max_projected_gradient", "min_slack"),
    4: ("max_ulps",),
    5: ("max_plateau_error", "max_period_error", "min_order"),
    6: ("samples", "misclassified", "log_coefficient_failures"),
    7: ("rows", "negative_slacks", "min_slack", "core_bound_max_variation"),
    8: ("worker_counts", "mismatched"),
}


def summary_line(report):
    k = report["criterion"]
    parts = []
    for key in METRICS[k]:
        v = report[key]
        parts.append(f"{key.lstrip('_')}={v:.3g}" if isinstance(v, float) else f"{key}={v}")
    return f"criterion {k} {'PASS' if report['passed'] else 'FAIL'}  {report['name']}: " + ", ".join(parts)


def _record(report):
    line = summary_line(report)
    SUMMARY.append(line)
    return line


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6, 7])
def test_criterion(k):
    report = acceptance.RUNNERS[k](workers=1)
    _BASELINE[k] = report
    line = _record(report)
    assert report["passed"], line


def test_criterion_1_runtime():
    report = _BASELINE.get(1) or acceptance.criterion_1()
    assert report["_elapsed"] <= 30.0


def test_criterion_8_determinism():
    baseline = _BASELINE if len(_BASELINE) == 7 else None
    report = acceptance.criterion_8(worker_counts=(1, 2, 4), baseline=baseline)
    line = _record(report)
    assert report["passed"], line


if __name__ == "__main__":
    reports = acceptance.run_criteria()
    for k in sorted(reports):
        print(summary_line(reports[k]))
    print(summary_line(acceptance.criterion_8(worker_counts=(1, 4), baseline=reports)))
