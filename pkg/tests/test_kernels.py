import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cuspforms import kernels
from cuspforms.kernels import _numba, _numpy

finite = st.floats(min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False)


@given(arrays(np.float64, st.integers(0, 300), elements=finite))
def test_neumaier_sum_backends_bitwise(x):
    a, b = _numpy.neumaier_sum(x), _numba.neumaier_sum(x)
    assert a == b or (math.isnan(a) and math.isnan(b))


@given(arrays(np.float64, st.tuples(st.integers(1, 8), st.integers(1, 150)), elements=finite))
def test_neumaier_rows_backends_bitwise(x):
    assert np.array_equal(_numpy.neumaier_sum_rows(x), _numba.neumaier_sum_rows(x))


def test_neumaier_sum_matches_fsum(backend, rng):
    x = rng.standard_normal(10_000) * 10.0 ** rng.integers(-10, 10, 10_000)
    exact = math.fsum(x)
    assert abs(backend.neumaier_sum(x) - exact) <= 4 * math.ulp(abs(exact))


def test_neumaier_sum_cancellation(backend):
    x = np.array([1e16, 1.0, -1e16, 1.0] * 50)
    assert backend.neumaier_sum(x) == 100.0


def test_neumaier_sum_rows_matches_fsum(backend, rng):
    x = rng.standard_normal((5, 777))
    got = backend.neumaier_sum_rows(x)
    for k in range(5):
        assert abs(got[k] - math.fsum(x[k])) <= 2 * math.ulp(1.0) * np.abs(x[k]).sum()


@pytest.mark.parametrize("n_min,length", [(0, 1), (-10, 21), (-3, 2), (4, 5)])
def test_laurent_eval_backends_bitwise(rng, n_min, length):
    re, im = rng.uniform(-1, 1, length), rng.uniform(-1, 1, length)
    z = rng.uniform(0.1, 2.0, 400) * np.exp(1j * rng.uniform(0, 2 * np.pi, 400))
    a = _numpy.laurent_eval(re, im, n_min, z.real.copy(), z.imag.copy())
    b = _numba.laurent_eval(re, im, n_min, z.real.copy(), z.imag.copy())
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_laurent_eval_against_direct_powers(backend, rng):
    n_min, coeffs = -4, rng.uniform(-1, 1, 9) + 1j * rng.uniform(-1, 1, 9)
    z = rng.uniform(0.3, 1.5, 200) * np.exp(1j * rng.uniform(0, 2 * np.pi, 200))
    ref = sum(c * z ** (n_min + k) for k, c in enumerate(coeffs))
    re, im = backend.laurent_eval(coeffs.real.copy(), coeffs.imag.copy(), n_min, z.real.copy(), z.imag.copy())
    np.testing.assert_allclose(re + 1j * im, ref, rtol=1e-13, atol=1e-13)


def test_curl_backends_bitwise(rng):
    cr, ct = rng.standard_normal((33, 16)), rng.standard_normal((33, 16))
    assert np.array_equal(_numpy.curl_periodic(cr, ct, 0.1, 1 / 16), _numba.curl_periodic(cr, ct, 0.1, 1 / 16))


def test_curl_of_exact_polynomial_form_vanishes(backend):
    # d(r^2 + sin(2 pi t)) is exact and quadratic in r, so one-sided and centred differences are exact
    r = np.linspace(0.0, 1.0, 21)[:, None]
    t = (np.arange(32) / 32)[None, :]
    comp_r = np.broadcast_to(2 * r, (21, 32)).copy()
    comp_t = np.broadcast_to(2 * np.pi * np.cos(2 * np.pi * t), (21, 32)).copy()
    assert np.max(np.abs(backend.curl_periodic(comp_r, comp_t, 0.05, 1 / 32))) < 1e-12


def _backend_in_subprocess(value):
    env = dict(os.environ, CUSPFORMS_BACKEND=value)
    return subprocess.run([sys.executable, "-c", "from cuspforms import kernels; print(kernels.BACKEND)"],
                          env=env, capture_output=True, text=True)


@pytest.mark.parametrize("value", ["numpy", "numba"])
def test_backend_flag(value):
    out = _backend_in_subprocess(value)
    assert out.returncode == 0 and out.stdout.strip() == value


def test_backend_flag_rejects_unknown():
    out = _backend_in_subprocess("fortran")
    assert out.returncode != 0 and "CUSPFORMS_BACKEND" in out.stderr


def test_default_backend_is_numba_when_available():
    if "CUSPFORMS_BACKEND" in os.environ:
        pytest.skip("backend forced by the environment")
    assert kernels.BACKEND == "numba"


_REPORT_SCRIPT = """
import hashlib
from cuspforms import acceptance as A
text = A.dumps_report(A.criterion_5(trials=2)) + A.dumps_report(A.criterion_7(per_tuple=2))
print(hashlib.sha256(text.encode()).hexdigest())
"""


def test_reports_identical_across_backends():
    digests = []
    for value in ("numpy", "numba"):
        env = dict(os.environ, CUSPFORMS_BACKEND=value)
        out = subprocess.run([sys.executable, "-c", _REPORT_SCRIPT], env=env, capture_output=True, text=True)
        assert out.returncode == 0, out.stderr
        digests.append(out.stdout.strip())
    assert digests[0] == digests[1]
