import numpy as np
import pytest
from hypothesis import settings

from cuspforms.kernels import _numba, _numpy

# numba compiles on first call, which would trip hypothesis' deadline
settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    """Each kernel module in turn, independent of CUSPFORMS_BACKEND."""
    return {"numpy": _numpy, "numba": _numba}[request.param]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import SUMMARY
    except ImportError:
        return
    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in SUMMARY:
            terminalreporter.write_line(line)
