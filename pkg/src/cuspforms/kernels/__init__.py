"""Hot numerical kernels with a numba path and a pure-numpy fallback.

The backend is chosen once, at import time, from the ``CUSPFORMS_BACKEND``
environment variable (``numba`` or ``numpy``).  Without the variable, numba is
used when it imports cleanly.  Both backends implement identical arithmetic,
so switching backends never changes a result.
"""
import os
import warnings

from . import _numpy as numpy_impl

_requested = os.environ.get("CUSPFORMS_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(f"CUSPFORMS_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

numba_impl = None
if _requested != "numpy":
    try:
        from . import _numba as numba_impl
    except ImportError:  # pragma: no cover - depends on the environment
        if _requested == "numba":
            raise
        warnings.warn("numba unavailable; falling back to numpy kernels")

_impl = numba_impl if numba_impl is not None else numpy_impl
BACKEND = "numba" if _impl is numba_impl else "numpy"

neumaier_sum = _impl.neumaier_sum
neumaier_sum_rows = _impl.neumaier_sum_rows
laurent_eval = _impl.laurent_eval
curl_periodic = _impl.curl_periodic

__all__ = [
    "BACKEND",
    "numba_impl",
    "numpy_impl",
    "neumaier_sum",
    "neumaier_sum_rows",
    "laurent_eval",
    "curl_periodic",
]
