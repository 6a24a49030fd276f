"""Random series generators shared by the acceptance runners and the tests."""
from __future__ import annotations

import math

import numpy as np

from .cusp import R_FLOOR
from .laurent import TWO_PI, LaurentSeries, dt_series

#: |z| at the cusp floor; regular data is damped by powers of it so that glued
#: forms stay O(1) across the whole mouth.
FLOOR_RADIUS = math.exp(-TWO_PI * R_FLOOR)


def unit_disk(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform samples from the closed unit disk."""
    rad = np.sqrt(rng.random(size))
    ang = TWO_PI * rng.random(size)
    return rad * np.cos(ang) + 1j * rad * np.sin(ang)


def random_window(rng: np.random.Generator, lo: int = -10, hi: int = 10,
                  must_contain: int | None = None) -> tuple[int, int]:
    a, b = sorted(int(v) for v in rng.integers(lo, hi + 1, size=2))
    if must_contain is not None:
        a, b = min(a, must_contain), max(b, must_contain)
    return a, b


def random_series(rng: np.random.Generator, lo: int = -10, hi: int = 10) -> LaurentSeries:
    """Coefficients uniform in the unit disk on a random sub-window of ``[lo, hi]``."""
    a, b = random_window(rng, lo, hi)
    coeffs = unit_disk(rng, b - a + 1)
    return LaurentSeries(a, b, tuple(complex(c) for c in coeffs))


def log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(10.0 ** rng.uniform(math.log10(lo), math.log10(hi)))


def random_glue_input(rng: np.random.Generator, degree: int = 4) -> tuple[LaurentSeries, float]:
    """``(omega, p)`` with ``omega`` of period ``p`` and moderate size on the mouth.

    Regular coefficients ``a_n`` are scaled by ``FLOOR_RADIUS**-(n+1)``; singular
    ones ``a_{-n}`` (``n >= 2``) by ``exp(-2 pi (n-1) / 4)`` since the grid ends
    at ``r = 1/4``.
    """
    p = float(rng.uniform(-5.0, 5.0))
    terms = {}
    reg = unit_disk(rng, degree + 1)
    for n in range(degree + 1):
        terms[n] = complex(reg[n]) * FLOOR_RADIUS ** (-(n + 1))
    sing = unit_disk(rng, degree - 1)
    for k, n in enumerate(range(2, degree + 1)):
        terms[-n] = complex(sing[k]) * 0.1 * math.exp(-TWO_PI * (n - 1) / 4.0)
    terms[-1] = complex(float(rng.uniform(-1.0, 1.0)), -p / TWO_PI)
    return LaurentSeries.from_dict(terms), p


def random_regular_data(rng: np.random.Generator, degree: int = 5) -> dict[int, complex]:
    """Regular coefficients for a form on ``[-ln 2, R]``, damped as in :func:`random_glue_input`."""
    u = unit_disk(rng, degree + 1)
    return {n: complex(u[n]) * FLOOR_RADIUS ** (-(n + 1)) for n in range(degree + 1)}


CLASS_NAMES = ("REMOVABLE_MOD_PDT", "LOG_DIVERGENT", "POWER_DIVERGENT")


def random_classified_series(rng: np.random.Generator, kind: str,
                             tiny: float = 1e-8) -> LaurentSeries:
    """A series whose exact class is ``kind``.

    The base is ``p dt`` plus unit-disk regular terms; LOG adds a real part to
    ``a_{-1}`` and POWER adds one to three coefficients ``a_{-n}``, ``2 <= n <= 10``.
    The added magnitudes are log-uniform in ``[tiny, 1]`` so that the smallest
    lie right at the detection floor.
    """
    if kind not in CLASS_NAMES:
        raise ValueError(f"unknown class {kind!r}")
    p = float(rng.uniform(-10.0, 10.0)) if rng.random() < 0.9 else 0.0
    hi = int(rng.integers(0, 11))
    reg = unit_disk(rng, hi + 1)
    terms = {n: complex(reg[n]) for n in range(hi + 1)}
    series = dt_series(p) + LaurentSeries.from_dict(terms)
    extra = {}
    if kind == "LOG_DIVERGENT" or (kind == "POWER_DIVERGENT" and rng.random() < 0.5):
        extra[-1] = complex(math.copysign(log_uniform(rng, tiny, 1.0), rng.uniform(-1, 1)), 0.0)
    if kind == "POWER_DIVERGENT":
        count = int(rng.integers(1, 4))
        for n in rng.choice(np.arange(2, 11), size=count, replace=False):
            mag = log_uniform(rng, tiny, 1.0)
            ang = TWO_PI * rng.random()
            extra[-int(n)] = complex(mag * math.cos(ang), mag * math.sin(ang))
    return series + LaurentSeries.from_dict(extra) if extra else series
