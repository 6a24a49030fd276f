"""Finite Laurent series and the closed-form period and norm of Re(f(z) dz).

A harmonic differential on an annulus corresponds to the holomorphic function
``f`` with ``omega = Re(f(z) dz)``; its squared L2 norm is the area integral of
``|f|**2``.  Because the powers ``z**n`` are orthogonal on any annulus centred
at the origin, the norm is a sum of per-term closed forms, and only the
``z**-1`` coefficient contributes to the period around the origin.

Scalars are plain Python ``complex`` values.  A :class:`LaurentSeries` is an
immutable window of coefficients ``a_n`` for ``n_min <= n <= n_max``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .errors import LaurentDomainError, NormOverflowError, NotExactError, PreconditionError

TWO_PI = 2.0 * math.pi


def _as_complex(value) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite coefficient {value!r}")
    return z


@dataclass(frozen=True)
class Annulus:
    """The region ``rho < |z| < outer``.

    ``outer`` defaults to 1, giving the unit-outer annulus used throughout.
    ``rho = 0`` denotes the punctured disk; norms there are finite only for
    series without negative powers.
    """

    rho: float
    outer: float = 1.0

    def __post_init__(self):
        rho = float(self.rho)
        outer = float(self.outer)
        if not (math.isfinite(outer) and outer > 0.0):
            raise PreconditionError(f"outer radius must be finite and positive, got {outer}")
        if not (0.0 <= rho < outer):
            raise PreconditionError(f"need 0 <= rho < outer, got rho={rho}, outer={outer}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "outer", outer)

    @property
    def log_modulus(self) -> float:
        """ln(outer / rho), computed without forming the quotient."""
        if self.rho == 0.0:
            return math.inf
        return math.log(self.outer) - math.log(self.rho)


@dataclass(frozen=True)
class LaurentSeries:
    """Coefficients ``a_n`` for ``n_min <= n <= n_max``; ``coeffs[k] = a_{n_min+k}``."""

    n_min: int
    n_max: int
    coeffs: tuple

    def __post_init__(self):
        n_min = int(self.n_min)
        n_max = int(self.n_max)
        if n_min > n_max:
            raise ValueError(f"n_min={n_min} exceeds n_max={n_max}")
        coeffs = tuple(_as_complex(c) for c in self.coeffs)
        if len(coeffs) != n_max - n_min + 1:
            raise ValueError(
                f"window [{n_min}, {n_max}] needs {n_max - n_min + 1} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "n_min", n_min)
        object.__setattr__(self, "n_max", n_max)
        object.__setattr__(self, "coeffs", coeffs)

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentSeries":
        return cls(0, 0, (0j,))

    @classmethod
    def from_dict(cls, terms: Mapping[int, complex]) -> "LaurentSeries":
        """Build the tightest window holding ``terms`` (``{n: a_n}``)."""
        if not terms:
            return cls.zero()
        lo, hi = min(terms), max(terms)
        return cls(lo, hi, tuple(terms.get(n, 0j) for n in range(lo, hi + 1)))

    @classmethod
    def from_arrays(cls, n_min: int, re: Iterable[float], im: Iterable[float]) -> "LaurentSeries":
        coeffs = tuple(complex(a, b) for a, b in zip(re, im))
        return cls(n_min, n_min + len(coeffs) - 1, coeffs)

    # -- access -----------------------------------------------------------

    def __getitem__(self, n: int) -> complex:
        """a_n, zero outside the window."""
        if self.n_min <= n <= self.n_max:
            return self.coeffs[n - self.n_min]
        return 0j

    def items(self):
        return zip(range(self.n_min, self.n_max + 1), self.coeffs)

    @property
    def real_parts(self) -> np.ndarray:
        return np.array([c.real for c in self.coeffs])

    @property
    def imag_parts(self) -> np.ndarray:
        return np.array([c.imag for c in self.coeffs])

    def max_abs(self) -> float:
        return max(abs(c) for c in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def normalize(self) -> "LaurentSeries":
        """Trim zero coefficients from both ends of the window."""
        nz = [n for n, c in self.items() if c != 0]
        if not nz:
            return LaurentSeries.zero()
        lo, hi = nz[0], nz[-1]
        return LaurentSeries(lo, hi, self.coeffs[lo - self.n_min: hi - self.n_min + 1])

    def widen(self, n_min: int, n_max: int) -> "LaurentSeries":
        """Zero-pad to a window containing [n_min, n_max]."""
        lo, hi = min(n_min, self.n_min), max(n_max, self.n_max)
        return LaurentSeries(lo, hi, tuple(self[n] for n in range(lo, hi + 1)))

    def shift(self, k: int) -> "LaurentSeries":
        """The series of ``z**k * f(z)``."""
        return LaurentSeries(self.n_min + k, self.n_max + k, self.coeffs)

    # -- linear structure -------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return add(self, scale(other, -1.0))

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, c):
        if isinstance(c, LaurentSeries):
            return NotImplemented
        return scale(self, c)

    __rmul__ = __mul__

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n_min": self.n_min,
            "n_max": self.n_max,
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }

    @classmethod
    def from_mapping(cls, doc: Mapping) -> "LaurentSeries":
        try:
            n_min, n_max, raw = doc["n_min"], doc["n_max"], doc["coeffs"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"series document is missing a field: {exc}") from None
        if isinstance(n_min, bool) or isinstance(n_max, bool) or not (
            isinstance(n_min, int) and isinstance(n_max, int)
        ):
            raise ValueError("n_min and n_max must be integers")
        coeffs = []
        for pair in raw:
            if len(pair) != 2:
                raise ValueError(f"coefficient {pair!r} is not an [re, im] pair")
            coeffs.append(complex(float(pair[0]), float(pair[1])))
        return cls(n_min, n_max, tuple(coeffs))

    def dumps(self) -> str:
        # repr-based float output round-trips every finite double exactly
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "LaurentSeries":
        return cls.from_mapping(json.loads(text))


@dataclass(frozen=True)
class HarmonicDifferential:
    """The real 1-form ``omega = Re(f(z) dz)`` attached to a Laurent series."""

    series: LaurentSeries

    def period(self) -> float:
        return period(self.series)

    def norm_sq(self, annulus: Annulus) -> float:
        return norm_sq(self.series, annulus)

    def components(self, z) -> tuple[np.ndarray, np.ndarray]:
        """(a, b) with ``omega = a dx + b dy``; ``a = Re f``, ``b = -Im f``."""
        f = evaluate(self.series, z)
        return np.real(f), -np.imag(f)


# -- evaluation -------------------------------------------------------------


def evaluate(series: LaurentSeries, z):
    """f(z) for a scalar or array ``z``; accumulation is ascending in n and compensated."""
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if series.n_min < 0 and np.any(zz == 0):
        raise LaurentDomainError("series with negative powers evaluated at z = 0")
    flat = zz.ravel()
    re, im = kernels.laurent_eval(
        series.real_parts, series.imag_parts, series.n_min,
        np.ascontiguousarray(flat.real), np.ascontiguousarray(flat.imag),
    )
    out = (re + 1j * im).reshape(zz.shape)
    return complex(out[0]) if scalar else out


# -- period -------------------------------------------------------------------


def period(series: LaurentSeries) -> float:
    """Period of Re(f dz) on a circle around the origin: ``-2*pi*Im(a_{-1})``.

    Only the ``z**-1`` term has a nonzero period; ``Re(a dz/z)`` integrates to
    ``Re(2*pi*i*a)``.
    """
    # adding 0.0 turns a -0.0 from a zero coefficient into 0.0 and changes nothing else
    return -TWO_PI * series[-1].imag + 0.0


def dt_series(p: float) -> LaurentSeries:
    """The series of ``p dt`` with ``t = arg(z)/(2*pi)``: ``a_{-1} = p/(2*pi*i)``."""
    p = float(p)
    if not math.isfinite(p):
        raise ValueError(f"period must be finite, got {p}")
    if p == 0.0:
        return LaurentSeries.zero()
    return LaurentSeries(-1, -1, (complex(0.0, -p / TWO_PI),))


# -- norms ---------------------------------------------------------------------


def term_norm_sq(n: int, a: complex, annulus: Annulus) -> float:
    """Squared L2 norm of ``a z**n`` on the annulus.

    With ``k = n + 1`` the integral is ``2*pi*|a|**2 * (outer**(2k) - rho**(2k)) / (2k)``
    for ``k != 0`` and ``2*pi*|a|**2 * ln(outer/rho)`` for ``k = 0``.  The
    difference of powers is evaluated through ``expm1`` so thin annuli and
    high powers keep full relative accuracy.
    """
    a = complex(a)
    mag2 = a.real * a.real + a.imag * a.imag
    if mag2 == 0.0:
        return 0.0
    k = n + 1
    log_mod = annulus.log_modulus
    if k == 0:
        return TWO_PI * mag2 * log_mod
    m = abs(k)
    if k < 0 and annulus.rho == 0.0:
        return math.inf
    try:
        base = annulus.outer ** (2 * k) if k > 0 else annulus.rho ** (2 * k)
    except OverflowError:
        return math.inf
    frac = -math.expm1(-2.0 * m * log_mod)
    return TWO_PI * mag2 * (base * frac) / (2.0 * m)


def _norm_order(series: LaurentSeries):
    # ascending |n|; the negative index comes first on ties
    return sorted(range(series.n_min, series.n_max + 1), key=lambda n: (abs(n), n))


def norm_terms(series: LaurentSeries, annulus: Annulus) -> list[tuple[int, float]]:
    """Per-term squared norms, in summation order."""
    return [(n, term_norm_sq(n, series[n], annulus)) for n in _norm_order(series)]


def norm_sq(series: LaurentSeries, annulus: Annulus) -> float:
    """Squared L2 norm of Re(f dz) on the annulus, summed term by term."""
    terms = norm_terms(series, annulus)
    values = np.array([v for _, v in terms])
    if not np.all(np.isfinite(values)):
        bad = [n for n, v in terms if not math.isfinite(v)]
        raise NormOverflowError(f"norm term(s) n={bad} are not finite on {annulus}")
    total = kernels.neumaier_sum(values)
    if not math.isfinite(total):
        raise NormOverflowError(f"norm of series overflows on {annulus}")
    return total


# -- linear operations -----------------------------------------------------------


def add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    lo, hi = min(a.n_min, b.n_min), max(a.n_max, b.n_max)
    return LaurentSeries(lo, hi, tuple(a[n] + b[n] for n in range(lo, hi + 1)))


def scale(a: LaurentSeries, c) -> LaurentSeries:
    c = _as_complex(c)
    return LaurentSeries(a.n_min, a.n_max, tuple(c * x for x in a.coeffs))


def exactness_tolerance(series: LaurentSeries) -> float:
    """Absolute tolerance on Im(a_{-1}) below which the form counts as exact."""
    return 1e-12 * (1.0 + series.max_abs())


def antiderivative(series: LaurentSeries) -> tuple[LaurentSeries, float]:
    """Potential of an exact form ``Re(f dz)``.

    Returns ``(F, c)`` with ``F`` holomorphic, ``F' = f`` away from the
    ``z**-1`` term, and ``c = Re(a_{-1})``, so that the real potential is
    ``phi(z) = Re(F(z)) + c * ln|z|``.
    """
    a_m1 = series[-1]
    if abs(a_m1.imag) > exactness_tolerance(series):
        raise NotExactError(
            f"Im(a_-1) = {a_m1.imag:.3e}: the form has period {period(series):.6g} and is not exact"
        )
    terms = {n + 1: a / (n + 1) for n, a in series.items() if n != -1 and a != 0}
    return LaurentSeries.from_dict(terms), a_m1.real


def potential(F: LaurentSeries, c: float, z):
    """phi(z) = Re(F(z)) + c ln|z| for the pair returned by :func:`antiderivative`."""
    vals = np.real(evaluate(F, z))
    if c != 0.0:
        vals = vals + c * np.log(np.abs(np.asarray(z, dtype=complex)))
    return float(vals) if np.ndim(vals) == 0 else vals
