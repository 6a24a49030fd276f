"""Norm growth into the cusp and the inequalities of the exhaustion argument.

Two questions are answered here.

*Growth.*  For a harmonic differential on the punctured disk with period
``p``, ``|f|^2`` integrated over ``rho < |z| < 1`` grows like
``2 pi |a_{-1}|^2 ln(1/rho)`` plus powers ``rho^{-2k}`` coming from the
coefficients ``a_{-n}``, ``n >= 2``.  The part not accounted for by ``p dt``
stays bounded exactly when every ``a_{-n}`` (``n >= 2``) and ``Re(a_{-1})``
vanish, i.e. when ``f - p/(2 pi i z)`` has a removable singularity.
:func:`classify` decides this from norms sampled on a decreasing list of radii.

*Inequalities.*  The cusp band ``[-ln 2, R]`` stands in for the truncated
surface: ``X_0`` is modelled by the mouth ``[-ln 2, 0]`` and ``X_a`` by
``[-ln 2, a]``.  :func:`inequality_suite` evaluates both sides of each
inequality in the chain with band norms.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .cusp import R_FLOOR, CuspBand, band_norm_sq
from .errors import InsufficientSamplesError, ParameterOrderError, PeriodMismatchError, PreconditionError
from .glue import alpha_norm_sq
from .hodge_min import MinimizationProblem, minimize_in_class, period_tolerance
from .laurent import TWO_PI, Annulus, LaurentSeries, dt_series, norm_sq, period

#: Coefficients below this magnitude count as zero in the exact predicate.
ZERO_COEFF = 1e-12
#: Excess log-slope threshold; corresponds to |Re a_{-1}| = 1e-10.
LOG_SLOPE_TOL = TWO_PI * 1e-20
#: Relative size of a growing second difference that signals a power term.
POWER_REL_TOL = 1e-9
MIN_SAMPLES = 4
MAX_RHO_MIN = 1e-4


class SingularityTag(str, enum.Enum):
    REMOVABLE_MOD_PDT = "REMOVABLE_MOD_PDT"
    LOG_DIVERGENT = "LOG_DIVERGENT"
    POWER_DIVERGENT = "POWER_DIVERGENT"


@dataclass(frozen=True)
class GrowthRecord:
    """Norms of a series on ``A_{rho,1}`` for a decreasing list of radii.

    ``band_values[k]`` is the norm on the ring ``rho[k+1] < |z| < rho[k]`` and
    ``excess_band_values[k]`` the same for ``f - p dt``; both are computed
    directly from the closed form, without subtracting cumulative norms.
    """

    rho_values: tuple
    norm_values: tuple
    p: float
    band_values: tuple = ()
    excess_band_values: tuple = ()

    def __post_init__(self):
        rho = np.asarray(self.rho_values, dtype=float)
        if len(self.norm_values) != len(rho):
            raise ValueError("rho_values and norm_values differ in length")
        if np.any(rho <= 0.0) or np.any(rho >= 1.0) or np.any(np.diff(rho) >= 0.0):
            raise PreconditionError("rho_values must be strictly decreasing inside (0, 1)")

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self).items()}


@dataclass(frozen=True)
class SingularityClass:
    tag: SingularityTag
    fitted_log_coefficient: float
    fitted_constant: float
    excess_log_coefficient: float = 0.0
    coefficient_tag: SingularityTag | None = None

    @property
    def agrees(self) -> bool | None:
        return None if self.coefficient_tag is None else self.coefficient_tag == self.tag

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tag"] = self.tag.value
        d["coefficient_tag"] = None if self.coefficient_tag is None else self.coefficient_tag.value
        return d


def log_rho_list(start: float = 1e-1, stop: float = 1e-6, count: int | None = None) -> tuple:
    """Log-uniform radii from ``start`` down to ``stop``; two per decade by default."""
    if not (1.0 > start > stop > 0.0):
        raise PreconditionError(f"need 1 > start > stop > 0, got {start}, {stop}")
    if count is None:
        count = int(round(2 * math.log10(start / stop))) + 1
    if count < 2:
        raise PreconditionError("need at least two radii")
    return tuple(float(x) for x in np.logspace(math.log10(start), math.log10(stop), count))


def growth_scan(series: LaurentSeries, rho_values: Sequence[float]) -> GrowthRecord:
    rho = [float(x) for x in rho_values]
    if any(not (0.0 < x < 1.0) for x in rho) or any(b >= a for a, b in zip(rho, rho[1:])):
        raise PreconditionError("rho_values must be strictly decreasing inside (0, 1)")
    p = period(series)
    excess = series - dt_series(p)
    norms = tuple(norm_sq(series, Annulus(x)) for x in rho)
    rings = [Annulus(inner, outer) for outer, inner in zip(rho, rho[1:])]
    return GrowthRecord(
        rho_values=tuple(rho),
        norm_values=norms,
        p=p,
        band_values=tuple(norm_sq(series, ring) for ring in rings),
        excess_band_values=tuple(norm_sq(excess, ring) for ring in rings),
    )


def coefficient_class(series: LaurentSeries, zero_tol: float = ZERO_COEFF) -> SingularityTag:
    """Ground truth read off the coefficients."""
    if any(abs(series[n]) > zero_tol for n in range(series.n_min, -1)):
        return SingularityTag.POWER_DIVERGENT
    if abs(series[-1].real) > zero_tol:
        return SingularityTag.LOG_DIVERGENT
    return SingularityTag.REMOVABLE_MOD_PDT


def _annihilate(values: np.ndarray, q2: float, modes: int) -> np.ndarray:
    # (S - q^{-2j}) kills a sequence proportional to q^{-2jk}: the ring norm of rho^{2j}
    for j in range(1, modes + 1):
        lam = q2 ** (-j)
        values = values[1:] - lam * values[:-1]
    return values


def classify(record: GrowthRecord, series: LaurentSeries | None = None) -> SingularityClass:
    """Decide whether ``f - p dt`` has a removable singularity from sampled norms.

    Only the deepest half of the samples (at least four) is used, and they must
    be log-uniform with ratio ``q``.  Ring norms are divided by the ring's
    log-width to give slopes against ``ln(1/rho)``.  A regular term ``a_n z^n``
    contributes a slope sequence proportional to ``q^{-2(n+1)k}``; the
    differences ``s[k+1] - q^{-2j} s[k]`` remove the first few such modes
    (Richardson extrapolation in ``rho^2``).  What is left is constant for
    pure logarithmic growth and grows geometrically when a negative power
    beyond ``z^{-1}`` is present:

    * POWER_DIVERGENT if the last successive difference of the filtered excess
      slopes is positive beyond rounding;
    * LOG_DIVERGENT if the extrapolated excess slope, ``2 pi Re(a_{-1})^2``,
      exceeds ``LOG_SLOPE_TOL``;
    * REMOVABLE_MOD_PDT otherwise.

    The fitted log coefficient is the extrapolated slope of ``|f|^2`` itself,
    ``2 pi |a_{-1}|^2`` when no power term is present; the fitted constant is
    the deepest norm minus that slope times ``ln(1/rho_min)``.  Passing
    ``series`` attaches the coefficient-level verdict for cross-checking.
    """
    rho = np.asarray(record.rho_values, dtype=float)
    n = len(rho)
    if n < MIN_SAMPLES or rho[-1] > MAX_RHO_MIN:
        raise InsufficientSamplesError(
            f"need >= {MIN_SAMPLES} radii reaching {MAX_RHO_MIN}; got {n} down to {rho[-1]:.3g}"
        )
    if len(record.band_values) != n - 1 or len(record.excess_band_values) != n - 1:
        raise InsufficientSamplesError("record carries no ring norms; build it with growth_scan")
    tail = max(MIN_SAMPLES, (n + 1) // 2)
    x = -np.log(rho[n - tail:])
    dx = np.diff(x)
    if np.max(np.abs(dx - dx[0])) > 1e-6 * dx[0]:
        raise InsufficientSamplesError("the deepest samples must be log-uniformly spaced")
    q2 = math.exp(2.0 * dx[0])

    s_excess = np.asarray(record.excess_band_values[n - tail:], dtype=float) / dx
    s_total = np.asarray(record.band_values[n - tail:], dtype=float) / dx
    modes = min(3, len(dx) - 2)
    gain = math.prod(1.0 - q2 ** (-j) for j in range(1, modes + 1))

    f_excess = _annihilate(s_excess, q2, modes)
    f_total = _annihilate(s_total, q2, modes)
    scale = float(np.max(np.abs(s_excess)))
    growth = f_excess[-1] - f_excess[-2]

    excess_slope = f_excess[-1] / gain
    log_coeff = f_total[-1] / gain
    constant = record.norm_values[-1] - log_coeff * x[-1]

    if growth > POWER_REL_TOL * scale and growth > 0.0:
        tag = SingularityTag.POWER_DIVERGENT
    elif excess_slope > LOG_SLOPE_TOL:
        tag = SingularityTag.LOG_DIVERGENT
    else:
        tag = SingularityTag.REMOVABLE_MOD_PDT
    return SingularityClass(
        tag=tag,
        fitted_log_coefficient=float(log_coeff),
        fitted_constant=float(constant),
        excess_log_coefficient=float(excess_slope),
        coefficient_tag=None if series is None else coefficient_class(series),
    )


# -- the exhaustion model ------------------------------------------------------


def absolute_bc_representative(p: float, R: float, regular: Mapping[int, complex]) -> LaurentSeries:
    """Harmonic form with period ``p`` on ``[-ln 2, R]`` whose normal component
    vanishes on the horocycle ``r = R``.

    ``regular`` gives the coefficients ``a_n``, ``n >= 0``, which are data
    imposed from outside the cusp.  The boundary condition
    ``Re(z f(z)) = 0`` on ``|z| = rho_R`` fixes ``Re(a_{-1}) = 0`` and
    ``a_{-n-2} = -conj(a_n) rho_R^{2(n+1)}``.  Among closed forms with the same
    period that agree with it near ``r = -ln 2`` this form has least norm on
    the band.
    """
    if not R > 0.0:
        raise PreconditionError(f"R must be positive, got {R}")
    rho_r = math.exp(-TWO_PI * R)
    terms = {-1: complex(0.0, -p / TWO_PI)}
    for n, a in regular.items():
        if n < 0:
            raise PreconditionError(f"regular data must have n >= 0, got n={n}")
        a = complex(a)
        terms[n] = a
        terms[-n - 2] = -a.conjugate() * rho_r ** (2 * (n + 1))
    return LaurentSeries.from_dict(terms)


@dataclass(frozen=True)
class InequalityRecord:
    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    a: float
    r: float
    R: float
    p: float

    def to_dict(self) -> dict:
        """Report record; the flag is serialised as ``pass``."""
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


INEQUALITY_NAMES = ("dt_minimal", "dt_minimal_tail", "minimality", "split_bound", "core_bound", "collar_bound", "collar_core_bound")


def _band(series: LaurentSeries, lo: float, hi: float) -> float:
    return 0.0 if lo == hi else band_norm_sq(series, CuspBand(lo, hi))


def _total(*parts: float) -> float:
    return kernels.neumaier_sum(np.array(parts, dtype=float))


def inequality_suite(omega_R: LaurentSeries, p: float, a: float, r: float, R: float,
                     core_norm: float | None = None, tol: float = 1e-10) -> list[InequalityRecord]:
    """Both sides of each cusp-band inequality, with slack ``rhs - lhs``.

    ``core_norm`` is ``|alpha|^2`` on ``X_0``; by default the norm of the glued
    form over ``[-ln 2, 0]``.  ``|omega_R|^2`` on ``X_0`` is its closed-form norm
    over the same band.  Rows:

    ``dt_minimal``         |p dt|^2 <= |omega_R|^2 on C[a, R]
    ``dt_minimal_tail``    the same on C[r, R]
    ``minimality``         |omega_R|^2 on X_R  <=  |alpha|^2 on X_R
    ``split_bound``        |omega_R|^2_{X_a} + |omega_R|^2_{C[a,R]} <= |alpha|^2_{X_a} + |p dt|^2_{C[a,R]}
    ``core_bound``         |omega_R|^2_{X_a} <= m(a)^2 = |alpha|^2_{X_a}
    ``collar_bound``       |omega_R|^2_{C[0,r]} <= |alpha|^2_{X_0} + |p dt|^2_{C[0,r]} + |p dt|^2_{C[r,R]} - |omega_R|^2_{C[r,R]}
    ``collar_core_bound``  |omega_R|^2_{C[0,r]} <= m_0 + |p dt|^2_{C[0,r]},  m_0 = |alpha|^2_{X_0}
    """
    if not (0.0 <= a <= r <= R) or not R > 0.0:
        raise ParameterOrderError(f"need 0 <= a <= r <= R with R > 0, got a={a}, r={r}, R={R}")
    if abs(period(omega_R) - p) > period_tolerance(omega_R, p):
        raise PeriodMismatchError(f"omega_R has period {period(omega_R)!r}, expected {p!r}")
    if core_norm is None:
        core_norm = alpha_norm_sq(omega_R, p)
    elif not core_norm >= 0.0:
        raise PreconditionError(f"core norm must be nonnegative, got {core_norm}")

    pdt = dt_series(p)
    w_core = band_norm_sq(omega_R, CuspBand(R_FLOOR, 0.0))
    w_0a, w_aR = _band(omega_R, 0.0, a), _band(omega_R, a, R)
    w_0r, w_rR = _band(omega_R, 0.0, r), _band(omega_R, r, R)
    w_0R = _band(omega_R, 0.0, R)
    d_0a, d_aR = _band(pdt, 0.0, a), _band(pdt, a, R)
    d_0r, d_rR = _band(pdt, 0.0, r), _band(pdt, r, R)
    d_0R = _band(pdt, 0.0, R)

    rows = [
        ("dt_minimal", d_aR, w_aR),
        ("dt_minimal_tail", d_rR, w_rR),
        ("minimality", _total(w_core, w_0R), _total(core_norm, d_0R)),
        ("split_bound", _total(w_core, w_0a, w_aR), _total(core_norm, d_0a, d_aR)),
        ("core_bound", _total(w_core, w_0a), _total(core_norm, d_0a)),
        ("collar_bound", w_0r, _total(core_norm, d_0r, d_rR, -w_rR)),
        ("collar_core_bound", w_0r, _total(core_norm, d_0r)),
    ]
    return [
        InequalityRecord(name, float(lhs), float(rhs), float(rhs - lhs), bool(rhs - lhs >= -tol),
                         float(a), float(r), float(R), float(p))
        for name, lhs, rhs in rows
    ]


def core_bound_family(p: float, a: float, R_values: Sequence[float],
                  window: tuple[int, int] = (-8, 8)) -> list[tuple[float, float, float]]:
    """``(R, |omega_R|^2_{X_a}, m(a)^2)`` for the norm-minimising family.

    For each ``R`` the representative is the least-norm form of period ``p``
    on the image annulus of ``[-ln 2, R]`` found by :func:`minimize_in_class`.
    """
    out = []
    for R in R_values:
        ann = Annulus(math.exp(-TWO_PI * R), math.exp(-TWO_PI * R_FLOOR))
        omega = minimize_in_class(MinimizationProblem(p, ann, window))
        core = alpha_norm_sq(omega, p)
        lhs = _total(band_norm_sq(omega, CuspBand(R_FLOOR, 0.0)), _band(omega, 0.0, a))
        rhs = _total(core, _band(dt_series(p), 0.0, a))
        out.append((float(R), float(lhs), float(rhs)))
    return out


CSV_FIELDS = ("name", "a", "r", "R", "p", "lhs", "rhs", "slack", "pass")


def records_to_csv(records: Sequence[InequalityRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        d = rec.to_dict()
        writer.writerow([repr(d[k]) if isinstance(d[k], float) else d[k] for k in CSV_FIELDS])
    return buf.getvalue()
