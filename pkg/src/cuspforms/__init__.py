"""Harmonic differentials ``Re(f dz)`` near a puncture, written as Laurent series.

Closed-form periods and L2 norms on annuli and cusp bands, independent
quadrature oracles, norm minimisation inside a period class, gluing a form to
``p dt`` across the cusp mouth, and numerical checks of the norm inequalities
that drive an exhaustion argument.
"""
from .errors import (
    CuspFormsError,
    InfeasibleConstraintError,
    InsufficientSamplesError,
    LaurentDomainError,
    NormOverflowError,
    NotExactError,
    ParameterOrderError,
    PeriodMismatchError,
    PreconditionError,
    VerificationError,
)
from .laurent import (
    TWO_PI,
    Annulus,
    HarmonicDifferential,
    LaurentSeries,
    add,
    dt_series,
    evaluate,
    norm_sq,
    period,
    scale,
    term_norm_sq,
)
from .cusp import R_FLOOR, CuspBand, CuspPoint, band_norm_sq, cusp_from_disk, disk_from_cusp, pullback
from .gridded import CuspGrid, GriddedForm
from .quadrature import QuadratureSpec, annulus_norm_sq, contour_period, cusp_norm_sq, grid_exterior_derivative
from .hodge_min import MinimizationProblem, eq5_check, minimize_in_class, optimality_report, solve_eqp
from .glue import alpha_norm_sq, bump, build_alpha, build_alpha_multi, curl_convergence, horocycle_periods
from .exhaustion import (
    GrowthRecord,
    InequalityRecord,
    SingularityClass,
    SingularityTag,
    classify,
    coefficient_class,
    growth_scan,
    inequality_suite,
)

__version__ = "0.1.0"
