"""Gradient sampling for nonsmooth, possibly non-Lipschitz minimization.

The solver samples gradients on a shrinking ball, projects the origin onto
their convex hull, and line-searches along the negated projection; the
companion diagnostics quantify stationarity and detect degenerate descent
directions for objectives whose gradients blow up along some directions.
"""

from .analysis import (
    ApproxLevel,
    ClassifierConfig,
    DegeneracyClass,
    DegeneracyReport,
    OutcomeClass,
    classify_outcome,
    degeneracy_report,
    pointedness_check,
    polar_interior_member,
    rho_estimate,
    subdiff_approx_experiment,
)
from .core import (
    GsParams,
    IterationRecord,
    LineSearchFailedError,
    NumericalStall,
    Objective,
    ObjectiveRangeError,
    ParameterOutOfRange,
    SampleOutsideDomainError,
    StepKind,
    TerminationStatus,
    Vector,
    validate_params,
)
from .linesearch import armijo_backtrack, perturb_if_nondifferentiable
from .minnorm import (
    DescentStatus,
    MinNormResult,
    Polytope,
    SubdifferentialModel,
    min_norm_generalized,
    min_norm_point,
    steepest_descent_direction,
    support_function,
)
from .sampling import GradientCloud, RngStream, build_cloud, sample_uniform_ball
from .solver import GsState, IterationExit, RunTrace, gs_iteration, gs_solve, gs_solve_fixed_radius
from .testbed import (
    KnownPoint,
    LipschitzClass,
    TestFunction,
    from_name,
    make_abs_sum,
    make_cube_root,
    make_max_quadratics,
    make_nonsmooth_rosenbrock,
    make_root_ridge,
    make_tilted_root_distance,
    registry_names,
)

__all__ = [
    "ApproxLevel",
    "ClassifierConfig",
    "DegeneracyClass",
    "DegeneracyReport",
    "DescentStatus",
    "GradientCloud",
    "GsParams",
    "GsState",
    "IterationExit",
    "IterationRecord",
    "KnownPoint",
    "LineSearchFailedError",
    "LipschitzClass",
    "MinNormResult",
    "NumericalStall",
    "Objective",
    "ObjectiveRangeError",
    "OutcomeClass",
    "ParameterOutOfRange",
    "Polytope",
    "RngStream",
    "RunTrace",
    "SampleOutsideDomainError",
    "StepKind",
    "SubdifferentialModel",
    "TerminationStatus",
    "TestFunction",
    "Vector",
    "armijo_backtrack",
    "build_cloud",
    "classify_outcome",
    "degeneracy_report",
    "from_name",
    "gs_iteration",
    "gs_solve",
    "gs_solve_fixed_radius",
    "make_abs_sum",
    "make_cube_root",
    "make_max_quadratics",
    "make_nonsmooth_rosenbrock",
    "make_root_ridge",
    "make_tilted_root_distance",
    "min_norm_generalized",
    "min_norm_point",
    "perturb_if_nondifferentiable",
    "pointedness_check",
    "polar_interior_member",
    "registry_names",
    "rho_estimate",
    "sample_uniform_ball",
    "steepest_descent_direction",
    "subdiff_approx_experiment",
    "support_function",
    "validate_params",
]
