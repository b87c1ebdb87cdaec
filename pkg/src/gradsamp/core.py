"""Shared types for the gradient sampling solver.

The solver minimizes objectives that are continuous everywhere but smooth
only on an open, full-measure subset of R^n (the "smooth set").  Everything
downstream speaks in terms of the small vocabulary defined here: an
``Objective`` to minimize, a frozen ``GsParams`` bundle of algorithm
parameters, and per-iteration ``IterationRecord`` entries that traces are
made of.
"""

from __future__ import annotations

import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

# 1-D float64 arrays throughout.
Vector = np.ndarray


class ParameterOutOfRange(ValueError):
    """A solver parameter violates its documented range."""


class NumericalStall(RuntimeError):
    """An iterative numerical routine could not certify its result."""


class SampleOutsideDomainError(RuntimeError):
    """A sampled point landed outside the objective's smooth set."""


class LineSearchFailedError(RuntimeError):
    """No acceptable step (or acceptable perturbed iterate) exists."""


class ObjectiveRangeError(RuntimeError):
    """The objective returned a non-finite value or gradient component."""


def as_vector(x, dim: int | None = None, name: str = "x") -> Vector:
    """Coerce ``x`` to a finite 1-D float64 array, optionally checking length."""
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must have finite components")
    if dim is not None and v.size != dim:
        raise ValueError(f"{name} has dimension {v.size}, expected {dim}")
    return v


class Objective(ABC):
    """A function that is smooth on an open full-measure subset of R^n.

    ``grad`` is only meaningful where ``in_smooth_set`` is true; callers are
    expected to check first.  ``eval`` must be defined (and finite) everywhere.
    """

    @abstractmethod
    def dim(self) -> int: ...

    @abstractmethod
    def eval(self, x: Vector) -> float: ...

    @abstractmethod
    def grad(self, x: Vector) -> Vector: ...

    @abstractmethod
    def in_smooth_set(self, x: Vector) -> bool: ...


def checked_eval(f: Objective, x: Vector) -> float:
    """Evaluate ``f`` and reject non-finite results (contract violation)."""
    v = float(f.eval(x))
    if not math.isfinite(v):
        raise ObjectiveRangeError(f"objective returned non-finite value {v} at x={x!r}")
    return v


def checked_grad(f: Objective, x: Vector) -> Vector:
    g = np.asarray(f.grad(x), dtype=float)
    if not np.all(np.isfinite(g)):
        raise ObjectiveRangeError(f"objective returned non-finite gradient at x={x!r}")
    return g


class StepKind(str, enum.Enum):
    """What the loop body did at one iteration.

    ``TERMINAL`` marks the record written for the iteration at which the run
    stopped inside the loop body (stationarity test hit, or the line search
    gave out); it carries the gradient-hull data of that final check.
    """

    REDUCTION = "Reduction"
    LINE_SEARCH = "LineSearch"
    TERMINAL = "Terminal"


class TerminationStatus(str, enum.Enum):
    GRADIENT_ZERO = "GradientZero"
    TOLERANCE_MET = "ToleranceMet"
    SAMPLE_OUTSIDE_DOMAIN = "SampleOutsideDomain"
    LINE_SEARCH_FAILED = "LineSearchFailed"
    MAX_ITERATIONS = "MaxIterations"
    OBJECTIVE_DIVERGING = "ObjectiveDiverging"


@dataclass(frozen=True)
class GsParams:
    """Parameters of the sampling solver.

    ``m is None`` means "use 2n samples", resolved per-objective via
    ``sample_size``.  ``eps0``/``nu0`` are the initial sampling radius and
    stationarity target; ``theta_eps``/``theta_nu`` are the shrink factors
    applied whenever the sampled-hull point is already inside the target.
    """

    eps_opt: float = 1e-6
    nu_opt: float = 1e-6
    eps0: float = 0.1
    nu0: float = 0.1
    m: int | None = None
    beta: float = 1e-4
    gamma: float = 0.5
    theta_eps: float = 0.1
    theta_nu: float = 0.1
    max_iter: int = 10_000
    max_backtracks: int = 60
    max_perturb_attempts: int = 100
    seed: int = 0
    divergence_floor: float = -1e12
    resample_outside_domain: bool = False

    def sample_size(self, n: int) -> int:
        return self.m if self.m is not None else 2 * n


def validate_params(p: GsParams, n: int) -> None:
    """Raise ParameterOutOfRange naming the first violated constraint."""

    def bad(constraint: str) -> ParameterOutOfRange:
        return ParameterOutOfRange(f"parameter constraint violated: {constraint}")

    if not isinstance(n, (int, np.integer)) or n < 1:
        raise bad("n >= 1")
    if not (math.isfinite(p.eps_opt) and p.eps_opt >= 0.0):
        raise bad("eps_opt >= 0")
    if not (math.isfinite(p.eps0) and p.eps0 > p.eps_opt):
        raise bad("eps0 > eps_opt")
    if not (math.isfinite(p.nu_opt) and p.nu_opt >= 0.0):
        raise bad("nu_opt >= 0")
    if not (math.isfinite(p.nu0) and p.nu0 >= p.nu_opt):
        raise bad("nu0 >= nu_opt")
    if p.m is not None and p.m < n + 1:
        raise bad("m >= n + 1")
    if not (0.0 < p.beta < 1.0):
        raise bad("beta in (0, 1)")
    if not (0.0 < p.gamma < 1.0):
        raise bad("gamma in (0, 1)")
    if not (0.0 < p.theta_eps <= 1.0):
        raise bad("theta_eps in (0, 1]")
    if not (0.0 < p.theta_nu <= 1.0):
        raise bad("theta_nu in (0, 1]")
    if p.max_iter < 1:
        raise bad("max_iter >= 1")
    if p.max_backtracks < 1:
        raise bad("max_backtracks >= 1")
    if p.max_perturb_attempts < 1:
        raise bad("max_perturb_attempts >= 1")
    if not (0 <= p.seed < 2**64):
        raise bad("seed is a 64-bit unsigned integer")
    if not math.isfinite(p.divergence_floor):
        raise bad("divergence_floor is finite")


@dataclass(frozen=True, eq=False)
class IterationRecord:
    """One loop-body entry of a run trace.

    ``x`` and ``f_val`` describe the iterate *before* the step; ``g`` is the
    minimum-norm point of the sampled gradient hull.  ``t_k`` is zero for
    reduction steps and for terminal records.
    """

    k: int
    x: Vector
    f_val: float
    eps_k: float
    nu_k: float
    g: Vector
    g_norm: float
    step_kind: StepKind
    t_k: float
    perturbed: bool
    sample_count: int
