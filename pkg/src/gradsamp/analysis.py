"""Diagnostics around sampled gradient hulls and run traces.

Three groups of tools:

* sampled estimates of how close the origin is to the local gradient hull
  (``rho_estimate``) and of the hull itself at shrinking radii
  (``subdiff_approx_experiment``);
* exact checks on analytic models: cone pointedness, strict polar-interior
  membership, and the descent/degeneracy classification that decides whether
  the negated projection of the origin is a usable descent direction;
* a heuristic classifier mapping a finished run trace onto the qualitative
  outcomes: terminated at stationarity, diverging objective, stalled target
  with converging iterates, or target driven to zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import Objective, StepKind, TerminationStatus, Vector, checked_grad
from .minnorm import MinNormResult, Polytope, SubdifferentialModel, min_norm_generalized, min_norm_point
from .sampling import RngStream, sample_uniform_ball
from .solver import RunTrace

_MAX_REJECTION_ROUNDS = 200


class DegeneracyClass(str, enum.Enum):
    STATIONARY_CLARKE = "StationaryClarke"
    NONDEGENERATE_DESCENT = "NondegenerateDescent"
    DEGENERATE_DIRECTION = "DegenerateDirection"
    EMPTY_SUBDIFFERENTIAL = "EmptySubdifferential"


class OutcomeClass(str, enum.Enum):
    A_TERMINATED_STATIONARY = "A_TerminatedStationary"
    B_DIVERGING = "B_Diverging"
    C_STALLED_TARGET = "C_StalledTarget"
    D_TARGET_TO_ZERO = "D_TargetToZero"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ClassifierConfig:
    """Trace-signal thresholds for classify_outcome."""

    window: int = 200
    displacement_tol: float = 1e-8
    nu_floor: float = 1e-8
    min_reductions: int = 10


@dataclass(frozen=True)
class DegeneracyReport:
    subdiff_empty: bool
    contains_zero: bool
    proj: Vector | None
    neg_proj_interior: bool
    classification: DegeneracyClass


@dataclass(frozen=True)
class ApproxLevel:
    """One radius level of a hull-approximation experiment."""

    delta: float
    min_norm_result: MinNormResult
    coord_min: Vector
    coord_max: Vector


def _smooth_samples(f: Objective, x: Vector, radius: float, count: int, gen) -> np.ndarray:
    """Draw ``count`` ball samples, redrawing any that miss the smooth set."""
    out = np.empty((count, x.size))
    have = 0
    for _ in range(_MAX_REJECTION_ROUNDS):
        batch = sample_uniform_ball(x, radius, count - have, gen)
        for p in batch:
            if f.in_smooth_set(p):
                out[have] = p
                have += 1
        if have == count:
            return out
    raise RuntimeError("smooth-set rejection rate too high; is the nonsmooth set fat?")


def rho_estimate(f: Objective, x, eps: float, n_samples: int, rng: RngStream) -> float:
    """Distance from the origin to the hull of ``n_samples`` sampled gradients.

    Estimates the criticality measure at ``x`` with radius ``eps``.  The
    sampled hull is inside the true local gradient hull, so the estimate is
    an upper bound on the true distance (in exact arithmetic) and decreases
    stochastically as ``n_samples`` grows.
    """
    x = np.asarray(x, dtype=float)
    if n_samples < x.size + 1:
        raise ValueError("n_samples must be at least dim + 1")
    gen = rng.generator()
    pts = _smooth_samples(f, x, eps, n_samples, gen)
    grads = np.array([checked_grad(f, p) for p in pts])
    return min_norm_point(Polytope(grads)).norm


def pointedness_check(generators, tol: float = 1e-9) -> bool:
    """True iff cone(generators) contains no line.

    The cone is pointed exactly when the origin is separated from the convex
    hull of the normalized generators; we test that the hull's min-norm
    exceeds ``tol``.  An empty generator list is the trivial (pointed) cone.
    """
    w = np.atleast_2d(np.asarray(generators, dtype=float))
    if w.size == 0:
        return True
    norms = np.linalg.norm(w, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("generators must be nonzero")
    return min_norm_point(Polytope(w / norms[:, None])).norm > tol


def polar_interior_member(z, generators) -> bool:
    """True iff <z, w> < 0 strictly for every generator w.

    For a finitely generated cone this is exactly membership of ``z`` in the
    interior of the polar cone.  Vacuously true for no generators (the polar
    of the trivial cone is all of R^n).  The comparison is exact: analytic
    models produce exact zeros on purpose, and those must not count.
    """
    z = np.asarray(z, dtype=float)
    w = np.atleast_2d(np.asarray(generators, dtype=float))
    if w.size == 0:
        return True
    return bool(np.all(w @ z < 0.0))


def degeneracy_report(model: SubdifferentialModel, tol: float = 1e-9) -> DegeneracyReport:
    """Classify the descent picture encoded by an analytic model.

    The negated projection of the origin onto the model is the steepest
    descent direction candidate; descent is reliable only if that direction
    lies strictly inside the polar of the horizon cone.  On the boundary the
    direction is degenerate: arbitrarily steep uphill gradients live nearby.
    """
    res = min_norm_generalized(model, tol=min(tol, 1e-9))
    if res is None:
        return DegeneracyReport(
            subdiff_empty=True,
            contains_zero=False,
            proj=None,
            neg_proj_interior=False,
            classification=DegeneracyClass.EMPTY_SUBDIFFERENTIAL,
        )
    contains_zero = res.norm <= tol
    if contains_zero:
        return DegeneracyReport(
            subdiff_empty=False,
            contains_zero=True,
            proj=res.point,
            neg_proj_interior=False,
            classification=DegeneracyClass.STATIONARY_CLARKE,
        )
    interior = polar_interior_member(-res.point, model.cone_generators)
    cls = DegeneracyClass.NONDEGENERATE_DESCENT if interior else DegeneracyClass.DEGENERATE_DIRECTION
    return DegeneracyReport(
        subdiff_empty=False,
        contains_zero=False,
        proj=res.point,
        neg_proj_interior=interior,
        classification=cls,
    )


def subdiff_approx_experiment(
    f: Objective, x, deltas, n_samples: int, rng: RngStream
) -> list[ApproxLevel]:
    """Sampled gradient hulls of ``f`` near ``x`` at shrinking radii.

    ``deltas`` must be strictly decreasing and positive.  Each level reports
    the hull's min-norm result plus per-coordinate gradient extremes, enough
    to watch the hulls shrink toward the limiting object as delta drops.
    """
    x = np.asarray(x, dtype=float)
    deltas = [float(d) for d in deltas]
    if not deltas:
        raise ValueError("deltas must be nonempty")
    if any(d <= 0.0 for d in deltas):
        raise ValueError("deltas must be positive")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be strictly decreasing")
    if n_samples < x.size + 1:
        raise ValueError("n_samples must be at least dim + 1")
    gen = rng.generator()
    levels = []
    for delta in deltas:
        pts = _smooth_samples(f, x, delta, n_samples, gen)
        grads = np.array([checked_grad(f, p) for p in pts])
        levels.append(
            ApproxLevel(
                delta=delta,
                min_norm_result=min_norm_point(Polytope(grads)),
                coord_min=grads.min(axis=0),
                coord_max=grads.max(axis=0),
            )
        )
    return levels


def classify_outcome(trace: RunTrace, cfg: ClassifierConfig = ClassifierConfig()) -> OutcomeClass:
    """Map a finished trace onto a qualitative outcome.

    Statuses decide the clear-cut cases.  Otherwise: the target-driven-to-zero
    signature is many reduction steps with the final target below
    ``nu_floor``; the stalled-target signature is an unchanged target over
    the trailing window while the hull distance stayed at or above it and the
    iterates barely moved.  Anything else is inconclusive.
    """
    if not trace.records:
        raise ValueError("classify_outcome needs a nonempty trace")
    if trace.status in (TerminationStatus.GRADIENT_ZERO, TerminationStatus.TOLERANCE_MET):
        return OutcomeClass.A_TERMINATED_STATIONARY
    if trace.status == TerminationStatus.OBJECTIVE_DIVERGING:
        return OutcomeClass.B_DIVERGING

    records = trace.records
    reductions = sum(1 for r in records if r.step_kind == StepKind.REDUCTION)
    nu_final = records[-1].nu_k
    if nu_final <= cfg.nu_floor and reductions >= cfg.min_reductions:
        return OutcomeClass.D_TARGET_TO_ZERO

    if len(records) >= cfg.window + 1:
        tail = records[-(cfg.window + 1) :]
        same_nu = all(r.nu_k == tail[0].nu_k for r in tail)
        g_stayed_up = all(r.g_norm >= nu_final for r in tail)
        displacement = sum(
            float(np.linalg.norm(b.x - a.x)) for a, b in zip(tail, tail[1:])
        )
        if same_nu and g_stayed_up and displacement < cfg.displacement_tol:
            return OutcomeClass.C_STALLED_TARGET
    return OutcomeClass.INCONCLUSIVE
