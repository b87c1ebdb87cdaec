"""The gradient sampling iteration and driver loops.

One iteration: sample gradients on the current ball, project the origin onto
their convex hull, then either (a) stop if the stationarity targets are met,
(b) shrink the ball and the target when the hull already almost contains the
origin, or (c) take an Armijo step along the negated projection, repairing
the landing point if it falls outside the smooth set.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import (
    GsParams,
    IterationRecord,
    LineSearchFailedError,
    Objective,
    ParameterOutOfRange,
    SampleOutsideDomainError,
    StepKind,
    TerminationStatus,
    Vector,
    as_vector,
    checked_eval,
    validate_params,
)
from .linesearch import armijo_backtrack, perturb_if_nondifferentiable
from .minnorm import Polytope, min_norm_point
from .sampling import LANE_INIT, RngStream, build_cloud, sample_uniform_ball


@dataclass(frozen=True)
class GsState:
    """Loop state between iterations."""

    x: Vector
    eps: float
    nu: float
    k: int


@dataclass(frozen=True)
class IterationExit:
    """Why the loop body stopped, plus the final check's record if one exists."""

    status: TerminationStatus
    record: IterationRecord | None = None


@dataclass
class RunTrace:
    records: list[IterationRecord]
    status: TerminationStatus
    final_x: Vector
    final_f: float
    wall_time: float


def gs_iteration(
    f: Objective, state: GsState, p: GsParams, rng: RngStream
) -> tuple[GsState, IterationRecord] | IterationExit:
    """Run one loop body from ``state``.

    Returns the next state and this iteration's record, or an IterationExit
    when the iteration itself terminates the run.
    """
    x = state.x
    n = x.size
    m = p.sample_size(n)
    try:
        cloud = build_cloud(
            f,
            x,
            state.eps,
            m,
            rng,
            resample_outside_domain=p.resample_outside_domain,
            max_resample_attempts=p.max_perturb_attempts,
        )
    except SampleOutsideDomainError:
        return IterationExit(TerminationStatus.SAMPLE_OUTSIDE_DOMAIN)

    hull = min_norm_point(Polytope(cloud.gradients))
    g = hull.point
    g_norm = hull.norm
    f_val = checked_eval(f, x)

    def make_record(kind: StepKind, t_k: float = 0.0, perturbed: bool = False) -> IterationRecord:
        return IterationRecord(
            k=state.k,
            x=x,
            f_val=f_val,
            eps_k=state.eps,
            nu_k=state.nu,
            g=g,
            g_norm=g_norm,
            step_kind=kind,
            t_k=t_k,
            perturbed=perturbed,
            sample_count=m,
        )

    # Stationarity tests come before any update: an exactly-zero gradient at
    # the iterate, then the (nu_opt, eps_opt) tolerance pair.
    if np.all(cloud.gradients[0] == 0.0):
        return IterationExit(TerminationStatus.GRADIENT_ZERO, make_record(StepKind.TERMINAL))
    if g_norm <= p.nu_opt and state.eps <= p.eps_opt:
        return IterationExit(TerminationStatus.TOLERANCE_MET, make_record(StepKind.TERMINAL))

    if g_norm <= state.nu:
        record = make_record(StepKind.REDUCTION)
        nxt = GsState(x=x, eps=p.theta_eps * state.eps, nu=p.theta_nu * state.nu, k=state.k + 1)
        return nxt, record

    d = -g / g_norm
    try:
        t = armijo_backtrack(f, x, d, g_norm, p.beta, p.gamma, p.max_backtracks)
    except LineSearchFailedError:
        return IterationExit(TerminationStatus.LINE_SEARCH_FAILED, make_record(StepKind.TERMINAL))
    x_cand = x + t * d
    try:
        x_new = perturb_if_nondifferentiable(
            f, x, x_cand, t, state.eps, g_norm, p.beta, rng, p.max_perturb_attempts
        )
    except LineSearchFailedError:
        return IterationExit(TerminationStatus.LINE_SEARCH_FAILED, make_record(StepKind.TERMINAL))
    perturbed = x_new is not x_cand
    record = make_record(StepKind.LINE_SEARCH, t_k=t, perturbed=perturbed)
    return GsState(x=x_new, eps=state.eps, nu=state.nu, k=state.k + 1), record


def _initial_point(f: Objective, x0, p: GsParams) -> Vector:
    """Coerce ``x0`` and, if it is a nondifferentiable point, nudge it off.

    The smooth set has full measure, so a vanishingly small seeded
    perturbation lands inside it almost surely; the run stays deterministic
    and the trace records the point actually used.
    """
    x = as_vector(x0, dim=f.dim(), name="x0")
    if f.in_smooth_set(x):
        return x
    gen = RngStream(p.seed, 0).generator(LANE_INIT)
    radius = 1e-12 * (1.0 + float(np.linalg.norm(x)))
    for _ in range(p.max_perturb_attempts):
        cand = sample_uniform_ball(x, radius, 1, gen)[0]
        if f.in_smooth_set(cand):
            return cand
        radius *= 2.0
    raise ValueError("x0 could not be perturbed into the smooth set")


def _drive(f: Objective, x0: Vector, p: GsParams) -> RunTrace:
    started = time.perf_counter()
    x0 = _initial_point(f, x0, p)
    state = GsState(x=x0, eps=p.eps0, nu=p.nu0, k=0)
    records: list[IterationRecord] = []
    status = TerminationStatus.MAX_ITERATIONS
    while state.k < p.max_iter:
        if checked_eval(f, state.x) < p.divergence_floor:
            status = TerminationStatus.OBJECTIVE_DIVERGING
            break
        out = gs_iteration(f, state, p, RngStream(p.seed, state.k))
        if isinstance(out, IterationExit):
            status = out.status
            if out.record is not None:
                records.append(out.record)
            break
        state, record = out
        records.append(record)
    final_x = state.x
    return RunTrace(
        records=records,
        status=status,
        final_x=final_x,
        final_f=checked_eval(f, final_x),
        wall_time=time.perf_counter() - started,
    )


def gs_solve(f: Objective, x0, p: GsParams) -> RunTrace:
    """Minimize ``f`` from ``x0`` until a termination status is reached.

    Identical (f, x0, p) produce identical records and status; only
    ``wall_time`` varies between runs.
    """
    validate_params(p, f.dim())
    return _drive(f, x0, p)


def gs_solve_fixed_radius(f: Objective, x0, p: GsParams) -> RunTrace:
    """Run the fixed-sampling-radius regime.

    Requires eps_opt == eps0 > 0, nu_opt == nu0 == 0, and theta_eps == 1:
    the ball never shrinks and the loop stops only when the sampled hull
    contains the origin exactly, which certifies stationarity of the
    eps0-smeared objective.
    """
    n = f.dim()
    if not (p.eps_opt == p.eps0 and p.eps0 > 0.0):
        raise ParameterOutOfRange("fixed-radius regime requires eps_opt == eps0 > 0")
    if not (p.nu_opt == 0.0 and p.nu0 == 0.0):
        raise ParameterOutOfRange("fixed-radius regime requires nu_opt == nu0 == 0")
    if p.theta_eps != 1.0:
        raise ParameterOutOfRange("fixed-radius regime requires theta_eps == 1")
    # Everything except the eps0 > eps_opt strictness is shared with the
    # adaptive regime; validate the rest field by field.
    relaxed = GsParams(
        eps_opt=0.0,
        nu_opt=p.nu_opt,
        eps0=p.eps0,
        nu0=p.nu0,
        m=p.m,
        beta=p.beta,
        gamma=p.gamma,
        theta_eps=p.theta_eps,
        theta_nu=p.theta_nu,
        max_iter=p.max_iter,
        max_backtracks=p.max_backtracks,
        max_perturb_attempts=p.max_perturb_attempts,
        seed=p.seed,
        divergence_floor=p.divergence_floor,
        resample_outside_domain=p.resample_outside_domain,
    )
    validate_params(relaxed, n)
    return _drive(f, x0, p)
