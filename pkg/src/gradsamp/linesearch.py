"""Backtracking line search and the nondifferentiable-landing repair step."""

from __future__ import annotations

import numpy as np

from .core import LineSearchFailedError, Objective, Vector, checked_eval
from .sampling import LANE_PERTURB, _generator_for, sample_uniform_ball


def armijo_backtrack(
    f: Objective,
    x: Vector,
    d: Vector,
    g_norm: float,
    beta: float,
    gamma: float,
    max_backtracks: int,
) -> float:
    """Largest t in {1, gamma, ..., gamma**max_backtracks} with sufficient decrease.

    Sufficient decrease means ``f(x + t d) < f(x) - beta * t * g_norm`` (d is
    a unit direction, so ``t`` is also the step length).  The grid is walked
    from t = 1 downward; the first acceptable t is the largest.
    """
    f0 = checked_eval(f, x)
    t = 1.0
    for _ in range(max_backtracks + 1):
        if checked_eval(f, x + t * d) < f0 - beta * t * g_norm:
            return t
        t *= gamma
    raise LineSearchFailedError(
        f"no acceptable step among {max_backtracks + 1} backtracking candidates"
    )


def perturb_if_nondifferentiable(
    f: Objective,
    x_old: Vector,
    x_cand: Vector,
    t: float,
    eps: float,
    g_norm: float,
    beta: float,
    rng,
    max_attempts: int,
) -> Vector:
    """Return x_cand, or a nearby smooth point that still decreases enough.

    When the accepted step lands outside the smooth set, the next iterate is
    redrawn uniformly from the ball of radius min(t, eps) around the landing
    point until it is smooth and satisfies the same sufficient-decrease bound
    relative to x_old.  The radius cap keeps the realized displacement within
    min(t, eps) of the nominal step.
    """
    if f.in_smooth_set(x_cand):
        return x_cand
    gen = _generator_for(rng, LANE_PERTURB)
    radius = min(float(t), float(eps))
    target = checked_eval(f, x_old) - beta * t * g_norm
    for _ in range(max_attempts):
        y = sample_uniform_ball(x_cand, radius, 1, gen)[0]
        if f.in_smooth_set(y) and checked_eval(f, y) < target:
            return y
    raise LineSearchFailedError(
        f"no smooth sufficiently-decreasing point found in {max_attempts} perturbation draws"
    )
