"""Uniform ball sampling and gradient-cloud construction.

Randomness is addressed, not threaded: an ``RngStream`` is a (seed, stream_id)
value, and every consumer derives a fresh generator from it.  The solver uses
stream_id = iteration index, so adding or removing diagnostic draws elsewhere
never perturbs the solve path.  Within one stream, independent purposes use
distinct lanes (cloud sampling vs. perturbation) to stay decorrelated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Objective, SampleOutsideDomainError, Vector, checked_grad

LANE_CLOUD = 0
LANE_PERTURB = 1
LANE_INIT = 2


@dataclass(frozen=True)
class RngStream:
    """Deterministic random source identified by (seed, stream_id)."""

    seed: int
    stream_id: int

    def generator(self, lane: int = 0) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id, lane))
        return np.random.Generator(np.random.PCG64(seq))


def _generator_for(rng, lane: int) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator(lane)
    return rng


def sample_uniform_ball(center, radius: float, count: int, rng, lane: int = 0) -> np.ndarray:
    """``count`` points uniform on the closed ball of ``radius`` around ``center``.

    Direction from a normalized Gaussian, radius from ``radius * U**(1/n)``.
    Accepts an ``RngStream`` (bitwise-reproducible per call) or a live
    ``numpy.random.Generator`` (consumed sequentially).
    """
    center = np.asarray(center, dtype=float)
    if radius < 0.0:
        raise ValueError("radius must be >= 0")
    if count < 0:
        raise ValueError("count must be >= 0")
    gen = _generator_for(rng, lane)
    n = center.size
    raw = gen.standard_normal((count, n))
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0  # measure-zero guard
    offsets = (raw / norms) * (radius * gen.random(count)[:, None] ** (1.0 / n))
    # Rounding can push a boundary point a few ulp outside; clamp it back.
    lengths = np.linalg.norm(offsets, axis=1)
    over = lengths > radius
    if np.any(over):
        offsets[over] *= (radius / lengths[over])[:, None]
    return center + offsets


@dataclass(frozen=True)
class GradientCloud:
    """Gradients of an objective at a center point and nearby samples.

    ``gradients[0]`` is the gradient at ``center``; ``gradients[1:]`` line up
    with ``sample_points``.
    """

    center: Vector
    radius: float
    sample_points: np.ndarray
    gradients: np.ndarray


def build_cloud(
    f: Objective,
    x: Vector,
    eps: float,
    m: int,
    rng,
    resample_outside_domain: bool = False,
    max_resample_attempts: int = 100,
) -> GradientCloud:
    """Sample ``m`` points from the eps-ball around ``x`` and differentiate.

    ``x`` itself must lie in the smooth set.  By default a sample outside the
    smooth set aborts with SampleOutsideDomainError (the solver maps this to a
    termination status); with ``resample_outside_domain`` such draws are
    retried, which is the pragmatic choice when the nonsmooth set has measure
    zero but floating point may still land on it.
    """
    x = np.asarray(x, dtype=float)
    if m < 1:
        raise ValueError("m must be >= 1")
    if not f.in_smooth_set(x):
        raise ValueError("center x must lie in the smooth set")
    gen = _generator_for(rng, LANE_CLOUD)
    pts = sample_uniform_ball(x, eps, m, gen)
    if resample_outside_domain:
        for i in range(m):
            attempts = 0
            while not f.in_smooth_set(pts[i]):
                attempts += 1
                if attempts > max_resample_attempts:
                    raise SampleOutsideDomainError(
                        f"sample {i} stayed outside the smooth set after "
                        f"{max_resample_attempts} redraws"
                    )
                pts[i] = sample_uniform_ball(x, eps, 1, gen)[0]
    else:
        for i in range(m):
            if not f.in_smooth_set(pts[i]):
                raise SampleOutsideDomainError(
                    f"sample {i} at {pts[i]!r} lies outside the smooth set"
                )
    grads = np.empty((m + 1, x.size))
    grads[0] = checked_grad(f, x)
    for i in range(m):
        grads[i + 1] = checked_grad(f, pts[i])
    return GradientCloud(center=x, radius=float(eps), sample_points=pts, gradients=grads)
