"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with -s (or read captured output) to see the verdict lines.  Each test
also asserts, so the suite gates CI the normal way.
"""

import time

import numpy as np
import pytest
from scipy import stats

from gradsamp.analysis import DegeneracyClass, degeneracy_report, rho_estimate, subdiff_approx_experiment
from gradsamp.core import GsParams, StepKind, TerminationStatus
from gradsamp.minnorm import (
    Polytope,
    SubdifferentialModel,
    min_norm_point,
    steepest_descent_direction,
    support_function,
)
from gradsamp.sampling import RngStream, sample_uniform_ball
from gradsamp.solver import gs_solve, gs_solve_fixed_radius
from gradsamp.testbed import (
    make_abs_sum,
    make_cube_root,
    make_nonsmooth_rosenbrock,
    make_root_ridge,
    make_tilted_root_distance,
)

from oracles import grid_min_norm


def _verdict(name: str, ok: bool) -> None:
    print(f"{name}: {'PASS' if ok else 'FAIL'}")
    assert ok, f"{name} failed"


def _random_polytopes(count=200, seed=20240501):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, 4))
        m = int(rng.integers(1, 6))
        out.append(rng.uniform(-1.0, 1.0, size=(m, n)))
    return out


@pytest.fixture(scope="module")
def polytopes():
    return _random_polytopes()


@pytest.fixture(scope="module")
def convergence_runs():
    """The AC-4/5/6 solve campaigns, shared with the trace-invariant check."""
    tol4 = GsParams(eps_opt=1e-4, nu_opt=1e-4)
    runs = {
        "abs_sum": [
            gs_solve(make_abs_sum(2), [5.0, 7.0], GsParams(eps_opt=1e-4, nu_opt=1e-4, seed=s))
            for s in range(10)
        ],
        "rosenbrock": [
            gs_solve(
                make_nonsmooth_rosenbrock(), [-1.0, 1.0],
                GsParams(eps_opt=1e-4, nu_opt=1e-4, seed=s),
            )
            for s in range(10)
        ],
        "root_ridge": [
            gs_solve(make_root_ridge(), [-0.5], GsParams(seed=s)) for s in range(10)
        ],
    }
    assert tol4.beta == GsParams().beta  # same beta across all campaigns
    return runs


def test_ac1_min_norm_vs_brute_force(polytopes):
    start = time.perf_counter()
    ok = True
    for verts in polytopes:
        res = min_norm_point(Polytope(verts))
        oracle = grid_min_norm(verts)
        if abs(res.norm - oracle) > 1e-3:
            ok = False
        lam = res.simplex_coeffs
        if np.any(lam < -1e-12) or abs(lam.sum() - 1.0) > 1e-9:
            ok = False
        if np.linalg.norm(lam @ verts - res.point) > 1e-9:
            ok = False
        # variational inequality: every vertex sits on the far side of g
        if np.min((verts - res.point) @ res.point) < -1e-9 * (1.0 + res.norm**2):
            ok = False
    elapsed = time.perf_counter() - start
    _verdict("AC-1", ok and elapsed < 10.0)


def test_ac2_descent_duality(polytopes):
    ok = True
    checked = 0
    for verts in polytopes:
        res = min_norm_point(Polytope(verts))
        if res.norm <= 1e-6:
            continue  # 0 inside (or numerically at) the hull; no direction
        model = SubdifferentialModel(
            vertices=verts, cone_generators=np.empty((0, verts.shape[1]))
        )
        d = steepest_descent_direction(model)
        if not isinstance(d, np.ndarray):
            ok = False
            continue
        checked += 1
        if abs(support_function(Polytope(verts), d) + res.norm) > 1e-8:
            ok = False
    _verdict("AC-2", ok and checked > 0)


def test_ac3_degeneracy_table():
    ok = True
    for beta in (0.0, 0.5, 1.0):
        rep = degeneracy_report(make_tilted_root_distance(beta).known_points[0].model)
        if rep.classification is not DegeneracyClass.DEGENERATE_DIRECTION:
            ok = False
        if np.linalg.norm(rep.proj - np.array([-1.0, 0.0])) > 1e-12:
            ok = False
    for beta in (-1.0, -0.5):
        rep = degeneracy_report(make_tilted_root_distance(beta).known_points[0].model)
        if rep.classification is not DegeneracyClass.NONDEGENERATE_DESCENT:
            ok = False
        if np.linalg.norm(rep.proj - np.array([-1.0, beta])) > 1e-12:
            ok = False
    _verdict("AC-3", ok)


def test_ac4_l1_convergence(convergence_runs):
    ok = True
    for trace in convergence_runs["abs_sum"]:
        if trace.status is not TerminationStatus.TOLERANCE_MET:
            ok = False
        if np.linalg.norm(trace.final_x) > 1e-2:
            ok = False
        if trace.wall_time >= 5.0:
            ok = False
    _verdict("AC-4", ok)


def test_ac5_rosenbrock_convergence(convergence_runs):
    target = np.array([1.0, 1.0])
    hits = sum(
        np.linalg.norm(t.final_x - target) <= 1e-2 for t in convergence_runs["rosenbrock"]
    )
    _verdict("AC-5", hits >= 8)


def test_ac6_root_ridge_crosses_kink(convergence_runs):
    hits = sum(abs(t.final_x[0] - 1.0) <= 1e-2 for t in convergence_runs["root_ridge"])
    _verdict("AC-6", hits >= 8)


def test_ac7_rho_blowup_scale():
    expected = (1.0 / 3.0) * 0.1 ** (-2.0 / 3.0)
    f = make_cube_root(0.0)
    ok = True
    for seed in range(20):
        est = rho_estimate(f, [0.0], 0.1, 2000, RngStream(seed, 0))
        if abs(est - expected) > 0.02 * expected:
            ok = False
    _verdict("AC-7", ok)


def test_ac8_sampled_hull_at_kink():
    f = make_abs_sum(1)
    ok = True
    for seed in range(20):
        (lv,) = subdiff_approx_experiment(f, [0.0], [0.1], 500, RngStream(seed, 0))
        if lv.min_norm_result.norm != 0.0:
            ok = False
        if lv.coord_min[0] > -0.99 or lv.coord_max[0] < 0.99:
            ok = False
    _verdict("AC-8", ok)


def test_ac9_ball_sampling_law():
    pts = sample_uniform_ball(np.zeros(3), 1.0, 100_000, RngStream(0, 0))
    radii = np.linalg.norm(pts, axis=1)
    ok = bool(np.all(radii <= 1.0))
    if abs(radii.mean() - 0.75) > 0.02 * 0.75:
        ok = False
    ks = stats.kstest(radii, lambda u: np.clip(u, 0.0, 1.0) ** 3).statistic
    if ks > 0.01:
        ok = False
    _verdict("AC-9", ok)


def test_ac10_trace_invariants(convergence_runs):
    beta = GsParams().beta
    ok = True
    for traces in convergence_runs.values():
        for trace in traces:
            total = sum(r.t_k * r.g_norm for r in trace.records)
            f0 = trace.records[0].f_val
            if beta * total > f0 - trace.final_f + 1e-9:
                ok = False
            xs = [r.x for r in trace.records] + [trace.final_x]
            for rec, x_next in zip(trace.records, xs[1:]):
                if rec.step_kind is StepKind.LINE_SEARCH:
                    nominal = rec.x - rec.t_k * rec.g / rec.g_norm
                    bound = min(rec.t_k, rec.eps_k) + 1e-12
                    if np.linalg.norm(nominal - x_next) > bound:
                        ok = False
                elif rec.step_kind is StepKind.REDUCTION:
                    if not np.array_equal(rec.x, x_next):
                        ok = False
    _verdict("AC-10", ok)


def test_ac11_fixed_radius_zero_in_hull():
    f = make_abs_sum(1)
    ok = True
    for seed in range(10):
        p = GsParams(
            eps_opt=0.2, eps0=0.2, nu_opt=0.0, nu0=0.0, theta_eps=1.0,
            m=10, max_iter=50, seed=seed,
        )
        trace = gs_solve_fixed_radius(f, [0.05], p)
        if trace.status not in (
            TerminationStatus.TOLERANCE_MET,
            TerminationStatus.GRADIENT_ZERO,
        ):
            ok = False
        elif trace.records[-1].g_norm != 0.0:
            ok = False
    _verdict("AC-11", ok)
