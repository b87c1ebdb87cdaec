"""Minimum-norm points of polytopes and polytope-plus-cone models.

The solver needs the projection of the origin onto the convex hull of a
finite gradient sample; the degeneracy diagnostics additionally need the
projection onto ``conv(V) + cone(W)`` where ``W`` collects directions along
which gradients blow up.  Both are computed by a Wolfe-style active-set
iteration: keep a small working set of vertices (and rays), solve the
equality-constrained least-squares subproblem on its affine hull, and walk
back to feasibility when a coefficient goes negative.  Cone generators enter
the working set exactly like vertices except that their multipliers are
nonnegativity-constrained instead of simplex-constrained.

Results carry coefficients so callers can verify the reconstruction
``point = sum(lam_i v_i) + sum(mu_j w_j)`` and the variational-inequality
certificate ``<g, v - g> >= 0`` / ``<g, w> >= 0`` directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import NumericalStall, Vector

DEFAULT_TOL = 1e-12

# Coefficients at or below this are treated as zero when pruning the
# working set; subproblem solutions above -_FEAS_TOL count as feasible.
_DROP_TOL = 1e-14
_FEAS_TOL = 1e-13


def _as_points(rows, name: str, allow_empty: bool = False) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.size == 0:
        if not allow_empty:
            raise ValueError(f"{name} must be nonempty")
        return arr.reshape(0, arr.shape[1] if arr.ndim == 2 else 0)
    arr = np.atleast_2d(arr)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a sequence of vectors")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must have finite components")
    return arr


@dataclass(frozen=True)
class Polytope:
    """Convex hull of finitely many vertices (duplicates allowed)."""

    vertices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vertices", _as_points(self.vertices, "vertices"))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]


@dataclass(frozen=True)
class SubdifferentialModel:
    """A set of the form conv(vertices) + cone(cone_generators).

    ``vertices`` may be empty (an empty model); ``cone_generators`` may be
    empty (a plain polytope) but must not contain the zero vector.
    """

    vertices: np.ndarray
    cone_generators: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))

    def __post_init__(self):
        v = _as_points(self.vertices, "vertices", allow_empty=True)
        w = _as_points(self.cone_generators, "cone_generators", allow_empty=True)
        if v.size == 0 and w.size == 0:
            raise ValueError("model needs at least one vertex or generator to fix the dimension")
        n = w.shape[1] if v.size == 0 else v.shape[1]
        if v.size == 0:
            v = v.reshape(0, n)
        if w.size == 0:
            w = w.reshape(0, n)
        if v.shape[1] != w.shape[1]:
            raise ValueError("vertices and cone_generators disagree on dimension")
        if w.shape[0] and np.any(np.linalg.norm(w, axis=1) == 0.0):
            raise ValueError("cone_generators must not contain the zero vector")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "cone_generators", w)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]


@dataclass(frozen=True)
class MinNormResult:
    """Certified projection of the origin onto a model.

    ``point = simplex_coeffs @ vertices + cone_coeffs @ cone_generators``
    with ``simplex_coeffs`` on the simplex and ``cone_coeffs >= 0``.
    """

    point: Vector
    simplex_coeffs: np.ndarray
    cone_coeffs: np.ndarray
    norm: float


class DescentStatus(enum.Enum):
    AT_STATIONARY = "AtStationary"
    INFEASIBLE = "Infeasible"


def _affine_coeffs(active: np.ndarray, vertex_mask: np.ndarray) -> np.ndarray:
    """Min-norm point of the affine span of the active rows.

    Solves the stationarity system of ``min ||z @ active||^2`` subject to the
    vertex coefficients summing to one (ray coefficients unconstrained).
    Least squares tolerates affinely dependent working sets.
    """
    s = active.shape[0]
    k = np.zeros((s + 1, s + 1))
    k[:s, :s] = active @ active.T
    k[:s, s] = vertex_mask
    k[s, :s] = vertex_mask
    rhs = np.zeros(s + 1)
    rhs[s] = 1.0
    try:
        sol = np.linalg.solve(k, rhs)
        residual = float(np.linalg.norm(k @ sol - rhs))
        if np.all(np.isfinite(sol)) and residual <= 1e-9 * (1.0 + float(np.linalg.norm(sol))):
            return sol[:s]
    except np.linalg.LinAlgError:
        pass
    # Affinely dependent working set: fall back to the min-norm solution.
    sol, *_ = np.linalg.lstsq(k, rhs, rcond=None)
    return sol[:s]


def _min_norm_active_set(verts: np.ndarray, rays: np.ndarray, tol: float):
    """Wolfe-style iteration over conv(verts) + cone(rays).

    ``rays`` rows must be unit vectors.  Returns ``(point, lam, mu)`` with
    coefficients scattered over the full vertex/ray lists.  Deterministic:
    ties in candidate selection go to the lowest index, vertices before rays.
    """
    mv, n = verts.shape
    mw = rays.shape[0]
    scale = float(max(np.max(np.linalg.norm(verts, axis=1)), 1.0))
    # Noise floor: a certified norm at machine-precision level is an exact
    # zero of the underlying problem, so snap it.  Tied to eps, not to tol.
    snap_sq = (32.0 * np.finfo(float).eps * (1.0 + scale)) ** 2

    norms = np.linalg.norm(verts, axis=1)
    vid: list[int] = [int(np.argmin(norms))]
    wid: list[int] = []
    coeff = np.array([1.0])
    x = verts[vid[0]].copy()

    cap = max(50 * (mv + mw), 64)
    certified = False
    for _ in range(cap):
        xx = float(x @ x)
        thr = tol * (1.0 + xx)

        margin_v = verts @ x - xx
        margin_w = rays @ x if mw else np.empty(0)
        cand_kind = ""
        cand_idx = -1
        best = -thr
        masked_v = margin_v.copy()
        masked_v[vid] = np.inf
        iv = int(np.argmin(masked_v)) if mv else -1
        if mv and masked_v[iv] < best:
            cand_kind, cand_idx, best = "v", iv, masked_v[iv]
        if mw:
            masked_w = margin_w.copy()
            if wid:
                masked_w[wid] = np.inf
            jw = int(np.argmin(masked_w))
            if masked_w[jw] < best:
                cand_kind, cand_idx = "w", jw
        if not cand_kind:
            certified = True
            break

        if cand_kind == "v":
            vid.append(cand_idx)
            coeff = np.concatenate([coeff[: len(vid) - 1], [0.0], coeff[len(vid) - 1 :]])
        else:
            wid.append(cand_idx)
            coeff = np.append(coeff, 0.0)

        # Minor cycles: restore coefficient feasibility, dropping blockers.
        while True:
            active = np.vstack([verts[vid], rays[wid]]) if wid else verts[vid]
            vmask = np.zeros(len(vid) + len(wid))
            vmask[: len(vid)] = 1.0
            z = _affine_coeffs(active, vmask)
            if np.all(z >= -_FEAS_TOL):
                x = z @ active
                coeff = np.maximum(z, 0.0)
                break
            negative = np.where(z < 0.0)[0]
            ratios = coeff[negative] / (coeff[negative] - z[negative])
            theta = max(0.0, float(np.min(ratios)))
            blocker = int(negative[int(np.argmin(ratios))])
            coeff = coeff + theta * (z - coeff)
            keep = coeff > _DROP_TOL
            keep[blocker] = False
            nv = len(vid)
            vid = [vid[i] for i in range(nv) if keep[i]]
            wid = [wid[j] for j in range(len(wid)) if keep[nv + j]]
            coeff = coeff[keep]

    if not certified:
        raise NumericalStall(
            f"min-norm iteration exceeded its cap of {cap} without a certificate"
        )

    if float(x @ x) <= snap_sq:
        x = np.zeros(n)
    lam = np.zeros(mv)
    lam[vid] = coeff[: len(vid)]
    mu = np.zeros(mw)
    mu[wid] = coeff[len(vid) :]
    total = lam.sum()
    if total > 0.0:
        lam = lam / total
    return x, lam, mu


def min_norm_point(p: Polytope, tol: float = DEFAULT_TOL) -> MinNormResult:
    """Projection of the origin onto conv(vertices), with coefficients.

    Certified by the variational inequality within ``tol`` (relative to
    ``1 + ||g||^2``); raises NumericalStall if certification fails within
    the iteration cap.
    """
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    empty = np.empty((0, p.dim))
    x, lam, _ = _min_norm_active_set(p.vertices, empty, tol)
    return MinNormResult(point=x, simplex_coeffs=lam, cone_coeffs=np.empty(0), norm=float(np.linalg.norm(x)))


def min_norm_generalized(m: SubdifferentialModel, tol: float = DEFAULT_TOL) -> MinNormResult | None:
    """Projection of the origin onto conv(V) + cone(W).

    Returns None when the model has no vertices (an empty set: nothing to
    project onto).  Cone coefficients refer to the generators as given.
    """
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    if m.vertices.shape[0] == 0:
        return None
    gen_norms = np.linalg.norm(m.cone_generators, axis=1) if m.cone_generators.shape[0] else np.empty(0)
    unit_rays = m.cone_generators / gen_norms[:, None] if gen_norms.size else np.empty((0, m.dim))
    x, lam, mu_unit = _min_norm_active_set(m.vertices, unit_rays, tol)
    mu = mu_unit / gen_norms if gen_norms.size else np.empty(0)
    return MinNormResult(point=x, simplex_coeffs=lam, cone_coeffs=mu, norm=float(np.linalg.norm(x)))


def support_function(p: Polytope, d) -> float:
    """max over vertices of <d, v>."""
    d = np.asarray(d, dtype=float)
    return float(np.max(p.vertices @ d))


def steepest_descent_direction(
    m: SubdifferentialModel, tol: float = DEFAULT_TOL
) -> Vector | DescentStatus:
    """Unit direction -g/||g|| for the model's min-norm point g.

    ``AT_STATIONARY`` when ||g|| <= tol (the origin is in the model up to
    tolerance), ``INFEASIBLE`` when the model is empty.
    """
    res = min_norm_generalized(m, tol)
    if res is None:
        return DescentStatus.INFEASIBLE
    if res.norm <= tol:
        return DescentStatus.AT_STATIONARY
    return -res.point / res.norm
