"""Benchmark objectives with known structure.

Each constructor returns a ``TestFunction``: an objective bundled with its
Lipschitz classification, analytic vertex/cone models at selected nonsmooth
points, and known minimizers when they exist.  Smooth-set predicates are
exact (equality tests), which is deliberate: the nonsmooth sets here are
measure-zero and the solver treats landing on one as an event to repair, not
to fuzz over.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .core import Objective, Vector
from .minnorm import SubdifferentialModel


class LipschitzClass(str, enum.Enum):
    LOCALLY_LIPSCHITZ = "LocallyLipschitz"
    DIRECTIONALLY_LIPSCHITZ_ONLY = "DirectionallyLipschitzOnly"


@dataclass(frozen=True)
class KnownPoint:
    """An analytic vertex/cone model attached to one nonsmooth point."""

    x: Vector
    model: SubdifferentialModel
    note: str = ""


@dataclass(frozen=True, eq=False)
class TestFunction(Objective):
    """An objective plus everything the diagnostics want to know about it."""

    __test__ = False  # not a pytest class, despite the name

    objective: Objective
    name: str
    lipschitz_class: LipschitzClass
    known_points: tuple[KnownPoint, ...] = ()
    known_minimizers: tuple[Vector, ...] = ()

    def __post_init__(self):
        n = self.objective.dim()
        for kp in self.known_points:
            if kp.x.size != n or kp.model.dim != n:
                raise ValueError(f"known point of {self.name} has wrong dimension")
        for m in self.known_minimizers:
            if np.asarray(m).size != n:
                raise ValueError(f"known minimizer of {self.name} has wrong dimension")

    def dim(self) -> int:
        return self.objective.dim()

    def eval(self, x: Vector) -> float:
        return self.objective.eval(x)

    def grad(self, x: Vector) -> Vector:
        return self.objective.grad(x)

    def in_smooth_set(self, x: Vector) -> bool:
        return self.objective.in_smooth_set(x)

    def known_point_at(self, x) -> KnownPoint | None:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        for kp in self.known_points:
            if np.array_equal(kp.x, x):
                return kp
        return None


class _GradChecksSmooth(Objective):
    """Base that rejects gradient requests off the smooth set."""

    def grad(self, x: Vector) -> Vector:
        if not self.in_smooth_set(x):
            raise ValueError(f"gradient requested at a nonsmooth point {x!r}")
        return self._grad(x)

    def _grad(self, x: Vector) -> Vector:  # pragma: no cover - abstract
        raise NotImplementedError


class _CubeRoot(_GradChecksSmooth):
    def __init__(self, eta: float):
        self.eta = float(eta)

    def dim(self) -> int:
        return 1

    def eval(self, x: Vector) -> float:
        v = float(x[0])
        c = float(np.cbrt(v))
        return c - self.eta if v <= 0.0 else c + self.eta

    def _grad(self, x: Vector) -> Vector:
        v = float(x[0])
        return np.array([1.0 / (3.0 * np.cbrt(v) ** 2)])

    def in_smooth_set(self, x: Vector) -> bool:
        return float(x[0]) != 0.0


class _TiltedRootDistance(_GradChecksSmooth):
    """<y, x> + sqrt(distance to the nonnegative orthant), y = (-1, beta)."""

    def __init__(self, beta: float):
        self.beta = float(beta)
        self.y = np.array([-1.0, self.beta])

    def dim(self) -> int:
        return 2

    def _gap(self, x: Vector) -> Vector:
        return x - np.maximum(x, 0.0)

    def eval(self, x: Vector) -> float:
        d = float(np.linalg.norm(self._gap(x)))
        return float(self.y @ x) + np.sqrt(d)

    def _grad(self, x: Vector) -> Vector:
        gap = self._gap(x)
        d = float(np.linalg.norm(gap))
        if d == 0.0:
            return self.y.copy()
        return self.y + gap / (2.0 * d**1.5)

    def in_smooth_set(self, x: Vector) -> bool:
        x1, x2 = float(x[0]), float(x[1])
        on_boundary = (x1 == 0.0 and x2 >= 0.0) or (x2 == 0.0 and x1 >= 0.0)
        return not on_boundary


class _AbsSum(_GradChecksSmooth):
    def __init__(self, n: int):
        self.n = int(n)

    def dim(self) -> int:
        return self.n

    def eval(self, x: Vector) -> float:
        return float(np.sum(np.abs(x)))

    def _grad(self, x: Vector) -> Vector:
        return np.sign(x)

    def in_smooth_set(self, x: Vector) -> bool:
        return bool(np.all(x != 0.0))


class _MaxQuadratics(_GradChecksSmooth):
    """Pointwise max of quadratics 0.5 x'Ax + b'x + c."""

    def __init__(self, pieces):
        self.pieces = []
        n = None
        for a, b, c in pieces:
            a = np.asarray(a, dtype=float)
            b = np.asarray(b, dtype=float)
            if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != b.size:
                raise ValueError("each piece needs a square A matching b")
            if n is None:
                n = b.size
            elif b.size != n:
                raise ValueError("pieces disagree on dimension")
            self.pieces.append((a, b, float(c)))
        if not self.pieces:
            raise ValueError("need at least one quadratic piece")
        self.n = n

    def dim(self) -> int:
        return self.n

    def _values(self, x: Vector) -> np.ndarray:
        return np.array([0.5 * x @ a @ x + b @ x + c for a, b, c in self.pieces])

    def eval(self, x: Vector) -> float:
        return float(np.max(self._values(x)))

    def _grad(self, x: Vector) -> Vector:
        vals = self._values(x)
        i = int(np.argmax(vals))
        a, b, _ = self.pieces[i]
        return a @ x + b

    def in_smooth_set(self, x: Vector) -> bool:
        vals = self._values(x)
        return int(np.sum(vals == np.max(vals))) == 1


class _NonsmoothRosenbrock(_GradChecksSmooth):
    """8 |x1^2 - x2| + (1 - x1)^2, kinked along the parabola x2 = x1^2."""

    def dim(self) -> int:
        return 2

    def eval(self, x: Vector) -> float:
        return 8.0 * abs(x[0] ** 2 - x[1]) + (1.0 - x[0]) ** 2

    def _grad(self, x: Vector) -> Vector:
        s = np.sign(x[0] ** 2 - x[1])
        return np.array([16.0 * s * x[0] - 2.0 * (1.0 - x[0]), -8.0 * s])

    def in_smooth_set(self, x: Vector) -> bool:
        return float(x[1]) != float(x[0]) ** 2


class _RootRidge(_GradChecksSmooth):
    """sqrt(max(0, -x)) + (x - 1)^2: non-Lipschitz kink at 0, minimum at 1."""

    def dim(self) -> int:
        return 1

    def eval(self, x: Vector) -> float:
        v = float(x[0])
        return float(np.sqrt(max(0.0, -v)) + (v - 1.0) ** 2)

    def _grad(self, x: Vector) -> Vector:
        v = float(x[0])
        slope = 2.0 * (v - 1.0)
        if v < 0.0:
            slope -= 0.5 / np.sqrt(-v)
        return np.array([slope])

    def in_smooth_set(self, x: Vector) -> bool:
        return float(x[0]) != 0.0


def make_cube_root(eta: float = 0.0) -> TestFunction:
    """Cube root with a jump of size ``eta`` at the origin.

    For eta = 0 this is continuous with gradients blowing up to +inf on both
    sides of 0; the model at 0 has no vertices, only the +1 horizon ray.
    Unbounded below, so there are no minimizers.
    """
    if eta < 0.0:
        raise ValueError("eta must be >= 0")
    model = SubdifferentialModel(vertices=np.empty((0, 1)), cone_generators=[[1.0]])
    return TestFunction(
        objective=_CubeRoot(eta),
        name=f"cube_root:eta={eta:g}",
        lipschitz_class=LipschitzClass.DIRECTIONALLY_LIPSCHITZ_ONLY,
        known_points=(KnownPoint(np.zeros(1), model, "horizon-only model at the kink"),),
        known_minimizers=(),
    )


def make_tilted_root_distance(beta: float) -> TestFunction:
    """Linear tilt (-1, beta) plus the square root of the orthant distance.

    At the origin the model is the tilt vector plus the nonpositive orthant;
    the descent direction there is degenerate exactly when beta >= 0.
    """
    model = SubdifferentialModel(
        vertices=[[-1.0, float(beta)]],
        cone_generators=[[-1.0, 0.0], [0.0, -1.0]],
    )
    return TestFunction(
        objective=_TiltedRootDistance(beta),
        name=f"tilted_root:beta={beta:g}",
        lipschitz_class=LipschitzClass.DIRECTIONALLY_LIPSCHITZ_ONLY,
        known_points=(KnownPoint(np.zeros(2), model, "tilt plus orthant cone at the corner"),),
        known_minimizers=(),
    )


def make_abs_sum(n: int) -> TestFunction:
    """l1 norm in n variables; minimized at the origin."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > 12:
        raise ValueError("analytic model at 0 has 2^n vertices; keep n <= 12")
    verts = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
    model = SubdifferentialModel(vertices=verts, cone_generators=np.empty((0, n)))
    return TestFunction(
        objective=_AbsSum(n),
        name=f"abs_sum:{n}",
        lipschitz_class=LipschitzClass.LOCALLY_LIPSCHITZ,
        known_points=(KnownPoint(np.zeros(n), model, "all sign patterns at the corner"),),
        known_minimizers=(np.zeros(n),),
    )


_DEFAULT_MAX_QUAD_PIECES = (
    (2.0 * np.eye(2), np.zeros(2), 0.0),  # |x|^2
    (2.0 * np.eye(2), np.array([-4.0, 0.0]), 4.0),  # |x - (2,0)|^2
)


def make_max_quadratics(pieces=None) -> TestFunction:
    """Pointwise max of convex quadratics.

    The default instance is max(|x|^2, |x-(2,0)|^2): minimized at (1, 0),
    where both pieces are active and the gradient hull is the segment from
    (-2, 0) to (2, 0).
    """
    if pieces is None:
        pieces = _DEFAULT_MAX_QUAD_PIECES
        known_points = (
            KnownPoint(
                np.array([1.0, 0.0]),
                SubdifferentialModel(vertices=[[2.0, 0.0], [-2.0, 0.0]],
                                     cone_generators=np.empty((0, 2))),
                "both pieces active on the bisector",
            ),
        )
        known_minimizers = (np.array([1.0, 0.0]),)
    else:
        known_points = ()
        known_minimizers = ()
    obj = _MaxQuadratics(pieces)
    return TestFunction(
        objective=obj,
        name="max_quadratics",
        lipschitz_class=LipschitzClass.LOCALLY_LIPSCHITZ,
        known_points=known_points,
        known_minimizers=known_minimizers,
    )


def make_nonsmooth_rosenbrock() -> TestFunction:
    """Kinked Rosenbrock valley with its minimum at (1, 1)."""
    model = SubdifferentialModel(
        vertices=[[16.0, -8.0], [-16.0, 8.0]],
        cone_generators=np.empty((0, 2)),
    )
    return TestFunction(
        objective=_NonsmoothRosenbrock(),
        name="nonsmooth_rosenbrock",
        lipschitz_class=LipschitzClass.LOCALLY_LIPSCHITZ,
        known_points=(KnownPoint(np.array([1.0, 1.0]), model, "kink at the minimizer"),),
        known_minimizers=(np.array([1.0, 1.0]),),
    )


def make_root_ridge() -> TestFunction:
    """One-dimensional square-root ridge at 0, quadratic bowl at 1.

    Gradients blow down to -inf left of the kink; the model at 0 pairs the
    right-hand slope -2 with the -1 horizon ray.
    """
    model = SubdifferentialModel(vertices=[[-2.0]], cone_generators=[[-1.0]])
    return TestFunction(
        objective=_RootRidge(),
        name="root_ridge",
        lipschitz_class=LipschitzClass.DIRECTIONALLY_LIPSCHITZ_ONLY,
        known_points=(KnownPoint(np.zeros(1), model, "vertex plus down ray at the ridge"),),
        known_minimizers=(np.ones(1),),
    )


def _build_abs_sum(arg: str) -> TestFunction:
    if not arg:
        raise ValueError("abs_sum needs a dimension, e.g. 'abs_sum:2'")
    return make_abs_sum(int(arg))


def _build_cube_root(arg: str) -> TestFunction:
    if not arg:
        return make_cube_root(0.0)
    if arg.startswith("eta="):
        arg = arg[4:]
    return make_cube_root(float(arg))


def _build_tilted_root(arg: str) -> TestFunction:
    if not arg:
        raise ValueError("tilted_root needs a tilt, e.g. 'tilted_root:beta=0.5'")
    if arg.startswith("beta="):
        arg = arg[5:]
    return make_tilted_root_distance(float(arg))


def _build_no_args(factory, base: str):
    def build(arg: str) -> TestFunction:
        if arg:
            raise ValueError(f"{base} takes no arguments")
        return factory()

    return build


_REGISTRY = {
    "abs_sum": _build_abs_sum,
    "cube_root": _build_cube_root,
    "tilted_root": _build_tilted_root,
    "max_quadratics": _build_no_args(make_max_quadratics, "max_quadratics"),
    "nonsmooth_rosenbrock": _build_no_args(make_nonsmooth_rosenbrock, "nonsmooth_rosenbrock"),
    "root_ridge": _build_no_args(make_root_ridge, "root_ridge"),
}


def registry_names() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def from_name(name: str) -> TestFunction:
    """Build a testbed function from a registry string like 'abs_sum:2'."""
    base, _, arg = name.partition(":")
    base = base.strip()
    if base not in _REGISTRY:
        raise ValueError(
            f"unknown test function '{base}'; available: {', '.join(registry_names())}"
        )
    return _REGISTRY[base](arg.strip())
