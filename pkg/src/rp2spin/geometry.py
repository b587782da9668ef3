"""Points on S^2 and RP^2, unit quaternions, and discrete paths.

Everything here works on plain ``numpy`` arrays of shape ``(3,)`` (or
``(n, 3)`` where noted); the small frozen dataclasses are thin validated
wrappers for callers who want typed values.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import AntipodalAmbiguityError, Rp2SpinError

UNIT_TOL = 1e-12
ZERO_TOL = 1e-12

SQRT2 = np.sqrt(2.0)

# psi(x) = SPHERICAL_FROM_CARTESIAN @ x, rows ordered m = +1, 0, -1
SPHERICAL_FROM_CARTESIAN = np.array(
    [[-1 / SQRT2, -1j / SQRT2, 0.0],
     [0.0, 0.0, -1.0],
     [1 / SQRT2, -1j / SQRT2, 0.0]],
    dtype=complex,
)

# real so(3) generators, (L_k)_{ab} = -i eps_{kab}
_EPS = np.zeros((3, 3, 3))
for _a, _b, _c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_a, _b, _c] = 1.0
    _EPS[_a, _c, _b] = -1.0
SO3_GENERATORS = -1j * _EPS

# the same generators carried to the spherical basis
SPIN1_GENERATORS = np.einsum(
    "ia,kab,jb->kij", SPHERICAL_FROM_CARTESIAN, SO3_GENERATORS,
    SPHERICAL_FROM_CARTESIAN.conj(),
)


def as_vec(x) -> np.ndarray:
    """Return ``x`` as a float array of shape (3,) (accepts SpherePoint)."""
    if isinstance(x, SpherePoint):
        return x.array
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class SpherePoint:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        n2 = self.x1 ** 2 + self.x2 ** 2 + self.x3 ** 2
        if abs(n2 - 1.0) > UNIT_TOL:
            raise Rp2SpinError(f"not a unit vector: |x|^2 = {n2!r}")

    @classmethod
    def from_array(cls, x, normalize: bool = False) -> "SpherePoint":
        x = np.asarray(x, dtype=float)
        if normalize:
            x = x / np.linalg.norm(x)
        return cls(float(x[0]), float(x[1]), float(x[2]))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    def __neg__(self) -> "SpherePoint":
        return SpherePoint(-self.x1, -self.x2, -self.x3)


@dataclass(frozen=True)
class ProjectivePoint:
    """The class [x] = {x, -x}, stored through its canonical representative."""

    rep: SpherePoint

    def __post_init__(self):
        if not np.array_equal(_canonical_sign(self.rep.array) * self.rep.array,
                              self.rep.array):
            raise Rp2SpinError("representative is not canonical")

    def lifts(self) -> tuple[SpherePoint, SpherePoint]:
        return self.rep, -self.rep


@dataclass(frozen=True)
class SU2Element:
    q0: float
    q1: float
    q2: float
    q3: float

    def __post_init__(self):
        n2 = self.q0 ** 2 + self.q1 ** 2 + self.q2 ** 2 + self.q3 ** 2
        if abs(n2 - 1.0) > UNIT_TOL:
            raise Rp2SpinError(f"not a unit quaternion: |q|^2 = {n2!r}")

    @classmethod
    def from_array(cls, q, normalize: bool = False) -> "SU2Element":
        q = np.asarray(q, dtype=float)
        if normalize:
            q = q / np.linalg.norm(q)
        return cls(*(float(c) for c in q))

    @classmethod
    def identity(cls) -> "SU2Element":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_axis_angle(cls, axis, angle: float) -> "SU2Element":
        """Rotation by ``angle`` (right-handed) about ``axis``."""
        n = np.asarray(axis, dtype=float)
        n = n / np.linalg.norm(n)
        s = np.sin(angle / 2)
        return cls.from_array([np.cos(angle / 2), *(s * n)], normalize=True)

    @property
    def quat(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3])

    def __mul__(self, other: "SU2Element") -> "SU2Element":
        a0, a = self.q0, self.quat[1:]
        b0, b = other.q0, other.quat[1:]
        w = a0 * b0 - a @ b
        v = a0 * b + b0 * a + np.cross(a, b)
        return SU2Element.from_array([w, *v], normalize=True)

    def inverse(self) -> "SU2Element":
        return SU2Element(self.q0, -self.q1, -self.q2, -self.q3)

    def axis_angle(self) -> tuple[np.ndarray, float]:
        v = self.quat[1:]
        s = np.linalg.norm(v)
        angle = 2.0 * np.arctan2(s, self.q0)
        if s < ZERO_TOL:
            return np.array([0.0, 0.0, 1.0]), angle
        return v / s, angle

    def rotation_matrix(self) -> np.ndarray:
        w, x, y, z = self.quat
        return np.array([
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ])


def antipode(x):
    if isinstance(x, SpherePoint):
        return -x
    return -as_vec(x)


def _canonical_sign(x: np.ndarray) -> float:
    for c in (x[2], x[1], x[0]):
        if abs(c) > ZERO_TOL:
            return 1.0 if c > 0 else -1.0
    raise Rp2SpinError("zero vector has no projective class")


def canonical_rep(x) -> np.ndarray:
    """Representative of [x] whose last nonzero coordinate is positive."""
    x = as_vec(x)
    return _canonical_sign(x) * x


def canonical_reps(points: np.ndarray) -> np.ndarray:
    """Row-wise :func:`canonical_rep` for an ``(n, 3)`` array."""
    return np.array([canonical_rep(p) for p in np.atleast_2d(points)])


def canonicalize(x) -> ProjectivePoint:
    return ProjectivePoint(SpherePoint.from_array(canonical_rep(x)))


def rotation_matrix(g: SU2Element) -> np.ndarray:
    return g.rotation_matrix()


def rotate(g: SU2Element, x):
    """Act with ``g`` on a point (or an ``(n, 3)`` array of points)."""
    R = g.rotation_matrix()
    if isinstance(x, SpherePoint):
        return SpherePoint.from_array(R @ x.array, normalize=True)
    x = as_vec(x)
    return x @ R.T


def _exp_spin1(generator: np.ndarray, angle: float) -> np.ndarray:
    # n.G has spectrum {-1, 0, 1}, so the exponential series closes at K^2
    K2 = generator @ generator
    return np.eye(3) - 1j * np.sin(angle) * generator + (np.cos(angle) - 1.0) * K2


def wigner_d1(g: SU2Element) -> np.ndarray:
    """Spin-1 matrix of ``g`` in the (m = +1, 0, -1) spherical basis.

    The generators are fixed so that ``wigner_d1(g) @ psi(x) == psi(rotate(g, x))``.
    """
    n, angle = g.axis_angle()
    return _exp_spin1(np.einsum("k,kij->ij", n, SPIN1_GENERATORS), angle)


def haar_sample(rng_seed=None) -> SU2Element:
    """Haar-random SU(2) element; ``rng_seed`` may be an int or a Generator."""
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) \
        else np.random.default_rng(rng_seed)
    return SU2Element.from_array(rng.standard_normal(4), normalize=True)


def random_sphere_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` uniform points on S^2 as an ``(n, 3)`` array."""
    x = rng.standard_normal((n, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def axis_vector(axis) -> np.ndarray:
    """Coordinate axis 1, 2 or 3 as a unit vector; other inputs are normalized."""
    if isinstance(axis, (int, np.integer)):
        if axis not in (1, 2, 3):
            raise Rp2SpinError("axis index must be 1, 2 or 3")
        return np.eye(3)[axis - 1]
    a = np.asarray(axis, dtype=float)
    return a / np.linalg.norm(a)


def orthonormal_tangent(x, hint=None) -> np.ndarray:
    """A unit vector orthogonal to ``x`` (deterministic unless ``hint`` given)."""
    x = as_vec(x)
    if hint is None:
        hint = np.eye(3)[int(np.argmin(np.abs(x)))]
    d = np.asarray(hint, dtype=float) - (np.asarray(hint, dtype=float) @ x) * x
    nd = np.linalg.norm(d)
    if nd < 1e-9:
        raise Rp2SpinError("tangent hint is parallel to the point")
    return d / nd


@dataclass(frozen=True)
class DiscretePath:
    """Ordered sphere points; ``points`` is an ``(n+1, 3)`` array."""

    points: np.ndarray
    closed_in_projective: bool = False
    max_step: float = 1.0

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 2:
            raise Rp2SpinError("a path needs at least two points in R^3")
        if np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) > 1e-12:
            raise Rp2SpinError("path points must be unit vectors")
        steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        if steps.max() > self.max_step:
            raise Rp2SpinError(
                f"step {steps.max():.3g} exceeds bound {self.max_step}")
        if self.closed_in_projective:
            a, b = pts[0], pts[-1]
            if min(np.max(np.abs(b - a)), np.max(np.abs(b + a))) > 1e-12:
                raise Rp2SpinError("path is not closed in RP^2")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_curve(cls, curve: Callable[[float], Sequence[float]], t_values,
                   closed_in_projective: bool = False, **kw) -> "DiscretePath":
        pts = np.array([curve(t) for t in t_values], dtype=float)
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        return cls(pts, closed_in_projective, **kw)

    @property
    def n_steps(self) -> int:
        return len(self.points) - 1

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def reversed(self) -> "DiscretePath":
        return DiscretePath(self.points[::-1], self.closed_in_projective,
                            self.max_step)

    def then(self, other: "DiscretePath") -> "DiscretePath":
        """Concatenate; ``other`` must start where this path ends."""
        if np.max(np.abs(other.start - self.end)) > 1e-12:
            raise Rp2SpinError("paths do not join")
        pts = np.vstack([self.points, other.points[1:]])
        a, b = pts[0], pts[-1]
        closed = min(np.max(np.abs(b - a)), np.max(np.abs(b + a))) <= 1e-12
        return DiscretePath(pts, closed, max(self.max_step, other.max_step))


def _slerp(a: np.ndarray, b: np.ndarray, n_steps: int) -> np.ndarray:
    c = float(np.clip(a @ b, -1.0, 1.0))
    omega = np.arccos(c)
    t = np.linspace(0.0, 1.0, n_steps + 1)[:, None]
    if omega < 1e-15:
        return np.repeat(a[None, :], n_steps + 1, axis=0)
    d = orthonormal_tangent(a, b)
    return np.cos(t * omega) * a + np.sin(t * omega) * d


def one_parameter_subgroup(axis, total_angle: float,
                           reparam: Callable[[float], float] | None = None
                           ) -> Callable[[float], SU2Element]:
    """t -> rotation by ``total_angle * reparam(t)`` about ``axis``."""
    f = reparam or (lambda t: t)

    def gamma(t: float) -> SU2Element:
        return SU2Element.from_axis_angle(axis, total_angle * f(t))

    return gamma


def build_path(kind: str, params: dict, n_steps: int) -> DiscretePath:
    """Discretize one of the standard paths with ``n_steps`` uniform steps.

    kinds and their params:

    ``great-circle``       start, end
    ``half-great-circle``  start, [direction] -- x to -x, closed in RP^2
    ``great-circle-loop``  start, [direction] -- full circle, x back to x
    ``small-circle``       axis, rho, [start_direction] -- right-handed about axis
    ``orbit``              axis, angle, x0, [reparam] -- t -> gamma(t).x0
    """
    if n_steps < 2:
        raise Rp2SpinError("n_steps must be at least 2")
    t = np.linspace(0.0, 1.0, n_steps + 1)[:, None]
    if kind == "great-circle":
        a = as_vec(params["start"])
        b = as_vec(params["end"])
        if a @ b < -1.0 + 1e-12:
            raise AntipodalAmbiguityError(
                "great circle between antipodal points is ambiguous")
        return DiscretePath(_slerp(a, b, n_steps))
    if kind in ("half-great-circle", "great-circle-loop"):
        a = as_vec(params["start"])
        d = orthonormal_tangent(a, params.get("direction"))
        span = np.pi if kind == "half-great-circle" else 2 * np.pi
        pts = np.cos(span * t) * a + np.sin(span * t) * d
        if kind == "great-circle-loop":
            pts[-1] = a
        else:
            pts[-1] = -a
        return DiscretePath(pts, closed_in_projective=True)
    if kind == "small-circle":
        axis = as_vec(params["axis"])
        axis = axis / np.linalg.norm(axis)
        rho = float(params["rho"])
        u = orthonormal_tangent(axis, params.get("start_direction"))
        v = np.cross(axis, u)
        phi = 2 * np.pi * t
        pts = np.cos(rho) * axis + np.sin(rho) * (np.cos(phi) * u + np.sin(phi) * v)
        pts[-1] = pts[0]
        return DiscretePath(pts, closed_in_projective=True)
    if kind == "orbit":
        gamma = one_parameter_subgroup(params["axis"], float(params["angle"]),
                                       params.get("reparam"))
        x0 = as_vec(params["x0"])
        pts = np.array([gamma(s).rotation_matrix() @ x0 for s in t[:, 0]])
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        a, b = pts[0], pts[-1]
        closed = min(np.max(np.abs(b - a)), np.max(np.abs(b + a))) <= 1e-12
        return DiscretePath(pts, closed_in_projective=closed)
    raise Rp2SpinError(f"unknown path kind {kind!r}")
