"""Discrete Grassmann transport for projector fields on S^2.

A :class:`ProjectorField` bundles the projector ``x -> P(x)`` with an
orthonormal fiber frame and, where one exists, the SU(2) action on the
ambient space that covers rotation of the base.  Transport uses the
projector-product (Pancharatnam) rule ``v_{k+1} = P(x_{k+1}) v_k`` with
renormalization after every step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NotInFiberError, Rp2SpinError, StepTooLargeError
from .geometry import (DiscretePath, SU2Element, SpherePoint, as_vec, axis_vector,
                       build_path, one_parameter_subgroup, orthonormal_tangent,
                       wigner_d1)
from .scalar import grassmann_projector, psi, real_projector

PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]],
                 dtype=complex)


def _frame_from_projector(P: np.ndarray, rank: int) -> np.ndarray:
    w, V = np.linalg.eigh(P)
    return V[:, np.argsort(w)[::-1][:rank]]


@dataclass(frozen=True)
class ProjectorField:
    name: str
    dim: int
    rank: int
    projector: Callable[[np.ndarray], np.ndarray]
    frame_fn: Callable[[np.ndarray], np.ndarray] | None = None
    action: Callable[[SU2Element], np.ndarray] | None = field(default=None,
                                                            repr=False)

    def __call__(self, x) -> np.ndarray:
        return self.projector(as_vec(x))

    def frame(self, x) -> np.ndarray:
        """``(dim, rank)`` orthonormal basis of the fiber at ``x``."""
        x = as_vec(x)
        if self.frame_fn is not None:
            F = self.frame_fn(x)
            return F.reshape(self.dim, self.rank)
        return _frame_from_projector(self.projector(x), self.rank)


def _column(f):
    return lambda x: f(x)[:, None]


def grassmann_field() -> ProjectorField:
    """p = |psi><psi| with the spin-1 action (the bundle L-)."""
    return ProjectorField("p", 3, 1, grassmann_projector, _column(psi), wigner_d1)


def real_field() -> ProjectorField:
    """q = x x^T with the rotation action (L- in real form)."""
    return ProjectorField("q", 3, 1, real_projector,
                          lambda x: x[:, None].astype(complex),
                          lambda g: g.rotation_matrix().astype(complex))


def trivial_field() -> ProjectorField:
    """Constant one-dimensional fiber with trivial action (the bundle L+)."""
    one = np.ones((1, 1), dtype=complex)
    return ProjectorField("trivial", 1, 1, lambda x: one, lambda x: one,
                          lambda g: one)


def bloch_field() -> ProjectorField:
    """(I + x.sigma)/2: the monopole line bundle, used as a non-flat control."""
    def proj(x):
        return 0.5 * (np.eye(2) + np.einsum("i,ijk->jk", x, PAULI))

    def action(g: SU2Element):
        q = g.quat
        return q[0] * np.eye(2) - 1j * np.einsum("i,ijk->jk", q[1:], PAULI)

    return ProjectorField("bloch", 2, 1, proj, None, action)


@dataclass(frozen=True)
class TransportResult:
    final_vector: np.ndarray
    phase: complex
    norm_drift: float
    n_steps: int
    amplitude: float = 1.0

    @property
    def raw_overlap(self) -> complex:
        """Overlap of the start vector with the unrenormalized projector product."""
        return self.amplitude * self.phase


def parallel_transport(path: DiscretePath, v0, field: ProjectorField, *,
                       fiber_tol: float = 1e-10,
                       min_ratio: float = 0.5) -> TransportResult:
    v0 = np.asarray(v0, dtype=complex)
    pts = path.points
    norm0 = np.linalg.norm(v0)
    if norm0 == 0.0:
        raise NotInFiberError("zero vector")
    if np.linalg.norm(field(pts[0]) @ v0 - v0) > fiber_tol * norm0:
        raise NotInFiberError("v0 is not in the fiber at the path start")
    v = v0.copy()
    log_amp = 0.0
    for k in range(1, len(pts)):
        w = field(pts[k]) @ v
        nw = np.linalg.norm(w)
        ratio = nw / norm0
        if ratio <= min_ratio:
            raise StepTooLargeError(
                f"step {k}: |P v| / |v| = {ratio:.3g} <= {min_ratio}")
        log_amp += np.log(ratio)
        v = w * (norm0 / nw)
    ov = np.vdot(v0, v)
    phase = ov / abs(ov) if abs(ov) > 1e-12 * norm0 ** 2 else complex(np.nan)
    amplitude = float(np.exp(log_amp) * abs(ov) / norm0 ** 2)
    return TransportResult(v, complex(phase), abs(np.linalg.norm(v) - norm0),
                           path.n_steps, amplitude)


def holonomy(loop: DiscretePath, field: ProjectorField, v0=None) -> complex:
    """Transport phase around a loop closed in RP^2.

    The sphere lift may end at the antipode of its start; the fiber there is
    the same subspace, so the end vector is compared with ``v0`` directly.
    """
    return holonomy_result(loop, field, v0).phase


def holonomy_result(loop: DiscretePath, field: ProjectorField,
                    v0=None) -> TransportResult:
    if not loop.closed_in_projective:
        raise Rp2SpinError("holonomy needs a loop closed in RP^2")
    if v0 is None:
        v0 = field.frame(loop.start)[:, 0]
    return parallel_transport(loop, v0, field)


def holonomy_matrix(loop: DiscretePath, field: ProjectorField) -> np.ndarray:
    """rank x rank holonomy in the frame at the loop start."""
    if not loop.closed_in_projective:
        raise Rp2SpinError("holonomy needs a loop closed in RP^2")
    F = field.frame(loop.start)
    cols = [parallel_transport(loop, F[:, a], field).final_vector
            for a in range(field.rank)]
    return F.conj().T @ np.column_stack(cols)


@dataclass(frozen=True)
class CurvatureProbe:
    center: SpherePoint
    angular_radius: float
    phase_per_area: float

    def __post_init__(self):
        if self.angular_radius <= 0:
            raise Rp2SpinError("angular radius must be positive")


def cap_area(rho: float) -> float:
    return 2.0 * np.pi * (1.0 - np.cos(rho))


def curvature_probe(center, angular_radius: float, field: ProjectorField,
                    n_steps: int = 2000) -> CurvatureProbe:
    """Plaquette holonomy phase divided by the enclosed spherical area."""
    if not 1e-3 <= angular_radius <= 0.5:
        raise Rp2SpinError("angular radius must lie in [1e-3, 0.5]")
    c = as_vec(center)
    loop = build_path("small-circle", {"axis": c, "rho": angular_radius}, n_steps)
    ph = holonomy(loop, field)
    return CurvatureProbe(SpherePoint.from_array(c, normalize=True),
                          angular_radius,
                          float(np.angle(ph)) / cap_area(angular_radius))


def _frame_sections(x: np.ndarray) -> np.ndarray:
    # e_i(x) = i-th column of q(x); returned as rows e[i]
    return np.outer(x, x)


def frame_connection_check(x, tangent_direction, h: float) -> float:
    """Max_i |q(x) D_v e_i - sum_j (D_v a_ij) e_j(x)| by central differences.

    Derivatives are taken along the great circle through ``x`` with unit
    initial velocity ``tangent_direction``.
    """
    x = as_vec(x)
    v = np.asarray(tangent_direction, dtype=float)
    if np.linalg.norm(v) < 1e-12:
        raise Rp2SpinError("tangent direction must be nonzero")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9 or abs(v @ x) > 1e-9:
        raise Rp2SpinError("tangent direction must be a unit vector orthogonal to x")
    if not 1e-6 <= h <= 1e-2:
        raise Rp2SpinError("h must lie in [1e-6, 1e-2]")
    xp = np.cos(h) * x + np.sin(h) * v
    xm = np.cos(h) * x - np.sin(h) * v
    q = np.outer(x, x)
    de = (_frame_sections(xp) - _frame_sections(xm)) / (2 * h)
    lhs = de @ q.T                      # row i: q(x) D_v e_i
    da = (np.outer(xp, xp) - np.outer(xm, xm)) / (2 * h)
    rhs = da @ _frame_sections(x)       # row i: sum_j D_v a_ij e_j
    return float(np.max(np.linalg.norm(lhs - rhs, axis=1)))


def orbit_transport_check(gamma: Callable[[float], SU2Element], x0,
                          n_steps: int, fixed_frame: bool = False) -> float:
    """max_t |q(x(t)) ds/dt| for s(t) = sum_i x_i(t) e_i(t), x(t) = gamma(t).x0.

    ``gamma`` maps [0, 1] to SU(2) with gamma(0) the identity.  With
    ``fixed_frame`` the generators are frozen at t = 0 (negative control).
    """
    if np.max(np.abs(gamma(0.0).quat - [1, 0, 0, 0])) > 1e-12:
        raise Rp2SpinError("gamma(0) must be the identity")
    x0 = as_vec(x0)
    t = np.linspace(0.0, 1.0, n_steps + 1)
    h = t[1] - t[0]
    xs = np.array([gamma(s).rotation_matrix() @ x0 for s in t])
    if fixed_frame:
        E0 = _frame_sections(x0)
        s = xs @ E0                     # sum_i x_i(t) e_i(0)
    else:
        s = np.einsum("ti,tij->tj", xs, xs[:, :, None] * xs[:, None, :])
    ds = (s[2:] - s[:-2]) / (2 * h)
    mid = xs[1:-1]
    proj = mid * np.einsum("ti,ti->t", mid, ds)[:, None]
    return float(np.max(np.linalg.norm(proj, axis=1)))


def rotation_generator_path(axis, x, t: float, n_steps: int) -> DiscretePath:
    """Orbit arc from rotate(g_t, x) back to x, g_s = rotation by s about axis."""
    gamma = one_parameter_subgroup(axis, t)
    s = np.linspace(1.0, 0.0, n_steps + 1)
    pts = np.array([gamma(u).rotation_matrix() @ x for u in s])
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return DiscretePath(pts)


def local_spin_estimate(field: ProjectorField, axis, x, t: float,
                        n_steps: int = 32) -> np.ndarray:
    """(i/t)(y_t - y) on each frame vector, as a rank x rank matrix."""
    if field.action is None:
        raise Rp2SpinError(f"field {field.name!r} carries no SU(2) action")
    x = as_vec(x)
    F = field.frame(x)
    D = field.action(SU2Element.from_axis_angle(axis, t))
    back = rotation_generator_path(axis, x, t, n_steps)
    cols = []
    for a in range(field.rank):
        y = F[:, a]
        yt = parallel_transport(back, D @ y, field, fiber_tol=1e-8).final_vector
        cols.append(1j / t * (yt - y))
    return F.conj().T @ np.column_stack(cols)


def local_spin_operator(field: ProjectorField, axis, x,
                        t_sequence: Sequence[float] = (1e-3, 5e-4),
                        n_steps: int = 32) -> np.ndarray:
    """Fiberwise spin operator from rotate-then-transport-back differences.

    With two or more step sizes the last two estimates are combined by
    first-order Richardson extrapolation.
    """
    ts = [float(t) for t in t_sequence]
    if any(b >= a for a, b in zip(ts, ts[1:])) or ts[-1] <= 0:
        raise Rp2SpinError("t_sequence must decrease and stay positive")
    axis = axis_vector(axis)
    est = [local_spin_estimate(field, axis, x, t, n_steps) for t in ts[-2:]]
    if len(est) == 1:
        return est[0]
    t1, t2 = ts[-2:]
    r = t1 / t2
    return (r * est[1] - est[0]) / (r - 1.0)


def tangent_at(x, rng: np.random.Generator) -> np.ndarray:
    return orthonormal_tangent(x, rng.standard_normal(3))
