"""Two spin-1/2 particles: the transported spin basis built from W(theta, phi).

The ten basis states live in the two-quanta sector of four bosonic modes
ordered (a1, a2, b1, b2).  They are labelled |J, m_J>^(mu) for the triplet
(J = 1, m_J = 1, 0, -1; mu = -1, 0, 1) plus the singlet |0, 0>, and stored
in that reading order:

    index 3 * i_m + i_mu   for the triplet, i_m = (1, 0, -1).index(m_J),
                           i_mu = (-1, 0, 1).index(mu)
    index 9                for the singlet

Every 10-vector in this module is expressed in coordinates over that
table basis unless a function says otherwise.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache

import numpy as np

from .connection import ProjectorField
from .geometry import (DiscretePath, SQRT2, SU2Element, _exp_spin1, as_vec,
                       axis_vector)
from .scalar import GENERIC_POINTS, grassmann_projector, intertwiner

MODES = ("a1", "a2", "b1", "b2")
JM_LABELS = ((1, 1), (1, 0), (1, -1), (0, 0))
M_LABELS = ((0.5, 0.5), (0.5, -0.5), (-0.5, 0.5), (-0.5, -0.5))

# each entry: label, [(coefficient, creation operators applied to |0>)]
TABLE = (
    ("|1,1>^(-1)", [(1 / SQRT2, ("a1", "a1"))]),
    ("|1,1>^(0)", [(1.0, ("a1", "a2"))]),
    ("|1,1>^(1)", [(1 / SQRT2, ("a2", "a2"))]),
    ("|1,0>^(-1)", [(1 / SQRT2, ("b1", "b1"))]),
    ("|1,0>^(0)", [(1.0, ("b1", "b2"))]),
    ("|1,0>^(1)", [(1 / SQRT2, ("b2", "b2"))]),
    ("|1,-1>^(-1)", [(1.0, ("a1", "b1"))]),
    ("|1,-1>^(0)", [(1 / SQRT2, ("a1", "b2")), (1 / SQRT2, ("b1", "a2"))]),
    ("|1,-1>^(1)", [(1.0, ("a2", "b2"))]),
    ("|0,0>", [(1 / SQRT2, ("a1", "b2")), (-1 / SQRT2, ("b1", "a2"))]),
)

POLE_TOL = 1e-12


def fock_sector(n_modes: int = 4, n_quanta: int = 2) -> list[tuple[int, ...]]:
    """Occupation tuples with the given total, in lexicographic order."""
    return [n for n in itertools.product(range(n_quanta + 1), repeat=n_modes)
            if sum(n) == n_quanta]


def creation_operators(n_modes: int = 4, cutoff: int = 2) -> list[np.ndarray]:
    """Truncated a^dagger for each mode on the tensor-product Fock space."""
    a_dag = np.diag(np.sqrt(np.arange(1, cutoff + 1)), -1)
    eye = np.eye(cutoff + 1)
    ops = []
    for k in range(n_modes):
        factors = [a_dag if j == k else eye for j in range(n_modes)]
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    return ops


@cache
def schwinger_basis() -> np.ndarray:
    """The ten table states as columns over the occupation basis of :func:`fock_sector`."""
    cutoff = 2
    ops = dict(zip(MODES, creation_operators(len(MODES), cutoff)))
    vac = np.zeros((cutoff + 1) ** len(MODES))
    vac[0] = 1.0
    sector = fock_sector()
    flat = [int(np.ravel_multi_index(n, (cutoff + 1,) * len(MODES))) for n in sector]
    cols = []
    for _, terms in TABLE:
        v = np.zeros_like(vac)
        for coef, word in terms:
            w = vac
            for m in reversed(word):
                w = ops[m] @ w
            v = v + coef * w
        cols.append(v[flat])
    B = np.array(cols, dtype=complex).T
    B.setflags(write=False)
    return B


def table_index(J: int, m: int, mu: int | None = None) -> int:
    if J == 0:
        return 9
    return 3 * (1, 0, -1).index(m) + (-1, 0, 1).index(mu)


def w_matrix(theta: float, phi: float) -> np.ndarray:
    """W(theta, phi); the corner entries are sin^2(theta/2)."""
    c, s = np.cos(theta), np.sin(theta)
    c2, s2 = np.cos(theta / 2) ** 2, np.sin(theta / 2) ** 2
    e = np.exp(1j * phi)
    return np.array([
        [c2, e * s / SQRT2, e ** 2 * s2],
        [-s / (SQRT2 * e), c, e * s / SQRT2],
        [s2 / e ** 2, -s / (SQRT2 * e), c2],
    ])


def spherical_angles(r) -> tuple[float, float]:
    """(theta, phi) of a unit vector; phi is set to 0 where sin(theta) < 1e-12."""
    x = as_vec(r)
    theta = float(np.arccos(np.clip(x[2], -1.0, 1.0)))
    if np.hypot(x[0], x[1]) < POLE_TOL:
        return theta, 0.0
    return theta, float(np.arctan2(x[1], x[0]) % (2 * np.pi))


def w_row(r) -> np.ndarray:
    """Middle row W(r)_{0, mu}, mu = -1, 0, 1."""
    return w_matrix(*spherical_angles(r))[1]


@dataclass(frozen=True)
class TransportedBasis:
    r: np.ndarray
    vectors: np.ndarray   # (10, 4), columns ordered as JM_LABELS

    def vector(self, J: int, m: int) -> np.ndarray:
        return self.vectors[:, JM_LABELS.index((J, m))]

    def in_fock_space(self) -> np.ndarray:
        return schwinger_basis() @ self.vectors


def transported_basis(r) -> TransportedBasis:
    row = w_row(r)
    V = np.zeros((10, 4), dtype=complex)
    for a in range(3):
        V[3 * a:3 * a + 3, a] = row
    V[9, 3] = 1.0
    return TransportedBasis(as_vec(r).copy(), V)


def frame(r) -> np.ndarray:
    return transported_basis(r).vectors


def triplet_projector(r) -> np.ndarray:
    W = w_matrix(*spherical_angles(r))
    P0 = np.zeros((3, 3))
    P0[1, 1] = 1.0
    return W.T @ P0 @ W.conj()


def two_spin_projector(r) -> np.ndarray:
    V = frame(r)
    return V @ V.conj().T


def exchange_signs(r) -> tuple[np.ndarray, float]:
    """Per-vector sign s with V(-r) = s V(r), and the worst residual."""
    V, Vm = frame(r), frame(-as_vec(r))
    s = np.einsum("ia,ia->a", V.conj(), Vm)
    res = float(np.max(np.abs(Vm - V * s)))
    return s, res


def pt_condition_residual(curve: DiscretePath, h: float) -> float:
    """max_k,a,b |<V_a(x_k), (V_b(x_{k+1}) - V_b(x_{k-1})) / 2h>|.

    ``curve`` must sample a smooth curve at parameter spacing ``h``.
    """
    frames = np.array([frame(x) for x in curve.points])
    if len(frames) < 3:
        raise ValueError("need at least three curve samples")
    d = (frames[2:] - frames[:-2]) / (2 * h)
    G = np.einsum("kia,kib->kab", frames[1:-1].conj(), d)
    return float(np.max(np.abs(G)))


# -- Clebsch-Gordan ------------------------------------------------------------

_CG = np.array([
    [1, 0, 0, 0],
    [0, 1 / SQRT2, 1 / SQRT2, 0],
    [0, 0, 0, 1],
    [0, 1 / SQRT2, -1 / SQRT2, 0],
])


def cg_transform(inverse: bool = False) -> np.ndarray:
    """Rows |J, m_J> (JM_LABELS), columns |m1 m2> (M_LABELS); inverse = transpose."""
    return _CG.T.copy() if inverse else _CG.copy()


def exchange_permutation() -> np.ndarray:
    """Matrix sending the coefficient of M to that of its swapped label M-bar."""
    return np.eye(4)[[0, 2, 1, 3]]


# -- rotations and spin operators -------------------------------------------

def spin1_generators() -> np.ndarray:
    """Standard J_x, J_y, J_z in the m = +1, 0, -1 basis."""
    jp = np.diag([SQRT2, SQRT2], 1).astype(complex)
    jm = jp.T.copy()
    return np.array([(jp + jm) / 2, (jp - jm) / 2j, np.diag([1.0, 0.0, -1.0])])


_A_ROW = np.array(
    [[-1 / SQRT2, 1j / SQRT2, 0.0],
     [0.0, 0.0, 1.0],
     [1 / SQRT2, 1j / SQRT2, 0.0]],
    dtype=complex,
)


def w_row_cartesian(r) -> np.ndarray:
    """The W middle row written as a linear map of r (no angles involved)."""
    return _A_ROW @ as_vec(r)


def mu_rotation(g: SU2Element) -> np.ndarray:
    """Matrix with w_row(rotate(g, r)) = mu_rotation(g) @ w_row(r)."""
    return _A_ROW @ g.rotation_matrix() @ _A_ROW.conj().T


def spin_rotation(g: SU2Element) -> np.ndarray:
    n, angle = g.axis_angle()
    return _exp_spin1(np.einsum("k,kij->ij", n, spin1_generators()), angle)


def two_spin_action(g: SU2Element) -> np.ndarray:
    """SU(2) on the 10-dim space: spin rotation on m_J, W-row rotation on mu, singlet fixed."""
    D = np.zeros((10, 10), dtype=complex)
    D[:9, :9] = np.kron(spin_rotation(g), mu_rotation(g))
    D[9, 9] = 1.0
    return D


def spin_operator_ambient(axis, r) -> np.ndarray:
    """10x10 spin operator at r: the triplet generator compressed to the fiber."""
    n = axis_vector(axis)
    J = np.einsum("k,kij->ij", n, spin1_generators())
    S0 = np.zeros((10, 10), dtype=complex)
    S0[:9, :9] = np.kron(J, np.eye(3))
    P = two_spin_projector(r)
    return P @ S0 @ P


def spin_operator_field(axis, r) -> np.ndarray:
    """4x4 spin operator in the transported frame (JM_LABELS order)."""
    V = frame(r)
    return V.conj().T @ spin_operator_ambient(axis, r) @ V


# -- projector fields ----------------------------------------------------------

def two_spin_field() -> ProjectorField:
    return ProjectorField("two-spin", 10, 4, two_spin_projector, frame,
                          two_spin_action)


def triplet_field() -> ProjectorField:
    return ProjectorField("triplet", 3, 1, triplet_projector,
                          lambda r: w_row(r)[:, None], mu_rotation)


@cache
def triplet_intertwiner() -> np.ndarray:
    """B with P^(J=1)(r) = B^dagger p(r) B for all r (solved once, then reused)."""
    B = intertwiner(grassmann_projector, triplet_projector, GENERIC_POINTS)
    B.setflags(write=False)
    return B
