"""The spin-1 vector psi on S^2, its projector, and the module maps built on it.

``psi(x)`` is the normalized l = 1 harmonic vector
(Y_{1,1}, -Y_{1,0}, Y_{1,-1}) * sqrt(4 pi / 3) in Condon-Shortley phase,
written in Cartesian form so it is exact at the poles.
"""
from __future__ import annotations

from functools import cache
from typing import Callable

import numpy as np
from scipy.linalg import null_space

from .geometry import SPHERICAL_FROM_CARTESIAN, SQRT2, as_vec
from .sections import SampledSection

_U = np.array(
    [[1 / SQRT2, -1j / SQRT2, 0.0],
     [0.0, 0.0, -1.0],
     [-1 / SQRT2, -1j / SQRT2, 0.0]],
    dtype=complex,
)


def psi(x) -> np.ndarray:
    """psi at a point, or row-wise at an ``(n, 3)`` array of points."""
    return as_vec(x) @ SPHERICAL_FROM_CARTESIAN.T


def grassmann_projector(x) -> np.ndarray:
    v = psi(x)
    return v[..., :, None] * v[..., None, :].conj()


def real_projector(x) -> np.ndarray:
    """q(x)_{ij} = x_i x_j, as a complex array for uniform handling."""
    x = as_vec(x)
    return (x[..., :, None] * x[..., None, :]).astype(complex)


def u_matrix() -> np.ndarray:
    return _U.copy()


def phi(x) -> np.ndarray:
    """U^dagger psi(x)."""
    return psi(x) @ _U.conj()


def tilde_projector(x) -> np.ndarray:
    """U^dagger p(x) U."""
    return _U.conj().T @ grassmann_projector(x) @ _U


def tilde_sign_pattern() -> np.ndarray:
    """Diagonal signs d with U^dagger p(x) U = diag(d) q(x) diag(d), d[2] = +1.

    Read off from the entry signs at one generic point.
    """
    x = np.array([0.3, -0.5, 0.8])
    x /= np.linalg.norm(x)
    ratio = np.real(tilde_projector(x)) / real_projector(x).real
    d3 = 1.0
    d1 = np.sign(ratio[0, 2]) * d3
    d2 = np.sign(ratio[1, 2]) * d3
    return np.array([d1, d2, d3])


def intertwiner(target: Callable[[np.ndarray], np.ndarray],
                source: Callable[[np.ndarray], np.ndarray],
                points) -> np.ndarray:
    """Constant unitary C with target(x) C = C source(x) at the given points.

    Equivalently ``source(x) = C^dagger target(x) C``.  The solution is the
    null space of the stacked linear conditions; it must be one-dimensional
    (three generic points suffice for rank-1 projector fields of the kind
    used here).  The free global phase is fixed by making the first entry of
    appreciable size real and positive.
    """
    blocks = []
    for x in points:
        T, S = target(np.asarray(x)), source(np.asarray(x))
        n = T.shape[0]
        blocks.append(np.kron(T, np.eye(n)) - np.kron(np.eye(n), S.T))
    ns = null_space(np.vstack(blocks), rcond=1e-10)
    if ns.shape[1] != 1:
        raise ValueError(f"intertwiner not unique (null space dim {ns.shape[1]})")
    C = ns[:, 0].reshape(n, n)
    C /= np.sqrt(np.trace(C.conj().T @ C).real / n)
    flat = C.ravel()
    k = int(np.argmax(np.abs(flat) > 1e-8))
    C *= np.conj(flat[k]) / abs(flat[k])
    return C


GENERIC_POINTS = np.array([[1.0, 2.0, 3.0], [-2.0, 1.0, 0.5], [0.3, -1.0, 2.0]])
GENERIC_POINTS /= np.linalg.norm(GENERIC_POINTS, axis=1, keepdims=True)


@cache
def real_intertwiner() -> np.ndarray:
    """C with q(x) = C^dagger p(x) C for all x (solved once, then reused)."""
    C = intertwiner(grassmann_projector, real_projector, GENERIC_POINTS)
    C.setflags(write=False)
    return C


# -- module maps on sampled sections ----------------------------------------

def even_odd_split(f: SampledSection) -> tuple[SampledSection, SampledSection]:
    v, w = f.values, f.antipodal_values()
    return f.with_values((v + w) / 2), f.with_values((v - w) / 2)


def iso_forward(f: SampledSection) -> SampledSection:
    """Even triple f  ->  odd scalar <psi(x), f(x)>."""
    if f.dim != 3:
        raise ValueError("iso_forward expects a C^3-valued section")
    f.require_parity("even")
    g = np.einsum("ni,ni->n", psi(f.points).conj(), f.values)
    return f.with_values(g)


def iso_backward(g: SampledSection) -> SampledSection:
    """Odd scalar g  ->  even triple g(x) psi(x), which lies in the image of p."""
    if g.dim != 1:
        raise ValueError("iso_backward expects a scalar section")
    g.require_parity("odd")
    return g.with_values(g.values * psi(g.points))
