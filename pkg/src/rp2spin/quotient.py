"""Z2 actions on two-spin sections and the singlevaluedness audit.

A :class:`SpinSection` stores the coefficients Psi_{J,m}(r) of a spin-1/2
pair wave function over the transported basis, on a paired sample set.
Only the parities of the integers K and K-tilde matter, so both are kept
mod 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvarianceError
from .geometry import canonical_rep
from .sections import SampledSection, pair_permutation
from .twospin import JM_LABELS, cg_transform, exchange_permutation, frame

SPIN = 0.5
TWO_S = 1


@dataclass(frozen=True)
class Z2ActionSpec:
    K_tilde: int
    S: float = SPIN

    def __post_init__(self):
        object.__setattr__(self, "K_tilde", int(self.K_tilde) % 2)
        if self.S != SPIN:
            raise NotImplementedError("only S = 1/2 is supported")

    def sign(self, J: int) -> int:
        """(-1)^(2S - J + K-tilde)."""
        return (-1) ** ((TWO_S - J + self.K_tilde) % 2)

    def signs(self) -> np.ndarray:
        return np.array([self.sign(J) for J, _ in JM_LABELS])


@dataclass(frozen=True)
class SpinSection:
    """Coefficients over JM_LABELS = (1,1), (1,0), (1,-1), (0,0)."""

    coeffs: SampledSection
    S: float = field(default=SPIN)

    def __post_init__(self):
        if self.coeffs.dim != len(JM_LABELS):
            raise ValueError("a spin-1/2 pair section has four coefficients")

    @classmethod
    def from_values(cls, points, values) -> "SpinSection":
        return cls(SampledSection(points, values))

    @property
    def points(self) -> np.ndarray:
        return self.coeffs.points

    @property
    def values(self) -> np.ndarray:
        return self.coeffs.values

    def coefficient(self, J: int, m: int) -> SampledSection:
        k = JM_LABELS.index((J, m))
        return self.coeffs.with_values(self.values[:, k])

    def with_values(self, values) -> "SpinSection":
        return SpinSection(self.coeffs.with_values(values), self.S)


def tau_act(spec: Z2ActionSpec, psi: SpinSection) -> SpinSection:
    """(t.Psi)_{J,m}(r) = (-1)^(2S - J + K-tilde) Psi_{J,m}(-r)."""
    return psi.with_values(psi.coeffs.antipodal_values() * spec.signs())


def invariant_part(spec: Z2ActionSpec, psi: SpinSection) -> SpinSection:
    return psi.with_values((psi.values + tau_act(spec, psi).values) / 2)


@dataclass
class ParityReport:
    classes: dict           # (J, m) -> "even" | "odd" | "mixed" | "zero"
    residuals: dict         # (J, m) -> {"even": float, "odd": float}
    consistent_K_tilde: list
    verdict: str            # "K_tilde=0", "K_tilde=1", "indeterminate", "not invariant under any tau"

    @property
    def K_tilde(self) -> int | None:
        return self.consistent_K_tilde[0] if len(self.consistent_K_tilde) == 1 else None

    def to_dict(self) -> dict:
        return {
            "parity": {f"{J},{m}": {"class": self.classes[(J, m)],
                                    **self.residuals[(J, m)]}
                       for J, m in JM_LABELS},
            "consistent_K_tilde": self.consistent_K_tilde,
            "verdict": self.verdict,
        }


def parity_audit(psi: SpinSection, rtol: float = 1e-10) -> ParityReport:
    """Classify each coefficient's parity and find the K-tilde values it allows."""
    scale = max(psi.coeffs.max_norm(), 0.0)
    classes, residuals = {}, {}
    for J, m in JM_LABELS:
        c = psi.coefficient(J, m)
        even, odd = c.parity_residuals()
        residuals[(J, m)] = {"even": even, "odd": odd}
        tol = rtol * scale
        if c.max_norm() <= tol:
            classes[(J, m)] = "zero"
        elif even <= tol:
            classes[(J, m)] = "even"
        elif odd <= tol:
            classes[(J, m)] = "odd"
        else:
            classes[(J, m)] = "mixed"
    consistent = []
    for kt in (0, 1):
        spec = Z2ActionSpec(kt)
        want = {1: "even", -1: "odd"}
        if all(classes[(J, m)] in ("zero", want[spec.sign(J)]) for J, m in JM_LABELS):
            consistent.append(kt)
    if len(consistent) == 2:
        verdict = "indeterminate"
    elif consistent:
        verdict = f"K_tilde={consistent[0]}"
    else:
        verdict = "not invariant under any tau"
    return ParityReport(classes, residuals, consistent, verdict)


def basis_with_exchange(K: int, r) -> np.ndarray:
    """Transported frame whose J-blocks obey V(-r) = (-1)^(2S - J + K) V(r).

    K = 2S is the frame of :func:`rp2spin.twospin.frame`.  For the other
    parity the frame is flipped on the non-canonical lift of each class.
    """
    V = frame(r)
    if (K - TWO_S) % 2 == 0:
        return V
    x = np.asarray(r, dtype=float)
    return V if np.array_equal(canonical_rep(x), x) else -V


def reconstruct(K: int, psi: SpinSection) -> np.ndarray:
    """|Psi(r)> = sum Psi_{J,m}(r) |J,m(r)>_K at every sample, shape (n, 10)."""
    return np.array([basis_with_exchange(K, x) @ c
                     for x, c in zip(psi.points, psi.values)])


@dataclass
class SinglevaluednessReport:
    K: int
    K_tilde: int
    parity: ParityReport
    singlevalued_residual: float
    antivalued_residual: float
    verdict: str            # "singlevalued" | "antivalued" | "both" (zero section) | "neither"

    def to_dict(self) -> dict:
        return {
            "K": self.K, "K_tilde": self.K_tilde,
            **self.parity.to_dict(),
            "residuals": {"singlevalued": self.singlevalued_residual,
                          "antivalued": self.antivalued_residual},
            "verdict": self.verdict,
        }


def singlevaluedness_audit(K: int, K_tilde: int, psi: SpinSection,
                           tol: float = 1e-13) -> SinglevaluednessReport:
    """Rebuild |Psi(r)> with exchange parameter K and compare r with -r.

    ``psi`` must be invariant under tau with parameter ``K_tilde``.
    """
    spec = Z2ActionSpec(K_tilde)
    inv_res = float(np.max(np.abs(tau_act(spec, psi).values - psi.values),
                           initial=0.0))
    scale = max(psi.coeffs.max_norm(), 1.0)
    if inv_res > 1e-12 * scale:
        raise InvarianceError(
            f"section is not tau-invariant for K_tilde={spec.K_tilde} "
            f"(residual {inv_res:.3e})")
    F = reconstruct(K, psi)
    Fm = F[pair_permutation(len(F))]
    sv = float(np.max(np.linalg.norm(F - Fm, axis=1)))
    av = float(np.max(np.linalg.norm(F + Fm, axis=1)))
    if sv <= tol * scale and av <= tol * scale:
        verdict = "both"
    elif sv <= tol * scale:
        verdict = "singlevalued"
    elif av <= tol * scale:
        verdict = "antivalued"
    else:
        verdict = "neither"
    return SinglevaluednessReport(K % 2, spec.K_tilde, parity_audit(psi),
                                  sv, av, verdict)


# -- coefficient parity in the product basis -------------------------------

def m_basis_exchange_section(rng: np.random.Generator, points: np.ndarray,
                             K: int = TWO_S) -> np.ndarray:
    """Random product-basis coefficients with Psi_{M-bar}(-r) = (-1)^K Psi_M(r).

    Values are drawn freely on the even rows of the paired sample set and the
    odd rows are filled from the exchange relation.
    """
    n = len(points)
    vals = np.empty((n, 4), dtype=complex)
    base = rng.standard_normal((n // 2, 4)) + 1j * rng.standard_normal((n // 2, 4))
    vals[0::2] = base
    vals[1::2] = (-1) ** (K % 2) * base @ exchange_permutation().T
    return vals


def j_coefficients(m_values: np.ndarray) -> np.ndarray:
    """Product-basis coefficient rows -> J-basis coefficient rows."""
    return m_values @ cg_transform().T
