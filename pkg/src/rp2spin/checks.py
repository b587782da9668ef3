"""Named verification checks, grouped into suites, plus convergence sweeps.

Each check returns ``(max_residual, n_samples, params)``; the runner turns
that into a :class:`CheckReport` and compares against the tolerance.  Checks
of kind ``"slope"`` report a fitted log-log slope and pass when it is at
most the (negative) tolerance.
"""
from __future__ import annotations

import csv
import io
import json
import time
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import connection as conn
from . import quotient as quo
from . import scalar, twospin
from .errors import Rp2SpinError
from .geometry import (DiscretePath, SU2Element, build_path, haar_sample,
                       one_parameter_subgroup, orthonormal_tangent,
                       random_sphere_points, rotate, wigner_d1)
from .sections import SampledSection, paired_points

SUITES = ("projector", "module-iso", "equivariance", "flatness", "holonomy",
          "orbit-transport", "two-spin", "exchange", "pt-condition",
          "spin-operators", "singlevaluedness")

# an O(h^k) decay check passes when each refinement shrinks the residual by
# at least this fraction of 2^k, or when the residual is already at this
# absolute rounding floor
ORDER_SLACK = 0.75
ROUNDING_FLOOR = 1e-12


@dataclass
class RunConfig:
    grid_n: int = 10_000
    path_steps: int | None = None
    tol_overrides: dict = field(default_factory=dict)
    seed: int = 0
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        if self.grid_n < 1:
            raise Rp2SpinError("grid_n must be at least 1")
        if self.path_steps is not None and self.path_steps < 2:
            raise Rp2SpinError("path_steps must be at least 2")
        if self.output_format not in ("json", "csv"):
            raise Rp2SpinError("output format must be json or csv")
        for name, tol in self.tol_overrides.items():
            spec = CHECKS.get(name)
            if spec is None:
                raise Rp2SpinError(f"unknown check in tolerance override: {name}")
            if not np.isfinite(tol) or (spec.kind == "max" and tol <= 0):
                raise Rp2SpinError(f"tolerance for {name} must be positive")

    def steps(self, default: int) -> int:
        return self.path_steps or default


@dataclass
class CheckReport:
    check_name: str
    n_samples: int
    max_residual: float
    tolerance: float
    passed: bool
    params: dict
    wall_time_ms: int

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass(frozen=True)
class CheckSpec:
    name: str
    suite: str
    tolerance: float
    func: Callable
    kind: str = "max"


CHECKS: dict[str, CheckSpec] = {}


def check(name: str, suite: str, tolerance: float, kind: str = "max"):
    def register(func):
        CHECKS[name] = CheckSpec(name, suite, tolerance, func, kind)
        return func
    return register


def check_rng(config: RunConfig, name: str) -> np.random.Generator:
    return np.random.default_rng([config.seed, zlib.crc32(name.encode())])


def order_violation(residuals, order: int) -> float:
    """Largest shortfall of r_fine against r_coarse / (slack * 2^order).

    Zero when every halving shrinks the residual by the expected factor,
    and also when residuals already sit at the rounding floor.
    """
    factor = ORDER_SLACK * 2 ** order
    worst = 0.0
    for coarse, fine in zip(residuals, residuals[1:]):
        worst = max(worst, fine - coarse / factor)
    return max(worst - ROUNDING_FLOOR, 0.0)


def fit_slope(xs, errors) -> float:
    xs, errors = np.asarray(xs, float), np.asarray(errors, float)
    return float(np.polyfit(np.log(xs), np.log(errors), 1)[0])


def _sizes(config: RunConfig) -> tuple[int, int]:
    """(number of sections, point pairs per section) for section checks."""
    return max(1, min(100, config.grid_n // 100)), max(1, min(1000, config.grid_n // 10))


def _py(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_py(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_py(x) for x in v]
    if isinstance(v, dict):
        return {k: _py(x) for k, x in v.items()}
    return v


# -- projector ------------------------------------------------------------------

@check("projector-hermitian", "projector", 1e-13)
def _(config, rng):
    P = scalar.grassmann_projector(random_sphere_points(rng, config.grid_n))
    return np.max(np.abs(P - P.conj().transpose(0, 2, 1))), config.grid_n, {}


@check("projector-idempotent", "projector", 1e-13)
def _(config, rng):
    P = scalar.grassmann_projector(random_sphere_points(rng, config.grid_n))
    return np.max(np.abs(P @ P - P)), config.grid_n, {}


@check("projector-trace", "projector", 1e-13)
def _(config, rng):
    P = scalar.grassmann_projector(random_sphere_points(rng, config.grid_n))
    return np.max(np.abs(np.trace(P, axis1=1, axis2=2) - 1)), config.grid_n, {}


@check("projector-antipodal-even", "projector", 1e-14)
def _(config, rng):
    x = random_sphere_points(rng, config.grid_n)
    d = scalar.grassmann_projector(-x) - scalar.grassmann_projector(x)
    return np.max(np.linalg.norm(d, axis=(1, 2))), config.grid_n, {}


@check("psi-norm", "projector", 1e-14)
def _(config, rng):
    v = scalar.psi(random_sphere_points(rng, config.grid_n))
    return np.max(np.abs(np.linalg.norm(v, axis=1) - 1)), config.grid_n, {}


@check("psi-odd", "projector", 1e-15)
def _(config, rng):
    x = random_sphere_points(rng, config.grid_n)
    return np.max(np.abs(scalar.psi(-x) + scalar.psi(x))), config.grid_n, {}


@check("real-projector-intertwiner", "projector", 1e-12)
def _(config, rng):
    x = random_sphere_points(rng, config.grid_n)
    C = scalar.real_intertwiner()
    d = C.conj().T @ scalar.grassmann_projector(x) @ C - scalar.real_projector(x)
    return np.max(np.abs(d)), config.grid_n, {"C": {"re": C.real, "im": C.imag}}


@check("tilde-projector-signs", "projector", 1e-13)
def _(config, rng):
    x = random_sphere_points(rng, config.grid_n)
    U = scalar.u_matrix()
    d = scalar.tilde_sign_pattern()
    S = np.diag(d)
    res = max(np.max(np.abs(U.conj().T @ U - np.eye(3))),
              np.max(np.abs(scalar.tilde_projector(x) - S @ scalar.real_projector(x) @ S)))
    return res, config.grid_n, {"sign_pattern": d}


# -- module isomorphism ---------------------------------------------------------

def _even_triple(rng, pts):
    # band-limited: degree 0 and 2 monomials with random complex weights
    x1, x2, x3 = pts.T
    basis = np.stack([np.ones_like(x1), x1 * x1, x2 * x2, x3 * x3,
                      x1 * x2, x2 * x3, x1 * x3], axis=1)
    w = rng.standard_normal((7, 3)) + 1j * rng.standard_normal((7, 3))
    return SampledSection(pts, basis @ w)


def _odd_scalar(rng, pts):
    x1, x2, x3 = pts.T
    basis = np.stack([x1, x2, x3, x1 ** 3, x1 * x2 * x3, x3 * x2 * x2], axis=1)
    w = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    return SampledSection(pts, basis @ w)


@check("iso-forward-backward", "module-iso", 1e-12)
def _(config, rng):
    n_sec, n_pairs = _sizes(config)
    worst = 0.0
    for _ in range(n_sec):
        g = _odd_scalar(rng, paired_points(rng, n_pairs))
        back = scalar.iso_forward(scalar.iso_backward(g))
        worst = max(worst, np.max(np.abs(back.values - g.values)))
    return worst, n_sec * 2 * n_pairs, {"sections": n_sec}


@check("iso-backward-forward", "module-iso", 1e-12)
def _(config, rng):
    n_sec, n_pairs = _sizes(config)
    worst = 0.0
    for _ in range(n_sec):
        f = _even_triple(rng, paired_points(rng, n_pairs))
        ff = scalar.iso_backward(scalar.iso_forward(f))
        pf = np.einsum("nij,nj->ni", scalar.grassmann_projector(f.points), f.values)
        worst = max(worst, np.max(np.abs(ff.values - pf)))
    return worst, n_sec * 2 * n_pairs, {"sections": n_sec}


@check("a-plus-linearity", "module-iso", 1e-12)
def _(config, rng):
    n_sec, n_pairs = _sizes(config)
    worst = 0.0
    for _ in range(n_sec):
        pts = paired_points(rng, n_pairs)
        f = _even_triple(rng, pts)
        h = (1.0 + pts[:, 0] ** 2 - 2j * pts[:, 1] * pts[:, 2])
        lhs = scalar.iso_forward(f.with_values(h[:, None] * f.values)).values
        rhs = h[:, None] * scalar.iso_forward(f).values
        worst = max(worst, np.max(np.abs(lhs - rhs)))
    return worst, n_sec * 2 * n_pairs, {}


@check("even-odd-split", "module-iso", 1e-15)
def _(config, rng):
    n_sec, n_pairs = _sizes(config)
    worst = 0.0
    for _ in range(n_sec):
        pts = paired_points(rng, n_pairs)
        f = SampledSection(pts, _even_triple(rng, pts).values[:, :1]
                           + _odd_scalar(rng, pts).values)
        scale = f.max_norm()
        fe, fo = scalar.even_odd_split(f)
        ee, eo = scalar.even_odd_split(fe)
        oe, oo = scalar.even_odd_split(fo)
        worst = max(worst, np.max(np.abs(fe.values + fo.values - f.values)) / scale,
                    np.max(np.abs(eo.values)) / scale, np.max(np.abs(oe.values)) / scale,
                    np.max(np.abs(ee.values - fe.values)) / scale,
                    np.max(np.abs(oo.values - fo.values)) / scale)
    return worst, n_sec * 2 * n_pairs, {"relative": True}


# -- equivariance ---------------------------------------------------------------

def _haar_batch(rng, n):
    return [haar_sample(rng) for _ in range(n)]


@check("spin1-equivariance", "equivariance", 1e-12)
def _(config, rng):
    n = min(config.grid_n, 1000)
    worst = 0.0
    for g, x in zip(_haar_batch(rng, n), random_sphere_points(rng, n)):
        d = wigner_d1(g) @ scalar.psi(x) - scalar.psi(rotate(g, x))
        worst = max(worst, np.linalg.norm(d))
    return worst, n, {}


@check("wigner-d1-unitary", "equivariance", 1e-10)
def _(config, rng):
    n = min(config.grid_n, 1000)
    worst = 0.0
    for g in _haar_batch(rng, n):
        D = wigner_d1(g)
        worst = max(worst, np.max(np.abs(D.conj().T @ D - np.eye(3))),
                    np.max(np.abs(D @ wigner_d1(g.inverse()) - np.eye(3))))
    return worst, n, {}


@check("wigner-d1-homomorphism", "equivariance", 1e-10)
def _(config, rng):
    n = min(config.grid_n, 1000)
    worst = 0.0
    gs, hs = _haar_batch(rng, n), _haar_batch(rng, n)
    for g, h in zip(gs, hs):
        worst = max(worst, np.max(np.abs(wigner_d1(g * h) - wigner_d1(g) @ wigner_d1(h))))
    return worst, n, {}


@check("rotation-action", "equivariance", 1e-12)
def _(config, rng):
    n = min(config.grid_n, 1000)
    worst = 0.0
    xs = random_sphere_points(rng, n)
    for g, h, x in zip(_haar_batch(rng, n), _haar_batch(rng, n), xs):
        worst = max(worst, np.max(np.abs(rotate(g, rotate(h, x)) - rotate(g * h, x))),
                    abs(np.linalg.norm(rotate(g, x)) - 1))
    return worst, n, {}


# -- flatness ---------------------------------------------------------------------

FLATNESS_RADII = (0.2, 0.1, 0.05)
NORTH = np.array([0.0, 0.0, 1.0])


@check("plaquette-flatness", "flatness", 1e-2)
def _(config, rng):
    steps = config.steps(2000)
    pr = conn.curvature_probe(NORTH, 0.05, conn.real_field(), steps)
    return abs(pr.phase_per_area), steps, {"rho": 0.05, "field": "q",
                                           "phase_per_area": pr.phase_per_area}


@check("plaquette-order", "flatness", ROUNDING_FLOOR)
def _(config, rng):
    steps = config.steps(2000)
    vals = [abs(conn.curvature_probe(NORTH, r, conn.real_field(), steps).phase_per_area)
            for r in FLATNESS_RADII]
    # first-order decrease per halving: factor 2
    worst = max(max(fine - coarse / 2 for coarse, fine in zip(vals, vals[1:])), 0.0)
    return worst, steps * len(vals), {"radii": FLATNESS_RADII, "phase_per_area": vals}


@check("plaquette-flatness-p", "flatness", 1e-2)
def _(config, rng):
    steps = config.steps(2000)
    x = random_sphere_points(rng, 1)[0]
    pr = conn.curvature_probe(x, 0.05, conn.grassmann_field(), steps)
    return abs(pr.phase_per_area), steps, {"rho": 0.05, "field": "p"}


@check("bloch-negative-control", "flatness", 0.1)
def _(config, rng):
    steps = config.steps(2000)
    pr = conn.curvature_probe(NORTH, 0.05, conn.bloch_field(), steps)
    return abs(abs(pr.phase_per_area) - 0.5) / 0.5, steps, {
        "phase_per_area": pr.phase_per_area, "expected_magnitude": 0.5}


@check("frame-connection", "flatness", 1e-7)
def _(config, rng):
    n = max(1, min(config.grid_n, 200))
    worst = 0.0
    for x in random_sphere_points(rng, n):
        worst = max(worst, conn.frame_connection_check(x, conn.tangent_at(x, rng), 1e-4))
    return worst, n, {"h": 1e-4}


@check("frame-connection-order", "flatness", 1e-15)
def _(config, rng):
    n = max(1, min(config.grid_n, 50))
    worst = 0.0
    for x in random_sphere_points(rng, n):
        v = conn.tangent_at(x, rng)
        res = [conn.frame_connection_check(x, v, h) for h in (1e-3, 5e-4, 2.5e-4)]
        worst = max(worst, order_violation(res, 2))
    return worst, n, {"h": [1e-3, 5e-4, 2.5e-4]}


# -- holonomy ---------------------------------------------------------------------

def _generator_loop(steps, start=NORTH, direction=(1.0, 0.0, 0.0)):
    return build_path("half-great-circle", {"start": start, "direction": direction},
                      steps)


@check("rp2-generator-holonomy", "holonomy", 5e-3)
def _(config, rng):
    steps = config.steps(10_000)
    ph = conn.holonomy(_generator_loop(steps), conn.real_field())
    return abs(ph + 1), steps, {"expected": -1, "phase_re": ph.real,
                                "phase_im": ph.imag, "field": "q"}


@check("rp2-generator-holonomy-p", "holonomy", 5e-3)
def _(config, rng):
    steps = config.steps(10_000)
    x = random_sphere_points(rng, 1)[0]
    loop = build_path("half-great-circle", {"start": x}, steps)
    ph = conn.holonomy(loop, conn.grassmann_field())
    return abs(ph + 1), steps, {"expected": -1, "field": "p"}


@check("contractible-holonomy", "holonomy", 5e-3)
def _(config, rng):
    steps = config.steps(1000)
    loop = build_path("small-circle", {"axis": NORTH, "rho": 0.1}, steps)
    ph = conn.holonomy(loop, conn.real_field())
    return abs(ph - 1), steps, {"expected": 1, "rho": 0.1}


@check("double-loop-holonomy", "holonomy", 1e-2)
def _(config, rng):
    steps = config.steps(10_000)
    loop = build_path("great-circle-loop", {"start": NORTH,
                                            "direction": (1.0, 0.0, 0.0)}, steps)
    ph = conn.holonomy(loop, conn.real_field())
    return abs(ph - 1), steps, {"expected": 1}


@check("holonomy-reversal", "holonomy", 1e-10)
def _(config, rng):
    steps = config.steps(1000)
    x = random_sphere_points(rng, 1)[0]
    loop = build_path("half-great-circle", {"start": x}, steps)
    f = conn.grassmann_field()
    a, b = conn.holonomy(loop, f), conn.holonomy(loop.reversed(), f)
    return abs(a * np.conj(b) - 1), steps, {}


@check("holonomy-multiplicative", "holonomy", 1e-2)
def _(config, rng):
    steps = config.steps(2000)
    f = conn.grassmann_field()
    gen = _generator_loop(steps)
    gen2 = build_path("half-great-circle", {"start": -NORTH,
                                            "direction": (-1.0, 0.0, 0.0)}, steps)
    both = gen.then(gen2)
    h1, h2, h12 = conn.holonomy(gen, f), conn.holonomy(gen2, f), conn.holonomy(both, f)
    return abs(h12 - h1 * h2), 2 * steps, {}


@check("two-spin-generator-holonomy", "holonomy", 5e-3)
def _(config, rng):
    steps = config.steps(2000)
    x = random_sphere_points(rng, 1)[0]
    loop = build_path("half-great-circle", {"start": x}, steps)
    H = conn.holonomy_matrix(loop, twospin.two_spin_field())
    expected = np.diag([-1, -1, -1, 1])
    return np.max(np.abs(H - expected)), steps, {"expected_diag": [-1, -1, -1, 1]}


HOLONOMY_SWEEP = (100, 1000, 10_000)


def _raw_generator_error(n: int) -> tuple[float, complex]:
    res = conn.holonomy_result(_generator_loop(n), conn.real_field())
    return abs(res.raw_overlap + 1), res.phase


@check("holonomy-convergence-slope", "holonomy", -0.9, kind="slope")
def _(config, rng):
    errs = [_raw_generator_error(n)[0] for n in HOLONOMY_SWEEP]
    return fit_slope(HOLONOMY_SWEEP, errs), sum(HOLONOMY_SWEEP), {
        "n_steps": HOLONOMY_SWEEP, "raw_product_error": errs}


# -- orbit transport -------------------------------------------------------------

def _orbit_case(rng):
    axis = random_sphere_points(rng, 1)[0]
    x0 = random_sphere_points(rng, 1)[0]
    # non-uniform speed along the orbit so the O(h^2) term is visible
    return one_parameter_subgroup(axis, np.pi, lambda t: (t + 0.5 * t * t) / 1.5), x0


@check("orbit-transport", "orbit-transport", 1e-5)
def _(config, rng):
    steps = config.steps(1000)
    gamma, x0 = _orbit_case(rng)
    e1 = one_parameter_subgroup([1.0, 0.0, 0.0], np.pi)
    res = max(conn.orbit_transport_check(gamma, x0, steps),
              conn.orbit_transport_check(e1, NORTH, steps))
    return res, steps, {}


@check("orbit-transport-order", "orbit-transport", 1e-15)
def _(config, rng):
    gamma, x0 = _orbit_case(rng)
    base = config.steps(1000)
    res = [conn.orbit_transport_check(gamma, x0, base * k) for k in (1, 2, 4)]
    return order_violation(res, 2), base * 7, {"n_steps": [base, 2 * base, 4 * base],
                                              "residuals": res}


@check("orbit-negative-control", "orbit-transport", 1e-3)
def _(config, rng):
    steps = config.steps(1000)
    gamma, x0 = _orbit_case(rng)
    true = conn.orbit_transport_check(gamma, x0, steps)
    fixed = conn.orbit_transport_check(gamma, x0, steps, fixed_frame=True)
    return true / fixed, steps, {"moving_frame": true, "fixed_frame": fixed}


@check("orbit-section-identity", "orbit-transport", 1e-12)
def _(config, rng):
    gamma, x0 = _orbit_case(rng)
    worst = 0.0
    for t in np.linspace(0, 1, 50):
        xt = gamma(t).rotation_matrix() @ x0
        s = np.outer(xt, xt).T @ xt          # sum_i x_i(t) e_i(t)
        worst = max(worst, np.linalg.norm(s - rotate(gamma(t), x0)))
    return worst, 50, {}


# -- two-spin ---------------------------------------------------------------------

def printed_triplet_projector(theta: float, phi: float) -> np.ndarray:
    """The displayed P^(J=1) matrix, entry by entry."""
    s, c = np.sin(theta), np.cos(theta)
    e = np.exp(1j * phi)
    r2 = np.sqrt(2.0)
    return np.array([
        [0.5 * s * s, -s * c / (r2 * e), -0.5 * s * s / e ** 2],
        [-s * c * e / r2, c * c, s * c / (r2 * e)],
        [-0.5 * s * s * e ** 2, s * c * e / r2, 0.5 * s * s],
    ])


def _angles(rng, n):
    return rng.uniform(0, np.pi, n), rng.uniform(0, 2 * np.pi, n)


@check("schwinger-count", "two-spin", 0.5)
def _(config, rng):
    n_s = (4 * 0.5 + 1) * (4 * 0.5 + 2) * (4 * 0.5 + 3) / 6
    count = len(twospin.fock_sector())
    return max(abs(count - 10), abs(n_s - 10)), 1, {"count": count, "N_S": n_s}


@check("schwinger-gram", "two-spin", 1e-13)
def _(config, rng):
    B = twospin.schwinger_basis()
    return np.max(np.abs(B.conj().T @ B - np.eye(10))), 10, {}


@check("w-unitary", "two-spin", 1e-13)
def _(config, rng):
    th, ph = _angles(rng, config.grid_n)
    worst = 0.0
    for a, b in zip(th, ph):
        W = twospin.w_matrix(a, b)
        worst = max(worst, np.max(np.abs(W.conj().T @ W - np.eye(3))))
    return worst, config.grid_n, {}


@check("w-determinant", "two-spin", 1e-12)
def _(config, rng):
    n = min(config.grid_n, 1000)
    th, ph = _angles(rng, n)
    worst = max(abs(np.linalg.det(twospin.w_matrix(a, b)) - 1) for a, b in zip(th, ph))
    worst = max(worst, np.max(np.abs(twospin.w_matrix(0.0, 1.234) - np.eye(3))))
    return worst, n, {}


@check("transported-basis-orthonormal", "two-spin", 1e-12)
def _(config, rng):
    worst = 0.0
    for x in random_sphere_points(rng, config.grid_n):
        V = twospin.transported_basis(x).in_fock_space()
        worst = max(worst, np.max(np.abs(V.conj().T @ V - np.eye(4))))
    return worst, config.grid_n, {}


@check("triplet-projector-printed", "two-spin", 1e-13)
def _(config, rng):
    n = min(config.grid_n, 1000)
    worst = 0.0
    for x in random_sphere_points(rng, n):
        th, ph = twospin.spherical_angles(x)
        worst = max(worst, np.max(np.abs(twospin.triplet_projector(x)
                                         - printed_triplet_projector(th, ph))))
    return worst, n, {}


@check("triplet-projector-intertwiner", "two-spin", 1e-12)
def _(config, rng):
    n = min(config.grid_n, 1000)
    B = twospin.triplet_intertwiner()
    worst = 0.0
    for x in random_sphere_points(rng, n):
        d = B.conj().T @ scalar.grassmann_projector(x) @ B - twospin.triplet_projector(x)
        worst = max(worst, np.max(np.abs(d)))
    return worst, n, {"B": {"re": B.real, "im": B.imag}}


@check("triplet-projector-identities", "two-spin", 1e-13)
def _(config, rng):
    n = min(config.grid_n, 1000)
    worst = 0.0
    for x in random_sphere_points(rng, n):
        P = twospin.triplet_projector(x)
        worst = max(worst, np.max(np.abs(P @ P - P)), np.max(np.abs(P - P.conj().T)),
                    abs(np.trace(P) - 1),
                    np.max(np.abs(twospin.triplet_projector(-x) - P)))
    return worst, n, {}


# -- exchange -------------------------------------------------------------------------

@check("exchange-signs", "exchange", 1e-13)
def _(config, rng):
    expected = np.array([(-1) ** J for J, _ in twospin.JM_LABELS])
    worst = 0.0
    for x in random_sphere_points(rng, config.grid_n):
        s, res = twospin.exchange_signs(x)
        worst = max(worst, res, np.max(np.abs(s - expected)))
    return worst, config.grid_n, {"expected_signs": expected}


@check("triplet-span-antipodal", "exchange", 1e-13)
def _(config, rng):
    n = min(config.grid_n, 1000)
    worst = max(np.max(np.abs(twospin.two_spin_projector(-x) - twospin.two_spin_projector(x)))
                for x in random_sphere_points(rng, n))
    return worst, n, {}


@check("cg-orthogonal", "exchange", 1e-15)
def _(config, rng):
    C = twospin.cg_transform()
    return max(np.max(np.abs(C @ C.T - np.eye(4))),
               np.max(np.abs(twospin.cg_transform(inverse=True) - C.T))), 16, {}


@check("cg-parity-transfer", "exchange", 1e-13)
def _(config, rng):
    _, n_pairs = _sizes(config)
    pts = paired_points(rng, n_pairs)
    m_vals = quo.m_basis_exchange_section(rng, pts, K=1)
    j_vals = quo.j_coefficients(m_vals)
    # expected parity (-1)^(2S - J + K) with K = 2S
    signs = np.array([(-1) ** ((1 - J + 1) % 2) for J, _ in twospin.JM_LABELS])
    anti = j_vals[np.arange(len(pts)) ^ 1]
    return np.max(np.abs(anti - signs * j_vals)), len(pts), {"signs": signs}


# -- parallel-transport condition -----------------------------------------------------

def _random_great_curve(rng, h, pole=False):
    a = NORTH if pole else random_sphere_points(rng, 1)[0]
    b = orthonormal_tangent(a, rng.standard_normal(3))
    t = np.arange(0.0, 1.0 + h / 2, h)
    ang = np.pi * (t + 0.5 * t * t)
    pts = np.cos(ang)[:, None] * a + np.sin(ang)[:, None] * b
    return DiscretePath(pts)


PT_H = (1e-3, 5e-4, 2.5e-4)


@check("pt-condition", "pt-condition", 1e-6)
def _(config, rng):
    worst = 0.0
    for k in range(3):
        worst = max(worst, twospin.pt_condition_residual(
            _random_great_curve(rng, 1e-4, pole=(k == 0)), 1e-4))
    return worst, 3, {"h": 1e-4}


@check("pt-condition-order", "pt-condition", 1e-15)
def _(config, rng):
    worst = 0.0
    table = []
    for k in range(3):
        state = rng.bit_generator.state
        res = []
        for h in PT_H:
            rng.bit_generator.state = state
            res.append(twospin.pt_condition_residual(_random_great_curve(rng, h), h))
        table.append(res)
        worst = max(worst, order_violation(res, 2))
    return worst, 3, {"h": PT_H, "residuals": table}


@check("pt-condition-constant", "pt-condition", 1e-14)
def _(config, rng):
    x = random_sphere_points(rng, 1)[0]
    return twospin.pt_condition_residual(DiscretePath(np.repeat(x[None], 5, 0)), 1e-4), 5, {}


# -- spin operators ---------------------------------------------------------------------

@check("local-spin-scalar", "spin-operators", 1e-4)
def _(config, rng):
    worst = 0.0
    n = max(1, min(config.grid_n, 5))
    for x in random_sphere_points(rng, n):
        for f in (conn.real_field(), conn.grassmann_field()):
            for axis in (1, 2, 3):
                worst = max(worst, np.linalg.norm(conn.local_spin_operator(f, axis, x), 2))
    return worst, n, {"t": [1e-3, 5e-4]}


@check("local-spin-trivial", "spin-operators", 1e-12)
def _(config, rng):
    x = random_sphere_points(rng, 1)[0]
    worst = max(np.max(np.abs(conn.local_spin_operator(conn.trivial_field(), a, x)))
                for a in (1, 2, 3))
    return worst, 1, {}


@check("spin-operator-agreement", "spin-operators", 5e-4)
def _(config, rng):
    f = twospin.two_spin_field()
    worst = 0.0
    pts = [NORTH, random_sphere_points(rng, 1)[0]]
    for x in pts:
        for axis in (1, 2, 3):
            S_num = conn.local_spin_operator(f, axis, x)
            worst = max(worst, np.max(np.abs(S_num - twospin.spin_operator_field(axis, x))))
    return worst, len(pts) * 3, {}


@check("spin-operator-reference", "spin-operators", 1e-12)
def _(config, rng):
    S3 = twospin.spin_operator_field(3, NORTH)
    return np.max(np.abs(S3 - np.diag([1, 0, -1, 0]))), 1, {}


@check("spin-commutators", "spin-operators", 1e-12)
def _(config, rng):
    n = max(1, min(config.grid_n, 200))
    worst = 0.0
    for x in random_sphere_points(rng, n):
        S = [twospin.spin_operator_ambient(a, x) for a in (1, 2, 3)]
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            worst = max(worst, np.max(np.abs(S[i] @ S[j] - S[j] @ S[i] - 1j * S[k])))
        for a in (1, 2, 3):
            Sf = twospin.spin_operator_field(a, x)
            worst = max(worst, np.max(np.abs(Sf - Sf.conj().T)),
                        np.max(np.abs(Sf[:, 3])), np.max(np.abs(Sf[3, :])))
    return worst, n, {}


@check("spin-casimir", "spin-operators", 1e-12)
def _(config, rng):
    n = max(1, min(config.grid_n, 200))
    worst = 0.0
    target = np.diag([2.0, 2.0, 2.0, 0.0])
    for x in random_sphere_points(rng, n):
        cas = sum(np.linalg.matrix_power(twospin.spin_operator_field(a, x), 2)
                  for a in (1, 2, 3))
        worst = max(worst, np.max(np.abs(cas - target)))
    return worst, n, {}


# -- singlevaluedness -------------------------------------------------------------------

def _random_spin_section(rng, n_pairs):
    pts = paired_points(rng, n_pairs)
    vals = rng.standard_normal((len(pts), 4)) + 1j * rng.standard_normal((len(pts), 4))
    return quo.SpinSection.from_values(pts, vals)


def _invariant_sections(config, rng):
    n_sec = max(1, min(20, config.grid_n))
    n_pairs = max(1, min(200, config.grid_n // 50))
    for _ in range(n_sec):
        kt = int(rng.integers(2))
        yield kt, quo.invariant_part(quo.Z2ActionSpec(kt), _random_spin_section(rng, n_pairs))


@check("singlevalued-K-equals-K-tilde", "singlevaluedness", 1e-13)
def _(config, rng):
    worst, count = 0.0, 0
    for kt, sec in _invariant_sections(config, rng):
        rep = quo.singlevaluedness_audit(kt, kt, sec)
        worst = max(worst, rep.singlevalued_residual)
        count += len(sec.points)
    return worst, count, {}


@check("antivalued-K-plus-one", "singlevaluedness", 1e-13)
def _(config, rng):
    worst, count = 0.0, 0
    for kt, sec in _invariant_sections(config, rng):
        rep = quo.singlevaluedness_audit(kt + 1, kt, sec)
        worst = max(worst, rep.antivalued_residual)
        count += len(sec.points)
    return worst, count, {}


@check("verdict-flips", "singlevaluedness", 0.5)
def _(config, rng):
    wrong = 0
    for kt, sec in _invariant_sections(config, rng):
        for K in (0, 1):
            want = "singlevalued" if (K - kt) % 2 == 0 else "antivalued"
            wrong += quo.singlevaluedness_audit(K, kt, sec).verdict != want
        audit = quo.parity_audit(sec)
        wrong += audit.consistent_K_tilde != [kt]
    return float(wrong), max(1, min(20, config.grid_n)), {}


@check("tau-involution", "singlevaluedness", 1e-15)
def _(config, rng):
    worst = 0.0
    for kt in (0, 1):
        sec = _random_spin_section(rng, max(1, min(200, config.grid_n // 50)))
        spec = quo.Z2ActionSpec(kt)
        twice = quo.tau_act(spec, quo.tau_act(spec, sec))
        inv = quo.invariant_part(spec, sec)
        worst = max(worst, np.max(np.abs(twice.values - sec.values)),
                    np.max(np.abs(quo.tau_act(spec, inv).values - inv.values)),
                    np.max(np.abs(quo.invariant_part(spec, inv).values - inv.values)))
    return worst, 2, {}


# -- runner -------------------------------------------------------------------------------

def suite_checks(suite_name: str) -> list[CheckSpec]:
    if suite_name == "all":
        return list(CHECKS.values())
    if suite_name not in SUITES:
        raise Rp2SpinError(f"unknown suite {suite_name!r}")
    return [c for c in CHECKS.values() if c.suite == suite_name]


def run_check(spec: CheckSpec, config: RunConfig) -> CheckReport:
    tol = float(config.tol_overrides.get(spec.name, spec.tolerance))
    t0 = time.perf_counter()
    residual, n, params = spec.func(config, check_rng(config, spec.name))
    ms = int(round((time.perf_counter() - t0) * 1000))
    residual = float(residual)
    return CheckReport(spec.name, int(n), residual, tol,
                       bool(residual <= tol), _py(params), ms)


def run_suite(suite_name: str, config: RunConfig | None = None) -> list[CheckReport]:
    config = config or RunConfig()
    return [run_check(spec, config) for spec in suite_checks(suite_name)]


def reports_to_json(suite_name: str, config: RunConfig, reports) -> str:
    doc = {
        "suite": suite_name,
        "seed": config.seed,
        "grid_n": config.grid_n,
        "path_steps": config.path_steps,
        "all_pass": all(r.passed for r in reports),
        "checks": [r.to_dict() for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


CSV_FIELDS = ("check_name", "n_samples", "max_residual", "tolerance", "pass",
              "params", "wall_time_ms")


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in reports:
        d = r.to_dict()
        d["params"] = json.dumps(d["params"], sort_keys=True)
        w.writerow([repr(d[k]) if isinstance(d[k], float) else d[k] for k in CSV_FIELDS])
    return buf.getvalue()


# -- convergence sweeps -------------------------------------------------------------------

@dataclass
class SweepResult:
    check_name: str
    parameter: str
    rows: list            # dicts: value, phase_re, phase_im, error
    fitted_slope: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.parameter, "phase_re", "phase_im", "error", "fitted_slope"])
        for r in self.rows:
            w.writerow([_cell(r["value"]), _cell(r["phase_re"]), _cell(r["phase_im"]),
                        _cell(r["error"]), _cell(self.fitted_slope)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(_py(asdict(self)), indent=2, sort_keys=True) + "\n"


def _cell(v):
    return "" if v is None else repr(v)


def _sweep_holonomy(value, config):
    err, ph = _raw_generator_error(int(value))
    return err, ph


def _sweep_contractible(value, config):
    res = conn.holonomy_result(build_path("small-circle", {"axis": NORTH, "rho": 0.1},
                                          int(value)), conn.real_field())
    return abs(res.raw_overlap - 1), res.phase


def _sweep_pt(value, config):
    rng = check_rng(config, "pt-condition-sweep")
    return twospin.pt_condition_residual(_random_great_curve(rng, value), value), None


def _sweep_orbit(value, config):
    gamma, x0 = _orbit_case(check_rng(config, "orbit-transport-sweep"))
    return conn.orbit_transport_check(gamma, x0, int(value)), None


def _sweep_bloch(value, config):
    pr = conn.curvature_probe(NORTH, float(value), conn.bloch_field(), config.steps(2000))
    return abs(abs(pr.phase_per_area) - 0.5), None


def _sweep_spin(value, config):
    f = twospin.two_spin_field()
    x = random_sphere_points(check_rng(config, "spin-sweep"), 1)[0]
    est = conn.local_spin_estimate(f, 1, x, float(value))
    return np.max(np.abs(est - twospin.spin_operator_field(1, x))), None


# parameter name -> (function, whether smaller values are finer)
SWEEPS = {
    "rp2-generator-holonomy": ("n_steps", _sweep_holonomy),
    "contractible-holonomy": ("n_steps", _sweep_contractible),
    "pt-condition": ("h", _sweep_pt),
    "orbit-transport": ("n_steps", _sweep_orbit),
    "bloch-negative-control": ("rho", _sweep_bloch),
    "spin-operator-agreement": ("t", _sweep_spin),
}
FINER_WHEN_SMALLER = {"h", "rho", "t"}


def convergence_sweep(check_name: str, parameter: str, values,
                      config: RunConfig | None = None) -> SweepResult:
    """Residual of a check at each parameter value, with a log-log slope.

    The slope is taken against resolution: ``n_steps`` directly, and the
    reciprocal of step-like parameters (``h``, ``rho``, ``t``), so a
    converging check always shows a negative slope.
    """
    config = config or RunConfig()
    if check_name not in SWEEPS:
        raise Rp2SpinError(f"check {check_name!r} does not support sweeping")
    pname, fn = SWEEPS[check_name]
    if parameter != pname:
        raise Rp2SpinError(f"{check_name} sweeps over {pname!r}, not {parameter!r}")
    values = list(values)
    if not values:
        raise Rp2SpinError("sweep needs at least one value")
    rows = []
    for v in values:
        err, ph = fn(v, config)
        ph = None if ph is None else complex(ph)
        rows.append({"value": v, "phase_re": None if ph is None else ph.real,
                     "phase_im": None if ph is None else ph.imag,
                     "error": float(err)})
    xs = [1.0 / v if pname in FINER_WHEN_SMALLER else float(v) for v in values]
    errs = [r["error"] for r in rows]
    slope = fit_slope(xs, errs) if len(values) > 1 and min(errs) > 0 else float("nan")
    return SweepResult(check_name, pname, rows, slope)
