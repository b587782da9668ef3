import numpy as np
import pytest
from scipy.special import sph_harm_y

from rp2spin import connection as conn
from rp2spin import twospin as ts
from rp2spin.geometry import DiscretePath, build_path, haar_sample, random_sphere_points, rotate
from rp2spin.scalar import grassmann_projector
from conftest import load_complex_matrix

NORTH = np.array([0.0, 0.0, 1.0])


def wick_inner(word_a, word_b):
    # <0| a_i a_j a_k^dag a_l^dag |0> for bosons
    (i, j), (k, l) = word_a, word_b
    return float(i == k and j == l) + float(i == l and j == k)


def test_gram_matrix_by_wick_contraction():
    G = np.zeros((10, 10))
    for a, (_, terms_a) in enumerate(ts.TABLE):
        for b, (_, terms_b) in enumerate(ts.TABLE):
            G[a, b] = sum(ca * cb * wick_inner(wa, wb)
                          for ca, wa in terms_a for cb, wb in terms_b)
    assert np.max(np.abs(G - np.eye(10))) < 1e-15
    B = ts.schwinger_basis()
    assert np.max(np.abs(B.conj().T @ B - G)) < 1e-15


def test_fock_sector_count():
    assert len(ts.fock_sector()) == 10
    assert len(ts.fock_sector(2, 1)) == 2


def test_w_matches_golden(w_golden):
    for case in w_golden:
        th, ph = float(case["theta"]), float(case["phi"])
        W = ts.w_matrix(th, ph)
        assert np.max(np.abs(W - load_complex_matrix(case["W"]))) < 1e-15


def test_w_at_north_pole_is_identity():
    assert np.array_equal(ts.w_matrix(0.0, 1.3), np.eye(3))


def test_w_row_is_scaled_harmonic(rng):
    # w_mu = sqrt(4 pi / 3) (-1)^mu Y_{1 mu}, Condon-Shortley phase
    for th, ph in zip(rng.uniform(0, np.pi, 30), rng.uniform(0, 2 * np.pi, 30)):
        row = ts.w_matrix(th, ph)[1]
        ref = [np.sqrt(4 * np.pi / 3) * (-1) ** mu * sph_harm_y(1, mu, th, ph)
               for mu in (-1, 0, 1)]
        assert np.max(np.abs(row - ref)) < 1e-14


def test_w_row_cartesian_agrees(rng):
    for x in random_sphere_points(rng, 50):
        assert np.max(np.abs(ts.w_row(x) - ts.w_row_cartesian(x))) < 1e-14
    assert np.array_equal(ts.spherical_angles([0.0, 0.0, -1.0]), (np.pi, 0.0))


def test_triplet_projector_matches_golden(w_golden):
    for case in w_golden:
        th, ph = float(case["theta"]), float(case["phi"])
        x = [np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)]
        want = load_complex_matrix(case["P_triplet"])
        assert np.max(np.abs(ts.triplet_projector(x) - want)) < 1e-14


def test_triplet_intertwiner_global(rng):
    B = ts.triplet_intertwiner()
    assert np.max(np.abs(B.conj().T @ B - np.eye(3))) < 1e-13
    for x in random_sphere_points(rng, 100):
        d = B.conj().T @ grassmann_projector(x) @ B - ts.triplet_projector(x)
        assert np.max(np.abs(d)) < 1e-12


def test_transported_basis_orthonormal_and_labels(rng):
    for x in random_sphere_points(rng, 20):
        b = ts.transported_basis(x)
        V = b.in_fock_space()
        assert np.max(np.abs(V.conj().T @ V - np.eye(4))) < 1e-14
        assert np.array_equal(b.vector(0, 0), np.eye(10)[9])
    pole = ts.transported_basis(NORTH)
    assert np.array_equal(pole.vector(1, 1), np.eye(10)[ts.table_index(1, 1, 0)])


def test_exchange_signs(rng):
    for x in random_sphere_points(rng, 50):
        s, res = ts.exchange_signs(x)
        assert res < 1e-15
        assert np.max(np.abs(s - [-1, -1, -1, 1])) < 1e-15


def test_cg_transform():
    C = ts.cg_transform()
    assert np.allclose(C @ ts.cg_transform(inverse=True), np.eye(4))
    # singlet row (up-down - down-up)/sqrt2, antisymmetric under exchange
    P = ts.exchange_permutation()
    assert np.allclose(C @ P @ C.T, np.diag([1, 1, 1, -1]))


def test_pt_condition_is_second_order(rng):
    def curve(h):
        t = np.arange(0.0, 1.0 + h / 2, h)
        a = np.pi * (t + 0.5 * t * t)
        return DiscretePath(np.stack([np.sin(a), 0 * a, np.cos(a)], axis=1))
    r1 = ts.pt_condition_residual(curve(1e-3), 1e-3)
    r2 = ts.pt_condition_residual(curve(5e-4), 5e-4)
    assert r1 < 1e-4 and 3.8 < r1 / r2 < 4.2
    with pytest.raises(ValueError):
        ts.pt_condition_residual(DiscretePath([NORTH, NORTH]), 1e-3)


def test_two_spin_action_maps_frames(rng):
    for _ in range(20):
        g = haar_sample(rng)
        x = random_sphere_points(rng, 1)[0]
        D = ts.two_spin_action(g)
        assert np.max(np.abs(D.conj().T @ D - np.eye(10))) < 1e-13
        M = ts.frame(rotate(g, x)).conj().T @ D @ ts.frame(x)
        want = np.zeros((4, 4), dtype=complex)
        want[:3, :3] = ts.spin_rotation(g)
        want[3, 3] = 1
        assert np.max(np.abs(M - want)) < 1e-13


def test_spin_operator_reference_and_algebra(rng):
    assert np.allclose(ts.spin_operator_field(3, NORTH), np.diag([1, 0, -1, 0]))
    x = random_sphere_points(rng, 1)[0]
    S = [ts.spin_operator_field(a, x) for a in (1, 2, 3)]
    assert np.allclose(S[0] @ S[1] - S[1] @ S[0], 1j * S[2], atol=1e-13)
    assert np.allclose(sum(s @ s for s in S), np.diag([2, 2, 2, 0]), atol=1e-13)


def test_local_spin_operator_matches_reference(rng):
    f = ts.two_spin_field()
    x = random_sphere_points(rng, 1)[0]
    for axis in (1, 2, 3):
        est = conn.local_spin_operator(f, axis, x)
        assert np.max(np.abs(est - ts.spin_operator_field(axis, x))) < 5e-4


def test_two_spin_holonomy():
    loop = build_path("half-great-circle", {"start": NORTH}, 500)
    H = conn.holonomy_matrix(loop, ts.two_spin_field())
    assert np.allclose(H, np.diag([-1, -1, -1, 1]), atol=1e-12)
    assert abs(conn.holonomy(loop, ts.triplet_field()) + 1) < 1e-12
