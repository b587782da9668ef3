import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from rp2spin.errors import AntipodalAmbiguityError, Rp2SpinError
from rp2spin.geometry import (DiscretePath, ProjectivePoint, SpherePoint, SU2Element,
                              antipode, axis_vector, build_path, canonical_rep,
                              canonicalize, haar_sample, one_parameter_subgroup,
                              orthonormal_tangent, random_sphere_points, rotate,
                              wigner_d1)
from rp2spin.scalar import psi


def test_sphere_point_validation():
    SpherePoint(0.0, 0.0, 1.0)
    with pytest.raises(Rp2SpinError):
        SpherePoint(1.0, 1.0, 0.0)
    p = SpherePoint.from_array([3.0, 0.0, 4.0], normalize=True)
    assert np.allclose(p.array, [0.6, 0.0, 0.8])
    assert (-p).x3 == -0.8
    assert antipode(p) == -p


def test_canonical_rep_examples():
    assert np.array_equal(canonical_rep([0.0, 0.0, -1.0]), [0.0, 0.0, 1.0])
    assert np.array_equal(canonical_rep([0.6, -0.8, 0.0]), [-0.6, 0.8, 0.0])
    assert np.array_equal(canonical_rep([-1.0, 0.0, 0.0]), [1.0, 0.0, 0.0])
    x = np.array([0.36, 0.48, -0.8])
    assert np.array_equal(canonical_rep(x), canonical_rep(-x))


def test_projective_point_rejects_noncanonical():
    pp = canonicalize([0.0, 0.0, -1.0])
    assert pp.rep == SpherePoint(0.0, 0.0, 1.0)
    with pytest.raises(Rp2SpinError):
        ProjectivePoint(SpherePoint(0.0, 0.0, -1.0))
    a, b = pp.lifts()
    assert a == -b


def test_su2_validation_and_identity():
    with pytest.raises(Rp2SpinError):
        SU2Element(1.0, 1.0, 0.0, 0.0)
    e = SU2Element.identity()
    assert np.array_equal(e.rotation_matrix(), np.eye(3))


def test_rotation_matrix_matches_scipy(rng):
    # scipy quaternions are scalar-last
    for _ in range(50):
        g = haar_sample(rng)
        ref = Rotation.from_quat([g.q1, g.q2, g.q3, g.q0]).as_matrix()
        assert np.max(np.abs(g.rotation_matrix() - ref)) < 1e-14


def test_product_is_composition(rng):
    for _ in range(50):
        g, h = haar_sample(rng), haar_sample(rng)
        assert np.allclose((g * h).rotation_matrix(),
                           g.rotation_matrix() @ h.rotation_matrix(), atol=1e-14)
        assert np.allclose((g * g.inverse()).quat, [1, 0, 0, 0], atol=1e-15)


def test_axis_angle_right_handed():
    g = SU2Element.from_axis_angle([0, 0, 1], np.pi / 2)
    assert np.allclose(rotate(g, [1.0, 0.0, 0.0]), [0.0, 1.0, 0.0], atol=1e-15)
    n, a = g.axis_angle()
    assert np.allclose(n, [0, 0, 1]) and np.isclose(a, np.pi / 2)


def test_rotate_batch_agrees_with_single(rng):
    g = haar_sample(rng)
    x = random_sphere_points(rng, 7)
    assert np.allclose(rotate(g, x), np.array([rotate(g, xi) for xi in x]), atol=1e-15)


def test_wigner_e3_closed_form():
    # in this basis (m = +1, 0, -1 as psi's components) rotation by a about e3
    # multiplies component m by exp(i m a)
    a = 0.73
    D = wigner_d1(SU2Element.from_axis_angle([0, 0, 1], a))
    assert np.allclose(D, np.diag([np.exp(1j * a), 1.0, np.exp(-1j * a)]), atol=1e-15)


def test_wigner_brute_force_over_angles(rng):
    # brute-force oracle: D psi(x) = psi(g x) for many x fixes D uniquely
    xs = random_sphere_points(rng, 20)
    for alpha in np.linspace(-np.pi, np.pi, 13):
        axis = random_sphere_points(rng, 1)[0]
        g = SU2Element.from_axis_angle(axis, alpha)
        lhs = psi(xs) @ wigner_d1(g).T
        rhs = psi(rotate(g, xs))
        assert np.max(np.abs(lhs - rhs)) < 1e-13


def test_wigner_double_cover_sign():
    g = SU2Element.from_axis_angle([1, 2, 3], 0.4)
    minus = SU2Element.from_array(-g.quat)
    assert np.allclose(wigner_d1(g), wigner_d1(minus), atol=1e-14)


def test_haar_seed_is_deterministic():
    assert haar_sample(5) == haar_sample(5)


def test_axis_vector():
    assert np.array_equal(axis_vector(2), [0, 1, 0])
    with pytest.raises(Rp2SpinError):
        axis_vector(0)
    assert np.allclose(axis_vector([0, 0, 2]), [0, 0, 1])


def test_orthonormal_tangent(rng):
    x = random_sphere_points(rng, 1)[0]
    t = orthonormal_tangent(x)
    assert abs(t @ x) < 1e-15 and abs(np.linalg.norm(t) - 1) < 1e-15
    with pytest.raises(Rp2SpinError):
        orthonormal_tangent(x, x)


def test_discrete_path_validation():
    with pytest.raises(Rp2SpinError):
        DiscretePath([[0, 0, 1]])
    with pytest.raises(Rp2SpinError):
        DiscretePath([[0, 0, 1], [0, 0, 2]])
    with pytest.raises(Rp2SpinError):
        DiscretePath([[0, 0, 1], [1, 0, 0]], max_step=0.5)
    with pytest.raises(Rp2SpinError):
        DiscretePath([[0, 0, 1], [1, 0, 0]], closed_in_projective=True)


def test_great_circle_path_and_antipodal_error():
    p = build_path("great-circle", {"start": [1, 0, 0], "end": [0, 1, 0]}, 10)
    assert p.n_steps == 10
    assert np.allclose(p.end, [0, 1, 0])
    steps = np.linalg.norm(np.diff(p.points, axis=0), axis=1)
    assert np.allclose(steps, steps[0])
    with pytest.raises(AntipodalAmbiguityError):
        build_path("great-circle", {"start": [0, 0, 1], "end": [0, 0, -1]}, 10)


def test_half_great_circle_closes_in_projective():
    p = build_path("half-great-circle", {"start": [0, 0, 1]}, 100)
    assert p.closed_in_projective
    assert np.array_equal(p.end, -p.start)


def test_small_circle_radius_and_orientation():
    p = build_path("small-circle", {"axis": [0, 0, 1], "rho": 0.2}, 400)
    assert np.allclose(p.points[:, 2], np.cos(0.2))
    # right-handed about +e3: angular momentum along +e3
    L = np.cross(p.points[:-1], p.points[1:]).sum(axis=0)
    assert L[2] > 0


def test_orbit_path_closes_after_full_turn():
    p = build_path("orbit", {"axis": [1, 1, 0], "angle": 2 * np.pi, "x0": [0, 0, 1]}, 50)
    assert p.closed_in_projective


def test_unknown_kind_and_min_steps():
    with pytest.raises(Rp2SpinError):
        build_path("spiral", {}, 10)
    with pytest.raises(Rp2SpinError):
        build_path("half-great-circle", {"start": [0, 0, 1]}, 1)


def test_reverse_and_concatenate():
    a = build_path("great-circle", {"start": [1, 0, 0], "end": [0, 1, 0]}, 4)
    b = build_path("great-circle", {"start": [0, 1, 0], "end": [-1, 0, 0]}, 4)
    ab = a.then(b)
    assert ab.n_steps == 8 and ab.closed_in_projective
    assert np.array_equal(a.reversed().points, a.points[::-1])
    with pytest.raises(Rp2SpinError):
        b.then(b)


def test_one_parameter_subgroup_reparam():
    g = one_parameter_subgroup([0, 0, 1], np.pi, lambda t: t * t)
    assert np.allclose(g(0.0).quat, [1, 0, 0, 0])
    assert np.isclose(g(0.5).axis_angle()[1], np.pi / 4)
