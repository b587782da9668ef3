import numpy as np
import pytest

from rp2spin.errors import PairingError, ParityError
from rp2spin.sections import SampledSection, pair_permutation, paired_points


def test_paired_points_structure(rng):
    pts = paired_points(rng, 5)
    assert pts.shape == (10, 3)
    assert np.array_equal(pts[1::2], -pts[0::2])
    assert np.array_equal(pair_permutation(6), [1, 0, 3, 2, 5, 4])


def test_pairing_is_enforced(rng):
    pts = paired_points(rng, 3)
    with pytest.raises(PairingError):
        SampledSection(pts[:5], np.zeros(5))
    bad = pts.copy()
    bad[1] = bad[0]
    with pytest.raises(PairingError):
        SampledSection(bad, np.zeros(6))
    with pytest.raises(PairingError):
        SampledSection(np.zeros((0, 3)), np.zeros(0))


def test_values_are_read_only(rng):
    s = SampledSection(paired_points(rng, 2), np.ones(4))
    with pytest.raises(ValueError):
        s.values[0, 0] = 2.0


def test_parity_classification(rng):
    pts = paired_points(rng, 20)
    even = SampledSection.from_function(pts, lambda x: x[:, 0] * x[:, 1])
    odd = SampledSection.from_function(pts, lambda x: x[:, 2] + 0j)
    assert even.is_even() and not even.is_odd()
    assert odd.is_odd() and not odd.is_even()
    with pytest.raises(ParityError):
        odd.require_parity("even")


def test_antipodal_values(rng):
    pts = paired_points(rng, 3)
    s = SampledSection.from_function(pts, lambda x: x)
    assert np.array_equal(s.antipodal_values().real, -pts)


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip_is_bit_exact(rng, fmt, tmp_path):
    pts = paired_points(rng, 8)
    vals = rng.standard_normal((16, 2)) + 1j * rng.standard_normal((16, 2))
    s = SampledSection(pts, vals)
    path = tmp_path / f"s.{fmt}"
    getattr(s, f"to_{fmt}")(path)
    back = getattr(SampledSection, f"from_{fmt}")(path)
    assert np.array_equal(back.points, s.points)
    assert np.array_equal(back.values, s.values)
    text = getattr(s, f"to_{fmt}")()
    assert np.array_equal(getattr(SampledSection, f"from_{fmt}")(text).values, s.values)


def test_csv_header(rng):
    s = SampledSection(paired_points(rng, 1), np.zeros((2, 2)))
    assert s.to_csv().splitlines()[0] == "index,x1,x2,x3,re0,im0,re1,im1"


def test_missing_index_rejected(rng):
    s = SampledSection(paired_points(rng, 2), np.zeros(4))
    lines = s.to_csv().splitlines()
    with pytest.raises(PairingError):
        SampledSection.from_csv("\n".join(lines[:2] + lines[3:]) + "\n")
