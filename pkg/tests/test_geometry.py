from fractions import Fraction

import pytest

from composite_dynamics.geometry import (
    STANDARD_FAMILY,
    CarlemanFamily,
    Region,
    center,
    contains,
    min_separation,
    verify_structure,
)

from oracles import sampled_layout_gap

HALF_PLANE = CarlemanFamily(g_shape="half_plane")
OVERLAP = CarlemanFamily(extra_disks=((7, 1),))


@pytest.mark.parametrize("region, c", [(Region.base(), 2), (Region.g(1), 6), (Region.b(1), -6), (Region.g(10), 42), (Region.b(3), -14)])
def test_centers(region, c):
    assert center(region) == c


def test_center_of_line_rejected():
    with pytest.raises(ValueError):
        center(Region("L", 1))


@pytest.mark.parametrize(
    "region, z, inside",
    [
        (Region.g(1), 6 + 0j, True),
        (Region.g(1), 7 + 0j, True),
        (Region.g(1), 6.5 + 0.9j, False),
        (Region.g(1), 6 + 50j, True),
        (Region.b(2), -10 - 3j, True),
        (Region.base(), 2 + 0j, True),
        (Region.base(), 8 + 123j, True),
        (Region.base(), 3.5 + 0j, False),
        (Region("L", 2), 8 - 4j, True),
        (Region("M", 1), 4 + 0j, False),
    ],
)
def test_contains(region, z, inside):
    assert contains(region, z) is inside


@pytest.mark.parametrize(
    "text, region",
    [
        ("BASE", Region.base()),
        ("G0", Region.base()),
        ("G3", Region.g(3)),
        ("B[4]", Region.b(4)),
        ("G(0,2)", Region.g(2)),
        ("B[1,3]", Region("B", 8)),
    ],
)
def test_parse(text, region):
    assert Region.parse(text) == region


def test_grid_label():
    assert Region.g(9).label("grid") == "G(2,2)"
    assert Region.g(9).label("linear") == "G9"


def test_min_separation_is_exactly_one():
    gap = min_separation(STANDARD_FAMILY, 10)
    assert gap == 1 and isinstance(gap, Fraction)


def test_min_separation_matches_sampling_oracle():
    # sampled boundaries can only over-estimate the true gap, and stay close
    sampled = sampled_layout_gap(3)
    assert min_separation(STANDARD_FAMILY, 3) <= sampled + 1e-12
    assert sampled == pytest.approx(1.0, abs=0.01)


def test_wider_disks_touch():
    assert min_separation(CarlemanFamily(radius=2), 4) <= 0


def test_standard_family_witnessed():
    cert = verify_structure(STANDARD_FAMILY, 30.0, 0.1)
    assert cert.status == "WITNESSED"
    assert cert.condition_i and cert.condition_ii and cert.condition_iii
    assert cert.min_gap == 1
    assert cert.to_dict()["min_gap"] == "1"


def test_half_plane_fixture_fails_boundedness():
    cert = verify_structure(HALF_PLANE, 30.0, 0.1)
    assert cert.status == "FAILED"
    assert not cert.condition_iii


def test_overlap_fixture_fails_disjointness():
    cert = verify_structure(OVERLAP, 30.0, 0.1)
    assert cert.status == "FAILED"
    assert not cert.disjoint
    assert cert.min_gap < 0


def test_window_too_small():
    with pytest.raises(ValueError):
        verify_structure(STANDARD_FAMILY, 10.0)
