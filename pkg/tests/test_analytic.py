import math

import pytest

from composite_dynamics.analytic import (
    LogTarget,
    UnrealizableRule,
    check_rule_realizability,
    derive_tolerances,
    modulus_radius,
    sampled_crossing,
    sampled_deviation,
    sup_image_deviation,
)
from composite_dynamics.dsl import parse_spec
from composite_dynamics.geometry import Region
from composite_dynamics.theorems import THEOREM_IDS, builtin

from oracles import circle_max_deviation, crossing_radius

# crossings of deviation 1/2 found by the cmath circle-sampling oracle
FROZEN_CROSSINGS = {2: 0.2231435512949247, -6: 0.08004270764649846, 402: 0.0012430082133505493}


@pytest.mark.parametrize("c, expected", sorted(FROZEN_CROSSINGS.items()))
def test_radius_matches_frozen_oracle(c, expected):
    assert modulus_radius(abs(c)) == pytest.approx(expected, abs=1e-6)


def test_radius_at_two():
    assert modulus_radius(2) == pytest.approx(0.22314355131, abs=1e-11)


def test_oracle_reproduces_frozen_value():
    assert crossing_radius(-6, samples=4000) == pytest.approx(FROZEN_CROSSINGS[-6], abs=1e-6)


@pytest.mark.parametrize("c", [2, 6, -6, 10, -42, 402])
def test_sup_at_radius_is_half(c):
    assert abs(sup_image_deviation(abs(c), modulus_radius(abs(c))) - 0.5) <= 1e-12


@pytest.mark.parametrize("c, r", [(6, 0.05), (-10, 0.03), (2, 0.2)])
def test_sup_bounds_samples(c, r):
    bound = sup_image_deviation(abs(c), r)
    sampled = circle_max_deviation(c, r, 4000)
    assert sampled <= bound + 1e-12
    assert sampled == pytest.approx(bound, rel=1e-6)


def test_library_sampler_agrees_with_oracle():
    assert sampled_deviation(-10, 0.03, 4000) == pytest.approx(circle_max_deviation(-10, 0.03, 4000), rel=1e-12)
    assert sampled_crossing(2, samples=4000) == pytest.approx(modulus_radius(2), abs=1e-6)


def test_small_center_rejected():
    with pytest.raises(ValueError):
        modulus_radius(1)
    with pytest.raises(ValueError):
        LogTarget(0)


def test_branch_for_negative_center():
    w0 = LogTarget(-6).w0
    assert w0.imag == pytest.approx(math.pi)
    z = complex(math.e ** w0.real * math.cos(w0.imag), math.e ** w0.real * math.sin(w0.imag))
    assert abs(z - (-6)) < 1e-12


def test_matching_rule_is_realizable():
    rep = check_rule_realizability(Region.g(1), Region.b(1), LogTarget(-6))
    assert rep.realizable and rep.margin == pytest.approx(0.5)


def test_wrong_center_is_not():
    rep = check_rule_realizability(Region.g(1), Region.b(1), LogTarget(-10))
    assert not rep.center_matches and not rep.half_disk_inside and not rep.realizable


def test_line_target_rejected():
    with pytest.raises(ValueError):
        check_rule_realizability(Region.g(1), Region("L", 1), LogTarget(4))


@pytest.mark.parametrize("tid", THEOREM_IDS)
def test_builtin_rules_realizable(tid):
    for spec in builtin(tid):
        eps = derive_tolerances(spec, 8 if spec.mode == "grid" else 50)
        assert all(v > 0 for _, v in eps.items())


def test_tolerance_values():
    f, _ = builtin("2.5")
    eps = derive_tolerances(f, 5)
    assert eps[Region.g(1)] == modulus_radius(6)
    assert eps[Region.base()] == modulus_radius(2)


def test_misdisplayed_centre_detected():
    f, _ = builtin("2.5")
    from composite_dynamics.schedule import TransitionSpec

    shown = list(f.displayed)
    shown[1] = lambda v: -10  # G[1] -> B[1] written with B2's centre
    broken = TransitionSpec("broken", f.mode, f.rules, tuple(shown))
    with pytest.raises(UnrealizableRule) as info:
        derive_tolerances(broken, 5)
    assert info.value.report.target_center == -6


def test_user_spec_uses_region_centres():
    spec = parse_spec("mode = linear\n[h]\nBASE -> BASE\nG[k] -> B[k]\nB[k] -> G[k+1]\n")
    assert len(derive_tolerances(spec, 10)) == 21
