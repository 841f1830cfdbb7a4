from pathlib import Path

import pytest

from composite_dynamics.dsl import parse_file, parse_spec
from composite_dynamics.geometry import Region
from composite_dynamics.schedule import (
    Abs,
    Exact,
    Free,
    Guard,
    Rule,
    ScheduleError,
    TransitionSpec,
    Var,
    compose,
    identity_spec,
)

FIXTURES = Path(__file__).parent / "fixtures"

PAIR = (FIXTURES / "pair_2_5.sched").read_text()


def load(name):
    return (FIXTURES / name).read_text()


def test_example_parses_into_seven_rules():
    f = parse_file(PAIR)["f"]
    assert f.mode == "linear"
    assert len(f.rules) == 7
    assert f.rules[5] == Rule("B", (Guard("k", 3),), "B", (Var("k", 1),), 8, 1)


def test_round_trip_text():
    f = parse_file(PAIR)["f"]
    again = parse_spec(f.to_text())
    assert again.rules == tuple(Rule(r.family, r.pattern, r.target_family, r.target, again.rules[i].line, 1)
                                for i, r in enumerate(f.rules))


def test_apply_follows_rules():
    f = parse_file(PAIR)["f"]
    assert [f(Region.g(1)), f(Region.b(1)), f(Region.g(2)), f(Region.b(2))] == [
        Region.b(1), Region.g(2), Region.b(2), Region.g(1)]
    assert f(Region.g(7)) == Region.g(8)
    assert f(Region.base()) == Region.base()
    # lines are part of BASE
    assert f(Region("L", 3)) == Region.base()


def test_max_constant():
    f = parse_file(PAIR)["f"]
    assert f.max_constant == 3


@pytest.mark.parametrize(
    "fixture, code, witness",
    [("gap.sched", "E_GAP", "G2"), ("overlap.sched", "E_OVERLAP", "G2"), ("domain.sched", "E_DOMAIN", "B1")],
)
def test_malformed_fixtures(fixture, code, witness):
    with pytest.raises(ScheduleError) as info:
        parse_file(load(fixture))
    assert info.value.code == code
    assert info.value.witness == witness


def test_syntax_error_position():
    with pytest.raises(ScheduleError) as info:
        parse_file(load("syntax.sched"))
    err = info.value
    assert err.code == "E_SYNTAX" and err.line == 4 and err.col == 7


@pytest.mark.parametrize(
    "text",
    [
        "",
        "[f]\nBASE -> BASE\n",
        "mode = spiral\n[f]\nBASE -> BASE\n",
        "mode = linear\nBASE -> BASE\n",
        "mode = linear\n[f]\n",
        "mode = linear\n[f]\nBASE -> BASE\n[f]\nBASE -> BASE\n",
        "mode = linear\n[f]\nG[k] -> G[k+]\n",
        "mode = linear\n[f]\nG[k] -> G[k*2]\n",
        "mode = linear\n[f]\nG[1,2] -> G[1]\n",
        "mode = grid\n[f]\nG[q] -> G[q]\n",
        "mode = linear\n[f]\nL[1] -> G[1]\n",
    ],
)
def test_syntax_errors(text):
    with pytest.raises(ScheduleError) as info:
        parse_file(text)
    assert info.value.code == "E_SYNTAX"


def test_missing_base_is_gap():
    with pytest.raises(ScheduleError) as info:
        parse_file("mode = linear\n[f]\nG[k] -> G[k]\nB[k] -> B[k]\n")
    assert info.value.code == "E_GAP" and info.value.witness == "BASE"


def test_grid_gap_witness():
    text = "mode = grid\n[f]\nBASE -> BASE\nG[0,q] -> G[0,q]\nG[p>=2,q] -> G[p,q]\nB[p,q] -> B[p,q]\n"
    with pytest.raises(ScheduleError) as info:
        parse_file(text)
    assert info.value.code == "E_GAP" and info.value.witness == "G(1,1)"


def test_grid_overlap_witness():
    text = "mode = grid\n[f]\nBASE -> BASE\nG[p,q>=2] -> G[p,q]\nG[1,q] -> B[1,q]\nG[p,1] -> G[p,1]\nB[p,q] -> B[p,q]\n"
    with pytest.raises(ScheduleError) as info:
        parse_file(text)
    assert info.value.code == "E_OVERLAP" and info.value.witness == "G(1,2)"


@pytest.mark.parametrize(
    "rule",
    [
        "G[k] -> G[j]",  # unbound variable
        "G[k] -> G[0]",  # absolute target below the domain
        "G[k>=0] -> G[k]",  # guard admits 0
    ],
)
def test_domain_errors(rule):
    text = f"mode = linear\n[f]\nBASE -> BASE\n{rule}\nB[k] -> B[k]\n"
    with pytest.raises(ScheduleError) as info:
        parse_file(text)
    assert info.value.code == "E_DOMAIN"


def test_cross_slot_variable_rejected():
    with pytest.raises(ScheduleError) as info:
        parse_file("mode = grid\n[f]\nBASE -> BASE\nG[p,q] -> G[q,p]\nB[p,q] -> B[p,q]\n")
    assert info.value.code == "E_DOMAIN"


def test_guard_offset_domain_ok():
    spec = parse_spec("mode = linear\n[f]\nBASE -> BASE\nG[k>=2] -> G[k-1]\nG[1] -> B[1]\nB[k] -> B[k]\n")
    assert spec(Region.g(2)) == Region.g(1)


def test_compose_order_and_mode_mismatch():
    sf = parse_file(PAIR)
    f, g = sf["f"], sf["g"]
    gf = compose(f, g)
    assert gf(Region.g(1)) == g(f(Region.g(1))) == Region.b(2)
    assert compose(compose(f, g), f).steps == compose(f, compose(g, f)).steps
    with pytest.raises(ScheduleError) as info:
        compose(f, identity_spec("grid"))
    assert info.value.code == "E_MODE_MISMATCH"


def test_identity():
    ident = identity_spec("grid")
    assert ident(Region.g(17)) == Region.g(17)


def test_direct_construction_validates():
    with pytest.raises(ScheduleError):
        TransitionSpec("x", "linear", (Rule("BASE", (), "BASE", ()), Rule("G", (Exact(1),), "G", (Abs(1),))))
    ok = TransitionSpec("x", "linear", (Rule("BASE", (), "BASE", ()), Rule("G", (Free("k"),), "G", (Var("k"),)),
                                        Rule("B", (Free("k"),), "G", (Var("k", 2),))))
    assert ok(Region.b(1)) == Region.g(3)


def test_error_to_dict():
    err = ScheduleError("E_GAP", "no rule", 3, 1, "G2")
    assert err.to_dict() == {"code": "E_GAP", "message": "no rule", "line": 3, "col": 1, "witness": "G2"}
