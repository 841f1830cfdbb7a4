import pytest
from hypothesis import given, settings, strategies as st

from composite_dynamics.dsl import parse_spec
from composite_dynamics.dynamics import (
    ClassificationError,
    Periodic,
    Preperiodic,
    Wandering,
    brute_force_classify,
    classify,
    classify_table,
    maps_for,
    orbit,
    probe_regions,
    replay_certificate,
    verify_claims,
    wandering_transfer_check,
)
from composite_dynamics.geometry import Region
from composite_dynamics.theorems import THEOREM_IDS, aliases, builtin, claims, resolve_theorem

from oracles import simulate

G, B, BASE = Region.g, Region.b, Region.base()


def maps(tid):
    return maps_for(*builtin(tid))


def test_orbit_examples():
    f, _ = builtin("2.5")
    assert orbit(f, G(1), 4) == [G(1), B(1), G(2), B(2), G(1)]
    gf = maps("2.1")["gf"]
    assert orbit(gf, Region.grid("G", 0, 2), 2) == [Region.grid("G", 0, 2)] * 3
    assert orbit(f, BASE, 3) == [BASE] * 4
    with pytest.raises(ValueError):
        orbit(f, BASE, -1)


@pytest.mark.parametrize(
    "tid, m, region, expected",
    [
        ("2.5", "f", G(1), Periodic(4)),
        ("2.5", "gf", G(1), Preperiodic(1, 2)),
        ("2.9", "gf", B(7), Periodic(1)),
        ("2.1", "f", BASE, Periodic(1)),
        ("2.13", "f", G(5), Preperiodic(1, 2)),
    ],
)
def test_classify_examples(tid, m, region, expected):
    assert classify(maps(tid)[m], region) == expected


def test_grid_wandering_example():
    result = classify(builtin("2.1")[0], Region.grid("G", 1, 1))
    assert isinstance(result, Wandering)
    assert result.certificate.net_shift > 0


def test_table_examples():
    f, g = builtin("2.11")
    (row,) = classify_table(f, g, [B(4)])
    assert [row.kind(m) for m in ("f", "g", "gf", "fg")] == ["preperiodic", "wandering", "periodic", "wandering"]
    rows = classify_table(*builtin("2.13"), [B(2), B(1)])
    assert [r.region for r in rows] == [B(1), B(2)]
    assert all(r.kind(m) == "periodic" for r in rows for m in ("f", "g", "gf", "fg"))
    (row,) = classify_table(*builtin("2.1"), [BASE])
    assert all(row.kinds[m] == Periodic(1) for m in ("f", "g", "gf", "fg"))


def _linear_index(region):
    return 0 if region.family == "BASE" else region.index


@pytest.mark.parametrize("tid", THEOREM_IDS)
def test_soundness_on_probe(tid):
    ms = maps(tid)
    probe = probe_regions(builtin(tid)[0].mode, 12, 4)
    for name, m in ms.items():
        for r in probe:
            result = classify(m, r)
            if isinstance(result, Periodic):
                path = orbit(m, r, result.period)
                assert path[-1] == r and r not in path[1:-1]
            elif isinstance(result, Preperiodic):
                path = orbit(m, r, result.tail + result.period)
                assert path[result.tail] == path[-1]
                assert len(set(path[:-1])) == len(path) - 1
            else:
                cert = result.certificate
                assert cert.net_shift > 0
                passes = replay_certificate(m, cert, 100)
                idx = [_linear_index(p) for p in passes]
                assert all(a < b for a, b in zip(idx, idx[1:]))
                full = orbit(m, r, len(cert.transient) + 100 * len(cert.cycle))
                assert len(set(full)) == len(full)


@pytest.mark.parametrize("tid", ["2.5", "2.9", "2.15"])
def test_linear_cycles_use_guard_rules(tid):
    ms = maps(tid)
    for name, m in ms.items():
        for r in probe_regions("linear", 10):
            result = classify(m, r)
            if isinstance(result, Wandering):
                for edge in result.certificate.guard_cycle:
                    for label in edge.rules:
                        assert ">=" in label or "[k]" in label


def test_replay_rejects_tampered_certificate():
    f, _ = builtin("2.5")
    cert = classify(f, G(5)).certificate
    from dataclasses import replace

    bad = replace(cert, net_shift_vector=(2,))
    with pytest.raises(AssertionError):
        replay_certificate(f, bad, 3)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(THEOREM_IDS), st.sampled_from(["G", "B"]), st.integers(1, 30), st.integers(0, 12))
def test_alternation(tid, fam, k, n):
    f, g = builtin(tid)
    ms = maps_for(f, g)
    r = Region(fam, k)
    seq = [r]
    for i in range(2 * n):
        seq.append((f if i % 2 == 0 else g)(seq[-1]))
    assert orbit(ms["gf"], r, n) == seq[::2]


@pytest.mark.parametrize("tid", ["2.5", "2.11", "2.15", "2.3"])
def test_agrees_with_plain_simulation(tid):
    # cross-check against a tuple-level simulation that uses only apply()
    ms = maps(tid)
    for name, m in ms.items():
        for r in probe_regions(builtin(tid)[0].mode, 10, 3):
            result = classify(m, r)
            path = simulate(m.apply, r, 400)
            first = {}
            for i, x in enumerate(path):
                if x in first:
                    tail, period = first[x], i - first[x]
                    break
                first[x] = i
            else:
                assert isinstance(result, Wandering)
                continue
            expected = Periodic(period) if tail == 0 else Preperiodic(tail, period)
            assert result == expected


def test_brute_force_oracle_kinds():
    ms = maps("2.5")
    assert brute_force_classify(ms["f"], G(1)) == ("periodic", 4)
    assert brute_force_classify(ms["gf"], G(1)) == ("preperiodic", 1, 2)
    assert brute_force_classify(ms["f"], G(9)) == ("wandering",)


def test_brute_force_inconclusive_when_index_not_increasing():
    spec = parse_spec("mode = linear\n[h]\nBASE -> BASE\nG[k] -> B[k]\nB[k] -> G[k+1]\n")
    assert brute_force_classify(spec, G(1), steps=50, window=10) == ("inconclusive",)


def test_decreasing_then_periodic_orbit():
    spec = parse_spec(
        "mode = linear\n[h]\nBASE -> BASE\nG[1] -> B[1]\nG[k>=2] -> G[k-1]\nB[1] -> G[1]\nB[k>=2] -> B[k+1]\n"
    )
    assert classify(spec, G(500)) == Preperiodic(499, 2)
    assert isinstance(classify(spec, B(2)), Wandering)


def test_max_steps_guard():
    spec = parse_spec("mode = linear\n[h]\nBASE -> BASE\nG[1] -> B[1]\nG[k>=2] -> G[k-1]\nB[k] -> B[k]\n")
    with pytest.raises(ClassificationError):
        classify(spec, G(10_000), max_steps=100)


def test_grid_column_wandering_certificate():
    f, g = builtin("2.2")
    cert = classify(maps_for(f, g)["gf"], Region.grid("G", 0, 1)).certificate
    assert cert.net_shift_vector[0] == 0 and cert.net_shift_vector[1] > 0


@pytest.mark.parametrize("tid", ["2.1", "2.5", "2.13"])
def test_verify_claims_examples(tid):
    report = verify_claims(tid)
    assert report.passed
    sources = {c.source for c in report.checks}
    assert "theorem" in sources


def test_verify_covers_every_claim_row():
    for tid in THEOREM_IDS:
        report = verify_claims(tid)
        want = {(c.source, c.pattern, m, k) for c in claims(tid) for m, k in c.expected().items()}
        assert set(report.assertions()) == want


def test_transfer_examples():
    f, g = builtin("2.2")
    ms = maps_for(f, g)
    r = Region.grid("G", 0, 1)
    assert classify(ms["gf"], r).kind == "wandering"
    assert f(r) == Region.grid("B", 0, 1)
    assert classify(ms["fg"], f(r)).kind == "wandering"
    assert wandering_transfer_check(f, g, probe_regions("grid", grid_max=4)) == []


def test_transfer_reports_violation_from_faulty_classifier():
    f, g = builtin("2.5")

    def faulty(m, r):
        if m.name == "fg" and r == f(G(3)):
            return Periodic(1)
        return classify(m, r)

    found = wandering_transfer_check(f, g, [G(3)], classifier=faulty)
    assert len(found) == 1
    assert found[0].region == G(3) and found[0].wandering_under == "gf"


def test_theorem_aliases():
    shapes = aliases()
    assert shapes["periodic-periodic-periodic-wandering"] == "2.4"
    assert resolve_theorem("thm2.9") == "2.9"
    assert resolve_theorem("preperiodic-preperiodic-preperiodic-wandering") == "2.15"
    assert len(shapes) == len(THEOREM_IDS)
    with pytest.raises(KeyError):
        resolve_theorem("3.1")
