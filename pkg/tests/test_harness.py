import pytest

from nlcrypt.errors import InvalidArgument
from nlcrypt.harness import Scenario, chsh_check, dumps, no_signaling_audit, run_scenario, run_trials
from nlcrypt.stats import NO_BOUND, VIOLATES, WITHIN, Bound, judge, summarize, wilson_interval


def test_scenario_defaults_and_validation():
    s = Scenario("BCBinding", {"k": 4, "k_star": 1, "k0": 2}, 10, 0)
    assert s.params["k1"] == 1 and s.params["n"] == 2
    assert Scenario("OTHonest", {}, 1, 0).params == {"n": 36, "backend": "ideal"}
    assert Scenario("OTHonest", {"backend": "nlbc", "n": 3}, 1, 0).params["bc_k"] == 4
    for kind, params in [
        ("Nope", {}),
        ("BCBinding", {"k": 2, "k_star": 3}),
        ("BCGuess", {"n": 1, "y": "01"}),
        ("OTHonest", {"n": 10}),
        ("OTBobAttack", {"n": 9, "k": 10}),
        ("WWDemo", {"receiver": "later"}),
    ]:
        with pytest.raises(InvalidArgument):
            Scenario(kind, params, 10, 0)
    with pytest.raises(InvalidArgument):
        Scenario("BCHonest", {}, 0, 0)


@pytest.mark.parametrize(
    "kind,params",
    [
        ("BCHonest", {"k": 3}),
        ("BCBinding", {"k": 3, "k_star": 1}),
        ("BCGuess", {"n": 1, "k": 3}),
        ("OTHonest", {"n": 9}),
        ("OTBobAttack", {"n": 9, "k": 2}),
        ("ErasureDemo", {}),
        ("WWDemo", {"receiver": "delay"}),
        ("NoSignalingCheck", {}),
    ],
)
def test_same_seed_same_bytes(kind, params):
    docs = [dumps(run_scenario(Scenario(kind, params, 300, 17)).to_dict()) for _ in range(2)]
    assert docs[0] == docs[1]
    other = dumps(run_scenario(Scenario(kind, params, 300, 18)).to_dict())
    assert other != docs[0]


def test_runtime_only_with_timing():
    summary = run_scenario(Scenario("ErasureDemo", {}, 10, 1))
    assert "runtime_ms" not in summary.to_dict()
    assert summary.to_dict(timing=True)["runtime_ms"] >= 0


def test_parallel_matches_sequential():
    s = Scenario("OTHonest", {"n": 9}, 200, 5)
    assert run_trials(s, workers=2) == run_trials(s, workers=1)


def test_sink_receives_every_record():
    got = []
    run_scenario(Scenario("BCHonest", {}, 25, 3), sink=got.append)
    assert [r["trial"] for r in got] == list(range(25))


def test_honest_commitment_summary():
    summary = run_scenario(Scenario("BCHonest", {"n": 2, "k": 4}, 500, 1))
    assert summary.successes == 500 and summary.verdict == WITHIN


def test_wilson_and_judge():
    lo, hi = wilson_interval(30, 100)
    assert lo < 0.3 < hi
    assert wilson_interval(0, 50)[0] == 0.0
    assert wilson_interval(50, 50)[1] == 1.0
    assert judge((0.1, 0.2), Bound("x", 0.15)) == WITHIN
    assert judge((0.16, 0.2), Bound("x", 0.15)) == VIOLATES
    assert judge((0.1, 0.14), Bound("x", 0.15, ">=")) == VIOLATES
    assert judge((0.4, 0.6), Bound("x", 0.5, "==")) == WITHIN
    assert judge((0.4, 0.6), None) == NO_BOUND
    with pytest.raises(ValueError):
        judge((0, 1), Bound("x", 0.5, "<"))
    s = summarize(1000, 250, Bound("q", 0.25, "=="), event="e", note=1)
    assert s.ci95[0] <= s.estimate <= s.ci95[1] and s.extra == {"note": 1}


def test_no_signaling_audit_small():
    rep = no_signaling_audit(20_000, seed=4, tolerance=0.02)
    assert len(rep.cells) == 20
    assert rep.structural_ok and rep.correlation_ok and rep.passed


def test_chsh_check_small():
    rep = chsh_check(10_000, seed=2)
    assert rep.value == 4.0 and rep.all_correlated
    assert sum(rep.cell_counts.values()) == 10_000
