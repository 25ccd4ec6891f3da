"""Acceptance criteria, each at its stated trial count and tolerance.

Every criterion prints one ``PASS``/``FAIL`` line (collected into the pytest
terminal summary). Run directly with ``python tests/test_acceptance.py`` to
get just those lines.
"""

from __future__ import annotations

import math
import os
import random
import sys
import time
from fractions import Fraction

import pytest

from nlcrypt import oracles
from nlcrypt.harness import Scenario, chsh_check, dumps, no_signaling_audit, run_scenario
from nlcrypt.nlbox import create_session, derive_seed
from nlcrypt.ot import OTParams, alice_view_independence, run_ot
from nlcrypt.stats import sigma

WORKERS = os.cpu_count() or 1
SEED = 20240601
RESULTS: list[str] = []


def _run(kind, params, trials, seed=SEED):
    return run_scenario(Scenario(kind, params, trials, seed), workers=WORKERS)


def criterion_01_chsh():
    rep = chsh_check(1_000_000, seed=SEED)
    ok = rep.all_correlated and rep.value == 4.0 and all(v > 0 for v in rep.cell_counts.values())
    return ok, f"CHSH sum {rep.value} over {rep.boxes} boxes", 5


def criterion_02_no_signaling():
    rep = no_signaling_audit(100_000, seed=SEED, tolerance=0.005)
    return rep.passed, (
        f"{len(rep.cells)} cells, max |freq - 1/2| = {rep.max_deviation:.4f} (tol 0.005), "
        f"structural={rep.structural_ok}, correlation={rep.correlation_ok}"
    ), 10


def criterion_03_bias_oracle():
    details, ok = [], True
    for n in range(6):
        table = oracles.bias_table(n)
        within = table.max_deviation <= table.bound
        tight = bool(table.tight_witnesses())
        ok &= within and tight
        details.append(f"n={n}:{'tight' if within and tight else 'BAD'}")
    ok &= oracles.exact_pcy(1, "001", 0) == Fraction(3, 4)
    return ok, " ".join(details) + ", p(c=0, y=001) = 3/4", 60


def criterion_04_bc_honest():
    s = _run("BCHonest", {"n": 2, "k": 10}, 10_000)
    return s.successes == s.trials, f"{s.successes}/{s.trials} accepted", 10


def criterion_05_delay_detection():
    s = _run("BCBinding", {"n": 2, "k": 1, "k_star": 1}, 100_000)
    rejection = 1 - s.estimate
    return abs(rejection - 0.25) <= 0.01, f"rejection {rejection:.4f} (target 0.25 +/- 0.01)", 30


def criterion_06_multi_block_binding():
    bound = 0.75**10
    s = _run("BCBinding", {"n": 2, "k": 10, "k_star": 10}, 100_000)
    mixed = _run("BCBinding", {"n": 2, "k": 10, "k_star": 2, "k0": 0}, 40_000, seed=SEED + 1)
    ceiling = 1 + 0.5 ** (10 - 2)
    bsum = mixed.extra["binding_sum"]
    ok = s.estimate <= bound + 0.01 and bsum <= ceiling + 0.02
    return ok, (
        f"all-delayed success {s.estimate:.4f} <= {bound:.4f} + 0.01; "
        f"binding sum (k*=2, k0=0) {bsum:.4f} <= {ceiling:.4f} + 0.02"
    ), 60


def criterion_07_concealing():
    trials = 100_000
    guess = _run("BCGuess", {"n": 3, "k": 4}, trials)
    bound = 0.5 + 4 / 2**4
    guess_ok = guess.estimate <= bound + 3 * sigma(bound, trials)
    single = _run("BCGuess", {"n": 3, "k": 1}, trials, seed=SEED + 1)
    exact = float(oracles.single_block_accuracy(3, oracles.best_guess_y(3)))
    single_ok = abs(single.estimate - exact) <= 3 * sigma(exact, trials)
    return guess_ok and single_ok, (
        f"k=4 accuracy {guess.estimate:.4f} <= {bound} + 3 sigma; "
        f"single block {single.estimate:.4f} vs exact {exact:.4f} (3 sigma {3 * sigma(exact, trials):.4f})"
    ), 60


def criterion_08_ot_completeness():
    trials = 10_000
    s = _run("OTHonest", {"n": 36}, trials)
    exact = float(oracles.ot_honest_failure(36))
    ok = (
        s.estimate <= math.exp(-2)
        and abs(s.estimate - exact) <= 3 * sigma(exact, trials)
        and s.extra["wrong_outputs"] == 0
        and s.extra["aborts"] == 0
    )
    return ok, (
        f"failure {s.estimate:.4f} vs exact {exact:.4f} (3 sigma {3 * sigma(exact, trials):.4f}), "
        f"bound e^-2 = {math.exp(-2):.4f}, wrong outputs {s.extra['wrong_outputs']}"
    ), 60


def criterion_09_ot_attack():
    trials = 100_000
    s = _run("OTBobAttack", {"n": 36, "k": 6}, trials)
    bound = 0.75**6 * math.exp(-1.2)
    esc = s.extra["escape_rate"]
    examined = s.extra["cheated_rounds_examined"]
    ok = examined >= 100_000 and abs(esc - 0.75) <= 0.01 and s.estimate <= bound + 3 * sigma(bound, trials)
    return ok, (
        f"escape {esc:.4f} over {examined} cheated rounds; both secrets {s.estimate:.4f} "
        f"<= {bound:.4f} + 3 sigma (exact {s.extra['exact_both_secrets']:.4f})"
    ), 120


def criterion_10_view_independence():
    params = OTParams(9)
    arms = []
    for c in (0, 1):
        runs = []
        for i in range(10_000):
            ts = derive_seed(SEED, c, i)
            rng = random.Random(ts)
            session = create_session(derive_seed(ts, 0), params.boxes)
            runs.append(run_ot(params, rng.getrandbits(1), rng.getrandbits(1), c, session, rng))
        arms.append(runs)
    rep = alice_view_independence(*arms, z_max=3.0)
    worst = max(abs(r["z"]) for r in rep.rows if "z" in r)
    return rep.passed, f"{len(rep.rows)} statistics, max |z| = {worst:.2f} (limit 3)", 60


def criterion_11_reduction_break():
    delay = _run("WWDemo", {"receiver": "delay"}, 1_000)
    sync = _run("WWDemo", {"receiver": "sync"}, 1_000, seed=SEED + 1)
    ok = delay.successes == 1_000 and abs(sync.estimate - 0.5) <= 0.05
    ok &= delay.extra["wrong"] == 0 and sync.extra["wrong"] == 0
    return ok, f"delaying receiver {delay.estimate:.3f}, synchronous {sync.estimate:.3f}", 5


def criterion_12_determinism():
    ok = True
    for kind, params in [
        ("BCBinding", {"n": 2, "k": 3, "k_star": 1}),
        ("OTBobAttack", {"n": 9, "k": 2}),
        ("NoSignalingCheck", {}),
    ]:
        a = dumps(run_scenario(Scenario(kind, params, 2_000, 99)).to_dict())
        b = dumps(run_scenario(Scenario(kind, params, 2_000, 99), workers=2).to_dict())
        ok &= a == b
    return ok, "three scenarios re-run (sequential and parallel) give identical bytes", 10


CRITERIA = [
    (1, "CHSH saturation", criterion_01_chsh),
    (2, "no-signaling marginals", criterion_02_no_signaling),
    (3, "exact inner-product bias", criterion_03_bias_oracle),
    (4, "commitment completeness", criterion_04_bc_honest),
    (5, "delayed-block detection", criterion_05_delay_detection),
    (6, "multi-block binding", criterion_06_multi_block_binding),
    (7, "commitment concealing", criterion_07_concealing),
    (8, "OT completeness", criterion_08_ot_completeness),
    (9, "OT delayed-box attack", criterion_09_ot_attack),
    (10, "OT sender view independence", criterion_10_view_independence),
    (11, "reduction break demo", criterion_11_reduction_break),
    (12, "determinism", criterion_12_determinism),
]


def evaluate(number, title, fn):
    t0 = time.perf_counter()
    ok, detail, budget = fn()
    elapsed = time.perf_counter() - t0
    in_time = elapsed < budget
    line = f"{'PASS' if ok and in_time else 'FAIL'} [{number:2d}] {title}: {detail} ({elapsed:.1f} s, budget {budget} s)"
    RESULTS.append(line)
    print(line)
    return ok, in_time, line


@pytest.mark.slow
@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"{n:02d}-{t.replace(' ', '-')}" for n, t, _ in CRITERIA])
def test_criterion(number, title, fn):
    ok, in_time, line = evaluate(number, title, fn)
    assert ok and in_time, line


if __name__ == "__main__":
    failures = sum(not (ok and t) for ok, t, _ in (evaluate(*c) for c in CRITERIA))
    sys.exit(1 if failures else 0)
