"""Monte Carlo scenarios tying the simulators to their theoretical bounds.

Every trial gets its own seed ``derive_seed(scenario.seed, index)``, so runs
are reproducible, trials are independent, and a scenario split across worker
processes aggregates to exactly the sequential result.
"""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import oracles
from .bc import (
    BCParams,
    DelayAll,
    FlipAfterInput,
    Honest,
    HonestBob,
    InnerProductGuess,
    bob_guess,
    run_protocol,
)
from .errors import InvalidArgument
from .nlbox import ALICE, BOB, Party, create_session, derive_seed
from .ot import (
    ALICE_ABORTS,
    BOB_GETS,
    DELAYING,
    SYNCHRONOUS,
    BobOTAttack,
    OTParams,
    run_ot,
    single_box_erasure,
    ww_reduction_demo,
)
from .stats import Bound, TrialSummary, summarize

KINDS = (
    "BCHonest",
    "BCBinding",
    "BCGuess",
    "OTHonest",
    "OTBobAttack",
    "ErasureDemo",
    "WWDemo",
    "NoSignalingCheck",
)


@dataclass(frozen=True)
class Scenario:
    kind: str
    params: dict
    trials: int
    seed: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown scenario kind {self.kind!r}")
        if self.trials < 1:
            raise InvalidArgument("trials must be >= 1")
        object.__setattr__(self, "params", resolve_params(self.kind, dict(self.params)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params, "trials": self.trials, "seed": self.seed}


def _bc(p: dict) -> BCParams:
    return BCParams(n=p["n"], k=p["k"])


def _ot(p: dict) -> OTParams:
    bc = BCParams(p["bc_n"], p["bc_k"]) if p["backend"] == "nlbc" else None
    return OTParams(n=p["n"], backend=p["backend"], bc=bc)


def resolve_params(kind: str, p: dict) -> dict:
    """Fill defaults and validate against the target module's preconditions."""
    if kind in ("BCHonest", "BCGuess", "BCBinding"):
        p.setdefault("n", 2)
        p.setdefault("k", 1)
        _bc(p)
        if kind == "BCBinding":
            p.setdefault("k_star", p["k"])
            p.setdefault("k0", 0)
            k1 = p["k"] - p["k_star"] - p["k0"]
            if p["k_star"] < 0 or p["k0"] < 0 or k1 < 0:
                raise InvalidArgument("need k_star, k0 >= 0 and k_star + k0 <= k")
            p["k1"] = k1
        if kind == "BCGuess":
            y = p.get("y")
            if y is not None:
                y = "".join(str(int(b)) for b in y) if not isinstance(y, str) else y
                if len(y) != 2 * p["n"] + 1:
                    raise InvalidArgument(f"y must have length {2 * p['n'] + 1}")
            p["y"] = y
    elif kind in ("OTHonest", "OTBobAttack"):
        p.setdefault("n", 36)
        p.setdefault("backend", "ideal")
        if p["backend"] == "nlbc":
            p.setdefault("bc_n", 1)
            p.setdefault("bc_k", 4)
        _ot(p)
        if kind == "OTBobAttack":
            p.setdefault("k", 0)
            if not 0 <= p["k"] <= p["n"]:
                raise InvalidArgument("cheat count k must satisfy 0 <= k <= n")
    elif kind in ("ErasureDemo", "WWDemo"):
        p.setdefault("receiver", SYNCHRONOUS)
        if p["receiver"] not in (SYNCHRONOUS, DELAYING):
            raise InvalidArgument(f"receiver must be {SYNCHRONOUS!r} or {DELAYING!r}")
    return p


# -- per-trial functions -------------------------------------------------------
def _trial_env(seed: int, index: int, boxes: int):
    ts = derive_seed(seed, index)
    return create_session(derive_seed(ts, 0), boxes), random.Random(ts)


def _t_bc_honest(p, seed, i):
    params = _bc(p)
    session, rng = _trial_env(seed, i, params.boxes)
    c = rng.getrandbits(1)
    res = run_protocol(params, Honest(c), HonestBob(), session, rng)
    return {"c": c, "event": res.accepted and res.revealed_c == c}


def _binding_strategies(p, target):
    return (
        [DelayAll(target)] * p["k_star"]
        + [FlipAfterInput(1, target)] * p["k1"]
        + [FlipAfterInput(0, target)] * p["k0"]
    )


def _t_bc_binding(p, seed, i):
    params = _bc(p)
    session, rng = _trial_env(seed, i, params.boxes)
    target = rng.getrandbits(1)
    res = run_protocol(params, _binding_strategies(p, target), HonestBob(), session, rng)
    return {"target": target, "event": res.accepted and res.revealed_c == target}


def _t_bc_guess(p, seed, i):
    params = _bc(p)
    session, rng = _trial_env(seed, i, params.boxes)
    c = rng.getrandbits(1)
    y = None if p["y"] is None else tuple(int(ch) for ch in p["y"])
    res = run_protocol(params, Honest(c), InnerProductGuess(y), session, rng)
    guess = bob_guess(res.bob_view())
    return {"c": c, "guess": guess, "event": guess == c}


def _t_ot_honest(p, seed, i):
    params = _ot(p)
    session, rng = _trial_env(seed, i, params.boxes)
    s0, s1, c = rng.getrandbits(1), rng.getrandbits(1), rng.getrandbits(1)
    sess = run_ot(params, s0, s1, c, session, rng)
    wrong = sess.outcome == BOB_GETS and sess.bob_output != (s1 if c else s0)
    return {
        "outcome": sess.outcome,
        "matches": len(sess.matches),
        "wrong": wrong,
        "event": sess.outcome != BOB_GETS,
    }


def _t_ot_attack(p, seed, i):
    params = _ot(p)
    session, rng = _trial_env(seed, i, params.boxes)
    s0, s1, c = rng.getrandbits(1), rng.getrandbits(1), rng.getrandbits(1)
    attack = BobOTAttack(rng.sample(range(params.n), p["k"]))
    sess = run_ot(params, s0, s1, c, session, rng, bob=attack)
    return {
        "outcome": sess.outcome,
        "examined": sess.cheat_examined,
        "escaped": sess.cheat_escaped,
        "fab_challenged": sess.fabricated_challenged,
        "fab_passed": sess.fabricated_passed,
        "event": sess.learned_both,
    }


def _t_erasure(p, seed, i):
    session, rng = _trial_env(seed, i, 1)
    v = rng.getrandbits(1)
    got = single_box_erasure(v, p["receiver"], session, rng)
    return {"v": v, "received": got, "wrong": got is not None and got != v, "event": got is not None}


def _t_ww(p, seed, i):
    session, rng = _trial_env(seed, i, 1)
    b = rng.getrandbits(1)
    got = ww_reduction_demo(b, p["receiver"], session, rng)
    return {"b": b, "learned": got, "wrong": got is not None and got != b, "event": got is not None}


_TRIALS: dict[str, Callable] = {
    "BCHonest": _t_bc_honest,
    "BCBinding": _t_bc_binding,
    "BCGuess": _t_bc_guess,
    "OTHonest": _t_ot_honest,
    "OTBobAttack": _t_ot_attack,
    "ErasureDemo": _t_erasure,
    "WWDemo": _t_ww,
}


# -- bounds ---------------------------------------------------------------------
def scenario_bound(kind: str, p: dict) -> Optional[Bound]:
    if kind == "BCHonest":
        return Bound("1", 1.0, ">=")
    if kind == "BCBinding":
        if p["k_star"] == p["k"]:
            return Bound("(3/4)^k", oracles.delayed_blocks_bound(p["k"]))
        return Bound(
            "(3/4)^k_star * ((1/2)^k1 + (1/2)^k0) / 2",
            oracles.binding_sum_bound(p["k_star"], p["k0"], p["k1"]) / 2,
        )
    if kind == "BCGuess":
        return Bound("1/2 + k/2^(n+1)", oracles.guess_bound(p["n"], p["k"]))
    if kind == "OTHonest":
        return Bound("e^(-n/18)", oracles.ot_failure_bound(p["n"]))
    if kind == "OTBobAttack":
        return Bound("(3/4)^k * e^(-2(n-3k)^2/(18(n-k)))", oracles.ot_attack_bound(p["n"], p["k"]))
    if kind in ("ErasureDemo", "WWDemo"):
        return Bound("1/2" if p["receiver"] == SYNCHRONOUS else "1", 0.5 if p["receiver"] == SYNCHRONOUS else 1.0, "==")
    if kind == "NoSignalingCheck":
        return Bound("1/2", 0.5, "==")
    return None


_EVENTS = {
    "BCHonest": "accepted",
    "BCBinding": "alice_accepted",
    "BCGuess": "bob_guessed_c",
    "OTHonest": "bob_fails",
    "OTBobAttack": "bob_learns_both",
    "ErasureDemo": "received",
    "WWDemo": "learned",
    "NoSignalingCheck": "output_one",
}


def _extra(kind: str, p: dict, records: list[dict]) -> dict:
    if kind == "BCBinding":
        out = {}
        for t in (0, 1):
            rs = [r for r in records if r["target"] == t]
            out[f"reveal{t}_trials"] = len(rs)
            out[f"reveal{t}_accepted"] = sum(r["event"] for r in rs)
        rates = [
            out[f"reveal{t}_accepted"] / out[f"reveal{t}_trials"] if out[f"reveal{t}_trials"] else 0.0
            for t in (0, 1)
        ]
        out["binding_sum"] = rates[0] + rates[1]
        out["binding_sum_formula"] = oracles.binding_sum_bound(p["k_star"], p["k0"], p["k1"])
        out["binding_sum_ceiling"] = oracles.binding_sum_ceiling(p["k"], p["k_star"], p["k0"])
        return out
    if kind == "BCGuess":
        y = p["y"] or "".join(map(str, oracles.best_guess_y(p["n"])))
        return {"y": y, "single_block_exact": float(oracles.single_block_accuracy(p["n"], y))}
    if kind == "OTHonest":
        return {
            "aborts": sum(r["outcome"] == ALICE_ABORTS for r in records),
            "wrong_outputs": sum(r["wrong"] for r in records),
            "exact_failure": float(oracles.ot_honest_failure(p["n"])),
        }
    if kind == "OTBobAttack":
        ex = sum(r["examined"] for r in records)
        es = sum(r["escaped"] for r in records)
        fc = sum(r["fab_challenged"] for r in records)
        fp = sum(r["fab_passed"] for r in records)
        return {
            "aborts": sum(r["outcome"] == ALICE_ABORTS for r in records),
            "cheated_rounds_examined": ex,
            "cheated_rounds_escaped": es,
            "escape_rate": es / ex if ex else None,
            "fabricated_challenged": fc,
            "fabricated_passed": fp,
            "exact_both_secrets": float(oracles.ot_both_secrets(p["n"], p["k"])),
        }
    if kind in ("ErasureDemo", "WWDemo"):
        return {"wrong": sum(r["wrong"] for r in records)}
    return {}


# -- running --------------------------------------------------------------------
def _run_chunk(kind: str, params: dict, seed: int, start: int, stop: int) -> list[dict]:
    fn = _TRIALS[kind]
    out = []
    for i in range(start, stop):
        rec = fn(params, seed, i)
        rec["trial"] = i
        out.append(rec)
    return out


def run_trials(s: Scenario, workers: int = 1) -> list[dict]:
    """Per-trial records in trial order."""
    if workers <= 1 or s.trials < 2 * workers:
        return _run_chunk(s.kind, s.params, s.seed, 0, s.trials)
    step = math.ceil(s.trials / (4 * workers))
    bounds = [(a, min(a + step, s.trials)) for a in range(0, s.trials, step)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = ex.map(_run_chunk, *zip(*[(s.kind, s.params, s.seed, a, b) for a, b in bounds]))
        return [r for part in parts for r in part]


def run_scenario(s: Scenario, sink: Optional[Callable[[dict], None]] = None, workers: int = 1) -> TrialSummary:
    """Execute ``s.trials`` independent runs and compare against the attached bound.

    Aborted protocol runs are kept: they count against the attacker in the
    attack scenarios and are tallied under ``extra`` in the honest ones.
    """
    t0 = time.perf_counter()
    if s.kind == "NoSignalingCheck":
        rep = no_signaling_audit(s.trials, s.seed)
        if sink is not None:
            for cell in rep.cells:
                sink(cell)
        ones = sum(c["ones"] for c in rep.cells)
        total = sum(c["trials"] for c in rep.cells)
        summary = summarize(
            total,
            ones,
            scenario_bound(s.kind, s.params),
            event=_EVENTS[s.kind],
            max_abs_deviation=rep.max_deviation,
            structural=rep.structural_ok,
            correlation=rep.correlation_ok,
            cells=len(rep.cells),
        )
    else:
        records = run_trials(s, workers)
        if sink is not None:
            for r in records:
                sink(r)
        hits = sum(1 for r in records if r["event"])
        summary = summarize(
            s.trials,
            hits,
            scenario_bound(s.kind, s.params),
            event=_EVENTS[s.kind],
            **_extra(s.kind, s.params, records),
        )
    summary.scenario = s.kind
    summary.params = dict(s.params)
    summary.seed = s.seed
    summary.runtime_ms = (time.perf_counter() - t0) * 1000
    return summary


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


# -- box-level audits -----------------------------------------------------------
REMOTE_BEHAVIORS = ("input0_before", "input1_before", "input0_after", "input1_after", "never")


@dataclass
class NoSignalingReport:
    trials: int
    cells: list[dict]
    structural_ok: bool
    correlation_ok: bool
    tolerance: float = 0.005

    @property
    def max_deviation(self) -> float:
        return max(abs(c["freq"] - 0.5) for c in self.cells)

    @property
    def passed(self) -> bool:
        return self.structural_ok and self.correlation_ok and self.max_deviation <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "trials_per_cell": self.trials,
            "cells": self.cells,
            "structural_ok": self.structural_ok,
            "correlation_ok": self.correlation_ok,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def no_signaling_audit(trials: int, seed: int = 0, tolerance: float = 0.005) -> NoSignalingReport:
    """Local output frequencies for every (local party, local input, remote behaviour) cell.

    Cells where the local side moves first ("..._after" and "never") share a
    session seed, so the first mover's outputs must be bit-identical across
    them: the remote input provably plays no part in producing them.
    """
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")
    cells = []
    structural = True
    correlation = True
    ids = np.arange(trials, dtype=np.int64)
    for party in (ALICE, BOB):
        remote = Party(1 - party)
        for x in (0, 1):
            local_bits = np.full(trials, x, dtype=np.uint8)
            first_mover_outputs = []
            for bi, beh in enumerate(REMOTE_BEHAVIORS):
                first = beh != "input0_before" and beh != "input1_before"
                cell_seed = derive_seed(seed, party, x, 99 if first else bi)
                sess = create_session(cell_seed, trials)
                ry = None if beh == "never" else int(beh[5])
                rbits = None if ry is None else np.full(trials, ry, dtype=np.uint8)
                if not first:
                    remote_out = sess.enter_inputs(ids, remote, rbits)
                    out = sess.enter_inputs(ids, party, local_bits)
                else:
                    out = sess.enter_inputs(ids, party, local_bits)
                    # immediacy: output exists while the remote input is still unset
                    if (sess.inputs(remote)[ids] != 2).any():
                        structural = False
                    first_mover_outputs.append(out.copy())
                    remote_out = None if rbits is None else sess.enter_inputs(ids, remote, rbits)
                if remote_out is not None:
                    correlation &= bool(((out ^ remote_out) == (x & ry)).all())
                ones = int(out.sum())
                cells.append(
                    {
                        "local_party": party.name,
                        "local_input": x,
                        "remote": beh,
                        "trials": trials,
                        "ones": ones,
                        "freq": ones / trials,
                    }
                )
            structural &= all(np.array_equal(first_mover_outputs[0], o) for o in first_mover_outputs[1:])
    return NoSignalingReport(trials, cells, structural, correlation, tolerance)


@dataclass
class CHSHReport:
    boxes: int
    cell_counts: dict
    cell_wins: dict
    value: float = field(init=False)

    def __post_init__(self):
        self.value = sum(self.cell_wins[k] / self.cell_counts[k] for k in self.cell_counts)

    @property
    def all_correlated(self) -> bool:
        return all(self.cell_wins[k] == self.cell_counts[k] for k in self.cell_counts)


def chsh_check(boxes: int, seed: int = 0) -> CHSHReport:
    """Fill ``boxes`` boxes with uniformly random input pairs and score ``a ^ b == x & y`` per cell."""
    rng = np.random.default_rng(derive_seed(seed, 1))
    x = rng.integers(0, 2, boxes, dtype=np.uint8)
    y = rng.integers(0, 2, boxes, dtype=np.uint8)
    order = rng.integers(0, 2, boxes, dtype=np.uint8)  # which side moves first
    sess = create_session(seed, boxes)
    ids = np.arange(boxes, dtype=np.int64)
    a = np.empty(boxes, dtype=np.uint8)
    b = np.empty(boxes, dtype=np.uint8)
    af, bf = ids[order == 0], ids[order == 1]
    a[af] = sess.enter_inputs(af, ALICE, x[af])
    b[bf] = sess.enter_inputs(bf, BOB, y[bf])
    b[af] = sess.enter_inputs(af, BOB, y[af])
    a[bf] = sess.enter_inputs(bf, ALICE, x[bf])
    win = (a ^ b) == (x & y)
    counts, wins = {}, {}
    for cx in (0, 1):
        for cy in (0, 1):
            m = (x == cx) & (y == cy)
            counts[f"{cx}{cy}"] = int(m.sum())
            wins[f"{cx}{cy}"] = int(win[m].sum())
    return CHSHReport(boxes, counts, wins)
