import json
import random
from fractions import Fraction

import pytest

from nlcrypt import oracles
from nlcrypt.bc import (
    BCParams,
    DelayAll,
    FlipAfterInput,
    Honest,
    HonestBob,
    InnerProductGuess,
    NLBCCommitment,
    Verdict,
    block_guess,
    bob_guess,
    boxes_needed,
    commit_protocol,
    reveal_protocol,
    run_block,
    run_protocol,
    verify_block,
)
from nlcrypt.errors import InvalidArgument
from nlcrypt.nlbox import create_session
from nlcrypt.parity import decode, parity


def fresh(params, seed):
    return create_session(seed, params.boxes), random.Random(seed)


def test_params_validation():
    assert BCParams(2, 3).boxes == 15
    with pytest.raises(InvalidArgument):
        BCParams(0)
    with pytest.raises(InvalidArgument):
        BCParams(1, 0)


@pytest.mark.parametrize("n,k", [(1, 1), (2, 10), (4, 3)])
def test_honest_runs_always_accept(n, k):
    params = BCParams(n, k)
    for seed in range(200):
        s, rng = fresh(params, seed)
        c = seed & 1
        res = run_protocol(params, Honest(c), HonestBob(), s, rng)
        assert res.accepted and res.revealed_c == c
        for t in res.blocks:
            assert decode(t.x) == c and parity(t.a) == t.A


def test_verify_block_catches_each_condition():
    # n = 1, x = 111 decodes to 0
    x, y = (1, 1, 1), (1, 0, 1)
    a = (0, 1, 1)
    b = tuple(ai ^ (xi & yi) for ai, xi, yi in zip(a, x, y))
    A = parity(a)
    assert verify_block(A, y, b, 0, x, a)
    assert not verify_block(1 - A, y, b, 0, x, a)
    assert not verify_block(A, y, b, 1, x, a)
    assert not verify_block(A, y, b, 0, x, (1, 1, 1))


def test_delay_all_keeps_decoded_bit_and_is_caught_only_on_y1_zero():
    params = BCParams(2, 1)
    for seed in range(400):
        s, rng = fresh(params, seed)
        t = run_block(params, DelayAll(1), HonestBob(), s, rng)
        assert decode(t.revealed_x) == 1
        assert t.x is None  # no boxes used at commit time
        parity_fixed = t.revealed_x[0] == 1
        expected = Verdict.REJECT if parity_fixed and t.y[0] == 0 else Verdict.ACCEPT
        assert t.verdict is expected


def test_flip_after_input_fails_exactly_when_y_hits_the_flip():
    params = BCParams(2, 1)
    for seed in range(300):
        s, rng = fresh(params, seed)
        t = run_block(params, FlipAfterInput(0, 1), HonestBob(), s, rng)
        diff = [i for i in range(5) if t.x[i] != t.revealed_x[i]]
        assert len(diff) == 1 and decode(t.revealed_x) == 1
        assert t.accepted == (t.y[diff[0]] == 0)


def test_flip_to_same_bit_is_honest():
    params = BCParams(1, 2)
    s, rng = fresh(params, 3)
    assert run_protocol(params, FlipAfterInput(1, 1), HonestBob(), s, rng).accepted


def test_mixed_revealed_bits_reject():
    params = BCParams(1, 2)
    s, rng = fresh(params, 4)
    res = run_protocol(params, [FlipAfterInput(0, 0), FlipAfterInput(1, 1)], HonestBob(), s, rng)
    assert not res.accepted and res.revealed_c is None


def test_strategy_list_validation():
    params = BCParams(1, 2)
    s, rng = fresh(params, 0)
    with pytest.raises(InvalidArgument):
        run_protocol(params, [Honest(0)], HonestBob(), s, rng)
    with pytest.raises(InvalidArgument):
        run_protocol(params, [Honest(0), Honest(1)], HonestBob(), s, rng)
    with pytest.raises(InvalidArgument):
        run_protocol(params, Honest(0), HonestBob(), create_session(0, 3), rng)


def test_inner_product_guess_fixed_y_length_checked():
    params = BCParams(1, 1)
    s, rng = fresh(params, 0)
    with pytest.raises(InvalidArgument):
        run_protocol(params, Honest(0), InnerProductGuess((1, 1)), s, rng)


def test_block_guess_recovers_inner_product_and_matches_oracle():
    # The verifier sees x.y = A ^ parity(b); his guess is the Bayes decision on it.
    n = 1
    y = (0, 0, 1)
    for c in (0, 1):
        for seed in range(50):
            params = BCParams(n, 1)
            s, rng = fresh(params, seed)
            res = run_protocol(params, Honest(c), InnerProductGuess(y), s, rng)
            y_, b, A = res.bob_view().blocks[0]
            xy = sum(xi & yi for xi, yi in zip(res.blocks[0].x, y)) & 1
            assert A ^ parity(b) == xy
            # p^c = 3/4 for both c, so the guess equals the observed x.y
            assert block_guess(n, y_, b, A) == xy


def test_zero_y_gives_coin_flip_guess():
    assert block_guess(1, (0, 0, 0), (1, 0, 1), 1) == 0
    assert oracles.single_block_accuracy(2, "00000") == Fraction(1, 2)


def test_majority_guess_tie_goes_to_zero():
    from nlcrypt.bc import BobView

    y = (0, 0, 1)
    # first block observes x.y = 1, second x.y = 0
    view = BobView(1, [(y, (0, 0, 0), 1), (y, (0, 0, 0), 0)])
    assert bob_guess(view) == 0


def test_transcript_json_round_trip():
    params = BCParams(1, 2)
    s, rng = fresh(params, 9)
    doc = run_protocol(params, Honest(1), HonestBob(), s, rng).to_dict()
    again = json.loads(json.dumps(doc))
    assert again["verdict"] == "Accept" and len(again["blocks"]) == 2


def test_commit_and_reveal_can_be_separated():
    params = BCParams(2, 2)
    s, rng = fresh(params, 5)
    pending = commit_protocol(params, Honest(0), HonestBob(), s, rng)
    assert all(p.A in (0, 1) for p in pending)
    assert reveal_protocol(params, pending, s, rng).accepted


def test_nlbc_commitment_backend():
    params = BCParams(1, 3)
    s = create_session(1, boxes_needed(params, 4))
    backend = NLBCCommitment(params, s, random.Random(1))
    handles = [backend.commit(b) for b in (0, 1, 1, 0)]
    assert [backend.reveal(h) for h in handles] == [(0, True), (1, True), (1, True), (0, True)]
    assert s.remaining == 0
