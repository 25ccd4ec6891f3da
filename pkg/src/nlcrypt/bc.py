"""Bit commitment from NL boxes: single blocks and the k-block protocol.

One block uses ``2n + 1`` boxes. The committer encodes ``c`` into a string
``x`` (see :mod:`nlcrypt.parity`), feeds it into her side of the boxes and
announces the parity ``A`` of her outputs. The verifier feeds a random ``y``.
At reveal she sends ``c``, ``x`` and her outputs ``a``; the verifier accepts
iff every box satisfies ``x_i y_i == a_i ^ b_i``, ``parity(a) == A`` and
``decode(x) == c``.

Committer strategies are stateless objects with two decision points,
``commit`` and ``reveal``; the same object can be reused for many blocks.
The committer always sits on the ``ALICE`` side of the boxes, the verifier on
``BOB``'s, even when the protocol is used with the roles of the people
swapped (as inside oblivious transfer).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence

from .errors import InvalidArgument
from .nlbox import ALICE, BOB, BoxSession
from .oracles import best_guess_y, exact_pcy
from .parity import bitstr, complete, decode, encode, parity, random_bits, toggle_position

Bits = tuple


class Verdict(str, Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"


@dataclass(frozen=True)
class BCParams:
    n: int
    k: int = 1

    def __post_init__(self):
        # the delay strategy needs x in {00}{0,1}^(2n-1), i.e. at least 3 boxes
        if self.n < 1:
            raise InvalidArgument(f"n must be >= 1, got {self.n}")
        if self.k < 1:
            raise InvalidArgument(f"k must be >= 1, got {self.k}")

    @property
    def boxes_per_block(self) -> int:
        return 2 * self.n + 1

    @property
    def boxes(self) -> int:
        return self.k * self.boxes_per_block


@dataclass
class BlockTranscript:
    x: Optional[Bits]  # what the committer fed in at commit time; None if she delayed
    a: Optional[Bits]
    A: int
    y: Bits
    b: Bits
    revealed_c: int
    revealed_x: Bits
    revealed_a: Bits
    verdict: Verdict

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT

    def to_dict(self) -> dict:
        def s(v):
            return None if v is None else bitstr(v)

        return {
            "x": s(self.x),
            "a": s(self.a),
            "A": self.A,
            "y": s(self.y),
            "b": s(self.b),
            "revealed_c": self.revealed_c,
            "revealed_x": s(self.revealed_x),
            "revealed_a": s(self.revealed_a),
            "verdict": self.verdict.value,
        }


def verify_block(A: int, y: Sequence[int], b: Sequence[int], c: int, x: Sequence[int], a: Sequence[int]) -> bool:
    """Verifier's check of one opened block."""
    m = len(y)
    if len(x) != m or len(a) != m or c not in (0, 1):
        return False
    for xi, yi, ai, bi in zip(x, y, a, b):
        if (xi & yi) != (ai ^ bi):
            return False
    return parity(a) == A and decode(x) == c


# -- committer strategies ------------------------------------------------------
@dataclass
class _CommitState:
    x: Optional[Bits] = None
    a: Optional[Bits] = None
    A: int = 0


class AliceStrategy:
    """Base class for committer behaviour within one block."""

    def commit(self, session: BoxSession, boxes: range, n: int, rng: random.Random) -> _CommitState:
        raise NotImplementedError

    def reveal(self, st: _CommitState, session: BoxSession, boxes: range, n: int, rng: random.Random):
        """Return ``(c, x, a)`` to open."""
        raise NotImplementedError


def _commit_honestly(c, session, boxes, n, rng) -> _CommitState:
    x = encode(c, n, rng)
    a = tuple(session.enter_inputs(boxes, ALICE, x))
    return _CommitState(x=x, a=a, A=parity(a))


@dataclass(frozen=True)
class Honest(AliceStrategy):
    c: int

    def commit(self, session, boxes, n, rng):
        return _commit_honestly(self.c, session, boxes, n, rng)

    def reveal(self, st, session, boxes, n, rng):
        return self.c, st.x, st.a


@dataclass(frozen=True)
class FlipAfterInput(AliceStrategy):
    """Commit honestly to ``c``, then flip the lowest input bit that makes ``x`` decode to ``c_prime``.

    The matching output bit is left alone, so the change is caught whenever
    the verifier's ``y`` is 1 at that position.
    """

    c: int
    c_prime: int

    def commit(self, session, boxes, n, rng):
        return _commit_honestly(self.c, session, boxes, n, rng)

    def reveal(self, st, session, boxes, n, rng):
        x = st.x
        if decode(x) != self.c_prime:
            i = toggle_position(x)
            x = x[:i] + (1 - x[i],) + x[i + 1 :]
        return self.c_prime, x, st.a


@dataclass(frozen=True)
class DelayAll(AliceStrategy):
    """Announce a random ``A`` without touching the boxes; pick ``x`` only at reveal time.

    ``x`` starts with ``00`` so that flipping ``x_1`` (and ``a_1``) to fix the
    parity leaves ``decode(x)`` unchanged. Caught exactly when the parity
    needed fixing and ``y_1 == 0``.
    """

    c_prime: int

    def commit(self, session, boxes, n, rng):
        return _CommitState(A=rng.getrandbits(1))

    def reveal(self, st, session, boxes, n, rng):
        x = list(complete([0, 0, *random_bits(rng, 2 * n - 2)], self.c_prime))
        a = list(session.enter_inputs(boxes, ALICE, x))
        if parity(a) != st.A:
            x[0] ^= 1
            a[0] ^= 1
        return self.c_prime, tuple(x), tuple(a)


# -- verifier strategies -------------------------------------------------------
class HonestBob:
    def choose_y(self, n: int, rng: random.Random) -> Bits:
        return tuple(random_bits(rng, 2 * n + 1))

    def __repr__(self) -> str:
        return "HonestBob()"


@dataclass(frozen=True)
class InnerProductGuess:
    """Verifier who feeds a fixed ``y`` (default: the most informative one) to learn ``x . y``."""

    y: Optional[Bits] = None

    def choose_y(self, n: int, rng: random.Random) -> Bits:
        if self.y is None:
            return best_guess_y(n)
        y = tuple(self.y)
        if len(y) != 2 * n + 1:
            raise InvalidArgument(f"fixed y has length {len(y)}, blocks need {2 * n + 1}")
        return y


# -- running blocks ------------------------------------------------------------
@dataclass
class PendingBlock:
    """A committed but not yet opened block."""

    n: int
    boxes: range
    alice: AliceStrategy
    state: _CommitState
    y: Bits
    b: Bits

    @property
    def A(self) -> int:
        return self.state.A


def commit_block(
    n: int,
    alice: AliceStrategy,
    bob,
    session: BoxSession,
    rng: random.Random,
    bob_first: bool = False,
) -> PendingBlock:
    m = 2 * n + 1
    if session.remaining < m:
        raise InvalidArgument(f"block needs {m} unused boxes, session has {session.remaining}")
    boxes = session.take(m)
    y = bob.choose_y(n, rng)
    if bob_first:
        b = tuple(session.enter_inputs(boxes, BOB, y))
        st = alice.commit(session, boxes, n, rng)
    else:
        st = alice.commit(session, boxes, n, rng)
        b = tuple(session.enter_inputs(boxes, BOB, y))
    return PendingBlock(n=n, boxes=boxes, alice=alice, state=st, y=y, b=b)


def reveal_block(p: PendingBlock, session: BoxSession, rng: random.Random) -> BlockTranscript:
    c, x, a = p.alice.reveal(p.state, session, p.boxes, p.n, rng)
    ok = verify_block(p.A, p.y, p.b, c, x, a)
    return BlockTranscript(
        x=p.state.x,
        a=p.state.a,
        A=p.A,
        y=p.y,
        b=p.b,
        revealed_c=c,
        revealed_x=tuple(x),
        revealed_a=tuple(a),
        verdict=Verdict.ACCEPT if ok else Verdict.REJECT,
    )


def run_block(
    params: BCParams, alice: AliceStrategy, bob, session: BoxSession, rng: random.Random
) -> BlockTranscript:
    """Commit and open a single block."""
    return reveal_block(commit_block(params.n, alice, bob, session, rng), session, rng)


@dataclass
class BobView:
    """What the verifier holds before the reveal: per block ``(y, b, A)``."""

    n: int
    blocks: list = field(default_factory=list)


@dataclass
class ProtocolResult:
    params: BCParams
    blocks: list[BlockTranscript]
    verdict: Verdict
    revealed_c: Optional[int]

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT

    def bob_view(self) -> BobView:
        return BobView(self.params.n, [(t.y, t.b, t.A) for t in self.blocks])

    def to_dict(self) -> dict:
        return {
            "n": self.params.n,
            "k": self.params.k,
            "blocks": [t.to_dict() for t in self.blocks],
            "verdict": self.verdict.value,
            "revealed_c": self.revealed_c,
        }


def _per_block(alice, k: int) -> list[AliceStrategy]:
    if isinstance(alice, AliceStrategy):
        return [alice] * k
    alice = list(alice)
    if len(alice) != k:
        raise InvalidArgument(f"got {len(alice)} committer strategies for {k} blocks")
    honest = {s.c for s in alice if isinstance(s, Honest)}
    if len(honest) > 1 and all(isinstance(s, Honest) for s in alice):
        raise InvalidArgument("an honest committer uses the same bit in every block")
    return alice


def commit_protocol(params: BCParams, alice, bob, session: BoxSession, rng: random.Random) -> list[PendingBlock]:
    strategies = _per_block(alice, params.k)
    if session.remaining < params.boxes:
        raise InvalidArgument(f"protocol needs {params.boxes} unused boxes, session has {session.remaining}")
    return [commit_block(params.n, s, bob, session, rng) for s in strategies]


def reveal_protocol(
    params: BCParams, pending: list[PendingBlock], session: BoxSession, rng: random.Random
) -> ProtocolResult:
    blocks = [reveal_block(p, session, rng) for p in pending]
    bits = {t.revealed_c for t in blocks}
    ok = all(t.accepted for t in blocks) and len(bits) == 1
    return ProtocolResult(
        params=params,
        blocks=blocks,
        verdict=Verdict.ACCEPT if ok else Verdict.REJECT,
        revealed_c=bits.pop() if len(bits) == 1 else None,
    )


def run_protocol(params: BCParams, alice, bob, session: BoxSession, rng: random.Random) -> ProtocolResult:
    """k commit blocks followed by k reveals.

    ``alice`` is one strategy for all blocks or a sequence of ``k`` strategies.
    """
    pending = commit_protocol(params, alice, bob, session, rng)
    return reveal_protocol(params, pending, session, rng)


def block_guess(n: int, y: Sequence[int], b: Sequence[int], A: int) -> int:
    """Verifier's best single-block guess of ``c`` from ``x . y = A ^ parity(b)``.

    Picks the ``c`` under which the observed inner product is more likely;
    ties (and the uninformative ``y = 0``) go to 0.
    """
    if not any(y):
        return 0
    t = A ^ parity(b)
    p0, p1 = _pcy_pair(n, tuple(y))
    like0 = p0 if t == 0 else 1 - p0
    like1 = p1 if t == 1 else 1 - p1
    return 1 if like1 > like0 else 0


@lru_cache(maxsize=4096)
def _pcy_pair(n: int, y: tuple):
    return exact_pcy(n, y, 0), exact_pcy(n, y, 1)


def bob_guess(view: BobView) -> int:
    """Majority vote of the per-block guesses; ties go to 0."""
    votes = [block_guess(view.n, y, b, A) for y, b, A in view.blocks]
    return 1 if 2 * sum(votes) > len(votes) else 0


# -- commitment backend for use inside other protocols -------------------------
class NLBCCommitment:
    """Commit/reveal interface over the full k-block protocol, honest on both sides.

    ``commit`` consumes ``params.boxes`` boxes from ``session``.
    """

    def __init__(self, params: BCParams, session: BoxSession, rng: random.Random):
        self.params = params
        self.session = session
        self.rng = rng
        self._pending: list[list[PendingBlock]] = []
        self.last_result: Optional[ProtocolResult] = None

    def commit(self, bit: int) -> int:
        pending = commit_protocol(self.params, Honest(bit), HonestBob(), self.session, self.rng)
        self._pending.append(pending)
        return len(self._pending) - 1

    def reveal(self, handle: int) -> tuple[int, bool]:
        res = reveal_protocol(self.params, self._pending[handle], self.session, self.rng)
        self.last_result = res
        return res.revealed_c, res.accepted


def boxes_needed(params: BCParams, commitments: int) -> int:
    return params.boxes * commitments


__all__ = [
    "AliceStrategy",
    "BCParams",
    "BlockTranscript",
    "BobView",
    "DelayAll",
    "FlipAfterInput",
    "Honest",
    "HonestBob",
    "InnerProductGuess",
    "NLBCCommitment",
    "PendingBlock",
    "ProtocolResult",
    "Verdict",
    "block_guess",
    "bob_guess",
    "commit_block",
    "commit_protocol",
    "reveal_block",
    "reveal_protocol",
    "run_block",
    "run_protocol",
    "verify_block",
]
