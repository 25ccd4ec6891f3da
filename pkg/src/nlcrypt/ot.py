"""1-out-of-2 oblivious transfer from NL boxes, plus the delay attacks.

The protocol runs ``2n`` box rounds. In round ``i`` the sender feeds
``r0 ^ r1`` and the receiver a random ``y'``; masking with ``m = r0 ^ a``
lets the receiver compute ``r_{y'}``. Pairs of rounds ``(i, i + n)`` are cut
and chosen: the receiver commits to ``(y', b)`` of both, the sender opens one
at random and checks the box relation, and the other survives. After the
sender announces her own random choices ``y_i``, the receiver knows which
surviving rounds he actually received and builds index sets ``J0, J1`` of
size ``n/3`` to unmask ``s_c``.

Indices are 0-based throughout: the partner of round ``i`` is ``i + n``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .bc import BCParams, NLBCCommitment
from .errors import InvalidArgument
from .nlbox import ALICE, BOB, BoxSession
from .parity import random_bits
from .stats import summarize

BOB_GETS = "BobGets"
ALICE_ABORTS = "AliceAborts"
BOB_FAILS = "BobFails"


class IdealCommitment:
    """Perfectly binding and concealing commitment registry."""

    def __init__(self):
        self._values: list[int] = []

    def commit(self, bit: int) -> int:
        self._values.append(bit)
        return len(self._values) - 1

    def reveal(self, handle: int) -> tuple[int, bool]:
        return self._values[handle], True


@dataclass(frozen=True)
class OTParams:
    n: int
    backend: str = "ideal"  # "ideal" or "nlbc"
    bc: Optional[BCParams] = None

    def __post_init__(self):
        if self.n < 3 or self.n % 3:
            raise InvalidArgument(f"n must be a positive multiple of 3, got {self.n}")
        if self.backend not in ("ideal", "nlbc"):
            raise InvalidArgument(f"unknown commitment backend {self.backend!r}")
        if self.backend == "nlbc" and self.bc is None:
            object.__setattr__(self, "bc", BCParams(n=1, k=4))

    @property
    def set_size(self) -> int:
        return self.n // 3

    @property
    def boxes(self) -> int:
        """Boxes a run consumes: 2n rounds plus 4n commitments when the NLBC backend is used."""
        total = 2 * self.n
        if self.backend == "nlbc":
            total += 4 * self.n * self.bc.boxes
        return total


@dataclass(frozen=True)
class BobOTAttack:
    """Receiver who delays one box in each pair ``(i, i+n)`` for ``i`` in ``cheat_set``.

    For the delayed member he commits to ``y' = 1`` and a random ``b``; the
    honest member is picked uniformly. Rounds outside ``cheat_set`` are
    played honestly. Afterwards he tries to fill both ``J0`` and ``J1`` with
    rounds he actually received.
    """

    cheat_set: frozenset

    def __init__(self, cheat_set: Iterable[int]):
        object.__setattr__(self, "cheat_set", frozenset(int(i) for i in cheat_set))

    @classmethod
    def first(cls, k: int) -> "BobOTAttack":
        return cls(range(k))

    @property
    def k(self) -> int:
        return len(self.cheat_set)


@dataclass
class OTRoundState:
    """One round's values; step-3 fields refer to the round after relabeling."""

    r0: int
    r1: int
    x: int
    y_prime: Optional[int]
    a: int
    b: Optional[int]
    committed: tuple  # (y', b) as committed in step 2
    delayed: bool
    k_challenge: Optional[int] = None
    m: Optional[int] = None
    v: Optional[int] = None
    v_prime: Optional[int] = None
    y: Optional[int] = None


@dataclass
class OTSession:
    params: OTParams
    s0: int
    s1: int
    c: int
    rounds: list[OTRoundState]
    survivors: list[int] = field(default_factory=list)  # survivors[i] = original index of relabeled round i
    challenges: list[int] = field(default_factory=list)
    opened: list[tuple] = field(default_factory=list)  # (original index, y', b) as revealed
    J0: Optional[tuple] = None
    J1: Optional[tuple] = None
    s_hat0: Optional[int] = None
    s_hat1: Optional[int] = None
    outcome: str = BOB_FAILS
    bob_output: Optional[int] = None
    learned_both: bool = False
    abort_reason: Optional[str] = None
    # cut-and-choose bookkeeping for cheated pairs
    cheat_examined: int = 0
    cheat_escaped: int = 0
    fabricated_challenged: int = 0
    fabricated_passed: int = 0

    @property
    def matches(self) -> list[int]:
        """Relabeled indices where the sender's ``y`` equals the receiver's final ``y'``."""
        out = []
        for i, j in enumerate(self.survivors):
            r = self.rounds[j]
            if r.y is not None and r.y == r.y_prime:
                out.append(i)
        return out

    def alice_view(self) -> dict:
        """Every message the sender receives, plus her own data."""
        own = [(r.r0, r.r1, r.a) for r in self.rounds]
        return {
            "own": own,
            "challenges": list(self.challenges),
            "opened": list(self.opened),
            "y": [self.rounds[j].y for j in self.survivors],
            "J0": self.J0,
            "J1": self.J1,
            # the sender's outputs all arrive during step 1 regardless of the receiver
            "box_timing": ["step1"] * len(self.rounds),
        }

    def to_dict(self) -> dict:
        return {
            "n": self.params.n,
            "backend": self.params.backend,
            "s0": self.s0,
            "s1": self.s1,
            "c": self.c,
            "rounds": [
                {
                    "r0": r.r0,
                    "r1": r.r1,
                    "x": r.x,
                    "y_prime": r.y_prime,
                    "a": r.a,
                    "b": r.b,
                    "committed": list(r.committed),
                    "delayed": r.delayed,
                    "k": r.k_challenge,
                    "m": r.m,
                    "v": r.v,
                    "v_prime": r.v_prime,
                    "y": r.y,
                }
                for r in self.rounds
            ],
            "survivors": self.survivors,
            "J0": None if self.J0 is None else list(self.J0),
            "J1": None if self.J1 is None else list(self.J1),
            "s_hat0": self.s_hat0,
            "s_hat1": self.s_hat1,
            "outcome": self.outcome,
            "bob_output": self.bob_output,
            "learned_both": self.learned_both,
            "abort_reason": self.abort_reason,
        }


def _backend(params: OTParams, session: BoxSession, rng: random.Random):
    if params.backend == "ideal":
        return IdealCommitment()
    return NLBCCommitment(params.bc, session, rng)


def valid_sets(J0, J1, n: int) -> bool:
    size = n // 3
    s0, s1 = set(J0), set(J1)
    return (
        len(J0) == size
        and len(J1) == size
        and len(s0) == size
        and len(s1) == size
        and not (s0 & s1)
        and all(0 <= i < n for i in s0 | s1)
    )


def _honest_sets(matches: list[int], n: int, c: int, rng: random.Random):
    """``J_c`` from the matches when possible; ``J_{1-c}`` uniform from the rest.

    Without enough matches the sets are still drawn with the same shape so
    the message does not reveal the failure.
    """
    size = n // 3
    ok = len(matches) >= size
    jc = rng.sample(matches, size) if ok else rng.sample(range(n), size)
    taken = set(jc)
    rest = [i for i in range(n) if i not in taken]
    jo = rng.sample(rest, size)
    pair = (tuple(sorted(jc)), tuple(sorted(jo)))
    return (pair if c == 0 else pair[::-1]), ok


def run_ot(
    params: OTParams,
    s0: int,
    s1: int,
    c: int,
    session: BoxSession,
    rng: random.Random,
    bob: Optional[BobOTAttack] = None,
) -> OTSession:
    """Run 1-2 NLOT with an honest sender; ``bob=None`` means an honest receiver."""
    for name, v in (("s0", s0), ("s1", s1), ("c", c)):
        if v not in (0, 1):
            raise InvalidArgument(f"{name} must be a bit")
    n = params.n
    if session.remaining < params.boxes:
        raise InvalidArgument(f"run needs {params.boxes} unused boxes, session has {session.remaining}")
    cheat = bob.cheat_set if bob is not None else frozenset()
    if any(not 0 <= i < n for i in cheat):
        raise InvalidArgument("cheat set indices must lie in [0, n)")

    boxes = session.take(2 * n)
    base = boxes.start
    enter = session.enter_input

    # step 1
    r0 = random_bits(rng, 2 * n)
    r1 = random_bits(rng, 2 * n)
    yp = random_bits(rng, 2 * n)
    delayed = [False] * (2 * n)
    for i in cheat:
        delayed[i + n * rng.getrandbits(1)] = True
    rounds = []
    for j in range(2 * n):
        x = r0[j] ^ r1[j]
        a = enter(base + j, ALICE, x)
        if delayed[j]:
            fake_b = rng.getrandbits(1)
            rounds.append(OTRoundState(r0[j], r1[j], x, None, a, None, (1, fake_b), True))
        else:
            b = enter(base + j, BOB, yp[j])
            rounds.append(OTRoundState(r0[j], r1[j], x, yp[j], a, b, (yp[j], b), False))
    sess = OTSession(params=params, s0=s0, s1=s1, c=c, rounds=rounds)

    # step 2: cut and choose
    backend = _backend(params, session, rng)
    for i in range(n):
        handles = {}
        for j in (i, i + n):
            cy, cb = rounds[j].committed
            handles[j] = (backend.commit(cy), backend.commit(cb))
        k = rng.getrandbits(1)
        sess.challenges.append(k)
        rounds[i].k_challenge = k
        opened, kept = (i + k * n, i + (1 - k) * n)
        hy, hb = handles[opened]
        oy, ok_y = backend.reveal(hy)
        ob, ok_b = backend.reveal(hb)
        sess.opened.append((opened, oy, ob))
        r = rounds[opened]
        passed = ok_y and ok_b and (r.x & oy) == (r.a ^ ob)
        if i in cheat:
            sess.cheat_examined += 1
            sess.cheat_escaped += passed
            if r.delayed:
                sess.fabricated_challenged += 1
                sess.fabricated_passed += passed
        if not passed:
            sess.outcome = ALICE_ABORTS
            sess.abort_reason = "commitment rejected" if not (ok_y and ok_b) else f"box check failed on round {opened}"
            return sess
        sess.survivors.append(kept)

    # step 3
    for j in sess.survivors:
        r = rounds[j]
        r.m = r.r0 ^ r.a
        r.y = rng.getrandbits(1)
        r.v = r.r1 if r.y else r.r0
        if r.delayed:
            # the receiver only now uses the box, choosing y' = y
            r.y_prime = r.y
            r.b = enter(base + j, BOB, r.y)
        r.v_prime = r.m ^ r.b

    # step 4
    matches = sess.matches
    size = params.set_size
    if bob is not None and len(matches) >= 2 * size:
        picked = rng.sample(matches, 2 * size)
        J0, J1 = tuple(sorted(picked[:size])), tuple(sorted(picked[size:]))
        bob_ok = True
        sess.learned_both = True
    else:
        (J0, J1), bob_ok = _honest_sets(matches, n, c, rng)
    sess.J0, sess.J1 = J0, J1

    # step 5
    if not valid_sets(J0, J1, n):
        sess.outcome = ALICE_ABORTS
        sess.abort_reason = "invalid index sets"
        sess.learned_both = False
        return sess
    v = [rounds[j].v for j in sess.survivors]
    vp = [rounds[j].v_prime for j in sess.survivors]
    sess.s_hat0 = s0 ^ _xor(v[i] for i in J0)
    sess.s_hat1 = s1 ^ _xor(v[i] for i in J1)

    # step 6
    if bob_ok:
        Jc, s_hat = (J0, sess.s_hat0) if c == 0 else (J1, sess.s_hat1)
        sess.bob_output = s_hat ^ _xor(vp[i] for i in Jc)
        sess.outcome = BOB_GETS
    else:
        sess.outcome = BOB_FAILS
    return sess


def _xor(bits) -> int:
    acc = 0
    for b in bits:
        acc ^= b
    return acc


def unmasked_pair(sess: OTSession) -> tuple[int, int]:
    """``(xor of v over J0, xor of v over J1)``, the masks the sender applied."""
    v = [sess.rounds[j].v for j in sess.survivors]
    return _xor(v[i] for i in sess.J0), _xor(v[i] for i in sess.J1)


# -- summaries over collections of runs ---------------------------------------
@dataclass(frozen=True)
class EscapeStats:
    examined: int
    escaped: int
    fabricated_challenged: int
    fabricated_passed: int

    @property
    def escape_rate(self) -> float:
        return self.escaped / self.examined if self.examined else float("nan")

    @property
    def fabricated_pass_rate(self) -> float:
        return self.fabricated_passed / self.fabricated_challenged if self.fabricated_challenged else float("nan")


def escape_stats(sessions: Iterable[OTSession]) -> EscapeStats:
    """Pool the cut-and-choose outcomes of every cheated pair the sender examined."""
    ex = es = fc = fp = 0
    for s in sessions:
        ex += s.cheat_examined
        es += s.cheat_escaped
        fc += s.fabricated_challenged
        fp += s.fabricated_passed
    return EscapeStats(ex, es, fc, fp)


def bob_learns_both(sessions: Sequence[OTSession]):
    """Fraction of attack runs where the receiver escaped and filled both sets with matches."""
    hits = sum(1 for s in sessions if s.learned_both)
    return summarize(len(sessions), hits)


@dataclass
class ViewReport:
    """Per-statistic comparison of the sender's view between the two receiver choices."""

    rows: list[dict]
    z_max: float

    @property
    def passed(self) -> bool:
        return all(r["ok"] for r in self.rows)

    def to_dict(self) -> dict:
        return {"z_max": self.z_max, "passed": self.passed, "statistics": self.rows}


def _view_features(sess: OTSession) -> dict:
    """Scalar statistics of everything the sender sees in one honest run."""
    n = sess.params.n
    y = [sess.rounds[j].y for j in sess.survivors]
    x = [sess.rounds[j].x for j in sess.survivors]
    J0, J1 = sess.J0, sess.J1
    return {
        "opened_y_prime": sum(o[1] for o in sess.opened) / n,
        "opened_b": sum(o[2] for o in sess.opened) / n,
        "challenges": sum(sess.challenges) / n,
        "J0_index_sum": sum(J0),
        "J1_index_sum": sum(J1),
        "J0_y_ones": sum(y[i] for i in J0),
        "J1_y_ones": sum(y[i] for i in J1),
        "J0_x_ones": sum(x[i] for i in J0),
        "J1_x_ones": sum(x[i] for i in J1),
        "J0_has_first": int(0 in J0),
        "J1_has_first": int(0 in J1),
    }


def _z(a: list, b: list) -> float:
    na, nb = len(a), len(b)
    ma, mb = sum(a) / na, sum(b) / nb
    va = sum((v - ma) ** 2 for v in a) / max(na - 1, 1)
    vb = sum((v - mb) ** 2 for v in b) / max(nb - 1, 1)
    se = math.sqrt(va / na + vb / nb)
    if se == 0:
        return 0.0 if ma == mb else math.inf
    return (ma - mb) / se


def alice_view_independence(
    sessions_c0: Sequence[OTSession], sessions_c1: Sequence[OTSession], z_max: float = 3.0
) -> ViewReport:
    """Two-sample comparison of the sender's view for ``c = 0`` against ``c = 1``.

    Means of each view statistic are compared with a two-sample z score; the
    match-count histogram (not visible to the sender, a sanity check on the
    receiver's randomness) with a chi-square test at the two-sided
    ``z_max``-sigma level. A swapped-label row compares ``J_c`` across arms.
    """
    from scipy.stats import chi2_contingency, norm

    if not sessions_c0 or not sessions_c1:
        raise InvalidArgument("need sessions for both values of c")
    if any(s.outcome == ALICE_ABORTS for s in (*sessions_c0, *sessions_c1)):
        raise InvalidArgument("view comparison expects honest, non-aborted runs")
    f0 = [_view_features(s) for s in sessions_c0]
    f1 = [_view_features(s) for s in sessions_c1]
    rows = []
    for key in f0[0]:
        a = [f[key] for f in f0]
        b = [f[key] for f in f1]
        z = _z(a, b)
        rows.append({"statistic": key, "mean_c0": sum(a) / len(a), "mean_c1": sum(b) / len(b), "z": z, "ok": bool(abs(z) <= z_max)})
    # J_c in one arm against J_c in the other: J0 of c=0 vs J1 of c=1
    a = [f["J0_index_sum"] for f in f0]
    b = [f["J1_index_sum"] for f in f1]
    z = _z(a, b)
    rows.append({"statistic": "Jc_index_sum_swapped", "mean_c0": sum(a) / len(a), "mean_c1": sum(b) / len(b), "z": z, "ok": bool(abs(z) <= z_max)})

    n = sessions_c0[0].params.n
    h0 = [0] * (n + 1)
    h1 = [0] * (n + 1)
    for s in sessions_c0:
        h0[len(s.matches)] += 1
    for s in sessions_c1:
        h1[len(s.matches)] += 1
    keep = [i for i in range(n + 1) if h0[i] + h1[i] > 0]
    table = [[h0[i] for i in keep], [h1[i] for i in keep]]
    p = float(chi2_contingency(table)[1]) if len(keep) > 1 else 1.0
    alpha = 2 * norm.sf(z_max)
    rows.append({"statistic": "match_count_histogram", "p_value": p, "alpha": float(alpha), "ok": bool(p >= alpha)})
    return ViewReport(rows, z_max)


# -- single-box demonstrations -------------------------------------------------
SYNCHRONOUS = "sync"
DELAYING = "delay"


def _receiver(kind: str) -> str:
    if kind not in (SYNCHRONOUS, DELAYING):
        raise InvalidArgument(f"receiver must be {SYNCHRONOUS!r} or {DELAYING!r}, got {kind!r}")
    return kind


def single_box_erasure(v: int, receiver: str, session: BoxSession, rng: random.Random) -> Optional[int]:
    """Send ``v`` through one box as an erasure channel; return the received bit or ``None``.

    A synchronous receiver commits to ``y'`` before the sender reveals ``y``
    and receives with probability 1/2. A delaying receiver waits for ``y`` and
    always receives.
    """
    _receiver(receiver)
    (box,) = session.take(1)
    y = rng.getrandbits(1)
    other = rng.getrandbits(1)
    r0, r1 = (v, other) if y == 0 else (other, v)
    a = session.enter_input(box, ALICE, r0 ^ r1)
    m = r0 ^ a
    # the delaying receiver holds off until y is announced
    yp = rng.getrandbits(1) if receiver == SYNCHRONOUS else y
    received = m ^ session.enter_input(box, BOB, yp)
    return received if yp == y else None


def ww_reduction_demo(b: int, receiver: str, session: BoxSession, rng: random.Random) -> Optional[int]:
    """OT from one 1-2 OT: sender hides ``b`` at a random position ``k`` and announces ``k`` afterwards.

    The synchronous receiver picks his choice before ``k`` is announced and
    learns ``b`` half the time. Since the box never forces him to use it, a
    delaying receiver waits for ``k`` and learns ``b`` every time.
    """
    _receiver(receiver)
    (box,) = session.take(1)
    k = rng.getrandbits(1)
    s = [0, 0]
    s[k] = b
    a = session.enter_input(box, ALICE, s[0] ^ s[1])
    m = s[0] ^ a
    choice = rng.getrandbits(1) if receiver == SYNCHRONOUS else k
    out = m ^ session.enter_input(box, BOB, choice)
    return out if choice == k else None


__all__ = [
    "ALICE_ABORTS",
    "BOB_FAILS",
    "BOB_GETS",
    "BobOTAttack",
    "DELAYING",
    "EscapeStats",
    "IdealCommitment",
    "OTParams",
    "OTRoundState",
    "OTSession",
    "SYNCHRONOUS",
    "ViewReport",
    "alice_view_independence",
    "bob_learns_both",
    "escape_stats",
    "run_ot",
    "single_box_erasure",
    "unmasked_pair",
    "valid_sets",
    "ww_reduction_demo",
]
