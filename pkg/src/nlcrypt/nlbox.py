"""Non-local (PR) boxes with immediate outputs and delayable inputs.

Each box has two sides. Whichever side enters its input first gets a fresh
uniform bit drawn from a counter-based stream keyed by ``(seed, box_id,
party)``; the second side's output is then forced to
``first_output ^ (x & y)``. Time is modelled purely by call order, so a party
"delays" a box simply by not calling :meth:`BoxSession.enter_input` yet.

The first mover's output is computed before the remote input exists, which
makes no-signaling structural rather than statistical.

>>> s = create_session(seed=7, count=2)
>>> a = s.enter_input(0, ALICE, 1)
>>> b = s.enter_input(0, BOB, 1)
>>> a ^ b
1
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgument, ProtocolViolation

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

_UNSET = 2


class Party(IntEnum):
    ALICE = 0
    BOB = 1

    @property
    def other(self) -> "Party":
        return Party(1 - self)


ALICE = Party.ALICE
BOB = Party.BOB


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *path: int) -> int:
    """Derive an independent 64-bit seed from ``seed`` and an index path."""
    z = mix64(seed)
    for p in path:
        z = mix64((z + (p + 1) * _GOLDEN) & MASK64)
    return z


def _stream_bit(key: int, box_id: int, party: int) -> int:
    return mix64(key + (2 * box_id + party + 1) * _GOLDEN) & 1


def _stream_bits(key: int, box_ids: np.ndarray, party: int) -> np.ndarray:
    z = box_ids.astype(np.uint64) * np.uint64(2) + np.uint64(party + 1)
    z = z * np.uint64(_GOLDEN) + np.uint64(key)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    z = z ^ (z >> np.uint64(31))
    return (z & np.uint64(1)).astype(np.uint8)


@dataclass(frozen=True)
class NLBoxInstance:
    """Read-only snapshot of one box."""

    box_id: int
    alice_input: Optional[int]
    bob_input: Optional[int]
    alice_output: Optional[int]
    bob_output: Optional[int]
    first_mover: Optional[Party]


class BoxSession:
    """A fixed pool of independent NL boxes sharing one seed.

    Sessions are single-owner: hand them between threads if needed, but never
    mutate one from two places at once.
    """

    def __init__(self, seed: int, count: int):
        if count < 1:
            raise InvalidArgument(f"box count must be >= 1, got {count}")
        self.seed = int(seed) & MASK64
        self.count = int(count)
        self._key = mix64(self.seed)
        self._in = (bytearray([_UNSET]) * count, bytearray([_UNSET]) * count)
        self._out = (bytearray([_UNSET]) * count, bytearray([_UNSET]) * count)
        self._first = bytearray([_UNSET]) * count
        self._cursor = 0

    def __len__(self) -> int:
        return self.count

    def __repr__(self) -> str:
        return f"BoxSession(seed={self.seed}, count={self.count}, allocated={self._cursor})"

    # -- allocation -------------------------------------------------------
    def take(self, count: int) -> range:
        """Reserve the next ``count`` never-allocated box ids."""
        if count < 0:
            raise InvalidArgument("cannot take a negative number of boxes")
        if self._cursor + count > self.count:
            raise InvalidArgument(
                f"session has {self.count - self._cursor} unallocated boxes, {count} requested"
            )
        ids = range(self._cursor, self._cursor + count)
        self._cursor += count
        return ids

    @property
    def remaining(self) -> int:
        return self.count - self._cursor

    # -- box operations ---------------------------------------------------
    def _check_id(self, box_id: int) -> None:
        if not 0 <= box_id < self.count:
            raise InvalidArgument(f"unknown box id {box_id}")

    def enter_input(self, box_id: int, party: Party, bit: int) -> int:
        """Enter ``bit`` on ``party``'s side of a box and return its output now."""
        if not 0 <= box_id < self.count:
            raise InvalidArgument(f"unknown box id {box_id}")
        if bit != 0 and bit != 1:
            raise InvalidArgument(f"input must be a bit, got {bit!r}")
        own_in = self._in[party]
        if own_in[box_id] != _UNSET:
            raise ProtocolViolation(f"{Party(party).name} already used box {box_id}")
        other = 1 - party
        other_in = self._in[other][box_id]
        if other_in == _UNSET:
            out = _stream_bit(self._key, box_id, party)
            self._first[box_id] = party
        else:
            out = self._out[other][box_id] ^ (bit & other_in)
        own_in[box_id] = bit
        self._out[party][box_id] = out
        return out

    def enter_inputs(self, box_ids, party: Party, bits):
        """Enter many inputs on one side.

        Lists/ranges are processed in order and a list is returned. NumPy
        arrays take a vectorized path and return a ``uint8`` array; the
        outputs are identical either way.
        """
        if isinstance(box_ids, np.ndarray):
            return self._enter_array(box_ids, party, bits)
        if len(box_ids) != len(bits):
            raise InvalidArgument("box_ids and bits differ in length")
        enter = self.enter_input
        return [enter(i, party, v) for i, v in zip(box_ids, bits)]

    def _enter_array(self, box_ids: np.ndarray, party: Party, bits) -> np.ndarray:
        ids = np.asarray(box_ids, dtype=np.int64)
        bits = np.asarray(bits, dtype=np.uint8)
        if ids.shape != bits.shape or ids.ndim != 1:
            raise InvalidArgument("box_ids and bits must be 1-d arrays of equal length")
        if ids.size == 0:
            return np.empty(0, dtype=np.uint8)
        if ids.min() < 0 or ids.max() >= self.count:
            raise InvalidArgument("unknown box id in batch")
        if (bits > 1).any():
            raise InvalidArgument("inputs must be bits")
        own_in = np.frombuffer(self._in[party], dtype=np.uint8)
        own_out = np.frombuffer(self._out[party], dtype=np.uint8)
        other_in = np.frombuffer(self._in[1 - party], dtype=np.uint8)
        other_out = np.frombuffer(self._out[1 - party], dtype=np.uint8)
        first = np.frombuffer(self._first, dtype=np.uint8)
        if (own_in[ids] != _UNSET).any() or np.unique(ids).size != ids.size:
            raise ProtocolViolation(f"{Party(party).name} already used a box in this batch")

        remote_in = other_in[ids]
        second = remote_in != _UNSET
        out = np.empty(ids.size, dtype=np.uint8)
        fresh = ids[~second]
        out[~second] = _stream_bits(self._key, fresh, int(party))
        first[fresh] = int(party)
        out[second] = other_out[ids[second]] ^ (bits[second] & remote_in[second])
        own_in[ids] = bits
        own_out[ids] = out
        return out

    def is_used(self, box_id: int, party: Party) -> bool:
        self._check_id(box_id)
        return self._in[party][box_id] != _UNSET

    def box(self, box_id: int) -> NLBoxInstance:
        self._check_id(box_id)

        def opt(buf):
            v = buf[box_id]
            return None if v == _UNSET else v

        first = self._first[box_id]
        return NLBoxInstance(
            box_id=box_id,
            alice_input=opt(self._in[ALICE]),
            bob_input=opt(self._in[BOB]),
            alice_output=opt(self._out[ALICE]),
            bob_output=opt(self._out[BOB]),
            first_mover=None if first == _UNSET else Party(first),
        )

    @property
    def boxes(self) -> list[NLBoxInstance]:
        return [self.box(i) for i in range(self.count)]

    def outputs(self, party: Party) -> np.ndarray:
        """Output column for one side; unset entries hold 2."""
        return np.frombuffer(bytes(self._out[party]), dtype=np.uint8)

    def inputs(self, party: Party) -> np.ndarray:
        return np.frombuffer(bytes(self._in[party]), dtype=np.uint8)


def create_session(seed: int, count: int) -> BoxSession:
    return BoxSession(seed, count)


def enter_input(session: BoxSession, box_id: int, party: Party, bit: int) -> int:
    return session.enter_input(box_id, party, bit)


def enter_inputs(session: BoxSession, box_ids, party: Party, bits):
    return session.enter_inputs(box_ids, party, bits)


def is_used(session: BoxSession, box_id: int, party: Party) -> bool:
    return session.is_used(box_id, party)


def chsh_value(session: BoxSession, box_ids: Sequence[int] | np.ndarray) -> float:
    """Sum over the four input cells of Pr[a ^ b == x & y] for boxes with both inputs."""
    ids = np.asarray(box_ids, dtype=np.int64)
    x = session.inputs(ALICE)[ids]
    y = session.inputs(BOB)[ids]
    a = session.outputs(ALICE)[ids]
    b = session.outputs(BOB)[ids]
    if (x == _UNSET).any() or (y == _UNSET).any():
        raise InvalidArgument("chsh_value needs boxes with both inputs entered")
    win = (a ^ b) == (x & y)
    total = 0.0
    for cx in (0, 1):
        for cy in (0, 1):
            cell = (x == cx) & (y == cy)
            if not cell.any():
                raise InvalidArgument(f"no boxes in input cell ({cx}, {cy})")
            total += float(win[cell].mean())
    return total
