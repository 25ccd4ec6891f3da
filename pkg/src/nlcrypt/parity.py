"""The ``|s|_11`` pair count and the odd-length commit-string encoding.

``count11`` walks the string two bits at a time, so only pairs starting at
odd (1-based) positions count: ``count11("0110") == 0`` even though "11"
occurs as a substring.

A commit string has length ``2n + 1`` and carries the bit
``(count11(x[:2n]) + x[2n]) % 2``.
"""

from __future__ import annotations

import random
from typing import Sequence

from .errors import InvalidArgument

Bits = Sequence[int]


def as_bits(s) -> tuple[int, ...]:
    """Accept ``"0110"``, a sequence of ints, or a NumPy array; return a tuple of ints."""
    if isinstance(s, str):
        if any(ch not in "01" for ch in s):
            raise InvalidArgument(f"not a bit string: {s!r}")
        return tuple(int(ch) for ch in s)
    out = tuple(int(v) for v in s)
    if any(v not in (0, 1) for v in out):
        raise InvalidArgument("bit strings may only contain 0 and 1")
    return out


def bitstr(bits: Bits) -> str:
    return "".join(str(int(b)) for b in bits)


def count11(s: Bits) -> int:
    if isinstance(s, str):
        s = as_bits(s)
    if len(s) % 2:
        raise InvalidArgument(f"count11 needs an even-length string, got length {len(s)}")
    return sum(1 for i in range(0, len(s), 2) if s[i] and s[i + 1])


def decode(x: Bits) -> int:
    """Bit carried by an odd-length commit string."""
    if isinstance(x, str):
        x = as_bits(x)
    if len(x) % 2 == 0:
        raise InvalidArgument(f"commit strings have odd length, got {len(x)}")
    return (count11(x[:-1]) + x[-1]) & 1


def encode(c: int, n: int, rng: random.Random) -> tuple[int, ...]:
    """Uniform element of ``decode^-1(c)`` of length ``2n + 1``."""
    if n < 0:
        raise InvalidArgument("n must be non-negative")
    if c not in (0, 1):
        raise InvalidArgument(f"committed value must be a bit, got {c!r}")
    return complete(random_bits(rng, 2 * n), c)


def random_bits(rng: random.Random, m: int) -> list[int]:
    """``m`` independent fair bits from one ``getrandbits`` call."""
    v = rng.getrandbits(m) if m else 0
    return [(v >> i) & 1 for i in range(m)]


def complete(head: Bits, c: int) -> tuple[int, ...]:
    """Append the final bit forcing ``decode(head + [last]) == c``."""
    return (*head, (count11(head) + c) & 1)


def inner(x: Bits, y: Bits) -> int:
    """Inner product mod 2."""
    if isinstance(x, str):
        x = as_bits(x)
    if isinstance(y, str):
        y = as_bits(y)
    if len(x) != len(y):
        raise InvalidArgument("inner product of strings with different lengths")
    acc = 0
    for a, b in zip(x, y):
        acc ^= a & b
    return acc


def parity(bits: Bits) -> int:
    if isinstance(bits, str):
        bits = as_bits(bits)
    acc = 0
    for b in bits:
        acc ^= b
    return acc


def toggle_position(x: Bits) -> int:
    """Lowest index whose flip changes ``decode(x)``.

    Index ``i`` in the first ``2n`` bits toggles iff its pair partner is 1;
    the last index always toggles, so this never fails.
    """
    m = len(x)
    for i in range(m - 1):
        partner = i + 1 if i % 2 == 0 else i - 1
        if x[partner]:
            return i
    return m - 1
