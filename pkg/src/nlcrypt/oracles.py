"""Exact oracles: brute-force enumeration and exact binomial tails.

Everything here is computed independently of the simulators, by counting,
and returned as :class:`fractions.Fraction` where the value is rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import InvalidArgument, ResourceLimit
from .parity import as_bits, bitstr

ENUMERATION_CAP = 8


# -- commit-string enumeration -------------------------------------------------
@lru_cache(maxsize=None)
def _all_strings(m: int) -> np.ndarray:
    """All ``2**m`` bit strings of length ``m`` as a (2**m, m) uint8 array, lexicographic."""
    ints = np.arange(1 << m, dtype=np.int64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((ints[:, None] >> shifts) & 1).astype(np.uint8)


@lru_cache(maxsize=None)
def preimage(n: int, c: int) -> np.ndarray:
    """Rows of ``decode^-1(c)`` for strings of length ``2n + 1``."""
    m = 2 * n + 1
    xs = _all_strings(m)
    pairs = (xs[:, 0 : 2 * n : 2] & xs[:, 1 : 2 * n : 2]).sum(axis=1)
    dec = (pairs + xs[:, -1]) & 1
    return xs[dec == c]


def _check_n(n: int, cap: int) -> None:
    if n < 0:
        raise InvalidArgument("n must be non-negative")
    if n > cap:
        raise ResourceLimit(f"n={n} exceeds the enumeration cap {cap} (2^{2 * cap + 1} strings)")


def exact_pcy(n: int, y, c: int, cap: int = ENUMERATION_CAP) -> Fraction:
    """Pr[x . y == c] over x uniform on ``decode^-1(c)``."""
    _check_n(n, cap)
    y = np.array(as_bits(y), dtype=np.uint8)
    if y.size != 2 * n + 1:
        raise InvalidArgument(f"y must have length {2 * n + 1}, got {y.size}")
    if not y.any():
        raise InvalidArgument("y = 0 is excluded: x . y is constant")
    xs = preimage(n, c)
    hits = int(((xs @ y) % 2 == c).sum())
    return Fraction(hits, xs.shape[0])


@dataclass(frozen=True)
class ExactBiasTable:
    """``p^c_y`` for every nonzero ``y`` of length ``2n + 1`` and both ``c``."""

    n: int
    entries: dict  # (c, y_string) -> Fraction

    @property
    def bound(self) -> Fraction:
        return Fraction(1, 2 ** (self.n + 1))

    @property
    def max_deviation(self) -> Fraction:
        return max(abs(p - Fraction(1, 2)) for p in self.entries.values())

    def tight_witnesses(self) -> list[tuple[int, str]]:
        b = self.bound
        return sorted(key for key, p in self.entries.items() if abs(p - Fraction(1, 2)) == b)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "entries": [
                {"c": c, "y": y, "p": float(p), "p_exact": str(p)}
                for (c, y), p in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
            "max_deviation": float(self.max_deviation),
            "bound": float(self.bound),
            "within_bound": self.max_deviation <= self.bound,
            "tight": bool(self.tight_witnesses()),
        }


def bias_table(n: int, cap: int = 5) -> ExactBiasTable:
    """Full sweep over nonzero ``y``; capped lower than :func:`exact_pcy` since it is 2^(2n+1) times the work."""
    _check_n(n, cap)
    m = 2 * n + 1
    ys = _all_strings(m)[1:]
    entries = {}
    for c in (0, 1):
        xs = preimage(n, c).astype(np.int32)
        # (x . y) mod 2 for all pairs at once
        ip = (xs @ ys.T.astype(np.int32)) & 1
        hits = (ip == c).sum(axis=0)
        denom = xs.shape[0]
        for y, h in zip(ys, hits):
            entries[(c, bitstr(y))] = Fraction(int(h), denom)
    return ExactBiasTable(n=n, entries=entries)


def single_block_accuracy(n: int, y) -> Fraction:
    """Bayes-optimal Pr[guess == c] from ``x . y`` alone, for uniform ``c``."""
    y = as_bits(y)
    if not any(y):
        return Fraction(1, 2)
    p0 = exact_pcy(n, y, 0)  # Pr[xy=0 | c=0]
    p1 = exact_pcy(n, y, 1)  # Pr[xy=1 | c=1]
    # outcome t=0 has likelihoods (p0, 1-p1); t=1 has (1-p0, p1)
    return Fraction(1, 2) * (max(p0, 1 - p1) + max(1 - p0, p1))


@lru_cache(maxsize=None)
def best_guess_y(n: int) -> tuple[int, ...]:
    """Nonzero ``y`` maximizing single-block guessing accuracy; lowest string wins ties."""
    m = 2 * n + 1
    best, best_acc = None, Fraction(-1)
    for y in product((0, 1), repeat=m):
        if not any(y):
            continue
        acc = single_block_accuracy(n, y)
        if acc > best_acc:
            best, best_acc = y, acc
    return best


def bob_view_conditional(n: int, y, c: int) -> dict:
    """Exact law of an honest block's view ``(b, A)`` for fixed ``y``, split by ``x . y``.

    Alice's outputs ``a`` are uniform (she enters first), Bob's are
    ``b_i = a_i ^ x_i y_i`` and ``A = parity(a)``. Returns
    ``{t: {(b, A): Pr[(b, A) | x.y = t, c]}}``.
    """
    y = np.array(as_bits(y), dtype=np.uint8)
    m = 2 * n + 1
    xs = preimage(n, c)
    a_all = _all_strings(m)
    a_par = a_all.sum(axis=1) & 1
    counts: dict = {0: {}, 1: {}}
    for x in xs:
        t = int((x @ y) & 1)
        bs = a_all ^ (x & y)
        keys = [(bitstr(b), int(p)) for b, p in zip(bs, a_par)]
        bucket = counts[t]
        for key in keys:
            bucket[key] = bucket.get(key, 0) + 1
    out = {}
    for t, bucket in counts.items():
        total = sum(bucket.values())
        out[t] = {k: Fraction(v, total) for k, v in bucket.items()} if total else {}
    return out


# -- binomial tails ------------------------------------------------------------
def binomial_tail(n: int, threshold: int) -> Fraction:
    """Exact Pr[S_n > threshold] for S_n ~ Binomial(n, 1/2)."""
    if n < 0 or not 0 <= threshold <= n:
        raise InvalidArgument(f"need 0 <= threshold <= n, got n={n}, threshold={threshold}")
    return Fraction(sum(math.comb(n, j) for j in range(threshold + 1, n + 1)), 2**n)


def binomial_at_least(n: int, t: int) -> Fraction:
    """Exact Pr[S_n >= t]; clamps ``t`` into range."""
    if t <= 0:
        return Fraction(1)
    if t > n:
        return Fraction(0)
    return binomial_tail(n, t - 1)


def ot_honest_failure(n: int) -> Fraction:
    """Pr[fewer than n/3 of n fair coin pairs agree] = Pr[S_n > 2n/3]."""
    return binomial_tail(n, (2 * n) // 3)


def ot_both_secrets(n: int, k: int) -> Fraction:
    """Exact Pr[attacking Bob escapes and can fill both sets with matches].

    Each cheated pair ends one of three ways: the delayed box survives (1/2,
    guaranteed match), the fabricated opening passes and the honest box
    survives (1/4, fair-coin match), or Bob is caught (1/4). Bob learns both
    secrets iff nobody catches him and at least ``2n/3`` surviving rounds
    match.
    """
    if not 0 <= k <= n:
        raise InvalidArgument("need 0 <= k <= n")
    need = (2 * n) // 3
    total = Fraction(0)
    for j in range(k + 1):
        weight = math.comb(k, j) * Fraction(1, 2) ** j * Fraction(1, 4) ** (k - j)
        total += weight * binomial_at_least(n - j, need - j)
    return total


# -- bound formulas ------------------------------------------------------------
def delayed_blocks_bound(k: int) -> float:
    return 0.75**k


def binding_sum_bound(k_star: int, k0: int, k1: int) -> float:
    """Pr[accept | reveal 0] + Pr[accept | reveal 1] for the mixed block strategy."""
    return 0.75**k_star * (0.5**k1 + 0.5**k0)


def binding_sum_ceiling(k: int, k_star: int, k0: int) -> float:
    """Strategy-independent ceiling on the binding sum: 1 unless k_star <= 2 and k0 == 0."""
    if k_star <= 2 and k0 == 0:
        return 1 + 0.5 ** (k - 2)
    return 1.0


def guess_bound(n: int, k: int) -> float:
    return 0.5 + k / 2 ** (n + 1)


def ot_failure_bound(n: int) -> float:
    return math.exp(-n / 18)


def ot_attack_bound(n: int, k: int) -> float:
    if k >= n or 3 * k > n:
        return 0.75**k
    return 0.75**k * math.exp(-2 * (n - 3 * k) ** 2 / (18 * (n - k)))


__all__ = [
    "ENUMERATION_CAP",
    "ExactBiasTable",
    "best_guess_y",
    "bias_table",
    "binding_sum_bound",
    "binding_sum_ceiling",
    "binomial_at_least",
    "binomial_tail",
    "bob_view_conditional",
    "delayed_blocks_bound",
    "exact_pcy",
    "guess_bound",
    "ot_attack_bound",
    "ot_both_secrets",
    "ot_failure_bound",
    "ot_honest_failure",
    "preimage",
    "single_block_accuracy",
]
