import math
from fractions import Fraction
from itertools import product

import pytest
from scipy.stats import binom

from nlcrypt import oracles
from nlcrypt.errors import InvalidArgument, ResourceLimit
from nlcrypt.parity import decode, inner


def brute_pcy(n, y, c):
    """Direct enumeration without numpy."""
    xs = [x for x in product((0, 1), repeat=2 * n + 1) if decode(x) == c]
    return Fraction(sum(inner(x, y) == c for x in xs), len(xs))


@pytest.mark.parametrize(
    "n,y,c,expected",
    [
        (0, "1", 0, Fraction(1)),
        (1, "001", 0, Fraction(3, 4)),
        (1, "001", 1, Fraction(3, 4)),
        (1, "111", 0, Fraction(1, 4)),
        (1, "010", 1, Fraction(1, 2)),
    ],
)
def test_exact_pcy_known_values(n, y, c, expected):
    assert oracles.exact_pcy(n, y, c) == expected


@pytest.mark.parametrize("n", [1, 2])
def test_exact_pcy_agrees_with_pure_python(n):
    for y in product((0, 1), repeat=2 * n + 1):
        if any(y):
            for c in (0, 1):
                assert oracles.exact_pcy(n, y, c) == brute_pcy(n, y, c)


def test_exact_pcy_errors():
    with pytest.raises(InvalidArgument):
        oracles.exact_pcy(1, "000", 0)
    with pytest.raises(InvalidArgument):
        oracles.exact_pcy(1, "01", 0)
    with pytest.raises(ResourceLimit):
        oracles.exact_pcy(9, "1" * 19, 0)
    with pytest.raises(ResourceLimit):
        oracles.bias_table(6)


@pytest.mark.parametrize("n", range(6))
def test_bias_within_bound_and_tight(n):
    table = oracles.bias_table(n)
    assert table.max_deviation <= table.bound == Fraction(1, 2 ** (n + 1))
    assert table.tight_witnesses()
    assert len(table.entries) == 2 * (2 ** (2 * n + 1) - 1)


@pytest.mark.parametrize("n", range(4))
def test_bias_is_symmetric_in_the_committed_bit(n):
    # Pr[x.y = c | decode(x) = c] takes the same value for both c
    table = oracles.bias_table(n)
    for (c, y), p in table.entries.items():
        assert table.entries[(1 - c, y)] == p


def test_best_guess_y_and_single_block_accuracy():
    assert oracles.best_guess_y(1) == (0, 0, 1)
    assert oracles.best_guess_y(3) == (0, 0, 0, 0, 0, 0, 1)
    assert oracles.single_block_accuracy(3, oracles.best_guess_y(3)) == Fraction(9, 16)
    assert oracles.single_block_accuracy(1, "000") == Fraction(1, 2)
    for n in range(1, 4):
        assert oracles.single_block_accuracy(n, oracles.best_guess_y(n)) == Fraction(1, 2) + Fraction(1, 2 ** (n + 1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_view_depends_on_c_only_through_inner_product(n):
    for y in [(0,) * (2 * n) + (1,), (1,) * (2 * n + 1), (1, 0) * n + (0,)]:
        v0 = oracles.bob_view_conditional(n, y, 0)
        v1 = oracles.bob_view_conditional(n, y, 1)
        for t in (0, 1):
            if v0[t] and v1[t]:
                assert v0[t] == v1[t]


@pytest.mark.parametrize("n,t", [(1, 0), (10, 3), (36, 24), (36, 11), (90, 60)])
def test_binomial_tail_matches_scipy(n, t):
    assert float(oracles.binomial_tail(n, t)) == pytest.approx(binom.sf(t, n, 0.5), rel=1e-12)


def test_binomial_errors_and_clamps():
    with pytest.raises(InvalidArgument):
        oracles.binomial_tail(5, 6)
    assert oracles.binomial_at_least(5, 0) == 1
    assert oracles.binomial_at_least(5, 6) == 0


def test_ot_exact_values():
    assert float(oracles.ot_honest_failure(36)) == pytest.approx(0.014408, abs=1e-6)
    assert float(oracles.ot_both_secrets(36, 6)) == pytest.approx(0.019928, abs=1e-6)
    # no cheating: Bob needs 2n/3 honest matches
    assert oracles.ot_both_secrets(36, 0) == oracles.binomial_at_least(36, 24)


@pytest.mark.parametrize("n,k", [(9, 2), (36, 6), (36, 20)])
def test_ot_both_secrets_by_scipy(n, k):
    # delayed survivors j ~ Bin(k, 1/2) given no catch; total no-catch prob (3/4)^k
    total = 0.0
    for j in range(k + 1):
        weight = math.comb(k, j) * 0.5**j * 0.25 ** (k - j)
        total += weight * binom.sf(2 * n // 3 - j - 1, n - j, 0.5)
    assert float(oracles.ot_both_secrets(n, k)) == pytest.approx(total, rel=1e-9)


def test_bound_formulas_at_hand_computed_points():
    assert oracles.delayed_blocks_bound(2) == 0.5625
    assert oracles.delayed_blocks_bound(10) == pytest.approx(0.0563135147)
    assert oracles.binding_sum_bound(1, 1, 0) == 1.125
    assert oracles.binding_sum_bound(0, 2, 1) == 0.75
    assert oracles.binding_sum_ceiling(10, 2, 0) == 1 + 2**-8
    assert oracles.binding_sum_ceiling(10, 3, 0) == 1.0
    assert oracles.guess_bound(3, 1) == 0.5625
    assert oracles.guess_bound(2, 10) == 1.75
    assert oracles.ot_failure_bound(36) == pytest.approx(math.exp(-2))
    assert oracles.ot_attack_bound(36, 0) == pytest.approx(math.exp(-4))
    assert oracles.ot_attack_bound(36, 6) == pytest.approx(0.75**6 * math.exp(-1.2))
    assert oracles.ot_attack_bound(9, 4) == 0.75**4
