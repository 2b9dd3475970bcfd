import math
import random
from fractions import Fraction
from itertools import permutations

import pytest

from tileshift import perm
from tileshift.errors import BudgetExceeded
from tileshift.random_surfaces import (
    _sample_pastings,
    estimate_connectivity,
    exact_connectivity_probability,
    sample_board,
    wilson_interval,
)

# exact values, cross-checked below against brute enumeration and the
# orbit-splitting recurrence
EXACT = {
    1: Fraction(1),
    2: Fraction(3, 4),
    3: Fraction(13, 18),
    4: Fraction(71, 96),
    5: Fraction(461, 600),
    6: Fraction(383, 480),
    7: Fraction(29093, 35280),
}


def brute_force_probability(n):
    hits = sum(
        perm.is_transitive(r, u)
        for r in permutations(range(n))
        for u in permutations(range(n))
    )
    return Fraction(hits, math.factorial(n) ** 2)


def recurrence_transitive_pairs(n):
    """(n!)^2 = sum over the orbit of square 0 of binom * t_k * ((n-k)!)^2."""
    t = {}
    for m in range(1, n + 1):
        total = math.factorial(m) ** 2
        for k in range(1, m):
            total -= math.comb(m - 1, k - 1) * t[k] * math.factorial(m - k) ** 2
        t[m] = total
    return t[n]


class TestSampleBoard:
    def test_single_square(self):
        board = sample_board(1, random.Random(0))
        assert board.right == (0,) and board.up == (0,)

    def test_deterministic(self):
        a = sample_board(8, random.Random(5))
        b = sample_board(8, random.Random(5))
        assert (a.right, a.up) == (b.right, b.up)

    def test_estimator_draws_the_same_stream(self):
        a = sample_board(6, random.Random(3))
        right, up = _sample_pastings(6, random.Random(3))
        assert (a.right, a.up) == (tuple(right), tuple(up))

    def test_positionwise_uniformity(self):
        # n=5, 10^4 samples: every right[i]=j frequency within 4 sigma of 1/5
        n, trials = 5, 10_000
        rng = random.Random(123)
        counts = [[0] * n for _ in range(n)]
        for _ in range(trials):
            board = sample_board(n, rng)
            for i, j in enumerate(board.right):
                counts[i][j] += 1
        expected = trials / n
        sigma = math.sqrt(trials * (1 / n) * (1 - 1 / n))
        for i in range(n):
            for j in range(n):
                assert abs(counts[i][j] - expected) < 4 * sigma, (i, j, counts[i][j])


class TestExactProbability:
    def test_known_values(self):
        for n, value in EXACT.items():
            assert exact_connectivity_probability(n) == value

    def test_n3_matches_36_pair_enumeration(self):
        assert brute_force_probability(3) == EXACT[3]

    def test_brute_force_agreement_small(self):
        for n in (1, 2, 3, 4):
            assert exact_connectivity_probability(n) == brute_force_probability(n)

    def test_recurrence_agreement(self):
        for n in range(1, 8):
            expected = Fraction(recurrence_transitive_pairs(n), math.factorial(n) ** 2)
            assert exact_connectivity_probability(n) == expected

    def test_budget_cap(self):
        with pytest.raises(BudgetExceeded):
            exact_connectivity_probability(8)


class TestEstimate:
    def test_n1_always_connected(self):
        est = estimate_connectivity(1, 500, seed=0)
        assert est.p_hat == 1.0
        assert est.successes == est.trials == 500

    def test_deterministic(self):
        a = estimate_connectivity(4, 2000, seed=9)
        b = estimate_connectivity(4, 2000, seed=9)
        assert a == b

    def test_n2_interval_contains_three_quarters(self):
        est = estimate_connectivity(2, 100_000, seed=202)
        assert est.ci_low <= 0.75 <= est.ci_high

    def test_monotone_trend_10_vs_100(self):
        low = estimate_connectivity(10, 10_000, seed=31)
        high = estimate_connectivity(100, 10_000, seed=31)
        assert high.p_hat > low.p_hat

    def test_invariants_of_estimate(self):
        est = estimate_connectivity(3, 1234, seed=77)
        assert 0 <= est.ci_low <= est.p_hat <= est.ci_high <= 1
        assert est.p_hat == est.successes / est.trials


class TestWilson:
    def test_symmetric_at_half(self):
        low, high = wilson_interval(50, 100)
        assert low < 0.5 < high
        assert abs((0.5 - low) - (high - 0.5)) < 1e-12

    def test_extremes_stay_in_unit_interval(self):
        assert wilson_interval(0, 40)[0] == 0.0
        assert wilson_interval(40, 40)[1] == 1.0

    def test_calibration_on_exact_value(self):
        """Coverage check: the 95% interval catches p=3/4 in >=93 of 100 seeded runs."""
        exact = 0.75
        hits = 0
        for seed in range(100):
            est = estimate_connectivity(2, 100_000, seed=seed)
            if est.ci_low <= exact <= est.ci_high:
                hits += 1
        assert hits >= 93
