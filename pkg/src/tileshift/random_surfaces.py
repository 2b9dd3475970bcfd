"""Random pastings and how often they glue up connected.

Sampling draws the two pasting permutations independently and uniformly
(Fisher-Yates); connectedness of the resulting surface is then just
transitivity of the pair acting on squares.  The exact small-n
probability is available as a cross-check for the Monte Carlo estimate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from . import perm
from .errors import BudgetExceeded
from .surface import Board

Z95 = 1.959963984540054  # two-sided 95% normal quantile

EXACT_ENUMERATION_LIMIT = 7  # 7!^2 = 25.4M pairs; beyond this, refuse


@dataclass(frozen=True)
class ConnectivityEstimate:
    n: int
    trials: int
    successes: int
    p_hat: float
    ci_low: float
    ci_high: float
    seed: int | None


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval; behaves sensibly even for 0 or all successes."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


def _sample_pastings(n: int, rng: random.Random) -> tuple[list[int], list[int]]:
    """Two independent uniform permutations: right first, then up."""
    right = list(range(n))
    up = list(range(n))
    rng.shuffle(right)
    rng.shuffle(up)
    return right, up


def sample_board(n: int, rng: random.Random) -> Board:
    """A uniformly random pasting of n squares."""
    right, up = _sample_pastings(n, rng)
    return Board(n=n, right=tuple(right), up=tuple(up))


def estimate_connectivity(n: int, trials: int, seed: int | None = None) -> ConnectivityEstimate:
    """Monte Carlo estimate of P(random pasting of n squares is connected).

    Draws the same permutation stream as ``sample_board`` but skips the
    Board wrapper in the hot loop; calibration runs pump 10^7 trials
    through here.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    successes = 0
    transitive = perm.is_transitive
    for _ in range(trials):
        right, up = _sample_pastings(n, rng)
        if transitive(right, up):
            successes += 1
    low, high = wilson_interval(successes, trials)
    return ConnectivityEstimate(
        n=n,
        trials=trials,
        successes=successes,
        p_hat=successes / trials,
        ci_low=low,
        ci_high=high,
        seed=seed,
    )


def exact_connectivity_probability(n: int) -> Fraction:
    """Exact fraction of permutation pairs acting transitively on n squares.

    Transitivity only depends on the first permutation through its cycle
    type, so one representative per type is paired against every second
    permutation and weighted by the size of its conjugacy class.  That
    keeps n=7 at 15 partitions x 5040 partners instead of 25.4M pairs.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > EXACT_ENUMERATION_LIMIT:
        raise BudgetExceeded(f"exact enumeration capped at n={EXACT_ENUMERATION_LIMIT}")
    transitive_pairs = 0
    for parts in _partitions(n):
        rep = _perm_with_cycle_type(parts)
        hits = sum(1 for up in permutations(range(n)) if perm.is_transitive(rep, up))
        transitive_pairs += _conjugacy_class_size(n, parts) * hits
    return Fraction(transitive_pairs, math.factorial(n) ** 2)


def _partitions(n: int, smallest: int = 1):
    """Integer partitions of n as non-decreasing tuples."""
    if n == 0:
        yield ()
        return
    for first in range(smallest, n + 1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _perm_with_cycle_type(parts: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    base = 0
    for length in parts:
        out.extend(list(range(base + 1, base + length)) + [base])
        base += length
    return tuple(out)


def _conjugacy_class_size(n: int, parts: tuple[int, ...]) -> int:
    """n! / (prod of part lengths * prod of multiplicities!)."""
    denom = 1
    multiplicity: dict[int, int] = {}
    for length in parts:
        denom *= length
        multiplicity[length] = multiplicity.get(length, 0) + 1
    for m in multiplicity.values():
        denom *= math.factorial(m)
    return math.factorial(n) // denom
