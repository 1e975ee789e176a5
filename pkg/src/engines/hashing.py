"""
l-perfect hash families for color coding
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from src.utils.errors import InfeasibleDeterministic

logger = logging.getLogger(__name__)

DETERMINISTIC = "deterministic"
RANDOMIZED = "randomized"


@dataclass(frozen=True)
class HashFamily:
    """
    Maps from ``0..n-1`` onto colors ``1..l``

    In deterministic mode every l-subset of the domain is mapped injectively
    by some member; in randomized mode each subset is missed with probability
    at most ``error_bound``.
    """

    n: int
    l: int
    functions: tuple
    mode: str = DETERMINISTIC
    seed: int | None = None

    @property
    def trials(self) -> int:
        return len(self.functions)

    @property
    def error_bound(self) -> float:
        if self.mode == DETERMINISTIC:
            return 0.0
        return (1.0 - math.factorial(self.l) / self.l ** self.l) ** self.trials

    def covers(self, subset) -> bool:
        subset = list(subset)
        return any(len({f[x] for x in subset}) == len(subset) for f in self.functions)

    def __len__(self) -> int:
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    candidate = max(n + 1, 2)
    while any(candidate % d == 0 for d in range(2, math.isqrt(candidate) + 1)):
        candidate += 1
    return candidate


def _injective_on(values, subset):
    return len({values[x] for x in subset}) == len(subset)


def _perfect_for(subset, n, l, p):
    """First two-stage map, in (a, b) order, that is injective on ``subset``."""
    buckets = l * l
    for a in range(1, p):
        for b in range(p):
            first = [((a * x + b) % p) % buckets for x in range(n)]
            if _injective_on(first, subset):
                colors = {first[x]: i for i, x in enumerate(subset, start=1)}
                return tuple(colors.get(first[x], 1) for x in range(n))
    raise InfeasibleDeterministic(f"no first-stage map separates {subset}")


def build_hash_family(n, l, mode=DETERMINISTIC, seed=0, epsilon=1e-6, coverage_limit=10**6) -> HashFamily:
    """
    Build an l-perfect family on ``0..n-1``

    Deterministic mode walks the l-subsets in lexicographic order and, for
    each one not yet covered, adds the first map ``x -> g(((a*x + b) mod p)
    mod l^2)`` (p the least prime above n) that is injective on it, where g
    numbers that subset's buckets ``1..l`` and sends all other buckets to 1.
    Coverage is then complete by construction. Randomized mode draws
    ``ceil(e^l * ln(1/epsilon))`` uniform colorings, one generator stream per
    trial.

    Args:
        n (int): Domain size
        l (int): Number of colors, at least 1
        mode (str, optional): ``deterministic`` or ``randomized``
        seed (int, optional): Seed for randomized mode
        epsilon (float, optional): Target miss probability for randomized mode
        coverage_limit (int, optional): Largest number of l-subsets the
            deterministic construction will walk

    Returns:
        HashFamily: The family

    Raises:
        InfeasibleDeterministic: ``C(n, l)`` exceeds ``coverage_limit``
    """
    if l < 1:
        raise ValueError(f"hash families need at least one color, got l={l}")
    if l == 1 or l > n:
        return HashFamily(n, l, (tuple(1 for _ in range(n)),), mode, seed)
    if mode == RANDOMIZED:
        trials = math.ceil(math.e ** l * math.log(1.0 / epsilon))
        streams = np.random.SeedSequence(int(seed)).spawn(trials)
        functions = tuple(tuple(int(c) for c in np.random.default_rng(s).integers(1, l + 1, size=n))
                          for s in streams)
        family = HashFamily(n, l, functions, RANDOMIZED, seed)
        logger.debug(f"Randomized family: {trials} colorings, miss probability {family.error_bound:.3g}")
        return family
    if mode != DETERMINISTIC:
        raise ValueError(f"unknown hashing mode {mode!r}")
    subsets = math.comb(n, l)
    if coverage_limit is not None and subsets > coverage_limit:
        raise InfeasibleDeterministic(
            f"C({n},{l}) = {subsets} subsets exceed the coverage limit {coverage_limit}; use randomized mode")
    p = next_prime(n)
    functions = []
    uncovered = list(itertools.combinations(range(n), l))
    while uncovered:
        f = _perfect_for(uncovered[0], n, l, p)
        functions.append(f)
        uncovered = [s for s in uncovered if not _injective_on(f, s)]
    logger.debug(f"Deterministic family on n={n}, l={l}: {len(functions)} functions for {subsets} subsets")
    return HashFamily(n, l, tuple(functions), DETERMINISTIC, None)
