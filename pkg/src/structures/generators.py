"""
Seeded random structures and graphs
"""

from __future__ import annotations

import itertools

import numpy as np

from src.structures.graphs import graph_from_edges
from src.structures.structure import Structure, Vocabulary


def make_rng(seed, *stream) -> np.random.Generator:
    """Generator for ``seed``; extra integers select an independent stream."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, stream)]))


def random_graph(rng: np.random.Generator, n: int, p: float) -> Structure:
    """Erdos-Renyi G(n, p); pairs are visited in lexicographic order."""
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
    return graph_from_edges(n, edges)


def random_tree(rng: np.random.Generator, n: int) -> Structure:
    """Random recursive tree: vertex i attaches to a uniform earlier vertex."""
    edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    return graph_from_edges(n, edges)


def random_structure(rng: np.random.Generator, vocab: Vocabulary, n: int, density: float) -> Structure:
    """
    Every tuple of every relation is present independently with probability ``density``

    Args:
        rng (np.random.Generator): Source of randomness
        vocab (Vocabulary): Relation symbols
        n (int): Universe size
        density (float): Tuple probability

    Returns:
        Structure: Random structure
    """
    relations = {}
    for name, arity in vocab.symbols:
        candidates = list(itertools.product(range(n), repeat=arity))
        keep = rng.random(len(candidates)) < density
        relations[name] = [t for t, k in zip(candidates, keep) if k]
    return Structure(vocab, n, relations)


def random_small_structure(rng: np.random.Generator, max_n: int, max_arity: int = 2,
                           symbols=("R", "S")) -> Structure:
    """Random structure with 1..len(symbols) symbols of arity <= max_arity and n <= max_n."""
    count = int(rng.integers(1, len(symbols) + 1))
    vocab = Vocabulary(tuple((symbols[i], int(rng.integers(1, max_arity + 1))) for i in range(count)))
    n = int(rng.integers(1, max_n + 1))
    return random_structure(rng, vocab, n, float(rng.uniform(0.2, 0.6)))
