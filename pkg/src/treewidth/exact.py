"""
Exact treewidth by dynamic programming over vertex subsets
"""

from __future__ import annotations

import logging

from src.structures.graphs import to_networkx
from src.treewidth.decomposition import TreeDecomposition, td_from_elimination
from src.utils.errors import TooLarge

logger = logging.getLogger(__name__)

MAX_EXACT_VERTICES = 12


def _reach_outside(adjacency, inside, v):
    """Vertices outside ``inside | {v}`` reachable from v through ``inside``."""
    seen = 1 << v
    frontier = [v]
    found = 0
    while frontier:
        u = frontier.pop()
        for w in adjacency[u]:
            bit = 1 << w
            if seen & bit:
                continue
            seen |= bit
            if inside & bit:
                frontier.append(w)
            else:
                found |= bit
    return bin(found).count("1")


def exact_ordering(graph, limit=MAX_EXACT_VERTICES):
    """
    Optimal elimination ordering

    ``TW(S)`` is the best width for eliminating the set S first:
    ``TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|)`` where
    ``Q(S, v)`` are the vertices outside ``S + v`` that v reaches through S.

    Args:
        graph (Structure): Graph over {E/2}
        limit (int, optional): Largest accepted vertex count

    Returns:
        tuple: ``(width, ordering)``

    Raises:
        TooLarge: More than ``limit`` vertices
    """
    n = graph.n
    if limit is not None and n > limit:
        raise TooLarge(f"exact treewidth is capped at {limit} vertices, got {n}")
    work = to_networkx(graph)
    adjacency = [sorted(work.neighbors(v)) for v in range(n)]
    best = {0: (-1, None)}
    for mask in range(1, 1 << n):
        choice = None
        for v in range(n):
            bit = 1 << v
            if not mask & bit:
                continue
            rest = mask ^ bit
            cost = max(best[rest][0], _reach_outside(adjacency, rest, v))
            if choice is None or cost < choice[0]:
                choice = (cost, v)
        best[mask] = choice
    ordering = []
    mask = (1 << n) - 1
    while mask:
        v = best[mask][1]
        ordering.append(v)
        mask ^= 1 << v
    ordering.reverse()
    return best[(1 << n) - 1][0], ordering


def exact_td(graph, limit=MAX_EXACT_VERTICES) -> TreeDecomposition:
    """Decomposition of minimum width; see exact_ordering."""
    width, ordering = exact_ordering(graph, limit)
    td = td_from_elimination(graph, ordering)
    logger.debug(f"exact treewidth {width}")
    return td
