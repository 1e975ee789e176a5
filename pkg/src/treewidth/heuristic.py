"""
Min-fill elimination ordering
"""

from __future__ import annotations

import itertools
import logging

from src.structures.graphs import to_networkx
from src.treewidth.decomposition import TreeDecomposition, td_from_elimination

logger = logging.getLogger(__name__)


def fill_in(work, v) -> int:
    """Number of missing edges among the neighbours of ``v``."""
    return sum(1 for a, b in itertools.combinations(work.neighbors(v), 2) if not work.has_edge(a, b))


def min_fill_ordering(graph) -> list:
    """
    Repeatedly eliminate a vertex of least fill-in, lowest id first on ties

    Args:
        graph (Structure): Graph over {E/2}

    Returns:
        list: Elimination ordering
    """
    work = to_networkx(graph)
    ordering = []
    while work.number_of_nodes():
        v = min(work.nodes, key=lambda u: (fill_in(work, u), u))
        neighbours = list(work.neighbors(v))
        work.add_edges_from(itertools.combinations(neighbours, 2))
        work.remove_node(v)
        ordering.append(v)
    return ordering


def heuristic_td(graph) -> TreeDecomposition:
    """
    Tree decomposition from the min-fill ordering

    Args:
        graph (Structure): Graph over {E/2}

    Returns:
        TreeDecomposition: Valid decomposition, deterministic for a given graph
    """
    td = td_from_elimination(graph, min_fill_ordering(graph))
    logger.debug(f"min-fill decomposition of width {td.width} with {td.size} bags")
    return td
