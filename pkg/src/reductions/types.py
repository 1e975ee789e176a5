"""
Existential sentences over graphs as clique instances

An atomic k-type fixes, for every pair of variables, whether they are
equal, adjacent, or distinct and non-adjacent. An existential sentence is
a disjunction of the consistent types that make its matrix true, and each
type becomes a k-partite graph whose k-cliques are exactly the tuples
realizing it.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from src.logic.formulas import Atom, Eq, Formula, Not, conj, exists, free_variables, neq, pairwise_distinct
from src.logic.fragments import SIGMA, classify
from src.logic.normal_forms import prenex_parts, to_prenex
from src.logic.parser import check_vocabulary
from src.oracles.evaluator import Assignment, eval_naive
from src.structures.graphs import graph_from_edges
from src.structures.structure import EDGE, GRAPH_VOCABULARY, check_graph
from src.utils.errors import NotSigma1, TooManyVariables

logger = logging.getLogger(__name__)

EQUAL = "equal"
EDGE_TYPE = "edge"
NEITHER = "neither"

MAX_TYPE_VARIABLES = 5


@dataclass(frozen=True)
class AtomicType:
    """
    One of equal / edge / neither for every pair ``i < j`` of ``k`` variables

    Args:
        k (int): Number of variables
        alpha (tuple): Choices in ``itertools.combinations(range(k), 2)`` order
    """

    k: int
    alpha: tuple

    def __post_init__(self):
        if len(self.alpha) != self.k * (self.k - 1) // 2:
            raise ValueError(f"an atomic {self.k}-type has {self.k * (self.k - 1) // 2} pairs")

    @property
    def pairs(self) -> dict:
        return dict(zip(itertools.combinations(range(self.k), 2), self.alpha))

    def choice(self, i: int, j: int) -> str:
        if i == j:
            return EQUAL
        return self.pairs[(min(i, j), max(i, j))]

    def blocks(self) -> list:
        """Block index of each variable under the equalities (first-occurrence numbering)."""
        block = list(range(self.k))
        for (i, j), c in self.pairs.items():
            if c == EQUAL:
                old, new = max(block[i], block[j]), min(block[i], block[j])
                block = [new if b == old else b for b in block]
        renumber = {}
        return [renumber.setdefault(b, len(renumber)) for b in block]

    def consistent(self) -> bool:
        """Equality is transitive and the other choices agree across equal variables."""
        block = self.blocks()
        between = {}
        for (i, j), c in self.pairs.items():
            same = block[i] == block[j]
            if same != (c == EQUAL):
                return False
            if not same:
                key = (min(block[i], block[j]), max(block[i], block[j]))
                if between.setdefault(key, c) != c:
                    return False
        return True

    def formula(self, names) -> Formula:
        """The type as a conjunction over the variables ``names``."""
        parts = []
        for (i, j), c in self.pairs.items():
            x, y = names[i], names[j]
            if c == EQUAL:
                parts.append(Eq(x, y))
            elif c == EDGE_TYPE:
                parts.append(Atom(EDGE, (x, y)))
            else:
                parts.append(conj([Not(Atom(EDGE, (x, y))), neq(x, y)]))
        return conj(parts)

    def holds(self, graph, values) -> bool:
        """Whether ``values`` (one vertex per variable) realize the type in ``graph``."""
        edges = graph.rel(EDGE)
        for (i, j), c in self.pairs.items():
            a, b = values[i], values[j]
            if c == EQUAL and a != b:
                return False
            if c == EDGE_TYPE and (a, b) not in edges:
                return False
            if c == NEITHER and (a == b or (a, b) in edges):
                return False
        return True


def consistent_types(k: int):
    """
    Every consistent atomic k-type, once each

    Built from a set partition of the variables and a graph on its blocks,
    both enumerated in a fixed order.

    Yields:
        AtomicType: One type at a time
    """
    for block in _partitions(k):
        b = max(block, default=-1) + 1
        block_pairs = list(itertools.combinations(range(b), 2))
        for adjacency in itertools.product((False, True), repeat=len(block_pairs)):
            adjacent = {p for p, on in zip(block_pairs, adjacency) if on}
            alpha = []
            for i, j in itertools.combinations(range(k), 2):
                u, v = block[i], block[j]
                if u == v:
                    alpha.append(EQUAL)
                elif (min(u, v), max(u, v)) in adjacent:
                    alpha.append(EDGE_TYPE)
                else:
                    alpha.append(NEITHER)
            yield AtomicType(k, tuple(alpha))


def _partitions(k):
    """Restricted growth strings of length k."""
    if k == 0:
        yield []
        return

    def grow(prefix, top):
        if len(prefix) == k:
            yield list(prefix)
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from grow(prefix, max(top, b))
            prefix.pop()

    yield from grow([0], 0)


def type_product(graph, theta: AtomicType):
    """
    h(G, theta): vertices ``(i, v)`` for ``i < k``, numbered ``i * n + v``;
    ``(i, v)`` and ``(j, w)`` adjacent when ``i != j`` and ``v, w`` satisfy
    the choice for the pair ``i, j``

    Args:
        graph (Structure): G
        theta (AtomicType): Type over k variables

    Returns:
        Structure: Graph on ``k * n`` vertices
    """
    n = graph.n
    edges = []
    for i, j in itertools.combinations(range(theta.k), 2):
        c = theta.choice(i, j)
        for v in graph.universe:
            for w in graph.universe:
                if _pair_holds(graph, c, v, w):
                    edges.append((i * n + v, j * n + w))
    provenance = {i * n + v: f"({i + 1},{graph.label(v)})" for i in range(theta.k) for v in graph.universe}
    return graph_from_edges(theta.k * n, edges, provenance)


def _pair_holds(graph, c, v, w):
    if c == EQUAL:
        return v == w
    adjacent = (v, w) in graph.rel(EDGE)
    if c == EDGE_TYPE:
        return adjacent
    return v != w and not adjacent


def clique_to_mc(graph, k: int):
    """
    The k-clique question as an existential sentence

    Returns:
        tuple: ``(graph, exists x1..xk (pairwise distinct & E xi xj for i < j))``
    """
    check_graph(graph)
    names = [f"x{i}" for i in range(1, k + 1)]
    edges = [Atom(EDGE, (a, b)) for a, b in itertools.combinations(names, 2)]
    return graph, exists(names, conj(pairwise_distinct(names) + edges))


def accepted_types(phi: Formula, max_variables=MAX_TYPE_VARIABLES):
    """
    The consistent atomic types over the matrix variables that entail the matrix

    Args:
        phi (Formula): Existential sentence over {E}
        max_variables (int, optional): Largest accepted number of matrix variables

    Returns:
        tuple: ``(matrix variable names, [AtomicType, ...], matrix)``

    Raises:
        NotSigma1: ``phi`` is not existential or not a sentence
        TooManyVariables: More than ``max_variables`` matrix variables
    """
    if free_variables(phi):
        raise NotSigma1(f"expected a sentence, free variables {sorted(free_variables(phi))}")
    check_vocabulary(phi, GRAPH_VOCABULARY)
    prenex = to_prenex(phi)
    info = classify(prenex)
    if not info.within(SIGMA, 1):
        raise NotSigma1(f"sentence is {info.label}, not existential")
    prefix, matrix = prenex_parts(prenex)
    used = free_variables(matrix)
    names = [var for _, var in prefix if var in used]
    if max_variables is not None and len(names) > max_variables:
        raise TooManyVariables(f"{len(names)} variables exceed the type enumeration limit {max_variables}")
    accepted = []
    for theta in consistent_types(len(names)):
        if _entails(theta, names, matrix):
            accepted.append(theta)
    return names, accepted, matrix


def _entails(theta, names, matrix):
    block = theta.blocks()
    size = max(block, default=0) + 1
    edges = set()
    for (i, j), c in theta.pairs.items():
        if c == EDGE_TYPE:
            edges.add((block[i], block[j]))
    quotient = graph_from_edges(size, edges)
    return eval_naive(quotient, matrix, Assignment(dict(zip(names, block))))


def mc_to_clique(graph, phi: Formula, max_variables=MAX_TYPE_VARIABLES):
    """
    Reduce ``graph |= phi`` for an existential phi to a clique question

    G' is the disjoint union of h(G, theta) over the accepted types, in
    enumeration order. When no type is accepted the answer is a fixed
    no-instance: ``max(k, 2)`` isolated vertices with parameter ``max(k, 2)``.
    A matrix without variables is decided outright: true gives ``(G, 1)``.

    Args:
        graph (Structure): G
        phi (Formula): Existential sentence over {E}
        max_variables (int, optional): Largest accepted number of matrix variables

    Returns:
        tuple: ``(G', k)``
    """
    check_graph(graph)
    names, accepted, _ = accepted_types(phi, max_variables)
    k = len(names)
    logger.debug(f"{len(accepted)} accepted atomic {k}-types")
    if not accepted:
        size = max(k, 2)
        return graph_from_edges(size, []), size
    if k == 0:
        return graph, 1
    n = graph.n
    edges = []
    provenance = {}
    for index, theta in enumerate(accepted):
        part = type_product(graph, theta)
        offset = index * k * n
        for v in part.universe:
            provenance[offset + v] = f"t{index}:{part.label(v)}"
        edges.extend((offset + a, offset + b) for a, b in part.rel(EDGE) if a < b)
    return graph_from_edges(len(accepted) * k * n, edges, provenance), k
