"""
Exhaustive reference solvers

Every search walks elements in ascending order and variables in
first-occurrence order, so the first witness found is reproducible.
"""

from __future__ import annotations

import itertools
import logging
import math

from src.logic.formulas import RelationVariable
from src.logic.propositional import eval_prop, prop_variables
from src.oracles.evaluator import Assignment, eval_naive
from src.structures.structure import EDGE, check_graph, same_vocabulary
from src.utils.errors import check_guard

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 10**8


def _tuples_closed_by(pattern):
    """For each element b, the tuples of ``pattern`` whose largest element is b."""
    closing = {b: [] for b in pattern.universe}
    for name in pattern.vocab.names:
        for tup in pattern.rel(name):
            closing[max(tup)].append((name, tup))
    return closing


def _search(target, pattern, injective, limit):
    same_vocabulary(target, pattern)
    check_guard(target.n ** pattern.n, limit, "homomorphism candidates")
    closing = _tuples_closed_by(pattern)
    h = [None] * pattern.n
    used = set()

    def extend(b):
        if b == pattern.n:
            return True
        for a in target.universe:
            if injective and a in used:
                continue
            h[b] = a
            if all(tuple(h[e] for e in tup) in target.rel(name) for name, tup in closing[b]):
                used.add(a)
                if extend(b + 1):
                    return True
                used.discard(a)
        h[b] = None
        return False

    if extend(0):
        return {b: h[b] for b in pattern.universe}
    return None


def brute_hom(target, pattern, limit=DEFAULT_LIMIT):
    """
    First homomorphism from ``pattern`` (B) into ``target`` (A) in search order

    Args:
        target (Structure): A
        pattern (Structure): B, same vocabulary as A
        limit (int, optional): Largest tolerated ``|A| ** |B|``; None disables the guard

    Returns:
        dict | None: Map from elements of B to elements of A
    """
    return _search(target, pattern, injective=False, limit=limit)


def brute_emb(target, pattern, limit=DEFAULT_LIMIT):
    """As brute_hom, restricted to injective maps."""
    return _search(target, pattern, injective=True, limit=limit)


def brute_clique(graph, k, limit=DEFAULT_LIMIT):
    """Lexicographically first k-clique as a sorted tuple, or None."""
    check_graph(graph)
    check_guard(math.comb(graph.n, k), limit, "vertex subsets")
    edges = graph.rel(EDGE)
    for subset in itertools.combinations(graph.universe, k):
        if all((a, b) in edges for a, b in itertools.combinations(subset, 2)):
            return subset
    return None


def count_cliques(graph, k) -> int:
    edges = graph.rel(EDGE)
    return sum(1 for subset in itertools.combinations(graph.universe, k)
               if all((a, b) in edges for a, b in itertools.combinations(subset, 2)))


def brute_wsat(phi, k, variables=None, limit=DEFAULT_LIMIT):
    """
    First weight-``k`` satisfying assignment

    Args:
        phi (PropFormula): Formula
        k (int): Number of variables set to true
        variables (list, optional): Variable universe; defaults to the
            variables of ``phi`` in first-occurrence order
        limit (int, optional): Largest tolerated number of subsets

    Returns:
        frozenset | None: The true variables
    """
    variables = prop_variables(phi) if variables is None else list(variables)
    if k > len(variables) or k < 0:
        return None
    check_guard(math.comb(len(variables), k), limit, "weight-k assignments")
    for chosen in itertools.combinations(variables, k):
        if eval_prop(phi, set(chosen)):
            return frozenset(chosen)
    return None


def brute_fagin(structure, phi, relation_variable: RelationVariable, k, limit=DEFAULT_LIMIT):
    """
    First k-element ``B`` with ``structure |= phi(B)``, subsets of A^r in lexicographic order

    Args:
        structure (Structure): A
        phi (Formula): Sentence with free relation variable X
        relation_variable (RelationVariable): X and its arity r
        k (int): Size of B
        limit (int, optional): Largest tolerated number of subsets

    Returns:
        frozenset | None: The set B
    """
    tuples = list(itertools.product(structure.universe, repeat=relation_variable.arity))
    if k > len(tuples):
        return None
    check_guard(math.comb(len(tuples), k), limit, "candidate sets")
    for chosen in itertools.combinations(tuples, k):
        if eval_naive(structure, phi, Assignment(relations={relation_variable.name: chosen})):
            return frozenset(chosen)
    return None
