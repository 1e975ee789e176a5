"""
Independent witness checks, run before any positive answer is reported
"""

from __future__ import annotations

import itertools

from src.logic.propositional import eval_prop
from src.oracles.evaluator import Assignment, eval_naive
from src.structures.structure import EDGE


def is_homomorphism(target, pattern, h) -> bool:
    """``h`` maps every element of ``pattern`` into ``target`` and preserves every tuple."""
    if h is None or set(h) != set(pattern.universe):
        return False
    if any(not 0 <= h[b] < target.n for b in pattern.universe):
        return False
    for name in pattern.vocab.names:
        if name not in target.vocab:
            return False
        image = target.rel(name)
        if any(tuple(h[e] for e in tup) not in image for tup in pattern.rel(name)):
            return False
    return True


def is_embedding(target, pattern, h) -> bool:
    return is_homomorphism(target, pattern, h) and len(set(h.values())) == pattern.n


def is_clique(graph, vertices, k=None) -> bool:
    vertices = list(vertices)
    if len(set(vertices)) != len(vertices) or (k is not None and len(vertices) != k):
        return False
    edges = graph.rel(EDGE)
    return all((a, b) in edges for a, b in itertools.combinations(vertices, 2))


def satisfies_fagin(structure, phi, relation_variable, chosen, k=None) -> bool:
    chosen = frozenset(map(tuple, chosen))
    if k is not None and len(chosen) != k:
        return False
    if any(len(t) != relation_variable.arity or not all(0 <= e < structure.n for e in t)
           for t in chosen):
        return False
    return eval_naive(structure, phi, Assignment(relations={relation_variable.name: chosen}))


def is_wsat_witness(phi, true_variables, k=None) -> bool:
    true_variables = set(true_variables)
    if k is not None and len(true_variables) != k:
        return False
    return eval_prop(phi, true_variables)
