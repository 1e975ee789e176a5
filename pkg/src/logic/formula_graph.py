"""
Formula graphs G(phi) and G(phi with inequalities removed)
"""

from __future__ import annotations

import itertools

from src.logic.formulas import Atom, Eq, Formula, Implies, Not, children, variables
from src.structures.graphs import graph_from_edges


def formula_graph(phi: Formula):
    """
    Variables joined when they co-occur in an atomic subformula

    Returns:
        tuple: ``(Graph, [variable names in vertex order])``
    """
    return _graph(phi, drop_inequalities=False)


def formula_graph_neq(phi: Formula):
    """As formula_graph, after deleting equalities under an odd number of negations."""
    return _graph(phi, drop_inequalities=True)


def _graph(phi, drop_inequalities):
    names = variables(phi) or ["_"]
    position = {name: i for i, name in enumerate(names)}
    edges = set()

    def visit(node, negated):
        if isinstance(node, (Atom, Eq)):
            if isinstance(node, Eq) and drop_inequalities and negated:
                return
            args = node.args if isinstance(node, Atom) else (node.left, node.right)
            for a, b in itertools.combinations(sorted(set(args)), 2):
                edges.add((position[a], position[b]))
            return
        if isinstance(node, Not):
            visit(node.body, not negated)
            return
        if isinstance(node, Implies):
            visit(node.left, not negated)
            visit(node.right, negated)
            return
        for child in children(node):
            visit(child, negated)

    visit(phi, False)
    return graph_from_edges(len(names), edges, dict(enumerate(names))), names
