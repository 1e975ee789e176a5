"""
Homomorphisms by dynamic programming over a nice tree decomposition of the pattern
"""

from __future__ import annotations

import logging

from src.structures.graphs import gaifman
from src.structures.structure import Structure, same_vocabulary
from src.treewidth.decomposition import FORGET, INTRODUCE, JOIN, LEAF, make_nice, validate_td
from src.treewidth.heuristic import heuristic_td
from src.utils.errors import check_guard

logger = logging.getLogger(__name__)


def solve_hom(target, pattern, td=None, limit=None):
    """
    Find a homomorphism from ``pattern`` (B) into ``target`` (A)

    Every table holds the maps from the sorted bag into A that respect all
    tuples of B lying inside the bag; introduce extends, forget projects and
    join intersects. A witness is read off top-down, always taking the
    smallest consistent row.

    Args:
        target (Structure): A
        pattern (Structure): B, same vocabulary
        td (TreeDecomposition, optional): Decomposition of B; min-fill on the
            Gaifman graph of B by default
        limit (int, optional): Largest tolerated ``|A| ** (width + 1)``

    Returns:
        dict | None: Map from elements of B to elements of A

    Raises:
        InvalidDecomposition: ``td`` does not decompose B
    """
    same_vocabulary(target, pattern)
    if td is None:
        td = heuristic_td(gaifman(pattern))
    width = validate_td(pattern, td)
    check_guard(target.n ** (width + 1), limit, "rows per table")
    nice = make_nice(td)
    bags = [sorted(b) for b in nice.bags]

    constraints = {}
    for name in pattern.vocab.names:
        for tup in pattern.rel(name):
            for b in set(tup):
                constraints.setdefault(b, []).append((name, tup))

    tables = {}
    for t in nice.postorder:
        kind = nice.kinds[t]
        kids = nice.children[t]
        if kind == LEAF:
            rows = {()}
        elif kind == INTRODUCE:
            rows = _introduce(target, bags[t], nice.vertices[t], tables[kids[0]],
                              constraints.get(nice.vertices[t], ()))
        elif kind == FORGET:
            drop = bags[kids[0]].index(nice.vertices[t])
            rows = {row[:drop] + row[drop + 1:] for row in tables[kids[0]]}
        elif kind == JOIN:
            rows = tables[kids[0]] & tables[kids[1]]
        else:
            raise ValueError(f"unknown node kind {kind}")
        tables[t] = rows
    largest = max(len(r) for r in tables.values())
    logger.debug(f"HOM DP: {nice.size} nodes, width {width}, largest table {largest}")

    if not tables[nice.root]:
        return None
    return _witness(nice, bags, tables)


def _introduce(target, bag, v, child_rows, constraints):
    pos = bag.index(v)
    members = set(bag)
    local = [(name, tup) for name, tup in constraints if set(tup) <= members]
    where = {b: i for i, b in enumerate(bag)}
    rows = set()
    for row in child_rows:
        for a in target.universe:
            new = row[:pos] + (a,) + row[pos:]
            if all(tuple(new[where[e]] for e in tup) in target.rel(name) for name, tup in local):
                rows.add(new)
    return rows


def _witness(nice, bags, tables):
    h = {}
    stack = [(nice.root, min(tables[nice.root]))]
    while stack:
        t, row = stack.pop()
        h.update(zip(bags[t], row))
        kind = nice.kinds[t]
        kids = nice.children[t]
        if kind == INTRODUCE:
            pos = bags[t].index(nice.vertices[t])
            stack.append((kids[0], row[:pos] + row[pos + 1:]))
        elif kind == FORGET:
            drop = bags[kids[0]].index(nice.vertices[t])
            match = min(r for r in tables[kids[0]] if r[:drop] + r[drop + 1:] == row)
            stack.append((kids[0], match))
        elif kind == JOIN:
            stack += [(kids[0], row), (kids[1], row)]
    return dict(sorted(h.items()))


def hom_to_emb(target, pattern) -> Structure:
    """
    A_B: every element of A duplicated ``|B|`` times

    Element ``(a, b)`` is numbered ``a * |B| + b``; a tuple of A yields every
    tuple of duplicates, so B maps homomorphically into A exactly when it
    embeds into A_B.

    Args:
        target (Structure): A
        pattern (Structure): B

    Returns:
        Structure: A_B over A's vocabulary
    """
    m = pattern.n
    relations = {}
    for name in target.vocab.names:
        rows = []
        for tup in target.rel(name):
            rows.extend(_copies(tup, m))
        relations[name] = rows
    provenance = {a * m + b: f"({target.label(a)},{b})" for a in target.universe for b in range(m)}
    return Structure(target.vocab, target.n * m, relations, provenance)


def _copies(tup, m):
    result = [()]
    for a in tup:
        result = [prefix + (a * m + b,) for prefix in result for b in range(m)]
    return result


def emb_from_hom(pattern, hom) -> dict:
    """Embedding into A_B induced by a homomorphism into A."""
    return {b: hom[b] * pattern.n + b for b in pattern.universe}

