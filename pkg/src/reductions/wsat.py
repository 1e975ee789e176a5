"""
Weighted satisfiability: clause normalization and the Fagin encoding

Normalization rewrites every bottom small formula into clauses (below a
big conjunction) or terms (below a big disjunction) of one common width.
The encoding turns such a formula into a structure whose k-element subsets
of variable nodes are exactly its weight-k assignments.
"""

from __future__ import annotations

import itertools
import logging

from src.logic.formulas import Atom, Exists, Forall, Formula, Implies, Not, RelationVariable, conj, disj, exists, forall, neq
from src.logic.propositional import (
    C_CLASS,
    D_CLASS,
    BigAnd,
    BigOr,
    PNot,
    SmallAnd,
    SmallOr,
    Var,
    classify_prop,
    is_small,
    literal,
    literal_parts,
    prop_variables,
)
from src.structures.graphs import edges_of
from src.structures.structure import EDGE, Structure, Vocabulary
from src.utils.errors import NotNormalized

logger = logging.getLogger(__name__)

POSITIVE, NEGATIVE, TOP, LEAF = "P", "N", "T", "L"

X = RelationVariable("X", 1)


def _nnf(phi, positive=True):
    """Small formula with negations on variables only."""
    if isinstance(phi, Var):
        return phi if positive else PNot(phi)
    if isinstance(phi, PNot):
        return _nnf(phi.body, not positive)
    flip = {SmallAnd: SmallOr, SmallOr: SmallAnd}
    kind = type(phi) if positive else flip[type(phi)]
    return kind(tuple(_nnf(c, positive) for c in phi.children))


def _normal_form(phi, outer):
    """
    Clauses (``outer`` is SmallAnd, CNF) or terms (``outer`` is SmallOr, DNF)
    of a small formula, as lists of ``(name, positive)``; groups holding a
    variable in both polarities are dropped
    """
    if isinstance(phi, (Var, PNot)):
        return [[literal_parts(phi)]]
    parts = [_normal_form(c, outer) for c in phi.children]
    if isinstance(phi, outer):
        groups = [g for p in parts for g in p]
    else:
        groups = [[lit for g in combo for lit in g] for combo in itertools.product(*parts)]
    result = []
    for group in groups:
        unique = list(dict.fromkeys(group))
        names = [name for name, _ in unique]
        if len(set(names)) == len(names) and unique not in result:
            result.append(unique)
    return result


def _bottoms(phi):
    """Yield ``(big parent type, small child)`` for every bottom small formula."""
    for child in phi.children:
        if is_small(child):
            yield type(phi), child
        else:
            yield from _bottoms(child)


def _groups(parent, small):
    outer = SmallAnd if parent is BigAnd else SmallOr
    return _normal_form(_nnf(small), outer)


def wsat_normalize(phi, width=None):
    """
    Uniform-width clause (term) normal form

    Every bottom small formula becomes CNF clauses under a big conjunction
    and DNF terms under a big disjunction. A group g shorter than the
    common width is replaced by ``g + v`` and ``g + not v`` for the first
    formula variable v not in g, which changes no weight-k answer.

    Args:
        phi (PropFormula): C_t or D_t formula (a small formula is treated
            as a big conjunction of one member)
        width (int, optional): Requested width; defaults to the widest group.
            Fresh variables ``pad_1, ...`` are used only when it exceeds the
            number of formula variables.

    Returns:
        PropFormula: Normalized formula of the same level
    """
    if is_small(phi):
        phi = BigAnd((phi,))
    if classify_prop(phi).kind not in (C_CLASS, D_CLASS):
        raise NotNormalized(f"expected a C_t or D_t formula, got {classify_prop(phi).label}")
    names = prop_variables(phi)
    groups = [g for parent, small in _bottoms(phi) for g in _groups(parent, small)]
    target = max((len(g) for g in groups), default=1)
    if width is not None:
        target = max(target, width)
    supply = list(names)
    for i in itertools.count(1):
        if len(supply) >= target:
            break
        supply.append(f"pad_{i}")

    def pad(group):
        if len(group) >= target:
            return [group]
        used = {name for name, _ in group}
        v = next(name for name in supply if name not in used)
        return pad(group + [(v, True)]) + pad(group + [(v, False)])

    def build(kind, group):
        lits = tuple(literal(name, positive) for name, positive in group)
        return lits[0] if len(lits) == 1 else kind(lits)

    def walk(node):
        small_kind = SmallOr if isinstance(node, BigAnd) else SmallAnd
        children = []
        for child in node.children:
            if is_small(child):
                for group in _groups(type(node), child):
                    children += [build(small_kind, g) for g in pad(group)]
            else:
                children.append(walk(child))
        return type(node)(tuple(children))

    result = walk(phi)
    logger.debug(f"WSAT normal form: width {target}, {len(groups)} groups before padding")
    return result


def is_normalized(phi) -> int | None:
    """Common width of a normalized formula, or None."""
    if is_small(phi) or not isinstance(phi, (BigAnd, BigOr)):
        return None
    widths = set()
    for parent, small in _bottoms(phi):
        group = _literals(small, SmallOr if parent is BigAnd else SmallAnd)
        if group is None:
            return None
        widths.add(len(group))
    if len(widths) > 1:
        return None
    return widths.pop() if widths else 0


def _literals(small, kind):
    if literal_parts(small) is not None:
        return [literal_parts(small)]
    if not isinstance(small, kind):
        return None
    group = [literal_parts(c) for c in small.children]
    if any(g is None for g in group) or len({name for name, _ in group}) != len(group):
        return None
    return group


def wsat_to_fagin(phi):
    """
    Structure C and Pi_t sentence psi(X) for a normalized formula rooted in a big conjunction

    The formula tree loses its root; leaves of the same variable are merged.
    E holds the remaining tree edges, parent first; ``P c v`` (``N c v``)
    marks a positive (negative) occurrence of v in the group c; T holds the
    former children of the root and L the variables. Internal nodes come
    first in preorder, then the variables in first-occurrence order.

    Args:
        phi (PropFormula): Output of wsat_normalize with a BigAnd root

    Returns:
        tuple: ``(Structure C, Formula psi)``; the relation variable is unary X

    Raises:
        NotNormalized: Not of uniform width, or not rooted in a big conjunction
    """
    width = is_normalized(phi)
    if width is None or not isinstance(phi, BigAnd):
        raise NotNormalized("expected a uniform-width formula rooted in a big conjunction")
    names = prop_variables(phi)
    nodes = []
    edges, pos, neg = [], [], []

    def visit(node, parent):
        index = len(nodes)
        nodes.append(node)
        if parent is not None:
            edges.append((parent, index))
        if isinstance(node, (BigAnd, BigOr)):
            for child in node.children:
                visit(child, index)
        return index

    tops = [visit(child, None) for child in phi.children]
    offset = len(nodes)
    element = {name: offset + i for i, name in enumerate(names)}
    for index, node in enumerate(nodes):
        if isinstance(node, (BigAnd, BigOr)):
            continue
        group = [literal_parts(node)] if literal_parts(node) else [literal_parts(c) for c in node.children]
        for name, positive in group:
            edges.append((index, element[name]))
            (pos if positive else neg).append((index, element[name]))
    n = offset + len(names)
    provenance = {i: f"n{i}" for i in range(offset)}
    provenance.update({e: name for name, e in element.items()})
    if n == 0:
        n, provenance = 1, {0: "root"}
    vocab = Vocabulary.of((EDGE, 2), (POSITIVE, 2), (NEGATIVE, 2), (TOP, 1), (LEAF, 1))
    rows = {EDGE: edges, POSITIVE: pos, NEGATIVE: neg,
            TOP: [(i,) for i in tops], LEAF: [(e,) for e in element.values()]}
    structure = Structure(vocab, n, rows, provenance)
    psi = conj([Forall("x", Implies(Atom(X.name, ("x",)), Atom(LEAF, ("x",)))),
                Forall("x", Implies(Atom(TOP, ("x",)), _check(phi.children[0] if phi.children else None,
                                                            BigAnd, "x", 1, width)))])
    logger.debug(f"WSAT structure: {n} elements, {len(pos)} positive and {len(neg)} negative occurrences")
    return structure, psi


def _check(sample, parent, x, depth, width) -> Formula:
    """
    Node x, a child of a ``parent`` node, is satisfied

    All nodes on one level have the same shape, so ``sample`` (any node on
    this level) decides the shape of the check.
    """
    if sample is None or not isinstance(sample, (BigAnd, BigOr)):
        return _group_check(x, parent is BigAnd, depth, width)
    child = f"z{depth}"
    inner = _check(sample.children[0] if sample.children else None, type(sample), child, depth + 1, width)
    edge = Atom(EDGE, (x, child))
    if isinstance(sample, BigAnd):
        return Forall(child, Implies(edge, inner))
    return Exists(child, conj([edge, inner]))


def _group_check(x, clause, depth, width):
    ys = [f"y{depth}_{i}" for i in range(1, width + 1)]
    occurs = [conj([Atom(EDGE, (x, y)) for y in ys])] + [neq(a, b) for a, b in itertools.combinations(ys, 2)]
    satisfied = [disj([conj([Atom(POSITIVE, (x, y)), Atom(X.name, (y,))]),
                       conj([Atom(NEGATIVE, (x, y)), Not(Atom(X.name, (y,)))])]) for y in ys]
    if clause:
        return forall(ys, Implies(conj(occurs), disj(satisfied)))
    return exists(ys, conj(occurs + satisfied))


def clique_to_wsat(graph):
    """
    Weight-k assignments of the result are the k-cliques of the graph

    ``BIGAND over non-adjacent a < b of (not X_a or not X_b)``; every vertex
    a has the variable ``X<a>``.

    Args:
        graph (Structure): Graph

    Returns:
        tuple: ``(PropFormula, [variable names])``
    """
    names = [f"X{a}" for a in graph.universe]
    adjacent = set(edges_of(graph))
    clauses = [SmallOr((PNot(Var(names[a])), PNot(Var(names[b]))))
               for a, b in itertools.combinations(graph.universe, 2) if (a, b) not in adjacent]
    return BigAnd(tuple(clauses)), names

