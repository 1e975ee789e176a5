"""
Negation normal form, prenex form, DNF and miniscoping
"""

from __future__ import annotations

import itertools
import logging

from src.logic.formulas import (
    And,
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    conj,
    disj,
    free_variables,
    is_literal,
    map_children,
    variables,
)
from src.utils.errors import DNFBlowup, NotPrenex

logger = logging.getLogger(__name__)


def to_nnf(phi: Formula) -> Formula:
    """Push negations onto atoms and compile away ``->`` and ``<->``."""
    return _nnf(phi, positive=True)


def _nnf(phi: Formula, positive: bool) -> Formula:
    if isinstance(phi, (Atom, Eq)):
        return phi if positive else Not(phi)
    if isinstance(phi, Not):
        return _nnf(phi.body, not positive)
    if isinstance(phi, And):
        parts = tuple(_nnf(c, positive) for c in phi.children)
        return And(parts) if positive else Or(parts)
    if isinstance(phi, Or):
        parts = tuple(_nnf(c, positive) for c in phi.children)
        return Or(parts) if positive else And(parts)
    if isinstance(phi, Implies):
        return _nnf(Or((Not(phi.left), phi.right)), positive)
    if isinstance(phi, Iff):
        both = And((Or((Not(phi.left), phi.right)), Or((phi.left, Not(phi.right)))))
        return _nnf(both, positive)
    if isinstance(phi, Exists):
        body = _nnf(phi.body, positive)
        return Exists(phi.var, body) if positive else Forall(phi.var, body)
    if isinstance(phi, Forall):
        body = _nnf(phi.body, positive)
        return Forall(phi.var, body) if positive else Exists(phi.var, body)
    raise TypeError(f"not a formula: {phi!r}")


def is_nnf(phi: Formula) -> bool:
    if isinstance(phi, Not):
        return isinstance(phi.body, (Atom, Eq))
    if isinstance(phi, (Implies, Iff)):
        return False
    if isinstance(phi, (And, Or)):
        return all(is_nnf(c) for c in phi.children)
    if isinstance(phi, (Exists, Forall)):
        return is_nnf(phi.body)
    return True


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Exists, Forall)):
        return False
    if isinstance(phi, (Atom, Eq)):
        return True
    return all(is_quantifier_free(c) for c in _children(phi))


def _children(phi):
    if isinstance(phi, (And, Or)):
        return phi.children
    if isinstance(phi, Not):
        return (phi.body,)
    if isinstance(phi, (Implies, Iff)):
        return (phi.left, phi.right)
    return ()


def rename_apart(phi: Formula) -> Formula:
    """
    Give every quantifier its own variable

    Binders are visited left to right. The first binder of ``v`` keeps its
    name unless ``v`` also occurs free; later ones become ``v_1``, ``v_2``, ...
    """
    used = set(variables(phi))
    claimed = set(free_variables(phi))

    def fresh(var):
        if var not in claimed:
            claimed.add(var)
            return var
        for i in itertools.count(1):
            candidate = f"{var}_{i}"
            if candidate not in claimed and candidate not in used:
                claimed.add(candidate)
                return candidate

    def walk(node, env):
        if isinstance(node, Atom):
            return Atom(node.relation, tuple(env.get(a, a) for a in node.args))
        if isinstance(node, Eq):
            return Eq(env.get(node.left, node.left), env.get(node.right, node.right))
        if isinstance(node, (Exists, Forall)):
            new = fresh(node.var)
            return type(node)(new, walk(node.body, {**env, node.var: new}))
        return map_children(node, lambda child: walk(child, env))

    return walk(phi, {})


def split_prefix(phi: Formula):
    """
    Split a formula into its leading quantifier prefix and the rest

    Returns:
        tuple: ``([(quantifier class, variable), ...], body)``
    """
    prefix = []
    while isinstance(phi, (Exists, Forall)):
        prefix.append((type(phi), phi.var))
        phi = phi.body
    return prefix, phi


def blocks_of(prefix) -> list:
    """Group a prefix into maximal blocks ``[(quantifier class, [variables]), ...]``."""
    result = []
    for quant, var in prefix:
        if result and result[-1][0] is quant:
            result[-1][1].append(var)
        else:
            result.append((quant, [var]))
    return result


def attach_prefix(prefix, body: Formula) -> Formula:
    for quant, var in reversed(prefix):
        body = quant(var, body)
    return body


def to_prenex(phi: Formula) -> Formula:
    """
    Equivalent prenex NNF formula

    Bound variables are renamed apart first. When prefixes of sibling
    subformulas are combined, equal leading blocks are merged so the
    alternation count does not grow needlessly.
    """
    prefix, matrix = _prenex(rename_apart(to_nnf(phi)))
    return attach_prefix(prefix, matrix)


def _prenex(phi: Formula):
    if isinstance(phi, (Exists, Forall)):
        prefix, matrix = _prenex(phi.body)
        return [(type(phi), phi.var)] + prefix, matrix
    if isinstance(phi, (And, Or)):
        prefixes = []
        matrices = []
        for child in phi.children:
            p, m = _prenex(child)
            prefixes.append(blocks_of(p))
            matrices.append(m)
        merged = []
        for blocks in prefixes:
            merged = _merge_blocks(merged, blocks)
        prefix = [(quant, var) for quant, vars_ in merged for var in vars_]
        return prefix, type(phi)(tuple(matrices))
    return [], phi


def _merge_blocks(left, right):
    if not left:
        return [(q, list(v)) for q, v in right]
    if not right:
        return [(q, list(v)) for q, v in left]
    (lq, lv), (rq, rv) = left[0], right[0]
    if lq is rq:
        return [(lq, lv + rv)] + _merge_blocks(left[1:], right[1:])
    if len(left) >= len(right):
        return [(lq, list(lv))] + _merge_blocks(left[1:], right)
    return [(rq, list(rv))] + _merge_blocks(left, right[1:])


def is_prenex(phi: Formula) -> bool:
    _, matrix = split_prefix(phi)
    return is_quantifier_free(matrix)


def prenex_parts(phi: Formula):
    """Prefix and quantifier-free matrix of a prenex formula; raises NotPrenex otherwise."""
    prefix, matrix = split_prefix(phi)
    if not is_quantifier_free(matrix):
        raise NotPrenex("formula has quantifiers inside its matrix")
    return prefix, matrix


def dnf_terms(phi: Formula, cap=None) -> list:
    """
    Disjunctive normal form of a quantifier-free NNF formula

    Args:
        phi (Formula): Quantifier-free formula in NNF
        cap (int, optional): Maximal number of terms before DNFBlowup

    Returns:
        list[list[Formula]]: Terms as literal lists, in distribution order
    """
    if is_literal(phi):
        return [[phi]]
    if isinstance(phi, Or):
        terms = []
        for child in phi.children:
            terms.extend(dnf_terms(child, cap))
            if cap is not None and len(terms) > cap:
                raise DNFBlowup(f"DNF exceeds {cap} disjuncts")
        return terms
    if isinstance(phi, And):
        terms = [[]]
        for child in phi.children:
            child_terms = dnf_terms(child, cap)
            if cap is not None and len(terms) * len(child_terms) > cap:
                raise DNFBlowup(f"DNF exceeds {cap} disjuncts")
            terms = [t + c for t in terms for c in child_terms]
        return [_dedupe(t) for t in terms]
    raise NotPrenex(f"expected a quantifier-free NNF formula, got {type(phi).__name__}")


def _dedupe(literals):
    seen = {}
    for lit in literals:
        seen.setdefault(lit, None)
    return list(seen)


def dnf(phi: Formula, cap=None) -> Formula:
    return disj(conj(term) for term in dnf_terms(phi, cap))


def miniscope(phi: Formula) -> Formula:
    """
    Push quantifiers as far inward as they go

    Existentials distribute over disjunctions and universals over
    conjunctions; a quantifier only spans the conjuncts (disjuncts) that
    mention its variable. The result is equivalent over non-empty universes.
    """
    if isinstance(phi, (Exists, Forall)):
        return _push(type(phi), phi.var, miniscope(phi.body))
    if isinstance(phi, (Atom, Eq)):
        return phi
    return map_children(phi, miniscope)


def _push(quant, var, body):
    if var not in free_variables(body):
        return body
    spreads = And if quant is Forall else Or
    splits = Or if quant is Forall else And
    if isinstance(body, spreads):
        return type(body)(tuple(_push(quant, var, c) for c in body.children))
    if isinstance(body, splits):
        with_var = [c for c in body.children if var in free_variables(c)]
        without = [c for c in body.children if var not in free_variables(c)]
        if not without:
            return quant(var, body)
        inner = with_var[0] if len(with_var) == 1 else type(body)(tuple(with_var))
        pushed = _push(quant, var, inner) if len(with_var) == 1 else quant(var, inner)
        return type(body)(tuple(without) + (pushed,))
    return quant(var, body)
