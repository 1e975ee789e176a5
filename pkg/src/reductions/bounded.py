"""
Fagin sentences whose quantifiers below the prefix range over X

A quantifier bounded to X, ``exists x (X x & psi)`` or ``forall x (X x -> psi)``,
only looks at the k tuples of B. Naming those tuples by fresh variables
turns it into a k-fold disjunction (conjunction), so the whole question
becomes one first-order sentence per k.
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
    RelationVariable,
    conj,
    disj,
    exists,
    fresh_names,
    map_children,
    rename_free,
    variables,
)
from src.logic.normal_forms import attach_prefix
from src.utils.errors import NotBounded

logger = logging.getLogger(__name__)


def _chain(node, quant, r):
    """Up to r directly nested ``quant`` variables and the body below them."""
    names = []
    while isinstance(node, quant) and len(names) < r:
        names.append(node.var)
        node = node.body
    return names, node


def bounded_parts(node: Formula, name: str, r: int):
    """
    Split a quantifier bounded to X

    Returns:
        tuple | None: ``(kind, X arguments, rest)`` where kind is Exists or
        Forall, or None when ``node`` is not of the bounded shape
    """
    for quant in (Exists, Forall):
        names, body = _chain(node, quant, r)
        if len(names) != r or len(set(names)) != r:
            continue
        candidates = {Atom(name, p) for p in itertools.permutations(names)}
        if quant is Exists and isinstance(body, And):
            for child in body.children:
                if child in candidates:
                    rest = [c for c in body.children if c is not child]
                    return Exists, child.args, conj(rest)
        if quant is Forall and isinstance(body, Implies) and body.left in candidates:
            return Forall, body.left.args, body.right
        if quant is Forall and isinstance(body, Or):
            for child in body.children:
                if isinstance(child, Not) and child.body in candidates:
                    rest = [c for c in body.children if c is not child]
                    return Forall, child.body.args, disj(rest)
    return None


def expand_bounded(phi: Formula, relation_variable: RelationVariable, k: int) -> Formula:
    """
    First-order sentence true exactly when some k-element X satisfies phi

    ``phi`` is a prefix of unbounded quantifiers followed by a matrix in
    which every quantifier is bounded to X. The result is
    ``exists u_1..u_k (prefix (u_i != u_j for i < j & psi*))`` where a
    bounded existential becomes ``OR_i psi[x := u_i]``, a bounded universal
    ``AND_i psi[x := u_i]`` and a remaining ``X z`` becomes ``OR_i u_i = z``.

    Args:
        phi (Formula): Sentence with relation variable X
        relation_variable (RelationVariable): X of arity r
        k (int): Size of X

    Returns:
        Formula: The expanded sentence

    Raises:
        NotBounded: An unbounded quantifier below the prefix
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    name, r = relation_variable.name, relation_variable.arity
    fresh = fresh_names("u", k * r, variables(phi))
    tuples = [tuple(fresh[i * r:(i + 1) * r]) for i in range(k)]

    prefix = []
    node = phi
    while isinstance(node, (Exists, Forall)) and bounded_parts(node, name, r) is None:
        prefix.append((type(node), node.var))
        node = node.body

    def member(args):
        return disj(conj(Eq(u, z) for u, z in zip(tup, args)) for tup in tuples)

    def expand(node):
        if isinstance(node, Atom):
            return member(node.args) if node.relation == name else node
        if isinstance(node, Eq):
            return node
        if isinstance(node, (Exists, Forall)):
            parts = bounded_parts(node, name, r)
            if parts is None:
                raise NotBounded(f"quantifier over {node.var} is not bounded to {name}")
            kind, args, rest = parts
            inner = expand(rest)
            copies = [rename_free(inner, dict(zip(args, tup))) for tup in tuples]
            return disj(copies) if kind is Exists else conj(copies)
        if isinstance(node, (Not, And, Or, Implies, Iff)):
            return map_children(node, expand)
        raise TypeError(f"unexpected formula node {type(node).__name__}")

    distinct = [disj(Not(Eq(a, b)) for a, b in zip(s, t)) for s, t in itertools.combinations(tuples, 2)]
    result = exists(fresh, attach_prefix(prefix, conj(distinct + [expand(node)])))
    logger.debug(f"Bounded expansion for k={k}: {len(prefix)} prefix quantifiers, {len(fresh)} new variables")
    return result
