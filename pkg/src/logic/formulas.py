"""
First-order formula AST

Nodes are frozen dataclasses; conjunction and disjunction are n-ary, the
empty conjunction is TRUE and the empty disjunction is FALSE.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Atom(Formula):
    relation: str
    args: tuple


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple = ()


@dataclass(frozen=True)
class Or(Formula):
    children: tuple = ()


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


TRUE = And(())
FALSE = Or(())


@dataclass(frozen=True)
class RelationVariable:
    """The designated free relation variable X of a Fagin formula."""

    name: str
    arity: int


# builders


def atom(relation: str, *args: str) -> Atom:
    return Atom(relation, tuple(args))


def neq(x: str, y: str) -> Not:
    return Not(Eq(x, y))


def conj(parts: Iterable[Formula]) -> Formula:
    """Conjunction that collapses singletons and splices nested conjunctions."""
    flat = []
    for part in parts:
        if isinstance(part, And):
            flat.extend(part.children)
        else:
            flat.append(part)
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(parts: Iterable[Formula]) -> Formula:
    flat = []
    for part in parts:
        if isinstance(part, Or):
            flat.extend(part.children)
        else:
            flat.append(part)
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def exists(variables: Iterable[str], body: Formula) -> Formula:
    for var in reversed(list(variables)):
        body = Exists(var, body)
    return body


def forall(variables: Iterable[str], body: Formula) -> Formula:
    for var in reversed(list(variables)):
        body = Forall(var, body)
    return body


def pairwise_distinct(variables) -> list:
    return [neq(x, y) for x, y in itertools.combinations(variables, 2)]


def is_literal(phi: Formula) -> bool:
    if isinstance(phi, Not):
        phi = phi.body
    return isinstance(phi, (Atom, Eq))


# traversal helpers


def children(phi: Formula) -> tuple:
    if isinstance(phi, (And, Or)):
        return phi.children
    if isinstance(phi, (Not, Exists, Forall)):
        return (phi.body,)
    if isinstance(phi, (Implies, Iff)):
        return (phi.left, phi.right)
    return ()


def free_variables(phi: Formula) -> frozenset:
    if isinstance(phi, Atom):
        return frozenset(phi.args)
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, (Exists, Forall)):
        return free_variables(phi.body) - {phi.var}
    result = frozenset()
    for child in children(phi):
        result |= free_variables(child)
    return result


def variables(phi: Formula) -> list:
    """All variable names (free and bound) in first-occurrence order."""
    seen = {}

    def visit(node):
        if isinstance(node, Atom):
            for arg in node.args:
                seen.setdefault(arg, None)
        elif isinstance(node, Eq):
            seen.setdefault(node.left, None)
            seen.setdefault(node.right, None)
        elif isinstance(node, (Exists, Forall)):
            seen.setdefault(node.var, None)
            visit(node.body)
        else:
            for child in children(node):
                visit(child)

    visit(phi)
    return list(seen)


def relation_symbols(phi: Formula) -> dict:
    """Relation symbol to arity, in first-occurrence order."""
    found = {}

    def visit(node):
        if isinstance(node, Atom):
            found.setdefault(node.relation, len(node.args))
        for child in children(node):
            visit(child)

    visit(phi)
    return found


def mentions(phi: Formula, relation: str) -> bool:
    if isinstance(phi, Atom):
        return phi.relation == relation
    return any(mentions(child, relation) for child in children(phi))


def quantifier_rank(phi: Formula) -> int:
    if isinstance(phi, (Exists, Forall)):
        return 1 + quantifier_rank(phi.body)
    return max((quantifier_rank(child) for child in children(phi)), default=0)


def rename_free(phi: Formula, mapping: dict) -> Formula:
    """Substitute free variables by variables; bound names must not collide with the targets."""
    if not mapping:
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.relation, tuple(mapping.get(a, a) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(mapping.get(phi.left, phi.left), mapping.get(phi.right, phi.right))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        return type(phi)(phi.var, rename_free(phi.body, inner))
    return map_children(phi, lambda child: rename_free(child, mapping))


def map_children(phi: Formula, fn) -> Formula:
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(fn(child) for child in phi.children))
    if isinstance(phi, Not):
        return Not(fn(phi.body))
    if isinstance(phi, (Implies, Iff)):
        return type(phi)(fn(phi.left), fn(phi.right))
    if isinstance(phi, (Exists, Forall)):
        return type(phi)(phi.var, fn(phi.body))
    return phi


def replace_atoms(phi: Formula, fn) -> Formula:
    """Rebuild ``phi`` with every Atom ``a`` replaced by ``fn(a)``."""
    if isinstance(phi, Atom):
        return fn(phi)
    return map_children(phi, lambda child: replace_atoms(child, fn))


def fresh_names(base: str, count: int, taken) -> list:
    """``count`` names ``base1, base2, ...`` avoiding ``taken``."""
    taken = set(taken)
    names = []
    for i in itertools.count(1):
        if len(names) == count:
            break
        name = f"{base}{i}"
        if name not in taken:
            names.append(name)
            taken.add(name)
    return names


# printing

_PREC_QUANT = 0
_PREC_IFF = 1
_PREC_IMP = 2
_PREC_OR = 3
_PREC_AND = 4
_PREC_NOT = 5
_PREC_ATOM = 6


def _prec(phi: Formula) -> int:
    if isinstance(phi, (Exists, Forall)):
        return _PREC_QUANT
    if isinstance(phi, Iff):
        return _PREC_IFF
    if isinstance(phi, Implies):
        return _PREC_IMP
    if isinstance(phi, Or):
        return _PREC_OR if len(phi.children) > 1 else _PREC_ATOM
    if isinstance(phi, And):
        return _PREC_AND if len(phi.children) > 1 else _PREC_ATOM
    if isinstance(phi, Not):
        return _PREC_NOT
    return _PREC_ATOM


def to_text(phi: Formula, context: int = 0) -> str:
    """Canonical concrete syntax; ``parse(to_text(phi)) == phi`` for parser-built formulas."""
    text = _render(phi)
    if _prec(phi) < context:
        return f"({text})"
    return text


def _render(phi: Formula) -> str:
    if isinstance(phi, Atom):
        return f"{phi.relation}({','.join(phi.args)})"
    if isinstance(phi, Eq):
        return f"{phi.left}={phi.right}"
    if isinstance(phi, Not):
        return "!" + to_text(phi.body, _PREC_NOT)
    if isinstance(phi, And):
        if not phi.children:
            return "TRUE"
        if len(phi.children) == 1:
            return to_text(phi.children[0], _PREC_ATOM)
        return " & ".join(to_text(child, _PREC_AND + 1) for child in phi.children)
    if isinstance(phi, Or):
        if not phi.children:
            return "FALSE"
        if len(phi.children) == 1:
            return to_text(phi.children[0], _PREC_ATOM)
        return " | ".join(to_text(child, _PREC_OR + 1) for child in phi.children)
    if isinstance(phi, Implies):
        return f"{to_text(phi.left, _PREC_IMP + 1)} -> {to_text(phi.right, _PREC_IMP)}"
    if isinstance(phi, Iff):
        return f"{to_text(phi.left, _PREC_IFF + 1)} <-> {to_text(phi.right, _PREC_IFF + 1)}"
    if isinstance(phi, Exists):
        return f"EX {phi.var}. {to_text(phi.body)}"
    if isinstance(phi, Forall):
        return f"ALL {phi.var}. {to_text(phi.body)}"
    raise TypeError(f"not a formula: {phi!r}")


def formula_length(phi: Formula) -> int:
    """Encoding length: characters of the canonical print."""
    return len(to_text(phi))
