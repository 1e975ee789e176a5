"""
Propositional formulas with small and big connectives

Small connectives (``AND``/``OR``) and the negation build small formulas;
big connectives (``BIGAND``/``BIGOR``) stack them into the C_t / D_t levels
used by weighted satisfiability. Text form is an s-expression::

    (BIGAND (OR X (NOT Y)) (OR Y Z))
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput

from src.utils.errors import FormatError

logger = logging.getLogger(__name__)


class PropFormula:
    __slots__ = ()

    def __str__(self) -> str:
        return dump_prop(self).strip()


@dataclass(frozen=True)
class Var(PropFormula):
    name: str


@dataclass(frozen=True)
class PNot(PropFormula):
    body: PropFormula


@dataclass(frozen=True)
class SmallAnd(PropFormula):
    children: tuple


@dataclass(frozen=True)
class SmallOr(PropFormula):
    children: tuple


@dataclass(frozen=True)
class BigAnd(PropFormula):
    children: tuple = ()


@dataclass(frozen=True)
class BigOr(PropFormula):
    children: tuple = ()


SMALL = "small"
C_CLASS = "C"
D_CLASS = "D"
OTHER = "other"

_BIG = (BigAnd, BigOr)
_CONNECTIVES = (SmallAnd, SmallOr, BigAnd, BigOr)


def is_small(phi: PropFormula) -> bool:
    if isinstance(phi, Var):
        return True
    if isinstance(phi, PNot):
        return is_small(phi.body)
    if isinstance(phi, (SmallAnd, SmallOr)):
        return all(is_small(c) for c in phi.children)
    return False


def prop_depth(phi: PropFormula) -> int:
    """Connective nodes on the longest root-leaf path; negations are not counted."""
    if isinstance(phi, Var):
        return 0
    if isinstance(phi, PNot):
        return prop_depth(phi.body)
    return 1 + max((prop_depth(c) for c in phi.children), default=0)


def prop_variables(phi: PropFormula) -> list:
    seen = {}

    def visit(node):
        if isinstance(node, Var):
            seen.setdefault(node.name, None)
        elif isinstance(node, PNot):
            visit(node.body)
        else:
            for child in node.children:
                visit(child)

    visit(phi)
    return list(seen)


def eval_prop(phi: PropFormula, true_variables) -> bool:
    """Truth value under the assignment making exactly ``true_variables`` true."""
    if isinstance(phi, Var):
        return phi.name in true_variables
    if isinstance(phi, PNot):
        return not eval_prop(phi.body, true_variables)
    if isinstance(phi, (SmallAnd, BigAnd)):
        return all(eval_prop(c, true_variables) for c in phi.children)
    return any(eval_prop(c, true_variables) for c in phi.children)


@dataclass(frozen=True)
class PropClass:
    """
    Syntactic level of a propositional formula

    ``kind`` is ``small`` (C_0 = D_0), ``C``, ``D`` or ``other``; ``d`` is the
    largest depth of a maximal small subformula.
    """

    kind: str
    t: int
    d: int

    def is_c(self, t: int, d: int | None = None) -> bool:
        level_ok = (self.kind == SMALL and t == 0) or (self.kind == C_CLASS and self.t == t)
        return level_ok and (d is None or self.d <= d)

    @property
    def label(self) -> str:
        if self.kind == SMALL:
            return f"C0,{self.d}"
        if self.kind == OTHER:
            return "other"
        return f"{self.kind}{self.t},{self.d}"


def classify_prop(phi: PropFormula) -> PropClass:
    """
    Purely syntactic C_t / D_t classification

    C_t is a big conjunction of D_(t-1) formulas and D_t a big disjunction of
    C_(t-1) formulas, where C_0 = D_0 are the small formulas. An empty big
    connective sits at level 1.

    Args:
        phi (PropFormula): Formula to classify

    Returns:
        PropClass: Kind, level and small-subformula depth
    """
    if is_small(phi):
        return PropClass(SMALL, 0, prop_depth(phi))
    if not isinstance(phi, _BIG):
        return PropClass(OTHER, 0, 0)
    expected = D_CLASS if isinstance(phi, BigAnd) else C_CLASS
    kind = C_CLASS if isinstance(phi, BigAnd) else D_CLASS
    if not phi.children:
        return PropClass(kind, 1, 0)
    levels = set()
    depth = 0
    for child in phi.children:
        info = classify_prop(child)
        if info.kind == OTHER or (info.kind not in (SMALL, expected)):
            return PropClass(OTHER, 0, 0)
        levels.add(info.t)
        depth = max(depth, info.d)
    if len(levels) != 1:
        return PropClass(OTHER, 0, 0)
    return PropClass(kind, levels.pop() + 1, depth)


def lift_prop(phi: PropFormula, root=BigAnd) -> PropFormula:
    """
    Raise the level by one: every maximal small subformula is wrapped in a
    singleton big connective dual to its parent (``root`` for a small input)

    Args:
        phi (PropFormula): C_t or D_t formula
        root (type, optional): Wrapper for a small ``phi``. Defaults to BigAnd.

    Returns:
        PropFormula: The lifted formula, equivalent to ``phi``
    """
    if is_small(phi):
        return root((phi,))

    def walk(node):
        dual = BigOr if isinstance(node, BigAnd) else BigAnd
        return type(node)(tuple(dual((c,)) if is_small(c) else walk(c) for c in node.children))

    return walk(phi)


# text format

GRAMMAR = r"""
start: node

?node: VAR                          -> var
     | "(" "NOT" node ")"           -> not_
     | "(" "AND" node+ ")"          -> small_and
     | "(" "OR" node+ ")"           -> small_or
     | "(" "BIGAND" node* ")"       -> big_and
     | "(" "BIGOR" node* ")"        -> big_or

VAR: /[A-Za-z_][A-Za-z0-9_]*/
COMMENT: /;[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""


@v_args(inline=True)
class PropBuilder(Transformer):
    def start(self, node):
        return node

    def var(self, name):
        return Var(str(name))

    def not_(self, body):
        return PNot(body)

    def small_and(self, *items):
        return SmallAnd(tuple(items))

    def small_or(self, *items):
        return SmallOr(tuple(items))

    def big_and(self, *items):
        return BigAnd(tuple(items))

    def big_or(self, *items):
        return BigOr(tuple(items))


_parser = Lark(GRAMMAR, parser="lalr")


def load_prop(text: str) -> PropFormula:
    try:
        tree = _parser.parse(text)
    except UnexpectedInput as e:
        raise FormatError(f"malformed propositional formula at column {e.column}",
                          getattr(e, "line", None)) from None
    return PropBuilder().transform(tree)


_NAMES = {SmallAnd: "AND", SmallOr: "OR", BigAnd: "BIGAND", BigOr: "BIGOR"}


def _render(phi: PropFormula) -> str:
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, PNot):
        return f"(NOT {_render(phi.body)})"
    parts = " ".join(_render(c) for c in phi.children)
    return f"({_NAMES[type(phi)]} {parts})" if parts else f"({_NAMES[type(phi)]})"


def dump_prop(phi: PropFormula) -> str:
    return _render(phi) + "\n"


def read_prop(path) -> PropFormula:
    with open(path, "r", encoding="utf-8") as f:
        return load_prop(f.read())


# builders


def literal(name: str, positive: bool = True) -> PropFormula:
    return Var(name) if positive else PNot(Var(name))


def literal_parts(phi: PropFormula):
    """``(name, positive)`` of a literal, or None."""
    if isinstance(phi, Var):
        return phi.name, True
    if isinstance(phi, PNot) and isinstance(phi.body, Var):
        return phi.body.name, False
    return None
