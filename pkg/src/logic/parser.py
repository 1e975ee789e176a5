"""
Concrete syntax for first-order formulas

    EX x. ALL y. (E(x,y) -> !x=y) & TRUE

Precedence from tightest: ``!``, ``&``, ``|``, ``->`` (right associative),
``<->``. A quantifier's scope extends as far right as possible.
"""

from __future__ import annotations

import logging
import re

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from src.logic.formulas import (
    FALSE,
    TRUE,
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
    children,
)
from src.utils.errors import FormulaSyntaxError, UnknownRelation

logger = logging.getLogger(__name__)

GRAMMAR = r"""
?start: formula

?formula: iff

?iff: imp
    | imp "<->" imp                 -> iff

?imp: disj
    | disj "->" imp                 -> implies

?disj: conj
     | conj ("|" conj)+             -> or_

?conj: unary
     | unary ("&" unary)+           -> and_

?unary: "!" unary                   -> not_
      | "EX" NAME "." formula       -> exists
      | "ALL" NAME "." formula      -> forall
      | "(" formula ")"
      | NAME "(" NAME ("," NAME)* ")"  -> atom
      | NAME "=" NAME               -> eq
      | "TRUE"                      -> true
      | "FALSE"                     -> false

NAME: /[A-Za-z_][A-Za-z0-9_]*/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

SETVAR = re.compile(r"^\s*#\s*setvar\s+([A-Za-z_][A-Za-z0-9_]*)\s+(\d+)\s*$")


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Turns the lark parse tree into formula nodes."""

    def iff(self, left, right):
        return Iff(left, right)

    def implies(self, left, right):
        return Implies(left, right)

    def or_(self, *items):
        return Or(tuple(items))

    def and_(self, *items):
        return And(tuple(items))

    def not_(self, body):
        return Not(body)

    def exists(self, name, body):
        return Exists(str(name), body)

    def forall(self, name, body):
        return Forall(str(name), body)

    def atom(self, name, *args):
        return Atom(str(name), tuple(str(a) for a in args))

    def eq(self, left, right):
        return Eq(str(left), str(right))

    def true(self):
        return TRUE

    def false(self):
        return FALSE


_parser = Lark(GRAMMAR, parser="lalr", maybe_placeholders=False)


def parse(text: str, vocab=None, relation_variable: RelationVariable | None = None) -> Formula:
    """
    Parse a formula

    Args:
        text (str): Formula text
        vocab (Vocabulary, optional): When given, every atom must match a symbol and its arity
        relation_variable (RelationVariable, optional): Extra symbol allowed alongside ``vocab``

    Returns:
        Formula: The AST

    Raises:
        FormulaSyntaxError: Text outside the grammar
        UnknownRelation: Atom not matching ``vocab``
    """
    try:
        tree = _parser.parse(text)
    except UnexpectedEOF as e:
        raise FormulaSyntaxError("unexpected end of input", e.line, e.column) from None
    except UnexpectedCharacters as e:
        raise FormulaSyntaxError(f"unexpected character {text[e.pos_in_stream]!r}",
                                 e.line, e.column) from None
    except UnexpectedToken as e:
        if e.token.type == "$END":
            raise FormulaSyntaxError("unexpected end of input", e.line, e.column) from None
        raise FormulaSyntaxError(f"unexpected token {e.token!s}", e.line, e.column) from None
    except UnexpectedInput as e:
        raise FormulaSyntaxError(str(e), getattr(e, "line", None), getattr(e, "column", None)) from None
    phi = FormulaBuilder().transform(tree)
    if vocab is not None:
        check_vocabulary(phi, vocab, relation_variable)
    return phi


def check_vocabulary(phi: Formula, vocab, relation_variable=None) -> None:
    allowed = dict(vocab.arities)
    if relation_variable is not None:
        allowed[relation_variable.name] = relation_variable.arity

    def visit(node):
        if isinstance(node, Atom):
            if node.relation not in allowed:
                raise UnknownRelation(f"relation {node.relation} is not in the vocabulary")
            if allowed[node.relation] != len(node.args):
                raise UnknownRelation(f"{node.relation} has arity {allowed[node.relation]}, "
                                      f"used with {len(node.args)} arguments")
        for child in children(node):
            visit(child)

    visit(phi)


def parse_formula_file(text: str, vocab=None):
    """
    Parse a formula file with an optional ``# setvar X r`` header

    Args:
        text (str): File contents
        vocab (Vocabulary, optional): Vocabulary to check against

    Returns:
        tuple: ``(Formula, RelationVariable | None)``
    """
    relation_variable = None
    for line in text.splitlines():
        match = SETVAR.match(line)
        if match:
            relation_variable = RelationVariable(match.group(1), int(match.group(2)))
            break
    phi = parse(text, vocab=vocab, relation_variable=relation_variable)
    logger.debug(f"Parsed formula with relation variable {relation_variable}")
    return phi, relation_variable


def read_formula(path, vocab=None):
    with open(path, "r", encoding="utf-8") as f:
        return parse_formula_file(f.read(), vocab=vocab)
