"""
Named formulas used throughout the test suites and the command line
"""

from __future__ import annotations

from src.logic.formulas import (
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Or,
    RelationVariable,
    atom,
    conj,
    disj,
    exists,
    forall,
    neq,
    pairwise_distinct,
)
from src.logic.parser import parse

X = RelationVariable("X", 1)


def vertex_cover():
    """Every edge has an endpoint in X."""
    return parse("ALL y. ALL z. E(y,z) -> X(y) | X(z)"), X


def dominating_set():
    """Every vertex is in X or adjacent to a member of X."""
    return parse("ALL y. EX x. X(x) & (x = y | E(x,y))"), X


def clique():
    """Any two distinct members of X are adjacent."""
    return parse("ALL y. ALL z. X(y) & X(z) -> y = z | E(y,z)"), X


def at_most(count: int, var: str, body, names) -> Formula:
    """
    ``exists^{<=count} var body``: some ``count`` elements include every
    ``var`` satisfying ``body``

    Args:
        count (int): Bound
        var (str): Variable of ``body`` being counted
        body (Formula): Condition on ``var``
        names (Sequence[str]): ``count`` fresh variable names
    """
    return exists(names, Forall(var, Implies(body, disj(Eq(var, w) for w in names))))


def bounded_degree_dominating_set(l: int):
    """
    Valence at most l and a dominating set X

    Args:
        l (int): Largest allowed number of neighbours, at least 1

    Returns:
        tuple: ``(Formula, RelationVariable)``
    """
    if l < 1:
        raise ValueError(f"valence bound must be at least 1, got {l}")
    ws = [f"w{i}" for i in range(1, l + 1)]
    ys = [f"y{i}" for i in range(l + 1)]
    valence = Forall("x", at_most(l, "z", atom("E", "x", "z"), ws))
    closed = Forall("z", Implies(atom("E", "y0", "z"), disj(Eq("z", y) for y in ys[1:])))
    covered = disj(Atom("X", (y,)) for y in ys)
    return conj([valence, forall(ys, Implies(closed, covered))]), X


def path_formula(k: int):
    """``k`` pairwise distinct vertices forming a path."""
    names = [f"x{i}" for i in range(1, k + 1)]
    edges = [atom("E", a, b) for a, b in zip(names, names[1:])]
    return exists(names, conj(pairwise_distinct(names) + edges))


def bounded_clique():
    """Clique in bounded form: for all x in X and y in X, x != y implies E x y."""
    body = Implies(neq("x", "y"), atom("E", "x", "y"))
    return Forall("x", Implies(atom("X", "x"), Forall("y", Implies(atom("X", "y"), body)))), X


def bounded_dominating_set():
    """Dominating set in bounded form: for all x there is y in X with x = y or E x y."""
    return Forall("x", Exists("y", conj([atom("X", "y"), Or((Eq("x", "y"), atom("E", "x", "y")))]))), X


NAMED = {
    "vc": vertex_cover,
    "ds": dominating_set,
    "clique": clique,
}
