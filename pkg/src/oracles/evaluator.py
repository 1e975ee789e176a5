"""
Reference evaluation of first-order formulas over finite structures

The default evaluator is plain Tarskian recursion on the formula as given:
every quantifier tries every element of the universe.

``pruned=True`` selects a faster path for the large sentences that
reductions produce. It works on the miniscoped negation normal form,
memoizes quantifier nodes on their shape up to renaming of variables and on
the values of their free variables, and lets a quantifier try only the
elements that some atom or equality could make relevant.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

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
    free_variables,
    map_children,
    to_text,
)
from src.logic.normal_forms import miniscope, to_nnf
from src.utils.errors import UnboundVariable, UnknownRelation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Assignment:
    """
    Values for free element variables and for free relation variables

    Args:
        values (Mapping): Variable name to universe element
        relations (Mapping): Relation variable name to a set of tuples
    """

    values: Mapping = field(default_factory=dict)
    relations: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))
        frozen = {name: frozenset(map(tuple, tuples)) for name, tuples in self.relations.items()}
        object.__setattr__(self, "relations", MappingProxyType(frozen))

    def bind(self, var: str, element: int) -> "Assignment":
        return Assignment({**self.values, var: element}, self.relations)

    def with_relation(self, name: str, tuples) -> "Assignment":
        return Assignment(self.values, {**self.relations, name: tuples})


def eval_naive(structure, phi: Formula, assignment: Assignment | None = None, pruned: bool = False) -> bool:
    """
    Decide ``structure, assignment |= phi``

    Args:
        structure (Structure): The structure A
        phi (Formula): Any formula; ``->`` and ``<->`` are allowed
        assignment (Assignment, optional): Values of the free variables and
            of relation variables such as X
        pruned (bool, optional): Use the memoizing, candidate-pruning
            evaluator instead of plain recursion. Defaults to False.

    Returns:
        bool: Truth value

    Raises:
        UnboundVariable: A free variable of ``phi`` has no value
        UnknownRelation: An atom names neither a symbol of A nor a relation variable
    """
    assignment = assignment or Assignment()
    missing = sorted(free_variables(phi) - set(assignment.values))
    if missing:
        raise UnboundVariable(f"free variables without a value: {', '.join(missing)}")
    for var, element in assignment.values.items():
        if not 0 <= element < structure.n:
            raise UnboundVariable(f"{var} is assigned {element}, outside 0..{structure.n - 1}")
    if not pruned:
        return _Tarski(structure, assignment.relations).eval(phi, dict(assignment.values))
    evaluator = _Evaluator(structure, assignment.relations)
    return evaluator.eval(miniscope(to_nnf(phi)), dict(assignment.values))


class _Tarski:
    def __init__(self, structure, relation_variables):
        self.structure = structure
        self.relation_variables = relation_variables

    def relation(self, name):
        if name in self.relation_variables:
            return self.relation_variables[name]
        if name not in self.structure.vocab:
            raise UnknownRelation(f"relation {name} is neither in the vocabulary nor assigned")
        return self.structure.rel(name)

    def eval(self, node, env) -> bool:
        if isinstance(node, Atom):
            return tuple(env[a] for a in node.args) in self.relation(node.relation)
        if isinstance(node, Eq):
            return env[node.left] == env[node.right]
        if isinstance(node, Not):
            return not self.eval(node.body, env)
        if isinstance(node, And):
            return all(self.eval(c, env) for c in node.children)
        if isinstance(node, Or):
            return any(self.eval(c, env) for c in node.children)
        if isinstance(node, Implies):
            return not self.eval(node.left, env) or self.eval(node.right, env)
        if isinstance(node, Iff):
            return self.eval(node.left, env) == self.eval(node.right, env)
        if isinstance(node, Exists):
            return any(self.eval(node.body, {**env, node.var: a}) for a in self.structure.universe)
        if isinstance(node, Forall):
            return all(self.eval(node.body, {**env, node.var: a}) for a in self.structure.universe)
        raise TypeError(f"not a formula: {node!r}")


REFINE_LIMIT = 64


class _Evaluator(_Tarski):
    def __init__(self, structure, relation_variables):
        super().__init__(structure, relation_variables)
        self.memo = {}
        self.fv_cache = {}
        self.shape_cache = {}

    def free(self, node):
        key = id(node)
        if key not in self.fv_cache:
            self.fv_cache[key] = (node, tuple(sorted(free_variables(node))))
        return self.fv_cache[key][1]

    def shape(self, node):
        """Text of ``node`` up to renaming, and its free variables in matching order."""
        key = id(node)
        if key not in self.shape_cache:
            text, order = _alpha_normal(node)
            self.shape_cache[key] = (node, text, order)
        _, text, order = self.shape_cache[key]
        return text, order

    def eval(self, node, env) -> bool:
        if isinstance(node, (Exists, Forall)):
            text, order = self.shape(node)
            key = (text, tuple(env[v] for v in order))
            if key not in self.memo:
                self.memo[key] = self.quantify(node, env)
            return self.memo[key]
        return super().eval(node, env)

    def quantify(self, node, env) -> bool:
        var = node.var
        outer = _without(env, var)
        if isinstance(node, Exists):
            candidates = self.cand(node.body, var, outer)
            pool = self.structure.universe if candidates is None else sorted(candidates)
            return any(self.eval(node.body, {**outer, var: a}) for a in pool)
        candidates = self.cand_neg(node.body, var, outer)
        pool = self.structure.universe if candidates is None else sorted(candidates)
        return all(self.eval(node.body, {**outer, var: a}) for a in pool)

    def fixed(self, node, x, env):
        """Truth value of a subformula that does not depend on ``x``, or None if unknown."""
        names = self.free(node)
        if x in names or any(v not in env for v in names):
            return None
        return self.eval(node, env)

    # cand: superset of the values of x that can make node true; None means "any".
    # cand_neg: the same for making node false.

    def cand(self, node, x, env, refine=True):
        if isinstance(node, Atom):
            return self.atom_candidates(node, x, env)
        if isinstance(node, Eq):
            if node.left == x and node.right != x and node.right in env:
                return {env[node.right]}
            if node.right == x and node.left != x and node.left in env:
                return {env[node.left]}
            return None
        if isinstance(node, Not):
            return self.cand_neg(node.body, x, env, refine)
        if isinstance(node, And):
            return self.meet(node.children, x, env, self.cand, False, refine)
        if isinstance(node, Or):
            return self.join(node.children, x, env, self.cand, True, refine)
        if isinstance(node, Implies):
            return _union(self.cand_neg(node.left, x, env, refine), self.cand(node.right, x, env, refine))
        if isinstance(node, Exists):
            return self.through(node, x, env, self.cand, refine)
        if isinstance(node, Forall):
            return self.through(node, x, env, self.cand, False)
        return None

    def cand_neg(self, node, x, env, refine=True):
        if isinstance(node, Not):
            return self.cand(node.body, x, env, refine)
        if isinstance(node, Or):
            return self.meet(node.children, x, env, self.cand_neg, True, refine)
        if isinstance(node, And):
            return self.join(node.children, x, env, self.cand_neg, False, refine)
        if isinstance(node, Implies):
            return _intersect(self.cand(node.left, x, env, refine), self.cand_neg(node.right, x, env, refine))
        if isinstance(node, Forall):
            return self.through(node, x, env, self.cand_neg, refine)
        if isinstance(node, Exists):
            return self.through(node, x, env, self.cand_neg, False)
        return None

    def through(self, node, x, env, fn, refine):
        """
        Candidates for ``x`` across a quantifier over another variable

        When the witnesses for the inner variable are few, each is bound in
        turn and the candidate sets are united.
        """
        if node.var == x:
            return None
        inner = _without(env, node.var)
        if refine:
            pool = fn(node.body, node.var, inner, False)
            if pool is not None and len(pool) <= REFINE_LIMIT:
                found = set()
                for value in sorted(pool):
                    part = fn(node.body, x, {**inner, node.var: value}, False)
                    if part is None:
                        return None
                    found |= part
                return found
        return fn(node.body, x, inner, refine)

    def meet(self, parts, x, env, fn, absorbing, refine):
        # a part whose fixed value equals ``absorbing`` decides the connective everywhere
        result = None
        for part in parts:
            value = self.fixed(part, x, env)
            if value is not None:
                if value == absorbing:
                    return set()
                continue
            result = _intersect(result, fn(part, x, env, refine))
        return result

    def join(self, parts, x, env, fn, absorbing, refine):
        result = set()
        for part in parts:
            value = self.fixed(part, x, env)
            if value is not None:
                if value == absorbing:
                    return None
                continue
            found = fn(part, x, env, refine)
            if found is None:
                return None
            result |= found
        return result

    def atom_candidates(self, node, x, env):
        if x not in node.args:
            return None
        tuples = None
        if node.relation not in self.relation_variables:
            for pos, arg in enumerate(node.args):
                if arg != x and arg in env:
                    tuples = self.structure.index.get((node.relation, pos, env[arg]), ())
                    break
        if tuples is None:
            tuples = self.relation(node.relation)
        found = set()
        first = node.args.index(x)
        for tup in tuples:
            if all(_matches(tup[i], arg, x, tup[first], env) for i, arg in enumerate(node.args)):
                found.add(tup[first])
        return found


def _without(env, var):
    if var not in env:
        return env
    return {k: v for k, v in env.items() if k != var}


def _alpha_normal(node):
    free_order = {}
    counter = itertools.count()

    def name_of(var, bound):
        if var in bound:
            return bound[var]
        if var not in free_order:
            free_order[var] = f"_f{len(free_order)}"
        return free_order[var]

    def walk(n, bound):
        if isinstance(n, Atom):
            return Atom(n.relation, tuple(name_of(a, bound) for a in n.args))
        if isinstance(n, Eq):
            return Eq(name_of(n.left, bound), name_of(n.right, bound))
        if isinstance(n, (Exists, Forall)):
            fresh = f"_b{next(counter)}"
            return type(n)(fresh, walk(n.body, {**bound, n.var: fresh}))
        return map_children(n, lambda child: walk(child, bound))

    text = to_text(walk(node, {}))
    return text, tuple(free_order)


def _matches(value, arg, x, x_value, env):
    if arg == x:
        return value == x_value
    if arg in env:
        return value == env[arg]
    return True


def _intersect(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a & b


def _union(a, b):
    if a is None or b is None:
        return None
    return a | b
