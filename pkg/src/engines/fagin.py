"""
Fagin-defined problems with X positive and outside existential scope

The sentence is brought into the form ``forall y1..yl OR_i AND_j psi_ij``
where every psi_ij is an X-atom or an X-free formula. The X-free parts are
evaluated once into fresh relations; after that a candidate set B only has
to be grown, never shrunk, which bounds the search by m^k partial
solutions.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from src.logic.formulas import (
    FALSE,
    Atom,
    Eq,
    Exists,
    Formula,
    Forall,
    Not,
    RelationVariable,
    conj,
    disj,
    exists,
    forall,
    fresh_names,
    free_variables,
    mentions,
    replace_atoms,
    variables,
)
from src.logic.normal_forms import dnf_terms, prenex_parts, rename_apart, to_nnf, to_prenex
from src.oracles.checkers import satisfies_fagin
from src.oracles.evaluator import Assignment, eval_naive
from src.structures.structure import Structure, Vocabulary
from src.utils.errors import KTooLarge, NotPositive, UnboundVariable

logger = logging.getLogger(__name__)

DEFAULT_DNF_CAP = 10_000


def check_fagin_positive(phi: Formula, relation_variable) -> bool:
    """
    X never occurs negated and never inside an existential quantifier

    The test runs on the negation normal form, so an X-atom on the left of
    an implication counts as negated.
    """
    name = _name(relation_variable)

    def ok(node):
        if isinstance(node, Not):
            return not (isinstance(node.body, Atom) and node.body.relation == name)
        if isinstance(node, Exists):
            return not mentions(node.body, name)
        if isinstance(node, Forall):
            return ok(node.body)
        if isinstance(node, (Atom, Eq)):
            return True
        return all(ok(child) for child in node.children)

    return ok(to_nnf(phi))


def _name(relation_variable):
    return relation_variable.name if isinstance(relation_variable, RelationVariable) else str(relation_variable)


@dataclass(frozen=True)
class Disjunct:
    """
    One disjunct chi_i of the normalized matrix

    Args:
        x_atoms (tuple): Argument tuples of the X-atoms
        atoms (tuple): ``(symbol, args)`` of the precomputed X-free parts
    """

    x_atoms: tuple
    atoms: tuple


@dataclass(frozen=True)
class FaginPart:
    symbol: str
    args: tuple
    formula: Formula


@dataclass(frozen=True)
class FaginProblem:
    """
    ``forall y1..yl OR_i chi_i`` with the X-free parts kept aside

    Args:
        relation_variable (RelationVariable): X and its arity r
        variables (tuple): The universally quantified y1..yl, l >= 1
        disjuncts (tuple[Disjunct]): chi_1..chi_m
        parts (tuple[FaginPart]): X-free subformulas, one fresh symbol each
        source (Formula): The sentence that was normalized
    """

    relation_variable: RelationVariable
    variables: tuple
    disjuncts: tuple
    parts: tuple
    source: Formula

    @property
    def l(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.disjuncts)

    def formula(self) -> Formula:
        """The normal form as a sentence, X-free parts substituted back."""
        by_symbol = {part.symbol: part.formula for part in self.parts}
        name = self.relation_variable.name
        terms = []
        for d in self.disjuncts:
            literals = [Atom(name, args) for args in d.x_atoms]
            literals += [by_symbol[symbol] for symbol, _ in d.atoms]
            terms.append(conj(literals))
        return forall(self.variables, disj(terms))


def fagin_normalize(phi: Formula, relation_variable: RelationVariable, cap=DEFAULT_DNF_CAP) -> FaginProblem:
    """
    Normalize a positive Fagin sentence

    Maximal X-free subformulas become opaque atoms over their free variables
    (a dummy universal variable is added when a part has none). The
    remaining skeleton is built from conjunction, disjunction and universal
    quantification only, so it can be prenexed and put into DNF.

    Args:
        phi (Formula): Sentence with relation variable X
        relation_variable (RelationVariable): X
        cap (int, optional): Largest accepted number of disjuncts

    Returns:
        FaginProblem: The normalized problem

    Raises:
        NotPositive: X is negated or under an existential quantifier
        UnboundVariable: ``phi`` has free element variables
    """
    name = relation_variable.name
    if not check_fagin_positive(phi, relation_variable):
        raise NotPositive(f"{name} occurs negated or under an existential quantifier")
    if free_variables(phi):
        raise UnboundVariable(f"expected a sentence, free variables {sorted(free_variables(phi))}")
    nnf = rename_apart(to_nnf(phi))
    taken = set(variables(nnf))
    symbols = {}
    parts = []

    def opaque(node):
        free = free_variables(node)
        args = tuple(v for v in variables(node) if v in free)
        key = (node, args)
        if key not in symbols:
            symbols[key] = Vocabulary().gensym(f"R{len(parts) + 1}", {name})
            parts.append(FaginPart(symbols[key], args, node))
        return Atom(symbols[key], args)

    def skeleton(node):
        if not mentions(node, name):
            return opaque(node)
        if isinstance(node, Atom):
            return node
        if isinstance(node, Forall):
            return Forall(node.var, skeleton(node.body))
        return type(node)(tuple(skeleton(child) for child in node.children))

    prefix, matrix = prenex_parts(to_prenex(skeleton(nnf)))
    ys = tuple(var for _, var in prefix)
    if not ys:
        ys = (fresh_names("y", 1, taken)[0],)
    lifted = {}
    for i, part in enumerate(parts):
        if not part.args:
            parts[i] = FaginPart(part.symbol, (ys[0],), part.formula)
            lifted[part.symbol] = (ys[0],)
    disjuncts = []
    for term in dnf_terms(matrix, cap):
        x_atoms = tuple(lit.args for lit in term if lit.relation == name)
        atoms = tuple((lit.relation, lifted.get(lit.relation, lit.args)) for lit in term if lit.relation != name)
        disjuncts.append(Disjunct(x_atoms, atoms))
    problem = FaginProblem(relation_variable, ys, tuple(disjuncts), tuple(parts), phi)
    logger.debug(f"Fagin normal form: l={problem.l}, m={problem.m}, {len(parts)} X-free parts")
    return problem


def fagin_precompute(structure, problem: FaginProblem) -> Structure:
    """
    A*: one relation per X-free part, holding the tuples that satisfy it

    Args:
        structure (Structure): A
        problem (FaginProblem): Normalized problem

    Returns:
        Structure: A* over the part symbols
    """
    vocab = Vocabulary.of(*((part.symbol, len(part.args)) for part in problem.parts))
    relations = {}
    for part in problem.parts:
        rows = []
        for values in itertools.product(structure.universe, repeat=len(part.args)):
            if eval_naive(structure, part.formula, Assignment(dict(zip(part.args, values))), pruned=True):
                rows.append(values)
        relations[part.symbol] = rows
    return Structure(vocab, structure.n, relations)


def check_phi(structure, problem: FaginProblem, k: int, precomputed=None, verify=True):
    """
    Decide whether some B of exactly k tuples satisfies the sentence

    The family S of partial solutions starts as ``{empty set}``. For every
    ``a`` in A^l each B in S that fails all disjuncts is replaced by its
    extensions ``B + X-tuples of chi_i(a)`` of size at most k for which the
    X-free part of chi_i holds. A surviving B is minimal; it is padded with
    the lexicographically smallest missing tuples up to size k, which keeps
    it a solution because X occurs positively.

    Args:
        structure (Structure): A
        problem (FaginProblem): Normalized problem
        k (int): Required size of B
        precomputed (Structure, optional): A* from fagin_precompute
        verify (bool, optional): Re-check the witness by direct evaluation

    Returns:
        frozenset | None: Witness set of r-tuples

    Raises:
        KTooLarge: ``k`` exceeds ``|A| ** r``
    """
    r = problem.relation_variable.arity
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    if k > structure.n ** r:
        raise KTooLarge(f"k={k} exceeds the {structure.n ** r} available {r}-tuples")
    star = fagin_precompute(structure, problem) if precomputed is None else precomputed
    family = {frozenset()}
    largest = 1
    for values in itertools.product(structure.universe, repeat=problem.l):
        env = dict(zip(problem.variables, values))
        options = []
        for d in problem.disjuncts:
            if all(tuple(env[v] for v in args) in star.rel(symbol) for symbol, args in d.atoms):
                options.append(frozenset(tuple(env[v] for v in args) for args in d.x_atoms))
        updated = set()
        for chosen in family:
            if any(needed <= chosen for needed in options):
                updated.add(chosen)
                continue
            for needed in options:
                grown = chosen | needed
                if len(grown) <= k:
                    updated.add(grown)
        family = updated
        largest = max(largest, len(family))
        if not family:
            logger.debug(f"Check-phi rejects k={k} at {values}")
            return None
    best = min(family, key=lambda b: (len(b), sorted(b)))
    witness = set(best)
    for tup in itertools.product(structure.universe, repeat=r):
        if len(witness) >= k:
            break
        witness.add(tup)
    witness = frozenset(witness)
    logger.debug(f"Check-phi accepts k={k}: {len(family)} partial solutions left, at most {largest} held")
    if verify and not satisfies_fagin(structure, problem.source, problem.relation_variable, witness, k):
        raise AssertionError(f"Fagin witness {sorted(witness)} fails direct evaluation")
    return witness


def fagin_to_slicewise(phi: Formula, relation_variable: RelationVariable, k: int) -> Formula:
    """
    First-order sentence true exactly when some k distinct r-tuples satisfy phi

    ``exists x_1..x_k (x_i != x_j for i < j & phi_k)`` where each ``X z``
    of phi becomes ``OR_i x_i = z`` (componentwise).

    Args:
        phi (Formula): Sentence with relation variable X
        relation_variable (RelationVariable): X of arity r
        k (int): Slice

    Returns:
        Formula: The slice sentence
    """
    name, r = relation_variable.name, relation_variable.arity
    fresh = fresh_names("u", k * r, variables(phi))
    tuples = [fresh[i * r:(i + 1) * r] for i in range(k)]

    def member(a: Atom):
        if a.relation != name:
            return a
        if not tuples:
            return FALSE
        return disj(conj(Eq(x, z) for x, z in zip(tup, a.args)) for tup in tuples)

    distinct = [disj(Not(Eq(x, z)) for x, z in zip(s, t))
                for s, t in itertools.combinations(tuples, 2)]
    body = conj(distinct + [replace_atoms(phi, member)])
    return exists(fresh, body)
