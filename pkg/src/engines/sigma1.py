"""
Existential model checking through homomorphisms and color coding

A Sigma_1 sentence is split into the disjuncts of its matrix. Every
disjunct becomes a small pattern structure over the expanded vocabulary
(relations, their complements, equality and inequality), so the sentence
holds exactly when one of the patterns maps homomorphically into the
expanded input. Inequalities can be traded for unary color classes instead,
which keeps the pattern's Gaifman graph that of the formula without its
inequalities.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from src.engines.hashing import DETERMINISTIC, build_hash_family
from src.engines.hom_dp import solve_hom
from src.logic.formula_graph import formula_graph, formula_graph_neq
from src.logic.formulas import Atom, Eq, Formula, Not, free_variables
from src.logic.fragments import SIGMA, classify
from src.logic.normal_forms import dnf_terms, prenex_parts, to_prenex
from src.logic.parser import check_vocabulary
from src.structures.graphs import edges_of
from src.structures.structure import Structure, Vocabulary, color_expand, complement_expansion
from src.utils.errors import NotSigma1

logger = logging.getLogger(__name__)

DEFAULT_DNF_CAP = 10_000


@dataclass
class Sigma1Result:
    """
    Outcome of an existential model-checking run

    Args:
        holds (bool): Truth value of the sentence
        witness (dict | None): Values of the matrix variables satisfying the
            first accepted disjunct
        disjuncts (int): Number of matrix disjuncts
        trials (int): Hash functions tried (color coding only)
        error_bound (float): Probability of a false negative; 0 unless the
            hash family was randomized
    """

    holds: bool
    witness: dict | None = None
    disjuncts: int = 0
    trials: int = 0
    error_bound: float = 0.0

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class Sigma1Matrix:
    """Matrix variables in prefix order, DNF terms and the edges of G(matrix) by name."""

    variables: tuple
    terms: tuple
    edges: tuple
    edges_neq: tuple


def prepare_sigma1(structure, phi: Formula, cap=DEFAULT_DNF_CAP) -> Sigma1Matrix:
    """
    Bring a Sigma_1 sentence into the form the engines consume

    Args:
        structure (Structure): Structure the sentence will be checked on
        phi (Formula): Sentence, any connectives
        cap (int, optional): Largest accepted number of DNF terms

    Returns:
        Sigma1Matrix: Variables, terms and formula-graph edges

    Raises:
        NotSigma1: ``phi`` is not equivalent to an existential prenex sentence
            by the syntactic transformations, or has free variables
        DNFBlowup: More than ``cap`` terms
    """
    if free_variables(phi):
        raise NotSigma1(f"expected a sentence, free variables {sorted(free_variables(phi))}")
    check_vocabulary(phi, structure.vocab)
    prenex = to_prenex(phi)
    info = classify(prenex)
    if not info.within(SIGMA, 1):
        raise NotSigma1(f"sentence is {info.label}, not existential")
    prefix, matrix = prenex_parts(prenex)
    used = free_variables(matrix)
    names = tuple(var for _, var in prefix if var in used)
    terms = tuple(tuple(t) for t in dnf_terms(matrix, cap))
    return Sigma1Matrix(names, terms, _named_edges(formula_graph(matrix)),
                        _named_edges(formula_graph_neq(matrix)))


def _named_edges(graph_and_names):
    graph, names = graph_and_names
    return tuple(sorted({(names[a], names[b]) for a, b in edges_of(graph) if a < b}))


class LiteralTarget:
    """
    A'' for a fixed structure: complements of the symbols used negatively,
    equality, inequality and the empty padding symbol S with its full complement

    Args:
        structure (Structure): The structure A
        negated (Iterable[str]): Symbols occurring in negative literals
    """

    def __init__(self, structure: Structure, negated=()):
        pad = structure.vocab.gensym("S")
        padded = structure.expand(Vocabulary.of((pad, 2)), {pad: []})
        wanted = sorted(set(negated)) + [pad]
        expanded, self.bars = complement_expansion(padded, wanted)
        taken = set(expanded.vocab.names)
        self.eq = expanded.vocab.gensym("EQ", taken)
        self.neq = expanded.vocab.gensym("NEQ", taken | {self.eq})
        universe = structure.universe
        self.structure = expanded.expand(
            Vocabulary.of((self.eq, 2), (self.neq, 2)),
            {self.eq: [(a, a) for a in universe],
             self.neq: [(a, b) for a in universe for b in universe if a != b]})
        self.pad = pad

    def pattern(self, names, term, padding=()) -> Structure:
        """
        B_i: universe the matrix variables, one tuple per literal

        Args:
            names (Sequence[str]): Matrix variables; element i is ``names[i]``
            term (Sequence[Formula]): Literals of one disjunct
            padding (Iterable[tuple]): Variable pairs receiving a dummy ``not S`` literal

        Returns:
            Structure: Pattern over the vocabulary of A''
        """
        position = {name: i for i, name in enumerate(names)}
        rows = {}
        for literal in term:
            symbol, args = self._symbol_of(literal)
            rows.setdefault(symbol, []).append(tuple(position[a] for a in args))
        for u, v in padding:
            rows.setdefault(self.bars[self.pad], []).append((position[u], position[v]))
        return Structure(self.structure.vocab, max(len(names), 1), rows)

    def _symbol_of(self, literal):
        negative = isinstance(literal, Not)
        body = literal.body if negative else literal
        if isinstance(body, Eq):
            return (self.neq if negative else self.eq), (body.left, body.right)
        if negative:
            return self.bars[body.relation], body.args
        return body.relation, body.args

    def solve(self, names, term, padding=(), limit=None):
        """Witness for one disjunct as ``{variable: element}``, or None."""
        if not names:
            return {}
        h = solve_hom(self.structure, self.pattern(names, term, padding), limit=limit)
        if h is None:
            return None
        return {name: h[i] for i, name in enumerate(names)}


def negated_symbols(terms) -> set:
    return {lit.body.relation for term in terms for lit in term
            if isinstance(lit, Not) and isinstance(lit.body, Atom)}


def mc_sigma1_via_hom(structure, phi: Formula, cap=DEFAULT_DNF_CAP, limit=None) -> Sigma1Result:
    """
    Decide a Sigma_1 sentence by one homomorphism test per DNF disjunct

    Every disjunct is padded with ``not S u v`` for each edge of G(phi), S
    interpreted as the empty relation, so all patterns share the formula's
    Gaifman graph.

    Args:
        structure (Structure): The structure A
        phi (Formula): Existential sentence
        cap (int, optional): Largest accepted number of DNF terms
        limit (int, optional): Guard on DP table sizes

    Returns:
        Sigma1Result: Truth value, witness of the first accepted disjunct
    """
    matrix = prepare_sigma1(structure, phi, cap)
    if not matrix.terms:
        return Sigma1Result(False, None, 0)
    target = LiteralTarget(structure, negated_symbols(matrix.terms))
    for i, term in enumerate(matrix.terms):
        witness = target.solve(matrix.variables, term, matrix.edges, limit)
        if witness is not None:
            logger.debug(f"Sigma1 via HOM: disjunct {i} of {len(matrix.terms)} accepted")
            return Sigma1Result(True, witness, len(matrix.terms))
    return Sigma1Result(False, None, len(matrix.terms))


def inequality_pairs(term) -> list:
    """Pairs ``(x, y)`` with ``not x = y`` in the term, self-inequalities included."""
    return [(lit.body.left, lit.body.right) for lit in term
            if isinstance(lit, Not) and isinstance(lit.body, Eq)]


def proper_colorings(vertices, edges, colors: int):
    """
    Colorings ``vertex -> 1..colors`` giving adjacent vertices distinct colors

    Backtracking in vertex order, colors tried ascending, so the output
    order is lexicographic.

    Yields:
        dict: One coloring at a time
    """
    vertices = list(vertices)
    adjacent = {v: set() for v in vertices}
    for u, v in edges:
        adjacent[u].add(v)
        adjacent[v].add(u)
    gamma = {}

    def extend(i):
        if i == len(vertices):
            yield dict(gamma)
            return
        v = vertices[i]
        for c in range(1, colors + 1):
            if all(gamma.get(u) != c for u in adjacent[v]):
                gamma[v] = c
                yield from extend(i + 1)
                del gamma[v]

    yield from extend(0)


def color_term(term, gamma, color_names) -> list:
    """
    Replace each ``not x = y`` by ``C_gamma(x) x`` and ``C_gamma(y) y``

    Args:
        term (Sequence[Formula]): Literals of one disjunct
        gamma (Mapping): Color of every variable in an inequality
        color_names (Sequence[str]): Symbol of color 1, 2, ...

    Returns:
        list: Literal list without inequalities
    """
    result = []
    for literal in term:
        if isinstance(literal, Not) and isinstance(literal.body, Eq):
            for var in (literal.body.left, literal.body.right):
                colored = Atom(color_names[gamma[var] - 1], (var,))
                if colored not in result:
                    result.append(colored)
        else:
            result.append(literal)
    return result


def mc_sigma1_neq_color_coding(structure, phi: Formula, mode=DETERMINISTIC, seed=0, epsilon=1e-6,
                               cap=DEFAULT_DNF_CAP, limit=None, coverage_limit=10**6) -> Sigma1Result:
    """
    Decide a Sigma_1 sentence, handling inequalities by color coding

    For each disjunct, ``d`` ranges over ``2..min(#inequality variables, n)``.
    For every f of a d-perfect hash family and every proper coloring gamma
    of the inequality graph with colors ``1..d`` the disjunct with its
    inequalities replaced by color atoms is tested on A expanded by the
    classes of f. A satisfying tuple takes some number d of distinct values
    on the inequality variables; an f injective on them yields gamma, so no
    yes-instance is lost in deterministic mode.

    Args:
        structure (Structure): The structure A
        phi (Formula): Existential sentence
        mode (str, optional): Hash family mode
        seed (int, optional): Seed of randomized families
        epsilon (float, optional): Per-family miss probability in randomized mode
        cap (int, optional): Largest accepted number of DNF terms
        limit (int, optional): Guard on DP table sizes
        coverage_limit (int, optional): Subset limit of deterministic families

    Returns:
        Sigma1Result: Truth value, witness, trial count and error bound
    """
    matrix = prepare_sigma1(structure, phi, cap)
    n = structure.n
    result = Sigma1Result(False, None, len(matrix.terms))
    families = {}
    plain = None
    for index, term in enumerate(matrix.terms):
        pairs = inequality_pairs(term)
        if any(x == y for x, y in pairs):
            continue
        if not pairs:
            if plain is None:
                plain = LiteralTarget(structure, negated_symbols(matrix.terms))
            witness = plain.solve(matrix.variables, term, matrix.edges_neq, limit)
            if witness is not None:
                result.holds, result.witness = True, witness
                return result
            continue
        colored_vars = list(dict.fromkeys(v for pair in pairs for v in pair))
        negated = negated_symbols([term])
        for d in range(2, min(len(colored_vars), n) + 1):
            gammas = list(proper_colorings(colored_vars, pairs, d))
            if not gammas:
                continue
            if d not in families:
                families[d] = build_hash_family(n, d, mode, seed + d, epsilon, coverage_limit)
                result.trials += len(families[d])
                result.error_bound = max(result.error_bound, families[d].error_bound)
            for f in families[d]:
                present = set(f)
                expanded, colors = color_expand(structure, f, d)
                target = LiteralTarget(expanded, negated)
                for gamma in gammas:
                    if not set(gamma.values()) <= present:
                        continue
                    witness = target.solve(matrix.variables, color_term(term, gamma, colors),
                                           matrix.edges_neq, limit)
                    if witness is not None:
                        logger.debug(f"Color coding: disjunct {index} accepted with d={d}, gamma={gamma}")
                        result.holds, result.witness = True, witness
                        return result
    return result
