"""
Encodings of arbitrary structures and sentences into graphs

A structure A is turned into a graph in three stages:

1. the incidence structure B(A): the elements of A plus one node per tuple,
   unary U / U_R and symmetric binary E_1..E_s linking a tuple node to its
   i-th entry;
2. the subdivision C(A): every ordered E_i pair gets a midpoint coloured P_i,
   leaving one edge relation E;
3. the graph H(A): each unary predicate Q (in the order U, U_R..., P_1...)
   is replaced by a gadget. A member of the i-th predicate gets a pendant
   edge to a hub lying on a fresh cycle of odd length ``2i + 5``.

C(A) is bipartite, so the only odd cycles of H(A) are the gadget cycles and
``x`` is a member of the i-th predicate exactly when it has a neighbour on a
cycle of length ``2i + 5`` that avoids ``x``. That is what the detector
formulas express.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from src.logic.formulas import (
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    conj,
    disj,
    exists,
    forall,
    neq,
    variables,
)
from src.logic.fragments import classify
from src.logic.normal_forms import attach_prefix, is_nnf, is_prenex, split_prefix
from src.logic.parser import check_vocabulary
from src.structures.graphs import graph_from_edges
from src.structures.structure import EDGE, Structure, Vocabulary, complement_expansion
from src.utils.errors import ArityBoundExceeded, NotPrenexNNF

logger = logging.getLogger(__name__)

UNIVERSE = "U"


def tuple_symbol(relation: str) -> str:
    return f"U_{relation}"


def incidence_symbol(i: int) -> str:
    return f"E{i}"


def position_symbol(i: int) -> str:
    return f"P{i}"


def cycle_length(i: int) -> int:
    """Length of the gadget cycle of the i-th unary predicate (1-based)."""
    return 2 * i + 5


@dataclass(frozen=True)
class GraphEncoding:
    """
    All stages of the structure-to-graph encoding

    Args:
        incidence (Structure): B(A)
        subdivision (Structure): C(A)
        graph (Structure): H(A)
        predicates (tuple): Unary symbols of C(A) in gadget order
        arity (int): Arity s of the source vocabulary
    """

    incidence: Structure
    subdivision: Structure
    graph: Structure
    predicates: tuple
    arity: int

    def length_of(self, predicate: str) -> int:
        return cycle_length(self.predicates.index(predicate) + 1)


def incidence_structure(structure: Structure) -> Structure:
    """B(A): elements first, then one node per tuple, symbols in vocabulary order."""
    s = structure.vocab.max_arity
    symbols = [(UNIVERSE, 1)]
    symbols += [(tuple_symbol(name), 1) for name in structure.vocab.names]
    symbols += [(incidence_symbol(i), 2) for i in range(1, s + 1)]
    provenance = {a: f"a{structure.label(a)}" for a in structure.universe}
    relations = {name: [] for name, _ in symbols}
    relations[UNIVERSE] = [(a,) for a in structure.universe]
    next_id = structure.n
    for name in structure.vocab.names:
        for tup in sorted(structure.rel(name)):
            node = next_id
            next_id += 1
            provenance[node] = f"b({name},{','.join(map(str, tup))})"
            relations[tuple_symbol(name)].append((node,))
            for i, a in enumerate(tup, start=1):
                relations[incidence_symbol(i)] += [(a, node), (node, a)]
    return Structure(Vocabulary(tuple(symbols)), next_id, relations, provenance)


def subdivision(incidence: Structure, s: int) -> Structure:
    """C(B): midpoints ``c(i,a,b)`` for every ordered E_i pair, coloured P_i."""
    unary = [name for name, arity in incidence.vocab.symbols if arity == 1]
    symbols = [(EDGE, 2)] + [(name, 1) for name in unary]
    symbols += [(position_symbol(i), 1) for i in range(1, s + 1)]
    relations = {name: set(incidence.rel(name)) for name in unary}
    relations[EDGE] = set()
    provenance = dict(incidence.provenance or {})
    next_id = incidence.n
    for i in range(1, s + 1):
        relations[position_symbol(i)] = set()
        for a, b in sorted(incidence.rel(incidence_symbol(i))):
            c = next_id
            next_id += 1
            provenance[c] = f"c({i},{a},{b})"
            relations[EDGE] |= {(a, c), (c, a), (c, b), (b, c)}
            relations[position_symbol(i)].add((c,))
    return Structure(Vocabulary(tuple(symbols)), next_id, relations, provenance)


def attach_gadgets(colored: Structure, predicates) -> Structure:
    """Replace every unary predicate by pendant odd-cycle gadgets."""
    edges = {(a, b) for a, b in colored.rel(EDGE) if a < b}
    provenance = dict(colored.provenance or {})
    next_id = colored.n
    for i, predicate in enumerate(predicates, start=1):
        length = cycle_length(i)
        for (a,) in sorted(colored.rel(predicate)):
            cycle = list(range(next_id, next_id + length))
            next_id += length
            edges.add((a, cycle[0]))
            for j, v in enumerate(cycle):
                edges.add((v, cycle[(j + 1) % length]))
                provenance[v] = f"g({predicate},{a},{j})"
    return graph_from_edges(next_id, edges, provenance)


def encode_structure(structure: Structure) -> GraphEncoding:
    """
    Run all three stages on a structure

    Args:
        structure (Structure): Any structure A

    Returns:
        GraphEncoding: B(A), C(A) and the graph H(A)
    """
    s = structure.vocab.max_arity
    incidence = incidence_structure(structure)
    colored = subdivision(incidence, s)
    predicates = tuple(name for name, arity in colored.vocab.symbols if arity == 1)
    graph = attach_gadgets(colored, predicates)
    logger.debug(f"Encoded n={structure.n} as |B|={incidence.n}, |C|={colored.n}, |H|={graph.n}")
    return GraphEncoding(incidence, colored, graph, predicates, s)


class _Translator:
    """Rewrites formulas over A's vocabulary into formulas over {E}."""

    def __init__(self, encoding: GraphEncoding, phi: Formula):
        self.encoding = encoding
        self.taken = set(variables(phi))
        self.counters = {}

    def fresh(self, base):
        for i in itertools.count(self.counters.get(base, 1)):
            name = f"{base}{i}"
            if name not in self.taken:
                self.taken.add(name)
                self.counters[base] = i + 1
                return name

    def detector(self, predicate, x, positive=True):
        """
        ``(variables, body)`` with ``EX variables. body`` true at x iff x is in ``predicate``;
        with ``positive=False`` the body is the negation, to be quantified universally.
        """
        ys = [self.fresh("y") for _ in range(self.encoding.length_of(predicate))]
        parts = [neq(a, b) for a, b in itertools.combinations(ys, 2)]
        parts += [neq(y, x) for y in ys]
        parts.append(Atom(EDGE, (x, ys[0])))
        parts += [Atom(EDGE, (ys[j], ys[(j + 1) % len(ys)])) for j in range(len(ys))]
        if positive:
            return ys, conj(parts)
        return ys, disj(_negate(p) for p in parts)

    def literal(self, atom: Atom, positive: bool):
        """Replacement for a literal; returns ``(variables, quantifier-free body)``."""
        z = self.fresh("z")
        ys, guard = self.detector(tuple_symbol(atom.relation), z, positive)
        bound = [z] + ys
        parts = [guard]
        for i, x in enumerate(atom.args, start=1):
            w = self.fresh("w")
            ws, colour = self.detector(position_symbol(i), w, positive)
            bound += [w] + ws
            links = [Atom(EDGE, (x, w)), Atom(EDGE, (w, z))]
            if positive:
                parts.append(conj(links + [colour]))
            else:
                parts.append(disj([Not(link) for link in links] + [colour]))
        return bound, conj(parts) if positive else disj(parts)


def _negate(literal):
    return literal.body if isinstance(literal, Not) else Not(literal)


def _check_input(structure, phi):
    if not is_prenex(phi) or not is_nnf(phi):
        raise NotPrenexNNF("the encoding needs a sentence in prenex negation normal form")
    prefix, matrix = split_prefix(phi)
    bound = {var for _, var in prefix}
    if len(bound) != len(prefix):
        raise NotPrenexNNF("quantified variables must be pairwise distinct")
    if set(variables(matrix)) - bound:
        raise NotPrenexNNF("the encoding needs a sentence, found free variables")
    check_vocabulary(phi, structure.vocab)
    return prefix, matrix


def encode_to_graph(structure: Structure, phi: Formula):
    """
    Graph H(A) and prenex sentence phi_GRA with ``A |= phi`` iff ``H(A) |= phi_GRA``

    Quantifiers of ``phi`` are relativized to elements of A by the U detector,
    whose variables join the block of the relativized quantifier. Positive
    literals add one existential block and negative literals one universal
    block at the end of the prefix; the one matching the last quantifier of
    ``phi`` comes first, so a Sigma_t input gives a Sigma_(t+1) output.

    Args:
        structure (Structure): A
        phi (Formula): Sentence over A's vocabulary in prenex NNF

    Returns:
        tuple: ``(graph H(A), phi_GRA)``

    Raises:
        NotPrenexNNF: ``phi`` is not a prenex NNF sentence
    """
    prefix, matrix = _check_input(structure, phi)
    encoding = encode_structure(structure)
    translator = _Translator(encoding, phi)

    new_prefix = []
    guards = []
    for quant, var in prefix:
        ys, body = translator.detector(UNIVERSE, var, positive=quant is Exists)
        new_prefix.append((quant, var))
        new_prefix += [(quant, y) for y in ys]
        guards.append((quant, body))

    existential = []
    universal = []

    def rewrite(node):
        if isinstance(node, Atom):
            bound, body = translator.literal(node, positive=True)
            existential.extend(bound)
            return body
        if isinstance(node, Not) and isinstance(node.body, Atom):
            bound, body = translator.literal(node.body, positive=False)
            universal.extend(bound)
            return body
        if isinstance(node, (Eq, Not)):
            return node
        return type(node)(tuple(rewrite(c) for c in node.children))

    body = rewrite(matrix)
    for quant, guard in reversed(guards):
        body = conj([guard, body]) if quant is Exists else disj([guard, body])

    tail_e = [(Exists, v) for v in existential]
    tail_a = [(Forall, v) for v in universal]
    if prefix and prefix[-1][0] is Forall:
        new_prefix += tail_a + tail_e
    else:
        new_prefix += tail_e + tail_a
    result = attach_prefix(new_prefix, body)
    logger.debug(f"phi_GRA has {len(new_prefix)} quantifiers, class {classify(result).label}")
    return encoding.graph, result


def encode_structured(structure: Structure, phi: Formula) -> Formula:
    """
    The same translation as encode_to_graph, with detectors and literal
    gadgets left in place instead of pulled into the prefix

    Args:
        structure (Structure): A
        phi (Formula): Sentence over A's vocabulary in prenex NNF

    Returns:
        Formula: Sentence over {E}, equivalent to the prenex phi_GRA
    """
    prefix, matrix = _check_input(structure, phi)
    translator = _Translator(encode_structure(structure), phi)

    def rewrite(node):
        if isinstance(node, Atom):
            bound, body = translator.literal(node, positive=True)
            return exists(bound, body)
        if isinstance(node, Not) and isinstance(node.body, Atom):
            bound, body = translator.literal(node.body, positive=False)
            return forall(bound, body)
        if isinstance(node, (Eq, Not)):
            return node
        return type(node)(tuple(rewrite(c) for c in node.children))

    body = rewrite(matrix)
    for quant, var in reversed(prefix):
        ys, guard = translator.detector(UNIVERSE, var)
        if quant is Exists:
            body = Exists(var, conj([exists(ys, guard), body]))
        else:
            body = Forall(var, disj([Not(exists(ys, guard)), body]))
    return body


def uniform_polarity(phi: Formula, bars: dict) -> Formula:
    """
    Rewrite the literals of a prenex NNF sentence to a single polarity

    When the last quantifier block is existential (or there is none),
    ``!R(x)`` becomes ``R_bar(x)``; otherwise ``R(x)`` becomes ``!R_bar(x)``.
    """
    prefix, matrix = split_prefix(phi)
    positive = not prefix or prefix[-1][0] is Exists

    def rewrite(node):
        if isinstance(node, Atom):
            return node if positive else Not(Atom(bars[node.relation], node.args))
        if isinstance(node, Not) and isinstance(node.body, Atom):
            return Atom(bars[node.body.relation], node.body.args) if positive else node
        if isinstance(node, (Eq, Not)):
            return node
        return type(node)(tuple(rewrite(c) for c in node.children))

    return attach_prefix(prefix, rewrite(matrix))


def encode_to_graph_arity_preserving(structure: Structure, phi: Formula, s: int):
    """
    Graph H'(A) and sentence in the same Sigma_t / Pi_t class as ``phi``

    Args:
        structure (Structure): A, with vocabulary at most ``s``-ary
        phi (Formula): Sentence over A's vocabulary in prenex NNF
        s (int): Arity bound

    Returns:
        tuple: ``(graph H'(A), phi'_GRA)``

    Raises:
        ArityBoundExceeded: A's vocabulary has a symbol of arity above ``s``
    """
    if structure.vocab.max_arity > s:
        raise ArityBoundExceeded(f"vocabulary arity {structure.vocab.max_arity} exceeds s={s}")
    _check_input(structure, phi)
    expanded, bars = complement_expansion(structure)
    return encode_to_graph(expanded, uniform_polarity(phi, bars))
