"""
Oracle-equivalence suites behind ``fptmc.py verify``

Every suite is a generator of ``(label, ok)`` pairs; a case passes when the
engine under test and an independent oracle agree.
"""

import itertools
import logging
import sys

import networkx as nx
from tqdm import tqdm

from src.engines.embedding import solve_emb
from src.engines.fagin import check_phi, fagin_normalize, fagin_precompute
from src.engines.hashing import DETERMINISTIC, RANDOMIZED, build_hash_family
from src.engines.hom_dp import solve_hom
from src.engines.sigma1 import mc_sigma1_neq_color_coding, mc_sigma1_via_hom
from src.logic.catalog import bounded_degree_dominating_set, vertex_cover
from src.logic.fragments import PI, SIGMA, classify
from src.logic.generators import random_formula, random_prop
from src.logic.normal_forms import to_nnf
from src.logic.propositional import eval_prop, load_prop, prop_variables
from src.oracles.brute import brute_clique, brute_emb, brute_fagin, brute_hom, brute_wsat
from src.oracles.checkers import is_embedding, is_homomorphism, satisfies_fagin
from src.oracles.evaluator import eval_naive
from src.reductions.atm import atm_encode, load_atm, simulate_atm
from src.reductions.types import clique_to_mc, mc_to_clique
from src.reductions.wsat import NEGATIVE, POSITIVE, X, wsat_normalize, wsat_to_fagin
from src.structures.encodings import encode_structured, encode_to_graph, encode_to_graph_arity_preserving
from src.structures.generators import make_rng, random_graph, random_small_structure, random_structure, random_tree
from src.structures.graphs import complete_graph, cycle_graph, from_networkx, gaifman, grid_graph, path_graph
from src.structures.structure import GRAPH_VOCABULARY, Vocabulary
from src.treewidth.decomposition import validate_td
from src.treewidth.exact import exact_td
from src.treewidth.heuristic import heuristic_td

logger = logging.getLogger(__name__)

THREE_CNF = """
(BIGAND (OR X Y Z) (OR X (NOT Y) Z) (OR X (NOT Y) (NOT Z)) (OR (NOT X) Y (NOT Z)))
"""

# name, alternation bound t, machine text
MACHINES = (
    ("acceptor", 1, """
state q0 exists initial
state qa accepting
symbol _ blank
symbol a
trans q0 _ 1 a qa
"""),
    ("rejector", 1, """
state q0 exists initial
state qa accepting
symbol _ blank
symbol a
trans q0 a 1 a qa
"""),
    ("branching", 1, """
state q0 exists initial
state q1 exists
state qd exists
state qa accepting
symbol _ blank
symbol b
trans q0 _ 1 b qd
trans q0 _ 0 b q1
trans q1 b 1 b qa
"""),
    ("looping", 1, """
state q0 exists initial
state qa accepting
symbol _ blank
trans q0 _ 0 _ q0
"""),
    ("universal", 2, """
state q0 exists initial
state u forall
state qa accepting
symbol _ blank
symbol a
symbol b
trans q0 _ 0 a u
trans u a 1 a qa
trans u a 0 b qa
"""),
    ("universal-reject", 2, """
state q0 exists initial
state u forall
state qd exists
state qa accepting
symbol _ blank
symbol a
symbol b
trans q0 _ 0 a u
trans u a 1 a qa
trans u a 0 b qd
"""),
)


def _agree(label, *values):
    return label, all(v == values[0] for v in values)


def suite_sigma1(rng, cases, config):
    """Sigma_1 sentences: naive evaluation, the HOM route and color coding."""
    for i in range(cases):
        structure = random_small_structure(rng, 6, 2)
        phi = random_formula(rng, structure.vocab, SIGMA, 1, max_vars=4, depth=2)
        expected = eval_naive(structure, phi)
        via_hom = mc_sigma1_via_hom(structure, phi).holds
        colored = mc_sigma1_neq_color_coding(structure, phi, mode=DETERMINISTIC, seed=i).holds
        yield _agree(f"sigma1 case {i}", expected, via_hom, colored)


def suite_hom(rng, cases, config):
    """Decomposition DP and color coding against exhaustive search."""
    for i in range(cases):
        target = random_small_structure(rng, 6, 2)
        pattern = random_structure(rng, target.vocab, int(rng.integers(1, 5)), 0.3)
        h = solve_hom(target, pattern)
        h_brute = brute_hom(target, pattern)
        ok = (h is None) == (h_brute is None) and (h is None or is_homomorphism(target, pattern, h))
        yield f"hom case {i}", ok
        e = solve_emb(target, pattern, seed=i)
        e_brute = brute_emb(target, pattern)
        ok = (e is None) == (e_brute is None) and (e is None or is_embedding(target, pattern, e))
        yield f"emb case {i}", ok


def suite_fagin(rng, cases, config):
    """
    Check-phi against brute force on every graph with at most ``cases``
    vertices, up to isomorphism, for k <= 3
    """
    formulas = {"vc": vertex_cover(), "vc2": bounded_degree_dominating_set(2)}
    problems = {name: fagin_normalize(phi, rv) for name, (phi, rv) in formulas.items()}
    for index, g in enumerate(nx.graph_atlas_g()):
        n = g.number_of_nodes()
        if n == 0 or n > cases:
            continue
        graph = from_networkx(g)
        for name, (phi, rv) in formulas.items():
            star = fagin_precompute(graph, problems[name])
            for k in range(min(3, n) + 1):
                found = check_phi(graph, problems[name], k, precomputed=star, verify=False)
                expected = brute_fagin(graph, phi, rv, k)
                ok = (found is None) == (expected is None)
                if found is not None:
                    ok = ok and satisfies_fagin(graph, phi, rv, found, k)
                yield f"fagin {name} atlas#{index} k={k}", ok
    phi, rv = vertex_cover()
    problem = fagin_normalize(phi, rv)
    yield "vertex cover of P3 with 1 vertex", check_phi(path_graph(3), problem, 1) is not None
    yield "no vertex cover of K3 with 1 vertex", check_phi(complete_graph(3), problem, 1) is None


# encoded graphs above this size are skipped and counted
ENCODING_VERTEX_LIMIT = 240


def encodable_structure(rng):
    """Unary symbols, or a single binary symbol, on at most two elements."""
    n = int(rng.integers(1, 3))
    if rng.random() < 0.75:
        vocab = Vocabulary.of(*((name, 1) for name in ("R", "S")[:int(rng.integers(1, 3))]))
    else:
        vocab = Vocabulary.of(("R", 2))
    return random_structure(rng, vocab, n, float(rng.uniform(0.2, 0.6)))


def suite_encodings(rng, cases, config):
    """Structure-to-graph encodings preserve truth and land in the promised class."""
    skipped = 0
    for i in range(cases):
        structure = encodable_structure(rng)
        kind = SIGMA if rng.random() < 0.5 else PI
        t = int(rng.integers(1, 3))
        phi = to_nnf(random_formula(rng, structure.vocab, kind, t, max_vars=2, depth=1))
        expected = eval_naive(structure, phi)
        graph, encoded = encode_to_graph(structure, phi)
        if graph.n > ENCODING_VERTEX_LIMIT:
            skipped += 1
        else:
            yield f"graph encoding case {i}", (eval_naive(graph, encoded, pruned=True) == expected
                                               and classify(encoded).within(kind, t + 1))
            yield (f"structured encoding case {i}",
                   eval_naive(graph, encode_structured(structure, phi), pruned=True) == expected)
        s = structure.vocab.max_arity
        graph, encoded = encode_to_graph_arity_preserving(structure, phi, s)
        if graph.n > ENCODING_VERTEX_LIMIT:
            skipped += 1
            continue
        yield f"arity-preserving encoding case {i}", (eval_naive(graph, encoded, pruned=True) == expected
                                                      and classify(encoded).within(kind, t))
    yield f"encodings skipped {skipped} of {2 * cases}", skipped <= cases


def suite_types(rng, cases, config):
    """Existential sentences to clique and back."""
    max_variables = config['guards']['max_type_variables']
    for i in range(cases):
        graph = random_graph(rng, int(rng.integers(1, 6)), 0.5)
        phi = random_formula(rng, GRAPH_VOCABULARY, SIGMA, 1, max_vars=3, depth=2)
        reduced, k = mc_to_clique(graph, phi, max_variables)
        yield _agree(f"mc2clique case {i}", eval_naive(graph, phi), brute_clique(reduced, k) is not None)
        k = int(rng.integers(1, 5))
        graph, delta = clique_to_mc(graph, k)
        yield _agree(f"clique2mc case {i}", brute_clique(graph, k) is not None, eval_naive(graph, delta))


def suite_atm(rng, cases, config):
    """Machine simulation against evaluation of the run sentences, k up to ``cases``."""
    for name, t, text in MACHINES:
        machine = load_atm(text)
        for k in range(1, cases + 1):
            structure, phi = atm_encode(machine, k, t)
            yield _agree(f"atm {name} k={k}", simulate_atm(machine, k - 1, t), eval_naive(structure, phi, pruned=True))


def suite_wsat(rng, cases, config):
    """The clause-tree structure against propositional evaluation."""
    phi = load_prop(THREE_CNF)
    structure, psi = wsat_to_fagin(wsat_normalize(phi))
    yield "example structure size", (structure.n, len(structure.rel(POSITIVE)),
                                     len(structure.rel(NEGATIVE))) == (7, 7, 5)
    yield from wsat_agreement("example", phi)
    yield _agree("example weight 1", brute_wsat(phi, 1) is not None,
                 brute_fagin(structure, psi, X, 1) is not None)
    names = [f"V{i}" for i in range(1, 5)]
    for i in range(cases):
        t = int(rng.integers(1, 3))
        yield from wsat_agreement(f"random C{t} case {i}", random_prop(rng, names, t=t))


def wsat_agreement(label, phi):
    normalized = wsat_normalize(phi)
    structure, psi = wsat_to_fagin(normalized)
    element = {structure.label(e): e for e in structure.universe}
    variables = prop_variables(normalized)
    for r in range(len(variables) + 1):
        for chosen in itertools.combinations(variables, r):
            truth = eval_prop(normalized, set(chosen))
            same = truth == eval_prop(phi, set(chosen))
            encoded = satisfies_fagin(structure, psi, X, {(element[v],) for v in chosen})
            yield f"{label} assignment {sorted(chosen)}", same and encoded == truth


def suite_hashing(rng, cases, config):
    """
    Deterministic families cover every subset; randomized color coding never
    reports a false embedding and misses rarely
    """
    limit = 12 if cases >= 1000 else 8
    for n in range(1, limit + 1):
        for l in range(1, min(3, n) + 1):
            family = build_hash_family(n, l)
            yield f"family n={n} l={l}", all(family.covers(s) for s in itertools.combinations(range(n), l))
    pattern = path_graph(3)
    misses = 0
    for i in range(cases):
        graph = random_graph(rng, 7, 0.2)
        expected = brute_emb(graph, pattern) is not None
        found = solve_emb(graph, pattern, mode=RANDOMIZED, seed=i, epsilon=1e-3)
        if expected and found is None:
            misses += 1
        yield f"randomized case {i}", not (found is not None and not expected)
    yield f"randomized miss rate {misses}/{cases}", misses <= max(1, 5 * cases // 1000)


def suite_treewidth(rng, cases, config):
    """Exact widths of known families; the heuristic never beats the exact width."""
    limit = config['guards']['max_exact_vertices']
    known = [(f"K{n}", complete_graph(n), n - 1) for n in range(2, 7)]
    known += [(f"C{n}", cycle_graph(n), 2) for n in range(3, 8)]
    known += [("grid3x3", grid_graph(3, 3), 3), ("tree", random_tree(rng, 9), 1)]
    for name, graph, width in known:
        yield f"exact width of {name}", validate_td(graph, exact_td(graph, limit)) == width
    for i in range(30):
        graph = random_graph(rng, int(rng.integers(1, cases + 1)), 0.4)
        exact = validate_td(graph, exact_td(graph, limit))
        heuristic = validate_td(graph, heuristic_td(gaifman(graph)))
        yield f"heuristic vs exact case {i}", heuristic >= exact


SUITES = {
    "sigma1": suite_sigma1,
    "hom": suite_hom,
    "fagin": suite_fagin,
    "encodings": suite_encodings,
    "types": suite_types,
    "atm": suite_atm,
    "wsat": suite_wsat,
    "hashing": suite_hashing,
    "treewidth": suite_treewidth,
}


def run_suites(names, config, seed, quick=False, progress=True):
    """
    Run the named suites

    Args:
        names (list): Suite names, keys of SUITES
        config (dict): Configuration with a ``verify`` section
        seed (int): Base seed; every suite draws from its own stream
        quick (bool, optional): Use the quick case counts
        progress (bool, optional): Show tqdm progress bars on stderr

    Returns:
        dict: Suite name to ``(passed, [failed labels])``
    """
    counts = config['verify']['quick_cases' if quick else 'cases']
    outcomes = {}
    for name in names:
        rng = make_rng(seed, list(SUITES).index(name))
        passed, failures = 0, []
        cases = SUITES[name](rng, counts[name], config)
        for label, ok in tqdm(cases, desc=name, unit="case", disable=not progress, file=sys.stderr):
            if ok:
                passed += 1
            else:
                failures.append(label)
                logger.warning(f"verify {name}: {label} failed")
        outcomes[name] = (passed, failures)
        logger.info(f"verify {name}: {passed} passed, {len(failures)} failed")
    return outcomes
