import itertools
import math

import pytest

from src.engines.embedding import embed_with_stats, solve_emb
from src.engines.fagin import (
    check_fagin_positive,
    check_phi,
    fagin_normalize,
    fagin_precompute,
    fagin_to_slicewise,
)
from src.engines.hashing import DETERMINISTIC, RANDOMIZED, build_hash_family, next_prime
from src.engines.hom_dp import emb_from_hom, hom_to_emb, solve_hom
from src.engines.sigma1 import (
    color_term,
    inequality_pairs,
    mc_sigma1_neq_color_coding,
    mc_sigma1_via_hom,
    prepare_sigma1,
    proper_colorings,
)
from src.logic.catalog import bounded_degree_dominating_set, clique, dominating_set, vertex_cover
from src.logic.formulas import Atom, Eq, Not
from src.logic.parser import parse
from src.oracles.brute import brute_emb, brute_fagin, brute_hom
from src.oracles.checkers import is_embedding, is_homomorphism, satisfies_fagin
from src.oracles.evaluator import eval_naive
from src.structures.generators import random_graph
from src.structures.graphs import complete_graph, graph_from_edges, path_graph
from src.treewidth.decomposition import root_tree
from src.treewidth.heuristic import heuristic_td
from src.utils.errors import (
    DNFBlowup,
    InfeasibleDeterministic,
    InvalidDecomposition,
    KTooLarge,
    NotPositive,
    NotSigma1,
    TooLarge,
)

TRIANGLE = parse("EX x. EX y. EX z. E(x,y) & E(y,z) & E(x,z)")
PATH3 = parse("EX x1. EX x2. EX x3. !(x1 = x2) & !(x1 = x3) & !(x2 = x3) & E(x1,x2) & E(x2,x3)")
ANTI_EDGE = parse("EX x. EX y. !E(x,y) & !(x = y)")


class TestHomDP:
    def test_odd_cycle_into_triangle(self, c5, k3):
        h = solve_hom(k3, c5)
        assert is_homomorphism(k3, c5, h)

    def test_odd_cycle_not_into_an_edge(self, c5):
        assert solve_hom(complete_graph(2), c5) is None

    def test_explicit_decomposition(self, c5, k3):
        h = solve_hom(k3, c5, td=heuristic_td(c5))
        assert is_homomorphism(k3, c5, h)

    def test_invalid_decomposition(self, c5, k3):
        with pytest.raises(InvalidDecomposition):
            solve_hom(k3, c5, td=root_tree([{0, 1}], []))

    def test_table_guard(self, c5, k3):
        with pytest.raises(TooLarge):
            solve_hom(k3, c5, limit=5)

    def test_isolated_pattern_vertex(self, k3):
        assert solve_hom(k3, graph_from_edges(1, [])) == {0: 0}

    def test_agrees_with_brute_force(self, rng):
        pattern = path_graph(4)
        for _ in range(10):
            target = random_graph(rng, 5, 0.3)
            h = solve_hom(target, pattern)
            assert (h is None) == (brute_hom(target, pattern) is None)
            assert h is None or is_homomorphism(target, pattern, h)

    def test_duplicated_target(self, p3, k3):
        k2 = complete_graph(2)
        expanded = hom_to_emb(k2, p3)
        assert expanded.n == 6
        h = emb_from_hom(p3, brute_hom(k2, p3))
        assert is_embedding(expanded, p3, h)
        assert brute_emb(hom_to_emb(k2, k3), k3) is None


class TestHashing:
    def test_next_prime(self):
        assert next_prime(1) == 2
        assert next_prime(7) == 11
        assert next_prime(12) == 13

    @pytest.mark.parametrize("n,l", [(5, 2), (7, 3), (9, 3), (8, 4)])
    def test_deterministic_family_covers_every_subset(self, n, l):
        family = build_hash_family(n, l)
        assert family.error_bound == 0.0
        assert all(family.covers(s) for s in itertools.combinations(range(n), l))
        assert all(set(f) <= set(range(1, l + 1)) for f in family)

    def test_more_colors_than_elements(self):
        family = build_hash_family(2, 3)
        assert len(family) == 1

    def test_coverage_limit(self):
        with pytest.raises(InfeasibleDeterministic):
            build_hash_family(6, 3, coverage_limit=1)

    def test_needs_a_color(self):
        with pytest.raises(ValueError):
            build_hash_family(4, 0)

    def test_randomized_family_is_seeded(self):
        a = build_hash_family(8, 3, RANDOMIZED, seed=4, epsilon=1e-3)
        b = build_hash_family(8, 3, RANDOMIZED, seed=4, epsilon=1e-3)
        assert a.functions == b.functions
        assert a.trials == math.ceil(math.e ** 3 * math.log(1e3))
        assert 0 < a.error_bound <= 1e-3


class TestSigma1:
    def test_triangle_via_hom(self, k3, p3):
        result = mc_sigma1_via_hom(k3, TRIANGLE)
        assert result.holds
        w = result.witness
        assert all((w[a], w[b]) in k3.rel("E") for a, b in [("x", "y"), ("y", "z"), ("x", "z")])
        assert not mc_sigma1_via_hom(p3, TRIANGLE)

    @pytest.mark.parametrize("solve", [mc_sigma1_via_hom, mc_sigma1_neq_color_coding])
    def test_path_with_inequalities(self, solve, p3, c5):
        assert solve(p3, PATH3)
        assert solve(c5, PATH3)
        assert not solve(complete_graph(2), PATH3)

    @pytest.mark.parametrize("solve", [mc_sigma1_via_hom, mc_sigma1_neq_color_coding])
    def test_negated_relation(self, solve, k3, p3):
        assert not solve(k3, ANTI_EDGE)
        result = solve(p3, ANTI_EDGE)
        assert result.holds
        assert {result.witness["x"], result.witness["y"]} == {0, 2}

    @pytest.mark.parametrize("solve", [mc_sigma1_via_hom, mc_sigma1_neq_color_coding])
    def test_self_inequality_is_unsatisfiable(self, solve, k3):
        assert not solve(k3, parse("EX x. !(x = x)"))

    def test_color_coding_witness_satisfies_the_matrix(self, c5):
        result = mc_sigma1_neq_color_coding(c5, PATH3)
        values = [result.witness[v] for v in ("x1", "x2", "x3")]
        assert len(set(values)) == 3
        assert (values[0], values[1]) in c5.rel("E") and (values[1], values[2]) in c5.rel("E")

    def test_randomized_error_bound(self, p3):
        result = mc_sigma1_neq_color_coding(p3, PATH3, mode=RANDOMIZED, seed=3)
        assert result.holds
        assert result.trials > 0
        assert 0 < result.error_bound <= 1e-6

    def test_deterministic_has_no_error(self, p3):
        assert mc_sigma1_neq_color_coding(p3, PATH3, mode=DETERMINISTIC).error_bound == 0.0

    def test_agrees_with_evaluation(self, rng):
        for _ in range(10):
            graph = random_graph(rng, 5, 0.5)
            expected = eval_naive(graph, PATH3)
            assert mc_sigma1_via_hom(graph, PATH3).holds == expected
            assert mc_sigma1_neq_color_coding(graph, PATH3).holds == expected

    def test_universal_sentence_is_rejected(self, k3):
        with pytest.raises(NotSigma1):
            mc_sigma1_via_hom(k3, parse("ALL x. E(x,x)"))

    def test_free_variables_are_rejected(self, k3):
        with pytest.raises(NotSigma1):
            prepare_sigma1(k3, parse("E(x,x)"))

    def test_dnf_cap(self, k3):
        with pytest.raises(DNFBlowup):
            prepare_sigma1(k3, parse("EX x. EX y. E(x,y) | E(y,x) | x = y"), cap=2)

    def test_constant_sentences(self, k3):
        assert mc_sigma1_via_hom(k3, parse("TRUE"))
        assert not mc_sigma1_via_hom(k3, parse("FALSE"))

    def test_proper_colorings(self):
        assert list(proper_colorings(["a", "b"], [("a", "b")], 2)) == [{"a": 1, "b": 2}, {"a": 2, "b": 1}]
        assert list(proper_colorings(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")], 2)) == []

    def test_color_term_replaces_inequalities(self):
        term = [Atom("E", ("x", "y")), Not(Eq("x", "y"))]
        assert inequality_pairs(term) == [("x", "y")]
        colored = color_term(term, {"x": 1, "y": 2}, ["C1", "C2"])
        assert colored == [Atom("E", ("x", "y")), Atom("C1", ("x",)), Atom("C2", ("y",))]


class TestEmbedding:
    def test_path_into_cycle(self, c5, p3):
        h = solve_emb(c5, p3)
        assert is_embedding(c5, p3, h)

    def test_triangle_not_into_cycle(self, c5, k3):
        assert solve_emb(c5, k3) is None

    def test_pattern_larger_than_target(self, p3):
        assert solve_emb(complete_graph(2), p3) is None

    def test_stats(self, c5, p3):
        h, result = embed_with_stats(c5, p3)
        assert h is not None
        assert result.error_bound == 0.0
        assert result.trials >= 1


class TestFagin:
    def test_vertex_cover_normal_form(self):
        phi, rv = vertex_cover()
        problem = fagin_normalize(phi, rv)
        assert (problem.l, problem.m) == (2, 3)
        assert len(problem.parts) == 1

    def test_vertex_cover(self, p3, k3):
        problem = fagin_normalize(*vertex_cover())
        assert check_phi(p3, problem, 1) == frozenset({(1,)})
        assert check_phi(k3, problem, 1) is None
        assert len(check_phi(k3, problem, 2)) == 2

    def test_witness_is_padded_with_smallest_tuples(self, p3):
        problem = fagin_normalize(*vertex_cover())
        assert check_phi(p3, problem, 2) == frozenset({(0,), (1,)})

    def test_k_above_tuple_count(self, k3):
        problem = fagin_normalize(*vertex_cover())
        with pytest.raises(KTooLarge):
            check_phi(k3, problem, 4)

    def test_precomputed_parts(self, p3):
        problem = fagin_normalize(*vertex_cover())
        star = fagin_precompute(p3, problem)
        symbol = problem.parts[0].symbol
        assert star.rel(symbol) == {(a, b) for a in range(3) for b in range(3) if (a, b) not in p3.rel("E")}
        assert check_phi(p3, problem, 1, precomputed=star) == frozenset({(1,)})

    def test_normal_form_is_equivalent(self, c5):
        phi, rv = vertex_cover()
        normal = fagin_normalize(phi, rv).formula()
        for k in range(4):
            for chosen in itertools.combinations([(a,) for a in range(5)], k):
                assert satisfies_fagin(c5, phi, rv, chosen) == satisfies_fagin(c5, normal, rv, chosen)

    def test_dominating_set_is_not_positive(self):
        phi, rv = dominating_set()
        assert not check_fagin_positive(phi, rv)
        with pytest.raises(NotPositive):
            fagin_normalize(phi, rv)

    def test_negated_relation_variable(self):
        phi, rv = parse("ALL x. !X(x)"), vertex_cover()[1]
        with pytest.raises(NotPositive):
            fagin_normalize(phi, rv)

    @pytest.mark.parametrize("build", [vertex_cover, lambda: bounded_degree_dominating_set(2)])
    def test_agrees_with_brute_force(self, build, rng):
        phi, rv = build()
        problem = fagin_normalize(phi, rv)
        for _ in range(4):
            graph = random_graph(rng, 5, 0.4)
            for k in range(4):
                found = check_phi(graph, problem, k)
                assert (found is None) == (brute_fagin(graph, phi, rv, k) is None)

    def test_slicewise_sentence(self, p3, k3):
        phi, rv = vertex_cover()
        assert eval_naive(p3, fagin_to_slicewise(phi, rv, 1))
        assert not eval_naive(k3, fagin_to_slicewise(phi, rv, 1))
        assert not eval_naive(p3, fagin_to_slicewise(phi, rv, 0))
        assert eval_naive(graph_from_edges(1, []), fagin_to_slicewise(phi, rv, 0))

    def test_slicewise_needs_distinct_tuples(self):
        phi, rv = clique()
        assert not eval_naive(complete_graph(2), fagin_to_slicewise(phi, rv, 3))


def test_clique_is_not_a_positive_fagin_sentence():
    assert not check_fagin_positive(*clique())
