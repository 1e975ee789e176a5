import pytest

from src.logic.catalog import clique, dominating_set, vertex_cover
from src.logic.formulas import free_variables, to_text
from src.logic.fragments import PI, SIGMA
from src.logic.generators import random_any, random_formula
from src.logic.parser import parse
from src.logic.propositional import load_prop
from src.oracles.brute import brute_clique, brute_emb, brute_fagin, brute_hom, brute_wsat, count_cliques
from src.oracles.checkers import is_clique, is_embedding, is_homomorphism, is_wsat_witness, satisfies_fagin
from src.oracles.evaluator import Assignment, eval_naive
from src.structures.generators import make_rng, random_small_structure
from src.structures.graphs import complete_graph, graph_from_edges, path_graph
from src.utils.errors import TooLarge, UnboundVariable, UnknownRelation

TRIANGLE = parse("EX x. EX y. EX z. E(x,y) & E(y,z) & E(x,z)")

THREE_CNF = "(BIGAND (OR X Y Z) (OR X (NOT Y) Z) (OR X (NOT Y) (NOT Z)) (OR (NOT X) Y (NOT Z)))"


class TestEvaluator:
    def test_triangle(self, k3, p3):
        assert eval_naive(k3, TRIANGLE)
        assert not eval_naive(p3, TRIANGLE)

    def test_alternation(self, p3, k3):
        # every vertex has a neighbour, and some vertex is adjacent to all others
        phi = parse("(ALL x. EX y. E(x,y)) & EX x. ALL y. x = y | E(x,y)")
        assert eval_naive(p3, phi)
        assert not eval_naive(graph_from_edges(4, [(0, 1), (2, 3)]), phi)

    def test_free_variables_need_values(self, p3):
        phi = parse("EX y. E(x,y)")
        with pytest.raises(UnboundVariable):
            eval_naive(p3, phi)
        assert eval_naive(p3, phi, Assignment({"x": 1}))

    def test_assignment_outside_universe(self, p3):
        with pytest.raises(UnboundVariable):
            eval_naive(p3, parse("E(x,x)"), Assignment({"x": 7}))

    def test_unknown_relation(self, p3):
        with pytest.raises(UnknownRelation):
            eval_naive(p3, parse("EX x. F(x)"))

    def test_relation_variable(self, p3):
        phi, rv = vertex_cover()
        assert eval_naive(p3, phi, Assignment(relations={rv.name: [(1,)]}))
        assert not eval_naive(p3, phi, Assignment(relations={rv.name: [(0,)]}))

    def test_implication_and_equivalence(self, k3):
        assert eval_naive(k3, parse("ALL x. ALL y. E(x,y) <-> !x = y"))
        assert eval_naive(k3, parse("ALL x. E(x,x) -> FALSE"))

    def test_repeated_variable_names(self, p3):
        # the inner x shadows the outer one
        assert eval_naive(p3, parse("EX x. E(x,x) | EX x. EX y. E(x,y)"))

    @pytest.mark.parametrize("seed", range(5))
    def test_pruned_path_agrees_with_plain_recursion(self, seed):
        rng = make_rng(seed)
        for _ in range(60):
            structure = random_small_structure(rng, 4, 2)
            phi = random_any(rng, structure.vocab, ["x", "y", "z"], 4)
            values = {v: int(rng.integers(structure.n)) for v in sorted(free_variables(phi))}
            chosen = Assignment(values)
            assert eval_naive(structure, phi, chosen) == eval_naive(structure, phi, chosen, pruned=True), to_text(phi)

    @pytest.mark.parametrize("kind", [SIGMA, PI])
    @pytest.mark.parametrize("t", [1, 2, 3])
    def test_pruned_path_agrees_on_prenex_sentences(self, kind, t):
        rng = make_rng(t, 0 if kind == SIGMA else 1)
        for _ in range(40):
            structure = random_small_structure(rng, 4, 2)
            phi = random_formula(rng, structure.vocab, kind, t, max_vars=4, depth=2)
            assert eval_naive(structure, phi) == eval_naive(structure, phi, pruned=True), to_text(phi)


class TestBruteForce:
    def test_odd_cycle_maps_to_triangle_not_to_an_edge(self, c5, k3):
        h = brute_hom(k3, c5)
        assert is_homomorphism(k3, c5, h)
        assert brute_hom(complete_graph(2), c5) is None

    def test_search_order_gives_the_first_map(self, p3):
        assert brute_hom(complete_graph(2), p3) == {0: 0, 1: 1, 2: 0}

    def test_embeddings(self, c5, k3, p3):
        assert brute_emb(c5, k3) is None
        h = brute_emb(c5, p3)
        assert is_embedding(c5, p3, h)

    def test_guard(self, c5, k3):
        with pytest.raises(TooLarge):
            brute_hom(k3, c5, limit=10)
        assert brute_hom(k3, c5, limit=None) is not None

    def test_cliques(self, c5):
        k4 = complete_graph(4)
        assert brute_clique(k4, 3) == (0, 1, 2)
        assert count_cliques(k4, 3) == 4
        assert brute_clique(c5, 3) is None
        assert brute_clique(c5, 0) == ()

    def test_weighted_satisfiability(self):
        phi = load_prop(THREE_CNF)
        assert brute_wsat(phi, 0) is None
        assert brute_wsat(phi, 1) == frozenset({"X"})
        assert brute_wsat(phi, 2) == frozenset({"X", "Y"})
        assert brute_wsat(phi, 3) == frozenset({"X", "Y", "Z"})
        assert brute_wsat(phi, 4) is None

    def test_fagin_vertex_cover(self, p3, k3):
        phi, rv = vertex_cover()
        assert brute_fagin(p3, phi, rv, 1) == frozenset({(1,)})
        assert brute_fagin(k3, phi, rv, 1) is None
        assert brute_fagin(k3, phi, rv, 2) == frozenset({(0,), (1,)})

    def test_fagin_dominating_set_and_clique(self, c5):
        phi, rv = dominating_set()
        assert brute_fagin(c5, phi, rv, 1) is None
        assert brute_fagin(c5, phi, rv, 2) is not None
        phi, rv = clique()
        assert brute_fagin(c5, phi, rv, 2) is not None
        assert brute_fagin(c5, phi, rv, 3) is None

    def test_fagin_k_above_tuple_count(self, p3):
        phi, rv = vertex_cover()
        assert brute_fagin(p3, phi, rv, 4) is None


class TestCheckers:
    def test_homomorphism_must_be_total(self, k3, p3):
        assert not is_homomorphism(k3, p3, {0: 0, 1: 1})
        assert not is_homomorphism(k3, p3, None)

    def test_embedding_must_be_injective(self, p3):
        k2 = complete_graph(2)
        h = {0: 0, 1: 1, 2: 0}
        assert is_homomorphism(k2, p3, h)
        assert not is_embedding(k2, p3, h)

    def test_clique_checker(self, p3):
        assert is_clique(p3, [0, 1], 2)
        assert not is_clique(p3, [0, 2])
        assert not is_clique(p3, [0, 0])

    def test_fagin_checker_counts_elements(self, p3):
        phi, rv = vertex_cover()
        assert satisfies_fagin(p3, phi, rv, [(1,)], 1)
        assert not satisfies_fagin(p3, phi, rv, [(1,)], 2)
        assert not satisfies_fagin(p3, phi, rv, [(5,)])

    def test_wsat_checker(self):
        phi = load_prop(THREE_CNF)
        assert is_wsat_witness(phi, {"X"}, 1)
        assert not is_wsat_witness(phi, {"X"}, 2)


def test_path_is_not_a_triangle():
    assert not eval_naive(path_graph(4), TRIANGLE)
