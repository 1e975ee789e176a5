import itertools

import pytest

from src.cli.verify import MACHINES, wsat_agreement
from src.logic.catalog import bounded_clique, bounded_dominating_set, clique, dominating_set
from src.logic.generators import random_prop
from src.logic.parser import parse
from src.logic.propositional import eval_prop, load_prop, prop_variables
from src.oracles.brute import brute_clique, brute_fagin, brute_wsat
from src.oracles.evaluator import eval_naive
from src.reductions.atm import atm_encode, dump_atm, load_atm, simulate_atm
from src.reductions.bounded import expand_bounded
from src.reductions.types import clique_to_mc, consistent_types, mc_to_clique
from src.reductions.wsat import NEGATIVE, POSITIVE, X, clique_to_wsat, is_normalized, wsat_normalize, wsat_to_fagin
from src.structures.generators import make_rng
from src.structures.graphs import complete_graph, cycle_graph, edges_of, path_graph
from src.utils.errors import FormatError, NotBounded, NotNormalized, TooManyVariables, UnsupportedAlternation

TRIANGLE = parse("EX x. EX y. EX z. E(x,y) & E(y,z) & E(x,z)")

THREE_CNF = "(BIGAND (OR X Y Z) (OR X (NOT Y) Z) (OR X (NOT Y) (NOT Z)) (OR (NOT X) Y (NOT Z)))"

ACCEPTOR = """
state q0 exists initial
state qa accepting
symbol _ blank
symbol a
trans q0 _ 1 a qa
"""

UNIVERSAL = """
state q0 exists initial
state u forall
state qa accepting
symbol _ blank
symbol a
symbol b
trans q0 _ 0 a u
trans u a 1 a qa
trans u a 0 b qa
"""


class TestTypes:
    @pytest.mark.parametrize("k,count", [(0, 1), (1, 1), (2, 3), (3, 15)])
    def test_number_of_consistent_types(self, k, count):
        assert len(list(consistent_types(k))) == count

    def test_clique_sentence(self, c5):
        graph, delta = clique_to_mc(complete_graph(4), 3)
        assert eval_naive(graph, delta)
        graph, delta = clique_to_mc(c5, 3)
        assert not eval_naive(graph, delta)

    def test_triangle_to_clique(self, k3, p3):
        reduced, k = mc_to_clique(k3, TRIANGLE)
        assert k == 3
        assert brute_clique(reduced, k) is not None
        reduced, k = mc_to_clique(p3, TRIANGLE)
        assert brute_clique(reduced, k) is None

    def test_no_accepted_type_gives_a_fixed_no_instance(self, k3):
        reduced, k = mc_to_clique(k3, parse("EX x. E(x,x)"))
        assert (reduced.n, k) == (2, 2)
        assert edges_of(reduced) == []

    def test_variable_limit(self, k3):
        with pytest.raises(TooManyVariables):
            mc_to_clique(k3, TRIANGLE, max_variables=1)

    def test_agrees_with_evaluation(self, c5):
        phi = parse("EX x. EX y. !(x = y) & !E(x,y)")
        for graph in (complete_graph(4), c5, path_graph(2)):
            reduced, k = mc_to_clique(graph, phi)
            assert (brute_clique(reduced, k) is not None) == eval_naive(graph, phi)


class TestMachines:
    def test_acceptor(self):
        machine = load_atm(ACCEPTOR)
        assert simulate_atm(machine, 1, 1)
        assert not simulate_atm(machine, 0, 1)

    def test_acceptor_encoding(self):
        machine = load_atm(ACCEPTOR)
        structure, phi = atm_encode(machine, 2)
        assert eval_naive(structure, phi)
        structure, phi = atm_encode(machine, 1)
        assert not eval_naive(structure, phi)

    def test_universal_branching(self):
        machine = load_atm(UNIVERSAL)
        assert simulate_atm(machine, 2, 2)
        assert not simulate_atm(machine, 2, 1)
        assert not simulate_atm(machine, 1, 2)

    @pytest.mark.parametrize("k", range(1, 6))
    @pytest.mark.parametrize("name,t,text", MACHINES, ids=[name for name, _, _ in MACHINES])
    def test_encoding_agrees_with_simulation(self, name, t, text, k):
        machine = load_atm(text)
        structure, phi = atm_encode(machine, k, t)
        assert eval_naive(structure, phi, pruned=True) == simulate_atm(machine, k - 1, t)

    def test_universal_branch_into_a_dead_existential_state(self):
        # one universal branch accepts, the other halts in an existential state
        machine = load_atm(next(text for name, _, text in MACHINES if name == "universal-reject"))
        for k in (4, 5):
            structure, phi = atm_encode(machine, k, 2)
            assert not simulate_atm(machine, k - 1, 2)
            assert not eval_naive(structure, phi, pruned=True)

    def test_universal_states_need_two_phases(self):
        with pytest.raises(UnsupportedAlternation):
            atm_encode(load_atm(UNIVERSAL), 2, t=1)

    def test_only_two_phases_are_encoded(self):
        with pytest.raises(UnsupportedAlternation):
            atm_encode(load_atm(ACCEPTOR), 2, t=3)

    def test_dump_and_load(self):
        machine = load_atm(UNIVERSAL)
        assert load_atm(dump_atm(machine)) == machine

    @pytest.mark.parametrize("text", [
        "state q0 exists initial\nsymbol _ blank\n",
        "state q0 exists initial\nstate qa accepting\n",
        ACCEPTOR + "trans q0 _ 2 a qa\n",
        ACCEPTOR + "trans q0 b 1 a qa\n",
        ACCEPTOR + "halt\n",
        "state q0 forall initial\nstate qa accepting\nsymbol _ blank\n",
    ])
    def test_format_errors(self, text):
        with pytest.raises(FormatError):
            load_atm(text)


class TestWeightedSatisfiability:
    def test_three_cnf_structure(self):
        phi = load_prop(THREE_CNF)
        assert is_normalized(phi) == 3
        structure, psi = wsat_to_fagin(phi)
        assert structure.n == 7
        assert (len(structure.rel(POSITIVE)), len(structure.rel(NEGATIVE))) == (7, 5)
        x_element = 4
        assert brute_fagin(structure, psi, X, 1) == frozenset({(x_element,)})
        assert brute_fagin(structure, psi, X, 0) is None

    def test_padding_keeps_the_formula_equivalent(self):
        phi = load_prop("(BIGAND (OR X Y) Z)")
        normalized = wsat_normalize(phi)
        assert is_normalized(normalized) == 2
        names = prop_variables(phi)
        for r in range(len(names) + 1):
            for chosen in itertools.combinations(names, r):
                assert eval_prop(phi, set(chosen)) == eval_prop(normalized, set(chosen))

    def test_wide_padding_adds_fresh_variables(self):
        normalized = wsat_normalize(load_prop("(BIGAND (OR X Y) Z)"), width=4)
        assert is_normalized(normalized) == 4
        assert "pad_1" in prop_variables(normalized)

    def test_unnormalized_input(self):
        with pytest.raises(NotNormalized):
            wsat_to_fagin(load_prop("(BIGAND (OR X Y) Z)"))

    def test_weights_agree_with_the_encoding(self):
        normalized = wsat_normalize(load_prop("(BIGAND (OR X Y) (OR (NOT X) (NOT Y)))"))
        structure, psi = wsat_to_fagin(normalized)
        for k in range(3):
            expected = brute_wsat(normalized, k) is not None
            assert (brute_fagin(structure, psi, X, k) is not None) == expected

    def test_every_assignment_agrees_with_the_encoding(self):
        for label, ok in wsat_agreement("three-cnf", load_prop(THREE_CNF)):
            assert ok, label

    @pytest.mark.parametrize("seed", range(3))
    def test_random_c2_formulas_agree_with_the_encoding(self, seed):
        phi = random_prop(make_rng(seed), ["V1", "V2", "V3", "V4"], t=2)
        for label, ok in wsat_agreement(f"random C2 {seed}", phi):
            assert ok, label

    def test_cliques_as_weighted_assignments(self, p3):
        phi, names = clique_to_wsat(p3)
        assert brute_wsat(phi, 2, variables=names) is not None
        assert brute_wsat(phi, 3, variables=names) is None
        k3_phi, k3_names = clique_to_wsat(complete_graph(3))
        assert brute_wsat(k3_phi, 3, variables=k3_names) == frozenset(k3_names)


class TestBoundedExpansion:
    @pytest.mark.parametrize("bounded,plain", [
        (bounded_clique, clique),
        (bounded_dominating_set, dominating_set),
    ])
    def test_agrees_with_brute_force(self, bounded, plain):
        phi, rv = bounded()
        source, _ = plain()
        for graph in (complete_graph(3), path_graph(3), cycle_graph(5)):
            for k in range(4):
                expected = brute_fagin(graph, source, rv, k) is not None
                assert eval_naive(graph, expand_bounded(phi, rv, k), pruned=True) == expected

    def test_unbounded_quantifier(self):
        phi = parse("ALL y. X(y) | EX z. E(y,z)")
        with pytest.raises(NotBounded):
            expand_bounded(phi, X, 2)

    def test_negative_k(self):
        phi, rv = bounded_clique()
        with pytest.raises(ValueError):
            expand_bounded(phi, rv, -1)
