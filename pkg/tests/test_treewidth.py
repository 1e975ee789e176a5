import pytest

from src.structures.generators import random_graph, random_tree
from src.structures.graphs import complete_graph, cycle_graph, graph_from_edges, grid_graph, path_graph
from src.structures.structure import Structure, Vocabulary
from src.treewidth.decomposition import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    TreeDecomposition,
    make_nice,
    root_tree,
    td_from_elimination,
    validate_td,
)
from src.treewidth.exact import exact_ordering, exact_td
from src.treewidth.heuristic import heuristic_td, min_fill_ordering
from src.treewidth.io import dump_td, load_td
from src.utils.errors import (
    DisconnectedOccurrence,
    ElementNotCovered,
    FormatError,
    InvalidDecomposition,
    TooLarge,
    TupleNotCovered,
)


class TestExactWidth:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_complete_graphs(self, n):
        graph = complete_graph(n)
        assert validate_td(graph, exact_td(graph)) == n - 1

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_cycles(self, n):
        graph = cycle_graph(n)
        assert validate_td(graph, exact_td(graph)) == 2

    def test_grid(self):
        graph = grid_graph(3, 3)
        assert validate_td(graph, exact_td(graph)) == 3

    def test_trees(self, rng):
        tree = random_tree(rng, 10)
        assert exact_ordering(tree)[0] == 1

    def test_edgeless_graph(self):
        graph = graph_from_edges(4, [])
        assert validate_td(graph, exact_td(graph)) == 0

    def test_vertex_cap(self):
        with pytest.raises(TooLarge):
            exact_td(path_graph(13))
        assert exact_ordering(path_graph(13), limit=None)[0] == 1


class TestHeuristic:
    def test_min_fill_on_a_path_is_exact(self):
        graph = path_graph(6)
        assert validate_td(graph, heuristic_td(graph)) == 1

    def test_ties_go_to_the_lowest_vertex(self):
        assert min_fill_ordering(complete_graph(4)) == [0, 1, 2, 3]

    def test_never_below_the_exact_width(self, rng):
        for _ in range(15):
            graph = random_graph(rng, 8, 0.4)
            assert validate_td(graph, heuristic_td(graph)) >= exact_ordering(graph)[0]

    def test_deterministic(self, rng):
        graph = random_graph(rng, 9, 0.3)
        assert heuristic_td(graph) == heuristic_td(graph)


class TestValidation:
    def test_valid_path_decomposition(self, p3):
        td = root_tree([{0, 1}, {1, 2}], [(0, 1)])
        assert validate_td(p3, td) == 1
        assert td.root == 0

    def test_element_not_covered(self, p3):
        with pytest.raises(ElementNotCovered):
            validate_td(p3, root_tree([{0, 1}], []))

    def test_tuple_not_covered(self, p3):
        with pytest.raises(TupleNotCovered):
            validate_td(p3, root_tree([{0}, {1}, {2}], [(0, 1), (1, 2)]))

    def test_disconnected_occurrence(self, p3):
        with pytest.raises(DisconnectedOccurrence):
            validate_td(p3, root_tree([{0, 1}, {2}, {1, 2}], [(0, 1), (1, 2)]))

    def test_higher_arity_tuples_need_a_common_bag(self):
        structure = Structure(Vocabulary.of(("R", 3)), 3, {"R": [(0, 1, 2)]})
        with pytest.raises(TupleNotCovered):
            validate_td(structure, root_tree([{0, 1}, {1, 2}], [(0, 1)]))

    def test_edges_must_form_a_tree(self):
        with pytest.raises(InvalidDecomposition):
            root_tree([{0}, {1}, {2}], [(0, 1), (1, 2), (2, 0)])

    def test_root_must_have_no_parent(self):
        with pytest.raises(InvalidDecomposition):
            TreeDecomposition(({0}, {1}), (1, 0), 0)

    def test_elimination_ordering_must_be_complete(self, p3):
        with pytest.raises(InvalidDecomposition):
            td_from_elimination(p3, [0, 1])

    def test_root_holds_the_lowest_element(self):
        td = root_tree([{3, 4}, {1, 3}, {2}], [(0, 1), (1, 2)])
        assert td.root == 1


class TestNiceDecomposition:
    @pytest.fixture
    def graph(self):
        return grid_graph(2, 3)

    def test_node_kinds(self, graph):
        nice = make_nice(heuristic_td(graph))
        for t in range(nice.size):
            kind = nice.kinds[t]
            kids = nice.children[t]
            bag = nice.bags[t]
            if kind == LEAF:
                assert kids == () and bag == frozenset()
            elif kind == INTRODUCE:
                assert len(kids) == 1 and bag == nice.bags[kids[0]] | {nice.vertices[t]}
                assert nice.vertices[t] not in nice.bags[kids[0]]
            elif kind == FORGET:
                assert len(kids) == 1 and nice.bags[kids[0]] == bag | {nice.vertices[t]}
                assert nice.vertices[t] not in bag
            else:
                assert kind == JOIN
                assert len(kids) == 2 and all(nice.bags[k] == bag for k in kids)

    def test_width_and_root_bag_are_kept(self, graph):
        td = heuristic_td(graph)
        nice = make_nice(td)
        assert validate_td(graph, nice) == td.width
        assert nice.bags[nice.root] == td.bags[td.root]

    def test_join_nodes_appear_for_branching_trees(self):
        star = graph_from_edges(4, [(0, 1), (0, 2), (0, 3)])
        td = root_tree([{0}, {0, 1}, {0, 2}, {0, 3}], [(0, 1), (0, 2), (0, 3)])
        nice = make_nice(td)
        assert nice.kinds.count(JOIN) == 2
        assert validate_td(star, nice) == 1


class TestTextFormat:
    def test_load(self, p3):
        td = load_td("# path\nnode 5 : 1 2\nnode 2 : 0 1\nedge 2 5\n")
        assert validate_td(p3, td) == 1
        assert td.bags[td.root] == {0, 1}

    def test_dump_and_load(self, c5):
        td = heuristic_td(c5)
        again = load_td(dump_td(td))
        assert validate_td(c5, again) == td.width

    def test_nice_dump_names_node_kinds(self, p3):
        text = dump_td(make_nice(heuristic_td(p3)))
        assert "# leaf" in text and "# introduce" in text

    @pytest.mark.parametrize("text", [
        "",
        "node 0 0 1\n",
        "node 0 : 0\nnode 0 : 1\n",
        "node 0 : 0\nedge 0 1\n",
        "bag 0 : 0\n",
        "node x : 0\n",
    ])
    def test_format_errors(self, text):
        with pytest.raises(FormatError):
            load_td(text)
