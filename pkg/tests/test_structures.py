import networkx as nx
import pytest

from src.logic.fragments import PI, SIGMA, classify
from src.logic.parser import parse
from src.oracles.evaluator import eval_naive
from src.structures.encodings import (
    encode_structure,
    encode_structured,
    encode_to_graph,
    encode_to_graph_arity_preserving,
    incidence_structure,
)
from src.structures.generators import make_rng, random_graph, random_structure
from src.structures.graphs import (
    disjoint_union,
    edges_of,
    gaifman,
    graph_from_edges,
    named_graph,
    to_dot,
    to_networkx,
)
from src.structures.io import dump_structure, load_structure
from src.structures.structure import (
    GRAPH_VOCABULARY,
    Structure,
    Vocabulary,
    check_graph,
    color_expand,
    complement_expansion,
    is_graph,
)
from src.utils.errors import (
    ArityBoundExceeded,
    ArityMismatch,
    ElementOutOfRange,
    EmptyUniverse,
    FormatError,
    NotAGraph,
    UnknownRelation,
)

UNARY = Vocabulary.of(("P", 1))
BINARY = Vocabulary.of(("R", 2))


class TestStructure:
    def test_rejects_duplicate_symbols(self):
        with pytest.raises(ArityMismatch):
            Vocabulary.of(("R", 2), ("R", 1))

    def test_rejects_zero_arity(self):
        with pytest.raises(ArityMismatch):
            Vocabulary.of(("R", 0))

    def test_rejects_empty_universe(self):
        with pytest.raises(EmptyUniverse):
            Structure(GRAPH_VOCABULARY, 0, {})

    def test_rejects_element_out_of_range(self):
        with pytest.raises(ElementOutOfRange):
            Structure(GRAPH_VOCABULARY, 2, {"E": [(0, 2)]})

    def test_rejects_wrong_tuple_length(self):
        with pytest.raises(ArityMismatch):
            Structure(GRAPH_VOCABULARY, 2, {"E": [(0, 1, 1)]})

    def test_rejects_undeclared_relation(self):
        with pytest.raises(UnknownRelation):
            Structure(GRAPH_VOCABULARY, 2, {"F": [(0, 1)]})

    def test_size_counts_tuple_entries(self, k3):
        assert k3.size == 3 + 2 * 6

    def test_gensym_avoids_clashes(self):
        vocab = Vocabulary.of(("C1", 1))
        assert vocab.gensym("C1") == "C1_1"
        assert vocab.gensym("C2") == "C2"

    def test_reduct_keeps_requested_symbols(self):
        structure = Structure(Vocabulary.of(("E", 2), ("P", 1)), 2, {"E": [(0, 1)], "P": [(1,)]})
        assert structure.reduct(Vocabulary.of(("P", 1))).rel("P") == {(1,)}


class TestGraphs:
    def test_loop_is_not_a_graph(self):
        with pytest.raises(NotAGraph):
            check_graph(Structure(GRAPH_VOCABULARY, 2, {"E": [(0, 0)]}))

    def test_directed_edge_is_not_a_graph(self):
        assert not is_graph(Structure(GRAPH_VOCABULARY, 2, {"E": [(0, 1)]}))

    def test_named_graphs(self):
        assert len(named_graph("K4").rel("E")) == 12
        assert len(edges_of(named_graph("K3,3"))) == 9
        assert len(edges_of(named_graph("grid3x3"))) == 12
        assert len(edges_of(named_graph("petersen"))) == 15
        assert named_graph("P3").n == 3

    def test_named_graph_numbering(self):
        assert edges_of(named_graph("grid2x3")) == [(0, 1), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (4, 5)]
        assert edges_of(named_graph("K1,2")) == [(0, 1), (0, 2)]
        assert edges_of(named_graph("C4")) == [(0, 1), (0, 3), (1, 2), (2, 3)]
        assert named_graph("grid2x3").provenance is None

    def test_unknown_named_graph(self):
        with pytest.raises(ValueError):
            named_graph("Q7")

    def test_gaifman_of_ternary_tuple_is_a_triangle(self):
        structure = Structure(Vocabulary.of(("R", 3)), 3, {"R": [(0, 1, 2)]})
        assert edges_of(gaifman(structure)) == [(0, 1), (0, 2), (1, 2)]

    def test_disjoint_union_renumbers_and_labels(self, k3, p3):
        union = disjoint_union([k3, p3])
        assert union.n == 6
        assert (3, 4) in edges_of(union)
        assert union.label(0) == "0:0"
        assert union.label(5) == "1:2"

    def test_dot_output_lists_edges(self, p3):
        source = to_dot(p3)
        assert "0 -- 1" in source
        assert "1 -- 2" in source


class TestExpansions:
    def test_complement_of_triangle_is_the_diagonal(self, k3):
        expanded, names = complement_expansion(k3)
        assert expanded.rel(names["E"]) == {(0, 0), (1, 1), (2, 2)}
        assert expanded.rel("E") == k3.rel("E")

    def test_color_classes(self, p3):
        expanded, names = color_expand(p3, [1, 2, 1], 2)
        assert names == ["C1", "C2"]
        assert expanded.rel("C1") == {(0,), (2,)}
        assert expanded.rel("C2") == {(1,)}

    def test_color_out_of_range(self, p3):
        with pytest.raises(ElementOutOfRange):
            color_expand(p3, [1, 3, 1], 2)


class TestTextFormat:
    def test_load_and_dump(self, k3):
        assert load_structure(dump_structure(k3)) == k3

    def test_symmetrize_adds_reverse_edges(self):
        text = "vocab E 2\nuniverse 3\nE 0 1\nE 1 2\n"
        graph = load_structure(text, symmetrize=True, require_graph=True)
        assert edges_of(graph) == [(0, 1), (1, 2)]

    def test_tuple_before_universe(self):
        with pytest.raises(FormatError, match="line 2"):
            load_structure("vocab E 2\nE 0 1\nuniverse 2\n")

    def test_malformed_vocab_line(self):
        with pytest.raises(FormatError):
            load_structure("vocab E\nuniverse 2\n")

    def test_non_integer_element(self):
        with pytest.raises(FormatError):
            load_structure("vocab E 2\nuniverse 2\nE 0 x\n")

    def test_require_graph_rejects_directed_input(self):
        with pytest.raises(NotAGraph):
            load_structure("vocab E 2\nuniverse 2\nE 0 1\n", require_graph=True)


class TestGenerators:
    def test_same_seed_same_graph(self):
        assert random_graph(make_rng(5), 8, 0.4) == random_graph(make_rng(5), 8, 0.4)

    def test_streams_are_independent(self):
        a = random_structure(make_rng(1, 0), UNARY, 30, 0.5)
        b = random_structure(make_rng(1, 1), UNARY, 30, 0.5)
        assert a != b


class TestGraphEncoding:
    @pytest.fixture
    def marked(self):
        return Structure(UNARY, 2, {"P": [(0,)]})

    @pytest.fixture
    def arrows(self):
        # 0 -> 1 and a loop at 1
        return Structure(BINARY, 2, {"R": [(0, 1), (1, 1)]})

    def test_incidence_structure_adds_one_node_per_tuple(self, k3):
        incidence = incidence_structure(k3)
        assert incidence.n == 3 + 6

    def test_encoding_is_a_graph(self, marked):
        encoding = encode_structure(marked)
        assert is_graph(encoding.graph)
        assert encoding.arity == 1

    @pytest.mark.parametrize("which", ["marked", "arrows"])
    def test_subdivision_is_bipartite(self, which, request):
        encoding = encode_structure(request.getfixturevalue(which))
        assert nx.is_bipartite(to_networkx(encoding.subdivision))

    @pytest.mark.parametrize("which", ["marked", "arrows"])
    def test_only_gadget_cycles_are_odd(self, which, request):
        encoding = encode_structure(request.getfixturevalue(which))
        graph = encoding.graph
        lengths = {encoding.length_of(p) for p in encoding.predicates}
        gadget = {v for v in graph.universe if graph.label(v).startswith("g(")}
        g = to_networkx(graph)
        assert nx.is_bipartite(g.subgraph(set(g.nodes) - gadget))
        for cycle in nx.cycle_basis(g):
            if len(cycle) % 2:
                assert set(cycle) <= gadget
                assert len(cycle) in lengths

    @pytest.mark.parametrize("text,expected", [
        ("EX x. P(x)", True),
        ("ALL x. P(x)", False),
        ("EX x. !P(x)", True),
    ])
    def test_truth_is_preserved(self, marked, text, expected):
        phi = parse(text)
        graph, encoded = encode_to_graph(marked, phi)
        assert eval_naive(marked, phi) == expected
        assert eval_naive(graph, encoded, pruned=True) == expected
        assert eval_naive(graph, encode_structured(marked, phi), pruned=True) == expected

    @pytest.mark.parametrize("text,kind,t,expected", [
        ("EX x. R(x,x)", SIGMA, 1, True),
        ("ALL x. R(x,x)", PI, 1, False),
        ("ALL x. EX y. R(x,y)", PI, 2, True),
        ("EX x. ALL y. !R(y,x)", SIGMA, 2, True),
        ("ALL x. ALL y. R(x,y) | x = y", PI, 1, False),
    ])
    def test_binary_relation(self, arrows, text, kind, t, expected):
        phi = parse(text)
        assert eval_naive(arrows, phi) == expected
        graph, encoded = encode_to_graph(arrows, phi)
        assert eval_naive(graph, encoded, pruned=True) == expected
        assert classify(encoded).within(kind, t + 1)

    @pytest.mark.parametrize("text,kind,expected", [
        ("EX x. R(x,x)", SIGMA, True),
        ("ALL x. ALL y. R(x,y) | x = y", PI, False),
    ])
    def test_arity_preserving_binary_relation(self, arrows, text, kind, expected):
        graph, encoded = encode_to_graph_arity_preserving(arrows, parse(text), 2)
        assert classify(encoded).within(kind, 1)
        assert eval_naive(graph, encoded, pruned=True) == expected

    def test_existential_input_gains_one_block(self, marked):
        _, encoded = encode_to_graph(marked, parse("EX x. P(x)"))
        assert classify(encoded).within(SIGMA, 2)

    def test_arity_preserving_variant_keeps_the_class(self, marked):
        phi = parse("EX x. !P(x)")
        graph, encoded = encode_to_graph_arity_preserving(marked, phi, 1)
        assert classify(encoded).within(SIGMA, 1)
        assert eval_naive(graph, encoded, pruned=True)

    def test_arity_bound(self, k3):
        with pytest.raises(ArityBoundExceeded):
            encode_to_graph_arity_preserving(k3, parse("EX x. EX y. E(x,y)"), 1)


def test_graph_from_edges_is_symmetric():
    graph = graph_from_edges(3, [(0, 2)])
    assert graph.rel("E") == {(0, 2), (2, 0)}
