"""
Graphs as structures over {E/2}: Gaifman graphs, unions, named families, DOT
"""

from __future__ import annotations

import itertools
import logging

import graphviz
import networkx as nx

from src.structures.structure import EDGE, GRAPH_VOCABULARY, Structure, check_graph
from src.utils.errors import EmptyUniverse

logger = logging.getLogger(__name__)


def graph_from_edges(n, edges, provenance=None) -> Structure:
    """
    Build a graph from undirected edges, adding both directions

    Args:
        n (int): Number of vertices
        edges (Iterable): Pairs ``(a, b)`` with ``a != b``
        provenance (Mapping, optional): Vertex descriptions

    Returns:
        Structure: Graph over {E/2}
    """
    tuples = set()
    for a, b in edges:
        tuples.add((a, b))
        tuples.add((b, a))
    return check_graph(Structure(GRAPH_VOCABULARY, n, {EDGE: tuples}, provenance))


def edges_of(graph: Structure) -> list:
    """Undirected edges ``(a, b)`` with ``a < b``, sorted."""
    return sorted((a, b) for a, b in graph.rel(EDGE) if a < b)


def gaifman(structure: Structure) -> Structure:
    """Join two distinct elements whenever some tuple contains both."""
    edges = set()
    for tuples in structure.relations.values():
        for tup in tuples:
            for a, b in itertools.combinations(set(tup), 2):
                edges.add((a, b))
    return graph_from_edges(structure.n, edges, structure.provenance)


def to_networkx(graph: Structure) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(graph.universe)
    g.add_edges_from(edges_of(graph))
    return g


def from_networkx(g: nx.Graph) -> Structure:
    """Relabel nodes to 0..n-1 in sorted order and convert."""
    nodes = sorted(g.nodes)
    position = {v: i for i, v in enumerate(nodes)}
    provenance = {i: str(v) for i, v in enumerate(nodes)} if nodes != list(range(len(nodes))) else None
    return graph_from_edges(len(nodes), [(position[a], position[b]) for a, b in g.edges], provenance)


def disjoint_union(graphs) -> Structure:
    """
    Disjoint union with consecutive renumbering

    The provenance of vertex ``v`` of the ``i``-th graph is ``"i:v"``
    (or ``"i:<old label>"`` when the graph already carried provenance).

    Args:
        graphs (list[Structure]): Graphs to combine

    Returns:
        Structure: The union graph
    """
    graphs = list(graphs)
    if not graphs:
        raise EmptyUniverse("disjoint union of no graphs has an empty universe")
    if len(graphs) == 1:
        return graphs[0]
    offset = 0
    edges = []
    provenance = {}
    for i, graph in enumerate(graphs):
        check_graph(graph)
        for v in graph.universe:
            provenance[offset + v] = f"{i}:{graph.label(v)}"
        edges.extend((offset + a, offset + b) for a, b in edges_of(graph))
        offset += graph.n
    return graph_from_edges(offset, edges, provenance)


def complete_graph(n) -> Structure:
    return from_networkx(nx.complete_graph(n))


def path_graph(n) -> Structure:
    """Path on n vertices (so ``path_graph(3)`` is P3 with two edges)."""
    return from_networkx(nx.path_graph(n))


def cycle_graph(n) -> Structure:
    if n < 3:
        raise ValueError(f"cycles need at least 3 vertices, got {n}")
    return from_networkx(nx.cycle_graph(n))


def grid_graph(rows, cols) -> Structure:
    """Vertex ``r * cols + c`` sits in row r and column c."""
    grid = nx.convert_node_labels_to_integers(nx.grid_2d_graph(rows, cols), ordering="sorted")
    return from_networkx(grid)


def complete_bipartite(a, b) -> Structure:
    """Sides ``0..a-1`` and ``a..a+b-1``."""
    return from_networkx(nx.complete_bipartite_graph(a, b))


def petersen_graph() -> Structure:
    return from_networkx(nx.petersen_graph())


def named_graph(name: str) -> Structure:
    """
    Parse names like ``K4``, ``C5``, ``P3``, ``grid3x3``, ``K3,3``, ``petersen``

    Args:
        name (str): Instance name

    Returns:
        Structure: The graph
    """
    key = name.strip().lower()
    if key == "petersen":
        return petersen_graph()
    if key.startswith("grid"):
        rows, cols = key[4:].split("x")
        return grid_graph(int(rows), int(cols))
    if key.startswith("k") and "," in key:
        a, b = key[1:].split(",")
        return complete_bipartite(int(a), int(b))
    builders = {"k": complete_graph, "c": cycle_graph, "p": path_graph}
    if key[:1] in builders and key[1:].isdigit():
        return builders[key[:1]](int(key[1:]))
    raise ValueError(f"unknown named graph {name!r}")


def to_dot(graph: Structure, name="G") -> str:
    """DOT source of an undirected graph; vertex labels carry provenance."""
    dot = graphviz.Graph(name=name)
    for v in graph.universe:
        dot.node(str(v), label=graph.label(v))
    for a, b in edges_of(graph):
        dot.edge(str(a), str(b))
    return dot.source
