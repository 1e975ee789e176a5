"""
Rooted tree decompositions, validation and nice normal form
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from src.structures.graphs import to_networkx
from src.utils.errors import (
    DisconnectedOccurrence,
    ElementNotCovered,
    InvalidDecomposition,
    TupleNotCovered,
)

logger = logging.getLogger(__name__)

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"


@dataclass(frozen=True)
class TreeDecomposition:
    """
    Bags on a rooted tree given by parent pointers

    Args:
        bags (tuple): One frozenset of elements per node
        parent (tuple): Parent node id per node, None at the root
        root (int): Root node id
    """

    bags: tuple
    parent: tuple
    root: int

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "parent", tuple(self.parent))
        if len(self.bags) != len(self.parent) or not self.bags:
            raise InvalidDecomposition("every node needs exactly one bag and one parent entry")
        if not 0 <= self.root < len(self.bags) or self.parent[self.root] is not None:
            raise InvalidDecomposition(f"node {self.root} cannot be the root")
        for t, p in enumerate(self.parent):
            if t != self.root and (p is None or not 0 <= p < len(self.bags)):
                raise InvalidDecomposition(f"node {t} has no valid parent")
        if len(self.postorder) != len(self.bags):
            raise InvalidDecomposition("parent pointers do not form a tree")

    @property
    def size(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    @cached_property
    def children(self) -> tuple:
        kids = [[] for _ in self.bags]
        for t, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(t)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def postorder(self) -> tuple:
        """Children before parents; nodes unreachable from the root are left out."""
        order = []
        stack = [(self.root, False)]
        seen = set()
        while stack:
            node, done = stack.pop()
            if done:
                order.append(node)
                continue
            if node in seen:
                continue
            seen.add(node)
            stack.append((node, True))
            for child in reversed(self.children[node]):
                stack.append((child, False))
        return tuple(order)

    def edges(self) -> list:
        return sorted((p, t) for t, p in enumerate(self.parent) if p is not None)


@dataclass(frozen=True)
class NiceDecomposition(TreeDecomposition):
    """
    Tree decomposition whose nodes are leaves (empty bag), introduce and
    forget nodes (one vertex more or less than the only child) and binary
    joins (both children carry the same bag)
    """

    kinds: tuple = ()
    vertices: tuple = ()


def validate_td(structure, td: TreeDecomposition) -> int:
    """
    Check a decomposition against a structure

    Args:
        structure (Structure): Structure or graph being decomposed
        td (TreeDecomposition): Candidate decomposition

    Returns:
        int: The width

    Raises:
        ElementNotCovered: An element lies in no bag
        TupleNotCovered: The entries of some tuple share no bag
        DisconnectedOccurrence: The nodes holding an element are not connected
    """
    holders = {}
    for t, bag in enumerate(td.bags):
        for a in bag:
            if not isinstance(a, int) or not 0 <= a < structure.n:
                raise InvalidDecomposition(f"bag {t} holds {a}, which is not an element")
            holders.setdefault(a, set()).add(t)
    for a in structure.universe:
        if a not in holders:
            raise ElementNotCovered(f"element {a} is in no bag")
    for a, nodes in holders.items():
        tops = [t for t in nodes if td.parent[t] not in nodes]
        if len(tops) != 1:
            raise DisconnectedOccurrence(f"the bags holding {a} form {len(tops)} components")
    for name in structure.vocab.names:
        for tup in structure.rel(name):
            needed = set(tup)
            candidates = set.intersection(*(holders[a] for a in needed))
            if not candidates:
                raise TupleNotCovered(f"no bag contains {name}{tup}")
    return td.width


def root_tree(bags, edges) -> TreeDecomposition:
    """
    Root an undirected tree of bags

    The root is the node holding the lowest element, ties going to the lowest
    node id.
    """
    bags = [frozenset(b) for b in bags]
    tree = nx.Graph()
    tree.add_nodes_from(range(len(bags)))
    tree.add_edges_from(edges)
    if not nx.is_tree(tree):
        raise InvalidDecomposition("the decomposition edges do not form a tree")
    nonempty = [t for t, bag in enumerate(bags) if bag]
    root = min(nonempty, key=lambda t: (min(bags[t]), t)) if nonempty else 0
    parent = [None] * len(bags)
    for p, t in nx.bfs_edges(tree, root, sort_neighbors=sorted):
        parent[t] = p
    return TreeDecomposition(tuple(bags), tuple(parent), root)


def td_from_elimination(graph, ordering) -> TreeDecomposition:
    """
    Decomposition induced by eliminating the vertices in ``ordering``

    Node i carries the i-th eliminated vertex together with its neighbours
    eliminated later (in the filled graph) and hangs below the node of the
    earliest of those neighbours. Separate components are chained.

    Args:
        graph (Structure): Graph over {E/2}
        ordering (list): Every vertex exactly once

    Returns:
        TreeDecomposition: Width equals the largest later-neighbourhood
    """
    ordering = list(ordering)
    if sorted(ordering) != list(graph.universe):
        raise InvalidDecomposition("an elimination ordering must list every vertex once")
    work = to_networkx(graph)
    position = {v: i for i, v in enumerate(ordering)}
    bags = []
    edges = []
    loose = []
    for i, v in enumerate(ordering):
        later = sorted(work.neighbors(v), key=position.get)
        bags.append({v, *later})
        for a in later:
            for b in later:
                if a < b:
                    work.add_edge(a, b)
        work.remove_node(v)
        if later:
            edges.append((i, position[later[0]]))
        else:
            loose.append(i)
    edges += [(a, b) for a, b in zip(loose, loose[1:])]
    return root_tree(bags, edges)


def make_nice(td: TreeDecomposition) -> NiceDecomposition:
    """
    Equivalent nice decomposition of the same width

    Leaves get empty bags; every original edge becomes a run of forget nodes
    followed by introduce nodes (vertices in ascending order) and nodes with
    several children become chains of binary joins. The root keeps its bag.

    Args:
        td (TreeDecomposition): Any rooted decomposition

    Returns:
        NiceDecomposition: The normalized decomposition
    """
    bags, parent, kinds, vertices = [], [], [], []

    def new(bag, kind, vertex=None, kids=()):
        node = len(bags)
        bags.append(frozenset(bag))
        parent.append(None)
        kinds.append(kind)
        vertices.append(vertex)
        for kid in kids:
            parent[kid] = node
        return node

    def walk_to(node, target):
        current = set(bags[node])
        for v in sorted(current - target):
            current.discard(v)
            node = new(current, FORGET, v, (node,))
        for v in sorted(target - current):
            current.add(v)
            node = new(current, INTRODUCE, v, (node,))
        return node

    top = {}
    for t in td.postorder:
        bag = set(td.bags[t])
        kids = td.children[t]
        if not kids:
            top[t] = walk_to(new((), LEAF), bag)
            continue
        branches = [walk_to(top[c], bag) for c in kids]
        node = branches[0]
        for other in branches[1:]:
            node = new(bag, JOIN, None, (node, other))
        top[t] = node
    nice = NiceDecomposition(tuple(bags), tuple(parent), top[td.root], tuple(kinds), tuple(vertices))
    logger.debug(f"Nice decomposition: {nice.size} nodes from {td.size}, width {nice.width}")
    return nice
