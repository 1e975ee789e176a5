"""
Text format for tree decompositions

    node 0 : 0 1
    node 1 : 1 2
    edge 0 1
"""

from __future__ import annotations

from src.treewidth.decomposition import NiceDecomposition, root_tree
from src.utils.errors import FormatError


def load_td(text: str):
    """
    Parse a decomposition; node ids are renumbered in ascending order

    Args:
        text (str): File contents

    Returns:
        TreeDecomposition: Rooted by the lowest-element rule
    """
    bags = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "node":
            if len(parts) < 3 or parts[2] != ":":
                raise FormatError("expected 'node <id> : <elements>'", lineno)
            node = _int(parts[1], lineno)
            if node in bags:
                raise FormatError(f"node {node} declared twice", lineno)
            bags[node] = {_int(p, lineno) for p in parts[3:]}
        elif parts[0] == "edge":
            if len(parts) != 3:
                raise FormatError("expected 'edge <id> <id>'", lineno)
            edges.append((_int(parts[1], lineno), _int(parts[2], lineno), lineno))
        else:
            raise FormatError(f"unknown line type {parts[0]!r}", lineno)
    if not bags:
        raise FormatError("a decomposition needs at least one node")
    ids = sorted(bags)
    position = {node: i for i, node in enumerate(ids)}
    renumbered = []
    for a, b, lineno in edges:
        if a not in position or b not in position:
            raise FormatError(f"edge {a} {b} names an undeclared node", lineno)
        renumbered.append((position[a], position[b]))
    return root_tree([bags[node] for node in ids], renumbered)


def dump_td(td) -> str:
    """Nodes in id order, then ``edge parent child`` lines; nice nodes carry their kind."""
    lines = []
    nice = isinstance(td, NiceDecomposition)
    for t, bag in enumerate(td.bags):
        line = f"node {t} : {' '.join(map(str, sorted(bag)))}".rstrip()
        if nice:
            vertex = "" if td.vertices[t] is None else f" {td.vertices[t]}"
            line += f"  # {td.kinds[t]}{vertex}"
        lines.append(line)
    lines += [f"edge {p} {t}" for p, t in td.edges()]
    return "\n".join(lines) + "\n"


def _int(token, lineno):
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"expected an integer, got {token!r}", lineno) from None
