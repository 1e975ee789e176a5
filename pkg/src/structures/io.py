"""
Line-oriented text format for structures

    # comment
    vocab E 2
    universe 3
    E 0 1
    E 1 0
"""

from __future__ import annotations

import logging

from src.structures.structure import EDGE, Structure, Vocabulary, check_graph
from src.utils.errors import FormatError

logger = logging.getLogger(__name__)


def load_structure(text: str, symmetrize=False, require_graph=False) -> Structure:
    """
    Parse a structure file

    Args:
        text (str): File contents
        symmetrize (bool, optional): Add the reverse of every E tuple. Defaults to False.
        require_graph (bool, optional): Reject anything that is not a graph. Defaults to False.

    Returns:
        Structure: The parsed structure
    """
    symbols = []
    n = None
    tuples = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head == "vocab":
            if len(parts) != 3:
                raise FormatError("expected 'vocab <name> <arity>'", lineno)
            symbols.append((parts[1], _int(parts[2], lineno)))
        elif head == "universe":
            if len(parts) != 2:
                raise FormatError("expected 'universe <n>'", lineno)
            n = _int(parts[1], lineno)
        else:
            if n is None:
                raise FormatError("tuple given before 'universe'", lineno)
            tuples.setdefault(head, []).append(tuple(_int(p, lineno) for p in parts[1:]))
    if n is None:
        raise FormatError("missing 'universe' line")
    if symmetrize and EDGE in tuples:
        tuples[EDGE] = tuples[EDGE] + [t[::-1] for t in tuples[EDGE] if len(t) == 2]
    structure = Structure(Vocabulary(tuple(symbols)), n, tuples)
    if require_graph:
        check_graph(structure)
    logger.debug(f"Loaded {structure!r}")
    return structure


def dump_structure(structure: Structure) -> str:
    """Canonical text: vocabulary in order, then sorted tuples per symbol."""
    lines = [f"vocab {name} {arity}" for name, arity in structure.vocab.symbols]
    lines.append(f"universe {structure.n}")
    if structure.provenance:
        for element in structure.universe:
            if element in structure.provenance:
                lines.append(f"# {element} = {structure.provenance[element]}")
    for name in structure.vocab.names:
        for tup in sorted(structure.rel(name)):
            lines.append(" ".join([name, *map(str, tup)]))
    return "\n".join(lines) + "\n"


def read_structure(path, symmetrize=False, require_graph=False) -> Structure:
    with open(path, "r", encoding="utf-8") as f:
        return load_structure(f.read(), symmetrize=symmetrize, require_graph=require_graph)


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _int(token, lineno):
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"expected an integer, got {token!r}", lineno) from None
