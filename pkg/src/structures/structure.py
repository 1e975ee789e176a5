"""
Finite relational structures in list representation
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

from src.utils.errors import (
    ArityMismatch,
    ElementOutOfRange,
    EmptyUniverse,
    NotAGraph,
    UnknownRelation,
    VocabularyMismatch,
)

logger = logging.getLogger(__name__)

EDGE = "E"


@dataclass(frozen=True)
class Vocabulary:
    """
    Ordered list of relation symbols with their arities

    Args:
        symbols (tuple): Pairs ``(name, arity)``
    """

    symbols: tuple = ()

    def __post_init__(self):
        seen = set()
        for name, arity in self.symbols:
            if name in seen:
                raise ArityMismatch(f"duplicate relation symbol {name}")
            if not isinstance(arity, int) or arity < 1:
                raise ArityMismatch(f"symbol {name} needs a positive arity, got {arity}")
            seen.add(name)

    @classmethod
    def of(cls, *pairs) -> "Vocabulary":
        return cls(tuple((str(name), int(arity)) for name, arity in pairs))

    @cached_property
    def arities(self) -> dict:
        return dict(self.symbols)

    @property
    def names(self) -> list:
        return [name for name, _ in self.symbols]

    @property
    def max_arity(self) -> int:
        """Arity of the vocabulary: the maximal arity of its symbols (0 when empty)."""
        return max((arity for _, arity in self.symbols), default=0)

    def arity(self, name: str) -> int:
        try:
            return self.arities[name]
        except KeyError:
            raise UnknownRelation(f"relation symbol {name} is not in the vocabulary") from None

    def __contains__(self, name) -> bool:
        return name in self.arities

    def __len__(self) -> int:
        return len(self.symbols)

    def extend(self, *pairs) -> "Vocabulary":
        return Vocabulary(self.symbols + tuple((str(n), int(a)) for n, a in pairs))

    def gensym(self, base: str, taken: Iterable[str] = ()) -> str:
        """Return ``base`` or ``base_<i>`` so that it clashes with no symbol here or in ``taken``."""
        used = set(self.arities) | set(taken)
        if base not in used:
            return base
        for i in itertools.count(1):
            candidate = f"{base}_{i}"
            if candidate not in used:
                return candidate


GRAPH_VOCABULARY = Vocabulary(((EDGE, 2),))


@dataclass(frozen=True, eq=False)
class Structure:
    """
    A finite structure with universe ``0..n-1``

    Construction validates every tuple, so an existing Structure is always
    well formed.

    Args:
        vocab (Vocabulary): Relation symbols
        n (int): Universe size
        relations (Mapping): Symbol name to a set of tuples
        provenance (Mapping, optional): Element to a description of where it came from
    """

    vocab: Vocabulary
    n: int
    relations: Mapping = field(default_factory=dict)
    provenance: Mapping | None = None

    def __post_init__(self):
        if self.n < 1:
            raise EmptyUniverse(f"universe must be non-empty, got n={self.n}")
        frozen = {}
        for name in self.relations:
            if name not in self.vocab:
                raise UnknownRelation(f"relation {name} is not declared in the vocabulary")
        for name, arity in self.vocab.symbols:
            tuples = frozenset(tuple(t) for t in self.relations.get(name, ()))
            for tup in tuples:
                if len(tup) != arity:
                    raise ArityMismatch(f"{name} has arity {arity} but got tuple {tup}")
                for element in tup:
                    if not isinstance(element, int) or not 0 <= element < self.n:
                        raise ElementOutOfRange(
                            f"element {element} of {name}{tup} is outside 0..{self.n - 1}")
            frozen[name] = tuples
        object.__setattr__(self, "relations", MappingProxyType(frozen))
        if self.provenance is not None:
            object.__setattr__(self, "provenance", MappingProxyType(dict(self.provenance)))

    @property
    def universe(self) -> range:
        return range(self.n)

    def rel(self, name: str) -> frozenset:
        try:
            return self.relations[name]
        except KeyError:
            raise UnknownRelation(f"relation {name} is not in the vocabulary") from None

    @property
    def size(self) -> int:
        """Size of the list representation: n plus arity times tuple count per symbol."""
        return self.n + sum(arity * len(self.relations[name]) for name, arity in self.vocab.symbols)

    def label(self, element: int) -> str:
        if self.provenance and element in self.provenance:
            return str(self.provenance[element])
        return str(element)

    @cached_property
    def index(self) -> dict:
        """Map ``(symbol, position, element)`` to the tuples having that element there."""
        idx = {}
        for name, tuples in self.relations.items():
            for tup in tuples:
                for pos, element in enumerate(tup):
                    idx.setdefault((name, pos, element), []).append(tup)
        return idx

    def expand(self, extra: Vocabulary, relations: Mapping, provenance=None) -> "Structure":
        """Expansion by new symbols; the reduct to the old vocabulary is unchanged."""
        merged = dict(self.relations)
        merged.update(relations)
        return Structure(self.vocab.extend(*extra.symbols), self.n, merged,
                         self.provenance if provenance is None else provenance)

    def reduct(self, vocab: Vocabulary) -> "Structure":
        for name, arity in vocab.symbols:
            if self.vocab.arity(name) != arity:
                raise VocabularyMismatch(f"{name} has arity {self.vocab.arity(name)} here, not {arity}")
        return Structure(vocab, self.n, {name: self.relations[name] for name in vocab.names},
                         self.provenance)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.n == other.n and self.vocab == other.vocab
                and dict(self.relations) == dict(other.relations))

    def __repr__(self) -> str:
        counts = ", ".join(f"{name}:{len(self.relations[name])}" for name in self.vocab.names)
        return f"Structure(n={self.n}, {counts})"


def validate(vocab, n, relations, provenance=None, require_graph=False) -> Structure:
    """
    Build a Structure from raw data, rejecting anything malformed

    Args:
        vocab (Vocabulary | Iterable): Vocabulary or ``(name, arity)`` pairs
        n (int): Universe size
        relations (Mapping): Symbol to iterable of tuples
        provenance (Mapping, optional): Element descriptions
        require_graph (bool, optional): Also check the graph invariants. Defaults to False.

    Returns:
        Structure: The validated structure
    """
    if not isinstance(vocab, Vocabulary):
        vocab = Vocabulary.of(*vocab)
    structure = Structure(vocab, n, relations, provenance)
    if require_graph:
        check_graph(structure)
    return structure


def check_graph(structure: Structure) -> Structure:
    """Raise NotAGraph unless the structure is a loop-free undirected graph over {E/2}."""
    if structure.vocab != GRAPH_VOCABULARY:
        raise NotAGraph(f"graphs have vocabulary {{E/2}}, got {structure.vocab.symbols}")
    edges = structure.rel(EDGE)
    for a, b in edges:
        if a == b:
            raise NotAGraph(f"loop at vertex {a}")
        if (b, a) not in edges:
            raise NotAGraph(f"edge ({a},{b}) has no reverse pair")
    return structure


def is_graph(structure: Structure) -> bool:
    try:
        check_graph(structure)
    except NotAGraph:
        return False
    return True


def same_vocabulary(a: Structure, b: Structure) -> None:
    if a.vocab.arities != b.vocab.arities:
        raise VocabularyMismatch(f"vocabularies differ: {a.vocab.symbols} vs {b.vocab.symbols}")


def complement_expansion(structure: Structure, symbols=None, suffix="_bar"):
    """
    Add the complement of each requested relation

    Args:
        structure (Structure): Input structure
        symbols (Iterable[str], optional): Symbols to complement, all by default
        suffix (str, optional): Name suffix for the complement symbols

    Returns:
        tuple: ``(expanded structure, {symbol: complement symbol})``
    """
    symbols = structure.vocab.names if symbols is None else list(symbols)
    names = {}
    extra = []
    relations = {}
    taken = set()
    for name in symbols:
        arity = structure.vocab.arity(name)
        bar = structure.vocab.gensym(f"{name}{suffix}", taken)
        taken.add(bar)
        names[name] = bar
        extra.append((bar, arity))
        present = structure.rel(name)
        relations[bar] = [t for t in itertools.product(structure.universe, repeat=arity)
                          if t not in present]
    logger.debug(f"Complemented {len(names)} symbols over n={structure.n}")
    return structure.expand(Vocabulary(tuple(extra)), relations), names


def color_expand(structure: Structure, coloring, k: int, prefix="C"):
    """
    Expand by unary color classes ``C_1..C_k`` with ``C_i = f^-1(i)``

    Args:
        structure (Structure): Input structure
        coloring (Sequence[int] | Mapping): Color in 1..k for each element
        k (int): Number of colors
        prefix (str, optional): Base name for the color symbols

    Returns:
        tuple: ``(expanded structure, [symbol of color 1, ..., symbol of color k])``
    """
    names = []
    taken = set()
    for i in range(1, k + 1):
        name = structure.vocab.gensym(f"{prefix}{i}", taken)
        taken.add(name)
        names.append(name)
    classes = {name: [] for name in names}
    for element in structure.universe:
        color = coloring[element]
        if not 1 <= color <= k:
            raise ElementOutOfRange(f"color {color} of element {element} is outside 1..{k}")
        classes[names[color - 1]].append((element,))
    extra = Vocabulary(tuple((name, 1) for name in names))
    return structure.expand(extra, classes), names
