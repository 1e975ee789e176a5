"""
Fragment classification of prenex formulas
"""

from __future__ import annotations

from dataclasses import dataclass

from src.logic.formulas import Exists, Formula, quantifier_rank, relation_symbols, variables
from src.logic.normal_forms import blocks_of, is_quantifier_free, split_prefix
from src.utils.errors import NotPrenex

SIGMA = "sigma"
PI = "pi"
QF = "qf"
OTHER = "other"


@dataclass(frozen=True)
class FragmentInfo:
    """
    Where a formula sits in the quantifier-alternation hierarchy

    ``kind`` is one of ``sigma``, ``pi``, ``qf`` or ``other``; ``t`` counts
    quantifier blocks.
    """

    kind: str
    t: int
    rank: int
    arity: int
    variable_count: int
    blocks: tuple

    def within(self, kind: str, t: int) -> bool:
        """Membership in Sigma_t / Pi_t, where smaller classes are included."""
        if self.kind == QF:
            return True
        if self.kind == OTHER:
            return False
        if self.kind == kind:
            return self.t <= t
        return self.t < t

    def in_sigma_tu(self, t: int, u: int) -> bool:
        """Sigma_t with every block after the leading existential one of length <= u."""
        if self.kind == QF:
            return True
        if not self.within(SIGMA, t):
            return False
        tail = self.blocks[1:] if self.kind == SIGMA else self.blocks
        return all(length <= u for length in tail)

    @property
    def label(self) -> str:
        if self.kind == SIGMA:
            return f"Sigma{self.t}"
        if self.kind == PI:
            return f"Pi{self.t}"
        if self.kind == QF:
            return "quantifier-free"
        return "other"


def classify(phi: Formula, strict: bool = True) -> FragmentInfo:
    """
    Classify a prenex formula

    Args:
        phi (Formula): Prenex formula (the matrix may use any connectives)
        strict (bool, optional): Raise NotPrenex on non-prenex input instead of
            returning kind ``other``. Defaults to True.

    Returns:
        FragmentInfo: Class, rank, block lengths and counts
    """
    prefix, matrix = split_prefix(phi)
    arity = max(relation_symbols(phi).values(), default=0)
    var_count = len(variables(phi))
    if not is_quantifier_free(matrix):
        if strict:
            raise NotPrenex("classification needs a prenex formula")
        return FragmentInfo(OTHER, 0, quantifier_rank(phi), arity, var_count, ())
    blocks = blocks_of(prefix)
    lengths = tuple(len(vs) for _, vs in blocks)
    if not blocks:
        return FragmentInfo(QF, 0, 0, arity, var_count, ())
    kind = SIGMA if blocks[0][0] is Exists else PI
    return FragmentInfo(kind, len(blocks), len(prefix), arity, var_count, lengths)
