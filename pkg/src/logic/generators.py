"""
Seeded random formulas
"""

from __future__ import annotations

import numpy as np

from src.logic.formulas import (
    And,
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
)
from src.logic.fragments import QF, SIGMA
from src.logic.normal_forms import attach_prefix
from src.logic.propositional import BigAnd, BigOr, SmallAnd, SmallOr, literal


def random_literal(rng: np.random.Generator, vocab, names, eq_weight=0.25) -> Formula:
    if not vocab.symbols or rng.random() < eq_weight:
        a, b = (int(i) for i in rng.integers(len(names), size=2))
        lit = Eq(names[a], names[b])
    else:
        name, arity = vocab.symbols[int(rng.integers(len(vocab.symbols)))]
        lit = Atom(name, tuple(names[int(i)] for i in rng.integers(len(names), size=arity)))
    return Not(lit) if rng.random() < 0.5 else lit


def random_matrix(rng: np.random.Generator, vocab, names, depth: int) -> Formula:
    """Quantifier-free NNF formula of the given connective depth."""
    if depth <= 0 or rng.random() < 0.25:
        return random_literal(rng, vocab, names)
    kind = And if rng.random() < 0.5 else Or
    width = int(rng.integers(2, 4))
    return kind(tuple(random_matrix(rng, vocab, names, depth - 1) for _ in range(width)))


def random_formula(rng: np.random.Generator, vocab, kind=SIGMA, t=1, max_vars=3, depth=2) -> Formula:
    """
    Random prenex sentence in the requested fragment

    Args:
        rng (np.random.Generator): Source of randomness
        vocab (Vocabulary): Relation symbols to draw atoms from
        kind (str, optional): ``sigma``, ``pi`` or ``qf``. Defaults to ``sigma``.
        t (int, optional): Number of quantifier blocks. Defaults to 1.
        max_vars (int, optional): Upper bound on quantified variables. Defaults to 3.
        depth (int, optional): Connective depth of the matrix. Defaults to 2.

    Returns:
        Formula: A sentence with exactly ``t`` blocks (or none for ``qf``)
    """
    if kind == QF:
        return _closed_qf(rng, depth)
    if max_vars < t:
        raise ValueError(f"need at least {t} variables for {t} blocks")
    total = int(rng.integers(t, max_vars + 1))
    lengths = [1] * t
    for _ in range(total - t):
        lengths[int(rng.integers(t))] += 1
    names = [f"v{i}" for i in range(total)]
    first = Exists if kind == SIGMA else Forall
    other = Forall if first is Exists else Exists
    prefix = []
    start = 0
    for i, length in enumerate(lengths):
        quant = first if i % 2 == 0 else other
        prefix.extend((quant, var) for var in names[start:start + length])
        start += length
    return attach_prefix(prefix, random_matrix(rng, vocab, names, depth))


def _closed_qf(rng, depth):
    choices = [And(()), Or(())]
    if depth <= 0:
        return choices[int(rng.integers(2))]
    kind = And if rng.random() < 0.5 else Or
    return kind(tuple(_closed_qf(rng, depth - 1) for _ in range(2)))


def random_any(rng: np.random.Generator, vocab, names, depth: int) -> Formula:
    """Arbitrary formula over ``names`` using every connective and both quantifiers."""
    if depth <= 0:
        lit = random_literal(rng, vocab, names)
        return lit.body if isinstance(lit, Not) else lit
    roll = int(rng.integers(7))
    if roll == 0:
        return Not(random_any(rng, vocab, names, depth - 1))
    if roll in (1, 2):
        kind = And if roll == 1 else Or
        width = int(rng.integers(0, 4))
        return kind(tuple(random_any(rng, vocab, names, depth - 1) for _ in range(width))) \
            if width != 1 else random_any(rng, vocab, names, depth - 1)
    if roll == 3:
        return Implies(random_any(rng, vocab, names, depth - 1), random_any(rng, vocab, names, depth - 1))
    if roll == 4:
        return Iff(random_any(rng, vocab, names, depth - 1), random_any(rng, vocab, names, depth - 1))
    var = names[int(rng.integers(len(names)))]
    quant = Exists if roll == 5 else Forall
    return quant(var, random_any(rng, vocab, names, depth - 1))



def random_prop(rng: np.random.Generator, names, t=1, fanout=3, width=3, depth=1):
    """
    Random C_t formula: t levels of alternating big connectives below a big
    conjunction, bottom small formulas of the given depth

    Args:
        rng (np.random.Generator): Source of randomness
        names (Sequence[str]): Propositional variables
        t (int, optional): Number of big levels. Defaults to 1.
        fanout (int, optional): Largest number of children of a big node
        width (int, optional): Largest number of children of a small node
        depth (int, optional): Depth of the small formulas

    Returns:
        PropFormula: Formula of class C_t
    """
    def small(d):
        if d <= 0:
            return literal(names[int(rng.integers(len(names)))], bool(rng.random() < 0.5))
        kind = SmallOr if rng.random() < 0.5 else SmallAnd
        return kind(tuple(small(d - 1) for _ in range(int(rng.integers(1, width + 1)))))

    def big(level, conjunctive):
        kind = BigAnd if conjunctive else BigOr
        count = int(rng.integers(1, fanout + 1))
        if level == 1:
            return kind(tuple(small(depth) for _ in range(count)))
        return kind(tuple(big(level - 1, not conjunctive) for _ in range(count)))

    return big(t, True)
