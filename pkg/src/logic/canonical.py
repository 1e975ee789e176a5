"""
Canonical conjunctive queries of structures
"""

from __future__ import annotations

from src.logic.formulas import Atom, conj, exists, pairwise_distinct


def element_variable(i: int) -> str:
    return f"x{i}"


def canonical_query(structure):
    """
    The sentences describing ``structure`` up to embedding and homomorphism

    ``phi_B`` says there are pairwise distinct ``x0..x(n-1)`` carrying every
    tuple of B; ``phi_B_neq`` is the same without the inequalities.

    Args:
        structure (Structure): The pattern B

    Returns:
        tuple: ``(phi_B, phi_B_neq)``
    """
    names = [element_variable(i) for i in structure.universe]
    atoms = []
    for symbol in structure.vocab.names:
        for tup in sorted(structure.rel(symbol)):
            atoms.append(Atom(symbol, tuple(names[e] for e in tup)))
    phi = exists(names, conj(pairwise_distinct(names) + atoms))
    phi_neq = exists(names, conj(atoms))
    return phi, phi_neq
