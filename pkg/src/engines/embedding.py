"""
Embeddings through the canonical query and color coding
"""

from __future__ import annotations

import logging

from src.engines.hashing import DETERMINISTIC
from src.engines.sigma1 import Sigma1Result, mc_sigma1_neq_color_coding
from src.logic.canonical import canonical_query, element_variable
from src.oracles.checkers import is_embedding
from src.structures.structure import same_vocabulary

logger = logging.getLogger(__name__)


def solve_emb(target, pattern, mode=DETERMINISTIC, seed=0, epsilon=1e-6, limit=None):
    """
    Find an embedding of ``pattern`` (B) into ``target`` (A)

    B embeds into A exactly when A satisfies the canonical query of B with
    all its inequalities; that sentence is decided by color coding and the
    map is read off the accepted assignment.

    Args:
        target (Structure): A
        pattern (Structure): B, same vocabulary
        mode (str, optional): Hash family mode
        seed (int, optional): Seed of randomized families
        epsilon (float, optional): Miss probability of randomized families
        limit (int, optional): Guard on DP table sizes

    Returns:
        dict | None: Injective map from elements of B to elements of A
    """
    h, _ = embed_with_stats(target, pattern, mode, seed, epsilon, limit)
    return h


def embed_with_stats(target, pattern, mode=DETERMINISTIC, seed=0, epsilon=1e-6, limit=None):
    """solve_emb, also returning the Sigma1Result with trial count and error bound."""
    same_vocabulary(target, pattern)
    if pattern.n > target.n:
        return None, Sigma1Result(False)
    phi, _ = canonical_query(pattern)
    result = mc_sigma1_neq_color_coding(target, phi, mode=mode, seed=seed, epsilon=epsilon, limit=limit)
    if not result.holds:
        return None, result
    h = {b: result.witness.get(element_variable(b), 0) for b in pattern.universe}
    if not is_embedding(target, pattern, h):
        raise AssertionError(f"color coding produced a non-embedding {h}")
    logger.debug(f"Embedding found after {result.trials} hash functions")
    return h, result
