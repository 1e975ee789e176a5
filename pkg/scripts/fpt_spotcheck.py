#!/usr/bin/env python3
"""
Time the tree-decomposition DP on a long path pattern in a large random graph
"""

import argparse
import os
import sys
import time

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.engines.hom_dp import solve_hom  # noqa: E402
from src.oracles.brute import DEFAULT_LIMIT, brute_hom  # noqa: E402
from src.oracles.checkers import is_homomorphism  # noqa: E402
from src.structures.generators import make_rng, random_graph  # noqa: E402
from src.structures.graphs import path_graph  # noqa: E402
from src.utils.errors import TooLarge  # noqa: E402


def spotcheck(k, n, p, seed, budget):
    """
    Solve HOM(P_k, G(n, p)) with the DP and confirm brute force is guarded off

    Args:
        k (int): Vertices of the path pattern
        n (int): Vertices of the random target
        p (float): Edge probability of the target
        seed (int): Random seed
        budget (float): Allowed seconds for the DP

    Returns:
        bool: True if the DP answered within budget and brute force was refused
    """
    target = random_graph(make_rng(seed), n, p)
    pattern = path_graph(k)
    print(f"Target: {n} vertices, {len(target.rel('E')) // 2} edges; pattern: path on {k} vertices")

    start = time.perf_counter()
    h = solve_hom(target, pattern)
    elapsed = time.perf_counter() - start
    found = h is not None
    print(f"DP answered {found} in {elapsed:.3f} s")
    if found and not is_homomorphism(target, pattern, h):
        print("Error: the DP returned a map that is not a homomorphism")
        return False

    try:
        brute_hom(target, pattern)
        print(f"Warning: brute force was not guarded off (limit {DEFAULT_LIMIT})")
        guarded = False
    except TooLarge as e:
        print(f"Brute force refused: {e}")
        guarded = True

    return elapsed < budget and guarded


def main():
    """
    Main function
    """
    parser = argparse.ArgumentParser(description='FPT spot check: path homomorphisms into a large graph')
    parser.add_argument('--k', type=int, default=10, help='Vertices of the path pattern')
    parser.add_argument('--n', type=int, default=300, help='Vertices of the target graph')
    parser.add_argument('--p', type=float, default=0.02, help='Edge probability of the target graph')
    parser.add_argument('--seed', type=int, default=0, help='Random seed')
    parser.add_argument('--budget', type=float, default=5.0, help='Allowed seconds')

    args = parser.parse_args()

    if spotcheck(args.k, args.n, args.p, args.seed, args.budget):
        print("\nSpot check passed")
        sys.exit(0)
    else:
        print("\nSpot check failed")
        sys.exit(1)


if __name__ == "__main__":
    main()
