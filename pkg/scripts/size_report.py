#!/usr/bin/env python3
"""Observed size statistics for the constructions over a seeded corpus.

Reports, per machine size, the largest reachable summary counts and forest
sizes of the two-way-to-register-machine conversion, and the state counts
along the full deterministic-to-reversible pipeline, next to their proven
bounds.  The asymptotic formulas are not reproducible as equalities at desk
scale; this script logs the observed maxima instead.
"""

import argparse
from collections import defaultdict

from omegatrans.buchi import dbt_to_rbt
from omegatrans.forests import two_way_to_sst
from omegatrans.generate import generate_one_way, generate_two_way
from omegatrans.oneway import one_way_to_reversible


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=100)
    parser.add_argument("--max-n", type=int, default=3)
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--ell", type=int, default=2)
    args = parser.parse_args()

    print("== one-way to reversible ==")
    by_n = defaultdict(int)
    for seed in range(args.seeds):
        n = 2 + seed % args.max_n
        machine = generate_one_way(seed, n=n, k=args.k, ell=args.ell)
        rev = one_way_to_reversible(machine)
        by_n[n] = max(by_n[n], len(rev.states))
    for n in sorted(by_n):
        print(f"  n={n}: max reachable states {by_n[n]}  (bound 4n^2 = {4*n*n})")

    print("== two-way to register machine ==")
    stats = defaultdict(lambda: [0, 0, 0])
    for seed in range(args.seeds):
        n = 2 + seed % (args.max_n - 1) if args.max_n > 2 else 2
        machine = generate_two_way(seed, n=n, k=args.k, ell=args.ell)
        details = {}
        two_way_to_sst(machine, details=details)
        entry = stats[n]
        entry[0] = max(entry[0], details["summary_count"])
        entry[1] = max(entry[1], details["max_forest_nodes"])
        entry[2] = max(entry[2], details["max_forest_edges"])
    for n in sorted(stats):
        summaries, nodes, edges = stats[n]
        bound = n * (args.ell**args.k) ** (n - 1) * (2 * n - 1) ** max(2 * n - 3, 0)
        print(
            f"  n={n}: max summaries {summaries} (bound {bound}), "
            f"max forest nodes {nodes}, edges {edges} (bound {2*n-2})"
        )

    print("== full pipeline ==")
    by_n = defaultdict(int)
    for seed in range(args.seeds):
        n = 2 + seed % (args.max_n - 1) if args.max_n > 2 else 2
        machine = generate_two_way(seed, n=n, k=args.k, ell=args.ell)
        rev = dbt_to_rbt(machine)
        by_n[n] = max(by_n[n], len(rev.states))
    for n in sorted(by_n):
        print(f"  n={n}: max reversible states {by_n[n]}")


if __name__ == "__main__":
    main()
