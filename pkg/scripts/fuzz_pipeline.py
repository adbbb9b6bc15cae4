#!/usr/bin/env python3
"""Long-running randomized check of the full conversion chain.

Generates seeded two-way machines, pushes each through the register-machine
conversion and back to a reversible two-way transducer, and compares against
the source on a lasso batch.  Exits nonzero on the first disagreement.
"""

import argparse
import sys

from omegatrans.buchi import dbt_to_rbt
from omegatrans.evaluate import equiv_on_lassos
from omegatrans.generate import generate_two_way
from omegatrans.lasso import enumerate_lassos
from omegatrans.machines import validate_reversible


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=500)
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--ell", type=int, default=2)
    parser.add_argument("--u-max", type=int, default=2)
    parser.add_argument("--v-max", type=int, default=3)
    args = parser.parse_args()

    lassos = enumerate_lassos(("a", "b"), args.u_max, args.v_max)
    inconclusive = 0
    for seed in range(args.seeds):
        machine = generate_two_way(seed, n=args.n, k=args.k, ell=args.ell)
        reversible = dbt_to_rbt(machine)
        if not validate_reversible(reversible):
            print(f"seed {seed}: output is not reversible")
            return 1
        report = equiv_on_lassos(machine, reversible, lassos)
        if report.disagreements:
            lasso, reason = report.disagreements[0]
            print(f"seed {seed}: {lasso} {reason}")
            return 1
        inconclusive += len(report.inconclusive)
        if seed and seed % 100 == 0:
            print(f"...{seed} machines checked")
    print(f"all {args.seeds} machines agree ({inconclusive} inconclusive lassos)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
