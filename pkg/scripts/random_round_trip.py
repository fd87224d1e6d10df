"""Identify random plants from generated data and report how many round trips succeed.

Usage: python scripts/random_round_trip.py [--count 50] [--seed 0] [--max-n 3]
"""

import argparse
import random
import time

from bcnident import Plant, build_o1_test, equivalent, gen_case
from bcnident.harness import random_o1_bcn, random_observable_bn
from bcnident.ident import identify_bcn_o1_multi, identify_bcn_o1_single, identify_bn


def round_trip(sys, result):
    return result.complete and equivalent(sys, result.system()) is not None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=3)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tally = {"bn": 0, "bcn single sample": 0, "bcn many samples": 0}
    start = time.perf_counter()
    for _ in range(args.count):
        n = rng.randint(2, args.max_n)
        sys = random_observable_bn(rng, n)
        tally["bn"] += round_trip(sys, identify_bn(gen_case(Plant(sys), 2).samples))

        sys = random_o1_bcn(rng, n, rng.randint(1, 2))
        test = build_o1_test(sys)
        log = gen_case(Plant(sys), 3, test=test, x0=rng.randint(1, 2**n))
        tally["bcn single sample"] += round_trip(sys, identify_bcn_o1_single(log.samples, test, log.cover))
        log = gen_case(Plant(sys), 4, test=test)
        tally["bcn many samples"] += round_trip(sys, identify_bcn_o1_multi(log.samples, test))
    for kind, ok in tally.items():
        print(f"{kind}: {ok}/{args.count}")
    print(f"elapsed: {time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()
