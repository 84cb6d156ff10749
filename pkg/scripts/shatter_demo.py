#!/usr/bin/env python3
"""Desk-scale shattering demonstrations.

Runs the full labeling census on log-prime inputs (every labeling gets a
verified weight witness), prints the pairwise L1 distance matrix of the
doubling weight family under Uniform[0, 2pi] (all pairs sit at 1/2, so no
finite cover at radius < 1/2 exists), and maps which selections of the two
level-1 ternary-construction intervals an order class can realize.

Usage: python scripts/shatter_demo.py [--points 4] [--w-max 1e5]
"""

import argparse
import math

from paclab.concepts import SontagConcept, cantor_shatter_search, l1_distance
from paclab.measures import UniformMeasure
from paclab.sontag import rationally_independent_points, shatter_census


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--points", type=int, default=4)
    parser.add_argument("--w-max", type=float, default=1e5)
    args = parser.parse_args()

    points = rationally_independent_points(args.points)
    census = shatter_census(points, args.w_max)
    print(f"census on logs of the first {args.points} primes, "
          f"w_max={args.w_max:g}: {census.realized}/{census.total} labelings")
    widest = max(census.entries, key=lambda e: e.witness_w or 0.0)
    print(f"  hardest labeling {widest.labels} at w = {widest.witness_w:.4f}")

    weights = [2.0 * 2 ** i for i in range(6)]
    uniform = UniformMeasure(0.0, 2.0 * math.pi)
    print("\npairwise L1 distances, weights 2,4,...,64 under Uniform[0, 2pi]:")
    header = "      " + " ".join(f"{w:>7.0f}" for w in weights)
    print(header)
    for wi in weights:
        row = [l1_distance(SontagConcept(wi), SontagConcept(wj), uniform)
               for wj in weights]
        print(f"{wi:>5.0f} " + " ".join(f"{d:>7.4f}" for d in row))

    print("\nlevel-1 ternary interval selections vs order classes:")
    print(f"{'order':>6} {'{}':>12} {'{1}':>12} {'{2}':>12} {'{1,2}':>12}")
    for order in (3, 5, 9, 16, 25, 36, 49, 64):
        cells = []
        for selected in ([], [1], [2], [1, 2]):
            rep = cantor_shatter_search(1, order, selected)
            cells.append(rep.status)
        print(f"{order:>6} " + " ".join(f"{c:>12}" for c in cells))


if __name__ == "__main__":
    main()
