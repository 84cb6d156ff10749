#!/usr/bin/env python3
"""Contrast uniform-convergence behaviour across input distributions.

Adversarial mode fits, per trial, a weight-family concept labeling the whole
sample 1; under the uniform distribution on [0, 2pi] the fitted concept has
true mass near 1/2, so the deviation |1 - E_mu| stays near 1/2 no matter how
large the sample gets.  Census mode over all labelings of a 10-atom measure
shows the opposite: the supremum deviation dies off as n grows.

Usage: python scripts/gc_contrast.py [--trials 200] [--seed 42]
"""

import argparse
import math

from paclab.concepts import AtomLabeling, SontagFamily
from paclab.learner import gc_deviation
from paclab.measures import AtomicMeasure, UniformMeasure


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    uniform = UniformMeasure(0.0, 2.0 * math.pi)
    family = SontagFamily(10 ** 6)
    # Witness density for the all-ones labeling is about 2**-n per
    # elementary interval, so n much beyond 16 exhausts the weight range.
    print("adversarial deviation under Uniform[0, 2pi] (weight family):")
    print(f"{'n':>6} {'median':>8} {'mean':>8} {'max':>8} {'failed':>7}")
    for n in (4, 8, 16):
        res = gc_deviation(family, uniform, n=n, trials=args.trials,
                           seed=args.seed, mode="adversarial")
        print(f"{n:>6} {res.median:>8.4f} {res.mean:>8.4f} {res.max:>8.4f} "
              f"{res.failed_trials:>7}")

    atoms = AtomicMeasure.uniform_on([float(i) for i in range(10)])
    labelings = [AtomLabeling.for_measure(atoms,
                                          [(i >> j) & 1 for j in range(10)])
                 for i in range(1024)]
    print("\ncensus deviation over all 2^10 labelings of a 10-atom measure:")
    print(f"{'n':>6} {'median':>8} {'mean':>8} {'max':>8}")
    for n in (10, 100, 1000, 10000):
        res = gc_deviation(labelings, atoms, n=n, trials=20, seed=args.seed,
                           mode="census")
        print(f"{n:>6} {res.median:>8.4f} {res.mean:>8.4f} {res.max:>8.4f}")


if __name__ == "__main__":
    main()
