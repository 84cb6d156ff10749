#!/usr/bin/env python3
"""Bracket the measured ERM sample complexity between the theoretical bounds.

Builds the default constructed instance (eps_k = 5**-k, quadratic rate,
two levels), prints the packing/covering bracket per accuracy level, then
estimates the empirical sample complexity by Monte Carlo and checks it lands
inside the bracket.  The eps_2/eps_1 ratio shows the superlinear growth the
quadratic rate forces.

Usage: python scripts/complexity_bracket.py [--trials 400] [--seed 777]
                                            [--degree 2] [--levels 2]
"""

import argparse
import time
from fractions import Fraction

from paclab.construction import (ComplexitySchedule, RateFunction,
                                 build_measure, theoretical_profile)
from paclab.learner import estimate_sample_complexity


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=400)
    parser.add_argument("--seed", type=int, default=777)
    parser.add_argument("--delta", type=float, default=0.1)
    parser.add_argument("--degree", type=int, default=2)
    parser.add_argument("--levels", type=int, default=2)
    args = parser.parse_args()

    eps = tuple(Fraction(1, 5) ** k for k in range(1, args.levels + 2))
    schedule = ComplexitySchedule(eps=eps, f=RateFunction.poly(args.degree),
                                  K=args.levels)
    instance = build_measure(schedule)
    profile = theoretical_profile(instance, args.delta)

    print(f"instance: {args.levels} levels, rate x^{args.degree}, "
          f"{len(instance.measure())} atoms, residual {instance.residual_mass}")
    print(f"{'k':>3} {'eps':>10} {'f_k':>8} {'lower':>8} {'n_hat':>8} "
          f"{'upper':>10} {'fail@n_hat':>11} {'95% CI':>22}")

    hats = {}
    t0 = time.perf_counter()
    for row in profile.rows:
        est = estimate_sample_complexity(instance, row.eps, args.delta,
                                         trials=args.trials, seed=args.seed)
        hats[row.k] = est.n_hat
        in_bracket = row.lower <= est.n_hat <= row.upper
        ci = f"[{est.confidence_interval[0]:.3f}, {est.confidence_interval[1]:.3f}]"
        flag = "" if in_bracket else "  <-- OUT OF BRACKET"
        print(f"{row.k:>3} {row.eps:>10.5f} {row.f_k:>8} {row.lower:>8} "
              f"{est.n_hat:>8} {row.upper:>10} {est.failure_rate_at_n_hat:>11.4f} "
              f"{ci:>22}{flag}")

    ks = sorted(hats)
    for a, b in zip(ks, ks[1:]):
        print(f"growth n_hat(eps_{b}) / n_hat(eps_{a}) = {hats[b] / hats[a]:.1f}")
    print(f"done in {time.perf_counter() - t0:.1f}s "
          f"(trials={args.trials}, seed={args.seed})")


if __name__ == "__main__":
    main()
