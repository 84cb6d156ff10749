"""Minimal-empirical-risk learning over atomic instances.

The learner sees labeled i.i.d. draws from an atomic measure and outputs a
per-atom majority vote (ties and unseen atoms default to 0).  Over a family
shattering the atom universe, any labeling consistent with the per-atom
majorities minimizes empirical risk, so the vote IS an ERM hypothesis and
experiments never enumerate the exponentially-large cover.

``estimate_sample_complexity`` measures the smallest sample size whose
failure rate (true error above eps) drops to delta, by doubling then
bisection over Monte-Carlo episode batches.  ``gc_deviation`` estimates the
uniform deviation sup |E_mu - E_emp| either by enumerating a finite
sub-class (census mode) or by adversarially fitting the all-ones labeling
of each drawn sample (the non-convergence witness experiment).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import sontag
from .concepts import (AtomLabeling, OrderIntervalFamily, SontagFamily,
                       isolate_points)
from .construction import ConstructedInstance, LabelingFamily
from .measures import AtomicMeasure, _contains_many, expect_indicator

DEFAULT_N_CAP = 10 ** 6
ADVERSARIAL_MIN_WEIGHT = 32.0
MAX_CENSUS_BITS = 20
_WILSON_Z = 1.959963984540054  # two-sided 95%


@dataclass(frozen=True)
class LabeledSample:
    """Points paired with the target concept's labels at those points."""

    points: tuple
    labels: tuple

    def __post_init__(self):
        if len(self.points) != len(self.labels):
            raise ValueError("points and labels must have equal length")


def erm_learn(sample, universe):
    """Per-atom majority vote over the sample; ties and unseen atoms get 0.

    Every sample point must be an atom location of the universe; anything
    off the grid is a hard error.  On a label-consistent sample the output
    has empirical risk 0.
    """
    if not isinstance(universe, AtomicMeasure):
        raise TypeError("the learner needs an atomic universe")
    index = {a.location: i for i, a in enumerate(universe.atoms)}
    ones = [0] * len(universe.atoms)
    seen = [0] * len(universe.atoms)
    for point, label in zip(sample.points, sample.labels):
        i = index.get(float(point))
        if i is None:
            raise ValueError(f"sample point {point!r} is not an atom location")
        seen[i] += 1
        ones[i] += int(label)
    bits = tuple(1 if 2 * o > s else 0 for o, s in zip(ones, seen))
    return AtomLabeling.for_measure(universe, bits, default_bit=0)


def empirical_risk(hypothesis, sample):
    """Fraction of sample points the hypothesis mislabels."""
    if not sample.points:
        return 0.0
    wrong = sum(1 for p, lab in zip(sample.points, sample.labels)
                if int(bool(hypothesis.contains(p))) != int(lab))
    return wrong / len(sample.points)


def true_error(hypothesis, target, measure):
    """Exact L1(mu) risk: mass of atoms where hypothesis and target disagree."""
    if not isinstance(measure, AtomicMeasure):
        raise TypeError("true_error is exact only over atomic measures")
    total = 0.0
    for atom in measure.atoms:
        if bool(hypothesis.contains(atom.location)) != bool(target.contains(atom.location)):
            total += atom.mass
    return total


def wilson_interval(successes, trials, z=_WILSON_Z):
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials
                                   + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class ComplexityEstimate:
    """Measured sample complexity with its decision trail."""

    n_hat: int | None
    eps: float
    delta: float
    trials: int
    failure_rate_at_n_hat: float | None
    confidence_interval: tuple
    seed: int
    status: str  # "converged" | "cap_exceeded"
    probes: tuple = field(repr=False, default=())  # (n, failures) pairs

    def to_json(self):
        return {"n_hat": self.n_hat, "eps": self.eps, "delta": self.delta,
                "trials": self.trials,
                "failure_rate_at_n_hat": self.failure_rate_at_n_hat,
                "confidence_interval": list(self.confidence_interval),
                "seed": self.seed, "status": self.status,
                "probes": [list(p) for p in self.probes]}


def _universe_arrays(universe):
    """(masses, random-target atom count) for an instance or atomic measure.

    Targets are uniform over labelings of the level atoms; a construction
    instance keeps its residual atom fixed at 0, a plain atomic measure
    randomizes every atom.
    """
    if isinstance(universe, ConstructedInstance):
        measure = universe.measure()
        free = sum(lvl.size for lvl in universe.levels)
        return measure, free
    if isinstance(universe, AtomicMeasure):
        return universe, len(universe.atoms)
    raise TypeError("universe must be a ConstructedInstance or AtomicMeasure")


def _failure_count(measure, free_atoms, eps, trials, n, seed):
    """Episodes at sample size n: how many end with true error above eps.

    Vectorized form of draw-target / draw-sample / majority-vote / exact
    error.  With label-consistent samples the majority vote equals the
    target on seen atoms and 0 elsewhere, which the tests cross-check
    against ``erm_learn`` episode by episode.
    """
    rng = np.random.default_rng([seed, n])
    total = len(measure.atoms)
    targets = np.zeros((trials, total), dtype=bool)
    if free_atoms:
        targets[:, :free_atoms] = rng.integers(
            0, 2, size=(trials, free_atoms)).astype(bool)
    seen = np.zeros((trials, total), dtype=bool)
    if n > 0:
        idx = rng.choice(total, size=(trials, n), p=measure.masses)
        rows = np.repeat(np.arange(trials), n)
        seen[rows, idx.ravel()] = True
    errors = ((targets & ~seen) @ measure.masses)
    return int(np.sum(errors > eps))


def estimate_sample_complexity(universe, eps, delta, trials=400, seed=0,
                               n_cap=DEFAULT_N_CAP):
    """Smallest n whose Monte-Carlo failure rate is at most delta.

    Doubling finds a passing n, bisection then pins the threshold; the
    returned estimate carries the full probe trail and a Wilson 95%
    interval at the accepted n.  Identical seeds probe identical episodes
    across eps values, so estimates are monotone in eps by construction.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if trials < 100:
        raise ValueError("need at least 100 trials")
    measure, free_atoms = _universe_arrays(universe)
    probes = {}

    def failure_rate(n):
        if n not in probes:
            probes[n] = _failure_count(measure, free_atoms, eps, trials, n, seed)
        return probes[n] / trials

    def finish(n_hat, status):
        trail = tuple(sorted(probes.items()))
        if n_hat is None:
            return ComplexityEstimate(None, eps, delta, trials, None,
                                      (0.0, 1.0), seed, status, trail)
        rate = failure_rate(n_hat)
        ci = wilson_interval(probes[n_hat], trials)
        return ComplexityEstimate(n_hat, eps, delta, trials, rate, ci, seed,
                                  status, trail)

    if failure_rate(0) <= delta:
        return finish(0, "converged")
    lo, hi = 0, 1
    while failure_rate(hi) > delta:
        lo, hi = hi, hi * 2
        if hi > n_cap:
            return finish(None, "cap_exceeded")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if failure_rate(mid) <= delta:
            hi = mid
        else:
            lo = mid
    return finish(hi, "converged")


@dataclass(frozen=True)
class GcDeviationResult:
    """Per-trial uniform deviations between true and empirical means."""

    mode: str
    n: int
    trials: int
    seed: int
    deviations: tuple
    failed_trials: int

    @property
    def median(self):
        return float(np.median(self.deviations)) if self.deviations else math.nan

    @property
    def mean(self):
        return float(np.mean(self.deviations)) if self.deviations else math.nan

    @property
    def max(self):
        return float(np.max(self.deviations)) if self.deviations else math.nan

    def to_json(self):
        return {"mode": self.mode, "n": self.n, "trials": self.trials,
                "seed": self.seed, "median": self.median, "mean": self.mean,
                "max": self.max, "failed_trials": self.failed_trials,
                "deviations": list(self.deviations)}


def _atomic_census(memberships, measure, n, trials, seed):
    # Samples from an atomic measure are atom locations, so one frequency
    # vector per trial gives every concept's empirical mean at once.
    locations = measure.locations
    true_means = memberships @ measure.masses
    devs = []
    for t in range(trials):
        xs = measure.sample(n, seed=[seed, t])
        idx = np.searchsorted(locations, xs)
        counts = np.bincount(idx, minlength=len(locations)).astype(float)
        emp = memberships @ (counts / n)
        devs.append(float(np.max(np.abs(true_means - emp))))
    return devs


def _census_deviations(family, measure, n, trials, seed):
    if isinstance(family, LabelingFamily):
        if family.size > 2 ** MAX_CENSUS_BITS:
            raise ValueError("labeling family too large for census mode")
        return _atomic_census(family.membership_matrix(), measure, n, trials,
                              seed), 0
    concepts = list(family)
    if isinstance(measure, AtomicMeasure):
        rows = [[bool(c.contains(a.location)) for a in measure.atoms]
                for c in concepts]
        return _atomic_census(np.array(rows, dtype=bool), measure, n, trials,
                              seed), 0
    true_means = np.array([expect_indicator(measure, c) for c in concepts])
    devs = []
    for t in range(trials):
        xs = measure.sample(n, seed=[seed, t])
        emp = np.array([float(np.mean(_contains_many(c, xs)))
                        for c in concepts])
        devs.append(float(np.max(np.abs(true_means - emp))))
    return devs, 0


def _adversarial_deviations(family, measure, n, trials, seed, min_weight,
                            budget):
    devs = []
    failed = 0
    for t in range(trials):
        xs = measure.sample(n, seed=[seed, t])
        if isinstance(family, SontagFamily):
            res = sontag.shatter_search(xs, np.ones(n, dtype=int),
                                        family.w_max, alpha=family.alpha,
                                        w_min=min_weight, budget=budget)
            if not res.found:
                failed += 1
                continue
            concept = family.concept(res.witness_w)
        else:
            _, concept = isolate_points([float(x) for x in xs])
        # All sample points lie inside the fitted concept, so the empirical
        # mean is exactly 1.
        devs.append(abs(1.0 - expect_indicator(measure, concept)))
    return devs, failed


def gc_deviation(family, measure, n, trials=100, seed=0, mode="census",
                 min_weight=ADVERSARIAL_MIN_WEIGHT,
                 budget=sontag.DEFAULT_BUDGET):
    """Uniform-deviation statistics sup_C |E_mu(C) - E_emp(C)| at sample
    size n.

    Census mode enumerates a finite sub-class and reports the per-trial
    suprema.  Adversarial mode fits, per trial, a concept labeling the whole
    drawn sample 1 (a weight-family witness above ``min_weight``, or an
    isolating grid union for the order-interval family) and reports
    |1 - E_mu|; trials whose witness search fails are flagged, excluded,
    and counted.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if mode == "census":
        devs, failed = _census_deviations(family, measure, n, trials, seed)
    elif mode == "adversarial":
        if not isinstance(family, (SontagFamily, OrderIntervalFamily)):
            raise TypeError("adversarial mode needs the weight family or the "
                            "order-interval family")
        devs, failed = _adversarial_deviations(family, measure, n, trials,
                                               seed, min_weight, budget)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return GcDeviationResult(mode, int(n), int(trials), int(seed),
                             tuple(devs), failed)
