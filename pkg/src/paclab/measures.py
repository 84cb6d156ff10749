"""Probability measures on the real line with seeded sampling and indicator
expectations.

Concrete kinds: purely atomic, uniform on an interval, the ternary-set Haar
measure, a pushforward of a base measure through a partition map, and a
product lift (base x uniform).  Expectations of concept indicators are exact
on atomic measures, exact for interval-reducible concepts on the uniform and
ternary measures, and fall back to grid / Monte-Carlo integration otherwise.

All measure values are immutable after construction.  Sampling takes an
explicit seed (anything ``numpy.random.default_rng`` accepts), so parallel
callers derive independent streams by seed offsetting.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .intervals import canonicalize, clip, total_length

MASS_TOLERANCE = 1e-12
DEFAULT_GRID_CELLS = 100_000
MIN_GRID_CELLS = 1_000
DEFAULT_TERNARY_DEPTH = 40
_EXACT_MASS_DEPTH = 60


class ResolutionWarning(UserWarning):
    """Grid integration was requested with fewer cells than the safe minimum."""


def _rng(seed):
    return np.random.default_rng(seed)


def _contains_many(concept, xs):
    f = getattr(concept, "contains_many", None)
    if f is not None:
        return np.asarray(f(xs), dtype=bool)
    return np.fromiter((bool(concept.contains(float(x))) for x in xs),
                       dtype=bool, count=len(xs))


def _intervals_of(concept, lo, hi):
    f = getattr(concept, "as_intervals_ae", None)
    if f is None:
        return None
    return f(lo, hi)


@dataclass(frozen=True)
class Atom:
    """A point mass: location on the real line, mass in (0, 1]."""

    location: float
    mass: float

    def __post_init__(self):
        if not (0.0 < self.mass <= 1.0):
            raise ValueError(f"atom mass must lie in (0, 1], got {self.mass}")
        if not math.isfinite(self.location):
            raise ValueError("atom location must be finite")


class AtomicMeasure:
    """A purely atomic probability measure: finitely many point masses.

    Atoms are stored in strictly increasing location order; masses must sum
    to 1 within ``MASS_TOLERANCE``.
    """

    kind = "atomic"

    def __init__(self, atoms):
        atoms = tuple(sorted((a if isinstance(a, Atom) else Atom(*a) for a in atoms),
                             key=lambda a: a.location))
        if not atoms:
            raise ValueError("an atomic measure needs at least one atom")
        for prev, cur in zip(atoms, atoms[1:]):
            if cur.location <= prev.location:
                raise ValueError("atom locations must be pairwise distinct")
        total = math.fsum(a.mass for a in atoms)
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise ValueError(f"atom masses sum to {total!r}, expected 1")
        self.atoms = atoms
        self.locations = np.array([a.location for a in atoms])
        self.masses = np.array([a.mass for a in atoms])

    @classmethod
    def from_pairs(cls, pairs):
        return cls([Atom(float(loc), float(mass)) for loc, mass in pairs])

    @classmethod
    def uniform_on(cls, locations):
        locations = list(locations)
        n = len(locations)
        return cls.from_pairs((loc, 1.0 / n) for loc in locations)

    def __len__(self):
        return len(self.atoms)

    def __repr__(self):
        return f"AtomicMeasure({len(self.atoms)} atoms)"

    def sample(self, n, seed=0):
        rng = _rng(seed)
        idx = rng.choice(len(self.atoms), size=int(n), p=self.masses)
        return self.locations[idx]

    def expect_indicator(self, concept, **_):
        # Sequential sum in atom order: the exactness contract is equality
        # with a brute-force loop, not just closeness.
        total = 0.0
        for atom in self.atoms:
            if concept.contains(atom.location):
                total += atom.mass
        return total

    def to_json(self):
        return {"kind": "atomic",
                "atoms": [[a.location, a.mass] for a in self.atoms]}


class UniformMeasure:
    """The uniform (normalized Lebesgue) measure on an interval [a, b]."""

    kind = "uniform"

    def __init__(self, a, b):
        a, b = float(a), float(b)
        if not b - a > 0:
            raise ValueError(f"need a < b, got [{a}, {b}]")
        self.a = a
        self.b = b

    def __repr__(self):
        return f"UniformMeasure({self.a}, {self.b})"

    def sample(self, n, seed=0):
        return _rng(seed).uniform(self.a, self.b, size=int(n))

    def expect_indicator(self, concept, cells=DEFAULT_GRID_CELLS, **_):
        ivs = _intervals_of(concept, self.a, self.b)
        if ivs is not None:
            inside = clip(canonicalize(ivs), self.a, self.b)
            return float(total_length(inside)) / (self.b - self.a)
        cells = int(cells)
        if cells < MIN_GRID_CELLS:
            warnings.warn(
                f"grid integration with {cells} cells (< {MIN_GRID_CELLS}); "
                "the result may be too coarse", ResolutionWarning, stacklevel=2)
        edges = np.linspace(self.a, self.b, cells + 1)
        mids = 0.5 * (edges[:-1] + edges[1:])
        return float(np.mean(_contains_many(concept, mids)))

    def to_json(self):
        return {"kind": "uniform", "a": self.a, "b": self.b}


def cantor_level_intervals(n):
    """The 2**n closed intervals left after n middle-third deletions.

    Returned in increasing order as (lo, hi) Fraction pairs, each of length
    3**-n and each carrying mass 2**-n under the Haar measure.
    """
    n = int(n)
    if n < 0:
        raise ValueError("level must be >= 0")
    den = 3 ** n
    out = []
    for m in range(2 ** n):
        num = 0
        for i in range(n):
            bit = (m >> (n - 1 - i)) & 1
            num += 2 * bit * 3 ** (n - 1 - i)
        out.append((Fraction(num, den), Fraction(num + 1, den)))
    return out


def cantor_interval_mass(intervals):
    """Haar mass of a union of intervals, by recursive cell subdivision.

    Exact Fraction arithmetic throughout; cells still split at depth
    ``_EXACT_MASS_DEPTH`` contribute their midpoint value, leaving an error
    below 1e-17 per interval endpoint.
    """
    ivs = canonicalize([(Fraction(lo), Fraction(hi)) for lo, hi in intervals])
    ivs = clip(ivs, Fraction(0), Fraction(1))
    if not ivs:
        return 0.0
    starts = [iv[0] for iv in ivs]

    def relation(cl, ch):
        # Returns "in", "out" or "split" for the cell [cl, ch].  Overlaps of
        # zero length are "out": single points carry no Haar mass.
        i = bisect.bisect_right(starts, cl) - 1
        if i >= 0 and ivs[i][1] >= ch:
            return "in"
        j = max(i, 0)
        while j < len(ivs) and ivs[j][0] < ch:
            if ivs[j][1] > cl:
                return "split"
            j += 1
        return "out"

    committed = Fraction(0)
    halves = Fraction(0)
    stack = [(Fraction(0), Fraction(1), Fraction(1), 0)]
    while stack:
        cl, ch, mass, depth = stack.pop()
        rel = relation(cl, ch)
        if rel == "out":
            continue
        if rel == "in":
            committed += mass
            continue
        if depth >= _EXACT_MASS_DEPTH:
            halves += mass / 2
            continue
        third = (ch - cl) / 3
        stack.append((cl, cl + third, mass / 2, depth + 1))
        stack.append((ch - third, ch, mass / 2, depth + 1))
    return float(committed + halves)


class CantorMeasure:
    """The Haar measure on the middle-thirds set, sampled by ternary digits.

    Sampling draws ``depth`` i.i.d. digits from {0, 2} and returns
    sum(digit_i * 3**-i); the default depth 40 puts the truncation error
    below double-precision granularity.
    """

    kind = "cantor"

    def __init__(self, depth=DEFAULT_TERNARY_DEPTH):
        depth = int(depth)
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.depth = depth

    def __repr__(self):
        return f"CantorMeasure(depth={self.depth})"

    def sample(self, n, seed=0):
        rng = _rng(seed)
        digits = 2.0 * rng.integers(0, 2, size=(int(n), self.depth))
        vals = np.zeros(int(n))
        for i in range(self.depth - 1, -1, -1):
            vals = (vals + digits[:, i]) / 3.0
        return vals

    def expect_indicator(self, concept, mc_samples=200_000, seed=0, **_):
        ivs = _intervals_of(concept, 0.0, 1.0)
        if ivs is not None:
            return cantor_interval_mass(ivs)
        xs = self.sample(mc_samples, seed=seed)
        return float(np.mean(_contains_many(concept, xs)))

    def to_json(self):
        return {"kind": "cantor", "depth": self.depth}


@dataclass(frozen=True)
class IdentityMap:
    """The identity mapping descriptor for pushforwards."""

    def apply(self, x):
        return x

    def apply_many(self, xs):
        return np.asarray(xs, dtype=float)

    def to_json(self):
        return {"kind": "identity"}


@dataclass(frozen=True)
class PartitionMap:
    """A piecewise-constant map given by cells [lo, hi) -> target value.

    Cells are half-open except the last, which includes its right endpoint.
    Points outside every cell are a hard error when sampled through.
    """

    cells: tuple

    def __post_init__(self):
        cells = tuple((float(lo), float(hi), float(t)) for lo, hi, t in self.cells)
        if not cells:
            raise ValueError("a partition map needs at least one cell")
        cells = tuple(sorted(cells))
        for (lo, hi, _), (lo2, _, _) in zip(cells, cells[1:]):
            if lo2 < hi:
                raise ValueError("partition cells must not overlap")
        for lo, hi, _ in cells:
            if not hi > lo:
                raise ValueError("partition cells must have positive width")
        object.__setattr__(self, "cells", cells)

    def _locate(self, x):
        for i, (lo, hi, _) in enumerate(self.cells):
            last = i == len(self.cells) - 1
            if lo <= x < hi or (last and x == hi):
                return i
        return -1

    def apply(self, x):
        i = self._locate(x)
        if i < 0:
            raise ValueError(f"point {x!r} is outside the partition map")
        return self.cells[i][2]

    def apply_many(self, xs):
        xs = np.asarray(xs, dtype=float)
        los = np.array([c[0] for c in self.cells])
        his = np.array([c[1] for c in self.cells])
        tgt = np.array([c[2] for c in self.cells])
        idx = np.searchsorted(los, xs, side="right") - 1
        ok = idx >= 0
        inside = np.zeros_like(ok)
        inside[ok] = xs[ok] < his[idx[ok]]
        at_last_edge = (idx == len(self.cells) - 1) & (xs == his[-1])
        good = ok & (inside | at_last_edge)
        if not np.all(good):
            bad = xs[~good][0]
            raise ValueError(f"point {bad!r} is outside the partition map")
        return tgt[idx]

    def preimage_intervals(self, concept):
        """Cells whose target lies in the concept, as canonical intervals."""
        hit = [(lo, hi) for lo, hi, t in self.cells if concept.contains(t)]
        return canonicalize(hit)

    def to_json(self):
        return {"kind": "partition", "cells": [list(c) for c in self.cells]}


class _ComposedConcept:
    """Indicator of a concept pulled back through a mapping descriptor."""

    def __init__(self, mapping, concept):
        self.mapping = mapping
        self.concept = concept

    def contains(self, x):
        return self.concept.contains(self.mapping.apply(x))

    def contains_many(self, xs):
        return _contains_many(self.concept, self.mapping.apply_many(xs))

    def as_intervals_ae(self, lo, hi):
        if isinstance(self.mapping, IdentityMap):
            return _intervals_of(self.concept, lo, hi)
        if isinstance(self.mapping, PartitionMap):
            return self.mapping.preimage_intervals(self.concept)
        return None


class PushforwardMeasure:
    """The image of a base measure under a total mapping descriptor.

    Sampling composes the map after base sampling; indicator expectations
    delegate to the base through the preimage.
    """

    kind = "pushforward"

    def __init__(self, base, mapping):
        self.base = base
        self.mapping = mapping

    def __repr__(self):
        return f"PushforwardMeasure({self.base!r})"

    def sample(self, n, seed=0):
        return self.mapping.apply_many(self.base.sample(n, seed=seed))

    def expect_indicator(self, concept, **kw):
        return self.base.expect_indicator(_ComposedConcept(self.mapping, concept), **kw)

    def to_json(self):
        return {"kind": "pushforward", "base": self.base.to_json(),
                "map": self.mapping.to_json()}


class ProductMeasure:
    """Product lift of a base measure with a uniform measure.

    The sampler returns (base, uniform) pairs.  Concepts are read as
    cylinders over the first coordinate, so indicator expectations delegate
    to the base measure.
    """

    kind = "product"

    def __init__(self, base, uniform):
        if not isinstance(uniform, UniformMeasure):
            raise TypeError("second factor must be a UniformMeasure")
        self.base = base
        self.uniform = uniform

    def sample(self, n, seed=0):
        rng = _rng(seed)
        xs = self.base.sample(n, seed=rng)
        us = rng.uniform(self.uniform.a, self.uniform.b, size=int(n))
        return np.column_stack([xs, us])

    def expect_indicator(self, concept, **kw):
        return self.base.expect_indicator(concept, **kw)

    def to_json(self):
        return {"kind": "product", "base": self.base.to_json(),
                "uniform": self.uniform.to_json()}


def sample(measure, seed, n):
    """n i.i.d. draws from the measure, deterministic for a fixed seed."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return measure.sample(n, seed=seed)


def expect_indicator(measure, concept, **kw):
    """Expectation of the concept's indicator under the measure.

    Exact for atomic measures (mass sum over member atoms) and for
    interval-reducible concepts under the uniform and ternary measures;
    grid or Monte-Carlo integration otherwise.
    """
    return measure.expect_indicator(concept, **kw)


def pushforward(base, mapping):
    """Image measure of ``base`` under ``mapping`` (identity or partition)."""
    return PushforwardMeasure(base, mapping)


def measure_from_json(doc):
    kind = doc.get("kind")
    if kind == "atomic":
        return AtomicMeasure.from_pairs(doc["atoms"])
    if kind == "uniform":
        return UniformMeasure(doc["a"], doc["b"])
    if kind == "cantor":
        return CantorMeasure(doc.get("depth", DEFAULT_TERNARY_DEPTH))
    if kind == "pushforward":
        return PushforwardMeasure(measure_from_json(doc["base"]),
                                  _map_from_json(doc["map"]))
    if kind == "product":
        return ProductMeasure(measure_from_json(doc["base"]),
                              measure_from_json(doc["uniform"]))
    raise ValueError(f"unknown measure kind {kind!r}")


def _map_from_json(doc):
    kind = doc.get("kind")
    if kind == "identity":
        return IdentityMap()
    if kind == "partition":
        return PartitionMap(tuple(tuple(c) for c in doc["cells"]))
    raise ValueError(f"unknown map kind {kind!r}")
