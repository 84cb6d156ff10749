"""Concept classes as first-class values.

A concept is a membership predicate over real inputs plus a structured
descriptor.  Families implemented here: sign-test concepts of the sigmoidal
network (one per weight), unions of closed intervals (including grid-cell
unions of a given order), per-atom labelings of an atomic measure, and
finite unions of deleted middle thirds.

Concept equality is structural (descriptor equality), never measure-a.e.
equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import sontag
from .intervals import canonicalize, clip, contains_point, intersect, total_length
from .measures import (AtomicMeasure, CantorMeasure, UniformMeasure,
                       _contains_many, cantor_interval_mass,
                       cantor_level_intervals, expect_indicator)

ENUMERATION_CAP = 10 ** 7
MAX_SHATTER_LEVEL = 4
MAX_SHATTER_ORDER = 10 ** 4


class EnumerationCapError(RuntimeError):
    """A concept-class enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class SontagConcept:
    """The output-1 region of the network at weight w: {x : cos(wx) >= 0}."""

    w: float
    alpha: float = sontag.DEFAULT_ALPHA

    def __post_init__(self):
        sontag.SontagParams(self.w, self.alpha)

    def contains(self, x):
        return bool(sontag.rho(x, self.w, self.alpha) >= 0.0)

    def contains_many(self, xs):
        return sontag.output_labels(xs, self.w, self.alpha)

    def as_intervals_ae(self, lo, hi):
        return sontag.cos_sign_intervals(self.w, lo, hi)

    def to_json(self):
        return {"kind": "sontag", "w": self.w, "alpha": self.alpha}


@dataclass(frozen=True)
class IntervalUnion:
    """A union of closed intervals, sorted with non-overlapping interiors.

    Touching endpoints are allowed and not merged, so grid structure
    survives; the set semantics are unaffected.  Fraction endpoints are kept
    exact, which matters under the singular ternary measure.
    """

    intervals: tuple

    def __post_init__(self):
        ivs = tuple((lo if isinstance(lo, Fraction) else float(lo),
                     hi if isinstance(hi, Fraction) else float(hi))
                    for lo, hi in self.intervals)
        for lo, hi in ivs:
            if hi < lo:
                raise ValueError(f"empty interval ({lo}, {hi})")
        for (_, hi), (lo2, _) in zip(ivs, ivs[1:]):
            if lo2 < hi:
                raise ValueError("intervals must be sorted with disjoint interiors")
        object.__setattr__(self, "intervals", ivs)

    def contains(self, x):
        return contains_point(self.intervals, x)

    def contains_many(self, xs):
        xs = np.asarray(xs, dtype=float)
        out = np.zeros(xs.shape, dtype=bool)
        for lo, hi in self.intervals:
            out |= (xs >= float(lo)) & (xs <= float(hi))
        return out

    def as_intervals_ae(self, lo, hi):
        return self.intervals

    def to_json(self):
        return {"kind": "intervals",
                "intervals": [[float(lo), float(hi)]
                              for lo, hi in self.intervals]}


@dataclass(frozen=True)
class GridUnion:
    """A union of grid cells [i/order, (i+1)/order] named by their indices."""

    order: int
    cells: tuple

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        cells = tuple(sorted(int(c) for c in self.cells))
        if len(set(cells)) != len(cells):
            raise ValueError("cells must be distinct")
        if cells and not (0 <= cells[0] and cells[-1] < self.order):
            raise ValueError("cells must lie in [0, order)")
        object.__setattr__(self, "cells", cells)

    @property
    def intervals(self):
        n = self.order
        return tuple((c / n, (c + 1) / n) for c in self.cells)

    def contains(self, x):
        return contains_point(self.intervals, x)

    def contains_many(self, xs):
        xs = np.asarray(xs, dtype=float)
        out = np.zeros(xs.shape, dtype=bool)
        for lo, hi in self.intervals:
            out |= (xs >= lo) & (xs <= hi)
        return out

    def as_intervals_ae(self, lo, hi):
        return self.intervals

    def to_json(self):
        return {"kind": "intervals", "order": self.order,
                "cells": list(self.cells),
                "intervals": [list(iv) for iv in self.intervals]}


@dataclass(frozen=True)
class AtomLabeling:
    """A bit per atom of a referenced atomic measure, plus an off-atom default."""

    locations: tuple
    bits: tuple
    default_bit: int = 0
    _index: dict = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        locations = tuple(float(x) for x in self.locations)
        bits = tuple(int(b) for b in self.bits)
        if len(locations) != len(bits):
            raise ValueError("one bit per atom location is required")
        if any(b not in (0, 1) for b in bits) or self.default_bit not in (0, 1):
            raise ValueError("bits must be 0 or 1")
        object.__setattr__(self, "locations", locations)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "_index",
                           {loc: bit for loc, bit in zip(locations, bits)})

    @classmethod
    def for_measure(cls, measure, bits, default_bit=0):
        return cls(tuple(a.location for a in measure.atoms), tuple(bits), default_bit)

    def contains(self, x):
        return bool(self._index.get(x, self.default_bit))

    def contains_many(self, xs):
        xs = np.asarray(xs, dtype=float)
        order = np.argsort(self.locations) if self.locations else np.empty(0, int)
        locs = np.array(self.locations, dtype=float)[order]
        bits = np.array(self.bits, dtype=bool)[order] if self.bits else np.empty(0, bool)
        out = np.full(xs.shape, bool(self.default_bit))
        if len(locs):
            idx = np.searchsorted(locs, xs)
            idx = np.clip(idx, 0, len(locs) - 1)
            hit = locs[idx] == xs
            out[hit] = bits[idx[hit]]
        return out

    def as_intervals_ae(self, lo, hi):
        # Under a non-atomic measure the labeling is a.e. the default bit.
        return [(lo, hi)] if self.default_bit else []

    def to_json(self):
        return {"kind": "atom_labels", "locations": list(self.locations),
                "bits": list(self.bits), "default_bit": self.default_bit}


def middle_third_bounds(level, index):
    """The open middle third deleted at a given level, as Fraction bounds.

    Level l >= 1 deletes 2**(l-1) intervals of length 3**-l; the index walks
    them left to right.
    """
    level = int(level)
    index = int(index)
    if level < 1:
        raise ValueError("level must be >= 1")
    if not 0 <= index < 2 ** (level - 1):
        raise ValueError(f"index {index} out of range for level {level}")
    prefix = 0
    for i in range(level - 1):
        bit = (index >> (level - 2 - i)) & 1
        prefix += 2 * bit * 3 ** (level - 2 - i)
    lo = Fraction(3 * prefix + 1, 3 ** level)
    return lo, lo + Fraction(1, 3 ** level)


@dataclass(frozen=True)
class MiddleThirdUnion:
    """A finite union of deleted middle thirds, named by (level, index) pairs.

    Membership is an exact rational test against the open interval bounds,
    so there is no floating-point drift at deep levels.
    """

    pieces: tuple

    def __post_init__(self):
        pieces = tuple(sorted((int(l), int(i)) for l, i in self.pieces))
        if len(set(pieces)) != len(pieces):
            raise ValueError("pieces must be distinct")
        bounds = tuple(middle_third_bounds(l, i) for l, i in pieces)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "_bounds", bounds)

    def contains(self, x):
        fx = Fraction(x)
        return any(lo < fx < hi for lo, hi in self._bounds)

    def as_intervals_ae(self, lo, hi):
        return list(self._bounds)

    def to_json(self):
        return {"kind": "middle_thirds", "pieces": [list(p) for p in self.pieces]}


def member(concept, x):
    """Pointwise membership: 1 iff x belongs to the concept."""
    return int(bool(concept.contains(x)))


class _XorConcept:
    """Symmetric difference of two concepts, for integration fallbacks."""

    def __init__(self, c1, c2):
        self.c1, self.c2 = c1, c2

    def contains(self, x):
        return bool(self.c1.contains(x)) != bool(self.c2.contains(x))

    def contains_many(self, xs):
        return _contains_many(self.c1, xs) != _contains_many(self.c2, xs)


def l1_distance(c1, c2, measure, **kw):
    """L1(mu) distance between two concepts: the mass of their symmetric
    difference.

    Exact on atomic measures; exact interval/arc arithmetic under the
    uniform and ternary measures whenever both concepts reduce to interval
    unions.  Otherwise delegated to the measure's integration machinery,
    propagating any resolution warnings.
    """
    if isinstance(measure, AtomicMeasure):
        total = 0.0
        for atom in measure.atoms:
            if bool(c1.contains(atom.location)) != bool(c2.contains(atom.location)):
                total += atom.mass
        return total
    if isinstance(measure, (UniformMeasure, CantorMeasure)):
        if isinstance(measure, UniformMeasure):
            lo, hi = measure.a, measure.b
        else:
            lo, hi = 0.0, 1.0
        f1 = getattr(c1, "as_intervals_ae", None)
        f2 = getattr(c2, "as_intervals_ae", None)
        if f1 is not None and f2 is not None:
            iv1 = clip(canonicalize(f1(lo, hi)), lo, hi)
            iv2 = clip(canonicalize(f2(lo, hi)), lo, hi)
            both = intersect(iv1, iv2)
            if isinstance(measure, UniformMeasure):
                width = hi - lo
                return (float(total_length(iv1)) + float(total_length(iv2))
                        - 2.0 * float(total_length(both))) / width
            return (cantor_interval_mass(iv1) + cantor_interval_mass(iv2)
                    - 2.0 * cantor_interval_mass(both))
    return expect_indicator(measure, _XorConcept(c1, c2), **kw)


# ---------------------------------------------------------------------------
# Order-interval classes


def max_interval_count(n):
    """Largest k with k^2 < n: members of the order-n class use < sqrt(n)
    grid cells, enforced in integer arithmetic."""
    k = math.isqrt(n - 1) if n > 1 else 0
    while (k + 1) ** 2 < n:
        k += 1
    while k ** 2 >= n:
        k -= 1
    return k


@dataclass(frozen=True)
class OrderIntervalClass:
    """All unions of fewer than sqrt(n) grid cells of order n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("order must be >= 1")

    def count(self):
        return sum(math.comb(self.n, k)
                   for k in range(max_interval_count(self.n) + 1))

    def members(self, cap=ENUMERATION_CAP):
        return enumerate_order_class(self.n, cap=cap)


def enumerate_order_class(n, cap=ENUMERATION_CAP):
    """Lazy stream of every member of the order-n class, smallest unions
    first; refuses upfront when the total member count exceeds the cap."""
    cls = OrderIntervalClass(n)
    total = cls.count()
    if total > cap:
        raise EnumerationCapError(
            f"order-{n} class has {total} members, beyond the cap {cap}")

    def gen():
        for k in range(max_interval_count(n) + 1):
            for cells in combinations(range(n), k):
                yield GridUnion(n, cells)

    return gen()


def validate_order_member(concept, n=None):
    """Structural check: grid cells of the stated order, distinct, and
    strictly fewer than sqrt(order) of them."""
    if not isinstance(concept, GridUnion):
        raise TypeError("order-class members are grid-cell unions")
    if n is not None and concept.order != n:
        raise ValueError(f"expected order {n}, got {concept.order}")
    k = len(concept.cells)
    if k * k >= concept.order:
        raise ValueError(f"{k} cells is not fewer than sqrt({concept.order})")


def isolate_points(points):
    """Smallest valid order isolating the points, with the covering union.

    Picks the least n > k^2 whose cell width 1/n is below every half-gap
    between neighbouring points, then covers each point by the cell whose
    left endpoint equals it (preferring that cell on grid boundaries).
    Exact rational arithmetic throughout, so containment holds with no
    floating-point slack.  Fewer than one point yields (1, empty union).
    """
    pts = sorted(float(p) for p in points)
    k = len(pts)
    if k == 0:
        return 1, GridUnion(1, ())
    if len(set(pts)) != k:
        raise ValueError("points must be pairwise distinct")
    if pts[0] < 0.0 or pts[-1] > 1.0:
        raise ValueError("points must lie in [0, 1]")
    n = k * k + 1
    if k > 1:
        min_half = min(Fraction(b) - Fraction(a)
                       for a, b in zip(pts, pts[1:])) / 2
        n = max(n, math.floor(1 / min_half) + 1)
    cells = []
    for p in pts:
        # floor gives i/n <= p < (i+1)/n exactly; p == 1 clamps to the
        # last cell, whose right endpoint it is.
        i = min(math.floor(Fraction(p) * n), n - 1)
        cells.append(i)
    if len(set(cells)) != k:
        raise AssertionError("isolated points must land in distinct cells")
    return n, GridUnion(n, tuple(cells))


# ---------------------------------------------------------------------------
# Shattering the ternary-set level intervals by order classes


@dataclass(frozen=True)
class CantorShatterReport:
    """Feasibility verdict for covering selected level intervals by a grid
    union while avoiding the unselected ones."""

    level: int
    order: int
    selected: tuple
    status: str  # "feasible" | "infeasible" | "unchecked"
    witness: GridUnion | None
    forced_cells: tuple
    reason: str

    def to_json(self):
        return {"level": self.level, "order": self.order,
                "selected": list(self.selected), "status": self.status,
                "witness": None if self.witness is None else self.witness.to_json(),
                "forced_cells": list(self.forced_cells), "reason": self.reason}


def cantor_shatter_search(level, order, selected,
                          max_level=MAX_SHATTER_LEVEL,
                          max_order=MAX_SHATTER_ORDER):
    """Search for a member of the order class containing every selected
    level interval and disjoint from every unselected one.

    Any valid union must include every grid cell whose interior meets a
    selected interval, so the forced-cell set is a minimal cover; the
    verdict is exact.  Selected indices are 1-based.  Arguments beyond the
    configured caps return status "unchecked" rather than failing silently.
    """
    level, order = int(level), int(order)
    selected = tuple(sorted(set(int(j) for j in selected)))
    if level < 0 or order < 1:
        raise ValueError("level must be >= 0 and order >= 1")
    if any(not 1 <= j <= 2 ** level for j in selected):
        raise ValueError("selected indices must lie in 1..2^level")
    if level > max_level or order > max_order:
        return CantorShatterReport(level, order, selected, "unchecked", None, (),
                                   f"caps exceeded (level<={max_level}, "
                                   f"order<={max_order})")
    ivs = cantor_level_intervals(level)
    chosen = [ivs[j - 1] for j in selected]
    avoided = [ivs[j - 1] for j in range(1, 2 ** level + 1) if j not in selected]

    forced = set()
    for a, b in chosen:
        for i in range(math.floor(a * order), math.ceil(b * order) + 1):
            if not 0 <= i < order:
                continue
            cell_lo, cell_hi = Fraction(i, order), Fraction(i + 1, order)
            if max(a, cell_lo) < min(b, cell_hi):
                forced.add(i)
    forced = tuple(sorted(forced))

    for i in forced:
        cell_lo, cell_hi = Fraction(i, order), Fraction(i + 1, order)
        for a, b in avoided:
            if cell_lo <= b and a <= cell_hi:
                return CantorShatterReport(
                    level, order, selected, "infeasible", None, forced,
                    f"forced cell {i} meets an unselected level interval")
    k = len(forced)
    if k * k >= order:
        return CantorShatterReport(
            level, order, selected, "infeasible", None, forced,
            f"minimal cover needs {k} cells, and {k}^2 >= {order}")

    witness = GridUnion(order, forced)
    merged = canonicalize([(Fraction(i, order), Fraction(i + 1, order))
                           for i in forced])
    for a, b in chosen:
        if not any(lo <= a and b <= hi for lo, hi in merged):
            raise AssertionError("witness fails exact containment check")
    return CantorShatterReport(level, order, selected, "feasible", witness,
                               forced, "forced cells form a valid union")


# ---------------------------------------------------------------------------
# Parameterized families


@dataclass(frozen=True)
class SontagFamily:
    """The weight-parameterized family {x : cos(wx) >= 0}, w in [0, w_max]."""

    w_max: float
    alpha: float = sontag.DEFAULT_ALPHA

    def concept(self, w):
        return SontagConcept(w, self.alpha)


@dataclass(frozen=True)
class OrderIntervalFamily:
    """The union over all orders n of the order-n classes."""

    def order_class(self, n):
        return OrderIntervalClass(n)


def concept_from_json(doc):
    kind = doc.get("kind")
    if kind == "sontag":
        return SontagConcept(doc["w"], doc.get("alpha", sontag.DEFAULT_ALPHA))
    if kind == "intervals":
        if "order" in doc:
            return GridUnion(doc["order"], tuple(doc["cells"]))
        return IntervalUnion(tuple(tuple(iv) for iv in doc["intervals"]))
    if kind == "atom_labels":
        return AtomLabeling(tuple(doc["locations"]), tuple(doc["bits"]),
                            doc.get("default_bit", 0))
    if kind == "middle_thirds":
        return MiddleThirdUnion(tuple(tuple(p) for p in doc["pieces"]))
    raise ValueError(f"unknown concept kind {kind!r}")
