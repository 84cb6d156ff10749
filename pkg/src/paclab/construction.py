"""Purely atomic measures realizing a prescribed sample-complexity growth.

Given an accuracy schedule eps_1 > eps_2 > ... (with eps_1 = 1/5) and a
non-decreasing rate function f growing at least linearly, the construction
places levels of fresh atoms: level k holds f(1/eps_k) - f(1/eps_{k-1})
atoms sharing total mass 5 (eps_k - eps_{k+1}).  Learning to accuracy eps_k
then needs on the order of f(1/eps_k) samples, bracketed between a packing
lower bound and a covering upper bound.

The infinite construction is truncated at depth K; the exact tail mass
5 eps_{K+1} sits on one residual atom, perturbing all distances by at most
that amount.  Schedules are kept in exact rational arithmetic so mass
telescoping identities hold exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import sontag
from .bounds import bi_upper_from_log2, greedy_packing_memberships
from .concepts import AtomLabeling, SontagFamily
from .measures import AtomicMeasure, Atom

PACKING_LOWER_RATE = 0.0128  # 2 * (0.5 - 0.42)^2, the cube-packing constant
SMALL_FAMILY_LIMIT = 20
MATERIALIZE_LIMIT = 24


class EmptyLevelWarning(UserWarning):
    """A construction level received zero atoms (flat stretch of the rate)."""


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        # Floats are read as the decimal literal they print as, so JSON
        # configs with 0.2 mean exactly 1/5.
        return Fraction(str(value))
    raise TypeError(f"cannot read {value!r} as an exact rational")


@dataclass(frozen=True)
class RateFunction:
    """A non-decreasing growth rate: polynomial, exponential, or tabulated.

    Polynomial and integer-argument exponential rates evaluate exactly on
    rational inputs; tables hold explicit (x, f(x)) pairs and look up the
    largest tabulated x not exceeding the argument.
    """

    kind: str
    degree: int = 1
    scale: Fraction = Fraction(1)
    base: int = 2
    points: tuple = ()

    @classmethod
    def poly(cls, degree, scale=1):
        return cls("poly", degree=int(degree), scale=_as_fraction(scale))

    @classmethod
    def exponential(cls, base=2):
        return cls("exp", base=int(base))

    @classmethod
    def table(cls, points):
        pts = tuple(sorted((_as_fraction(x), _as_fraction(y)) for x, y in points))
        return cls("table", points=pts)

    def __call__(self, x):
        if self.kind == "poly":
            return self.scale * _as_fraction(x) ** self.degree
        if self.kind == "exp":
            fx = _as_fraction(x)
            if fx.denominator == 1:
                return Fraction(self.base) ** fx.numerator
            return Fraction(str(float(self.base) ** float(fx)))
        if self.kind == "table":
            fx = _as_fraction(x)
            best = None
            for px, py in self.points:
                if px <= fx:
                    best = py
            if best is None:
                raise ValueError(f"rate table has no entry at or below {x}")
            return best
        raise ValueError(f"unknown rate kind {self.kind!r}")

    def to_json(self):
        if self.kind == "poly":
            return {"kind": "poly", "degree": self.degree, "scale": str(self.scale)}
        if self.kind == "exp":
            return {"kind": "exp", "base": self.base}
        return {"kind": "table",
                "points": [[str(x), str(y)] for x, y in self.points]}

    @classmethod
    def from_json(cls, doc):
        kind = doc.get("kind")
        if kind == "poly":
            return cls.poly(doc["degree"], doc.get("scale", 1))
        if kind == "exp":
            return cls.exponential(doc.get("base", 2))
        if kind == "table":
            return cls.table(doc["points"])
        raise ValueError(f"unknown rate kind {kind!r}")


EPS_FIRST = Fraction(1, 5)


@dataclass(frozen=True)
class ComplexitySchedule:
    """Accuracy schedule, rate function, and truncation depth.

    Needs eps values for levels 1..K+1, strictly decreasing with
    eps_1 = 1/5 exactly (the normalization making level masses sum to 1).
    The rate must be non-decreasing and at least ``linear_coeff * x`` on the
    grid of evaluation points 1/eps_k, and the rounded cardinalities
    f_k = ceil(f(1/eps_k)) must stay non-decreasing.
    """

    eps: tuple
    f: RateFunction
    K: int
    linear_coeff: Fraction = Fraction(1)

    def __post_init__(self):
        eps = tuple(_as_fraction(e) for e in self.eps)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "linear_coeff", _as_fraction(self.linear_coeff))
        if self.K < 0:
            raise ValueError("truncation depth must be >= 0")
        if len(eps) < self.K + 1:
            raise ValueError(f"need eps values through level {self.K + 1}")
        if any(e <= 0 for e in eps):
            raise ValueError("eps values must be positive")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("eps must be strictly decreasing")
        if eps[0] != EPS_FIRST:
            raise ValueError(f"eps_1 must equal 1/5 exactly, got {eps[0]}")
        grid = [Fraction(1) / e for e in eps[:self.K]]
        values = [self.f(x) for x in grid]
        for a, b in zip(values, values[1:]):
            if b < a:
                raise ValueError("rate function must be non-decreasing")
        for x, v in zip(grid, values):
            if v < self.linear_coeff * x:
                raise ValueError(
                    f"rate below the declared linear floor at x={x}")
        f_vals = [math.ceil(v) for v in values[:self.K]]
        for a, b in zip(f_vals, f_vals[1:]):
            if b < a:
                raise ValueError("ceiled cardinalities must be non-decreasing")

    @classmethod
    def default(cls, K=2, degree=2):
        """eps_k = 5**-k with a polynomial rate; the shipped instance."""
        eps = tuple(Fraction(1, 5) ** k for k in range(1, K + 2))
        return cls(eps=eps, f=RateFunction.poly(degree), K=K)

    def f_values(self):
        """Rounded level cardinalities f_k = ceil(f(1/eps_k)), k = 1..K."""
        return tuple(math.ceil(self.f(Fraction(1) / e)) for e in self.eps[:self.K])

    def level_masses(self):
        """Exact m_k = 5 (eps_k - eps_{k+1}), non-negative by monotonicity."""
        return tuple(5 * (self.eps[k] - self.eps[k + 1]) for k in range(self.K))

    def residual_mass(self):
        return 5 * self.eps[self.K]

    def to_json(self):
        return {"eps": [str(e) for e in self.eps], "f": self.f.to_json(),
                "K": self.K, "linear_coeff": str(self.linear_coeff)}

    @classmethod
    def from_json(cls, doc):
        known = {"eps", "f", "K", "linear_coeff"}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown schedule keys: {sorted(unknown)}")
        return cls(eps=tuple(doc["eps"]), f=RateFunction.from_json(doc["f"]),
                   K=int(doc["K"]),
                   linear_coeff=doc.get("linear_coeff", Fraction(1)))


@dataclass(frozen=True)
class Level:
    """One construction level: its atom locations and shared mass."""

    index: int
    locations: tuple
    mass: float
    mass_exact: Fraction

    @property
    def size(self):
        return len(self.locations)


@dataclass(frozen=True)
class ConstructedInstance:
    """A truncated instance of the construction, ready to learn against."""

    schedule: ComplexitySchedule
    levels: tuple
    residual_location: float
    residual_mass: float
    residual_mass_exact: Fraction

    @property
    def f_values(self):
        return self.schedule.f_values()

    @property
    def level_locations(self):
        return tuple(loc for lvl in self.levels for loc in lvl.locations)

    @property
    def atom_locations(self):
        return self.level_locations + (self.residual_location,)

    def measure(self):
        atoms = []
        for lvl in self.levels:
            if lvl.size == 0:
                continue
            per_atom = float(lvl.mass_exact / lvl.size)
            atoms.extend(Atom(loc, per_atom) for loc in lvl.locations)
        atoms.append(Atom(self.residual_location, self.residual_mass))
        return AtomicMeasure(atoms)

    def to_json(self):
        return {"schedule": self.schedule.to_json(),
                "levels": [{"index": lvl.index,
                            "size": lvl.size,
                            "mass": lvl.mass,
                            "locations": list(lvl.locations)}
                           for lvl in self.levels],
                "residual": {"location": self.residual_location,
                             "mass": self.residual_mass}}


def build_measure(schedule, max_atoms=10 ** 6):
    """Materialize the schedule: levels of log-prime atoms plus the residual.

    Atom locations are logs of successive primes, so every finite union of
    levels is a rationally-independent-style tuple that the weight family
    can shatter.  Level masses follow m_k = 5 (eps_k - eps_{k+1}); the
    residual atom carries exactly 5 eps_{K+1}.
    """
    f_vals = schedule.f_values()
    masses = schedule.level_masses()
    total_atoms = (f_vals[-1] if f_vals else 0) + 1
    if total_atoms > max_atoms:
        raise ValueError(f"instance needs {total_atoms} atoms, cap is {max_atoms}")
    locations = sontag.rationally_independent_points(total_atoms)
    levels = []
    prev_f = 0
    cursor = 0
    for k in range(schedule.K):
        size = f_vals[k] - prev_f
        if size == 0:
            warnings.warn(f"level {k + 1} is empty (flat rate stretch)",
                          EmptyLevelWarning, stacklevel=2)
        locs = tuple(locations[cursor:cursor + size])
        levels.append(Level(k + 1, locs, float(masses[k]), masses[k]))
        cursor += size
        prev_f = f_vals[k]
    residual_exact = schedule.residual_mass()
    return ConstructedInstance(schedule, tuple(levels), locations[cursor],
                               float(residual_exact), residual_exact)


@dataclass(frozen=True)
class ProfileRow:
    """Theoretical bracket at one accuracy level."""

    k: int
    eps: float
    f_k: int
    lower: int
    upper: int
    cover_size: int
    quadratic_note: int  # the 8/eps^2 variant, kept for comparison only

    def to_json(self):
        return {"k": self.k, "eps": self.eps, "f_k": self.f_k,
                "lower": self.lower, "upper": self.upper,
                "cover_size": self.cover_size,
                "quadratic_note": self.quadratic_note}


@dataclass(frozen=True)
class ComplexityProfile:
    rows: tuple

    def __post_init__(self):
        for row in self.rows:
            if row.lower > row.upper:
                raise ValueError(f"lower bound exceeds upper at level {row.k}")

    def to_json(self):
        return {"rows": [r.to_json() for r in self.rows]}


def theoretical_profile(instance, delta, small_family_limit=SMALL_FAMILY_LIMIT):
    """Per-level sample-complexity bracket for the instance.

    Upper: the covering bound with the 2**f_k labeling cover, computed via
    log2 without materializing the cover.  Lower: the packing-rate floor
    ceil(0.0128 f_k), sharpened by an explicit greedy packing when the
    labeling family is small enough to enumerate.
    """
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    rows = []
    f_vals = instance.f_values
    measure = instance.measure()
    for k in range(1, instance.schedule.K + 1):
        f_k = f_vals[k - 1]
        eps_k = float(instance.schedule.eps[k - 1])
        upper = bi_upper_from_log2(eps_k, delta, float(f_k))
        lower = math.ceil(PACKING_LOWER_RATE * f_k)
        if 0 < f_k <= small_family_limit:
            family = shattering_subfamily(instance, k)
            memberships = family.membership_matrix()
            packed = greedy_packing_memberships(memberships, measure.masses,
                                                2.0 * eps_k)
            lower = max(lower, math.ceil(math.log2(len(packed))))
        rows.append(ProfileRow(k, eps_k, f_k, lower, upper, 2 ** f_k,
                               math.ceil((8.0 / eps_k ** 2)
                                         * (f_k + math.log2(1.0 / delta)))))
    return ComplexityProfile(tuple(rows))


class LabelingFamily:
    """All labelings of the atoms of levels 1..k, indexed by integers.

    Labeling i assigns bit (i >> j) & 1 to the j-th level atom; atoms beyond
    the covered levels take the default bit 0.  The family is an eps_k-net
    for the full labeling class whenever consecutive schedule ratios stay
    at or below 1/5.
    """

    def __init__(self, instance, k):
        if not 0 <= k <= instance.schedule.K:
            raise ValueError(f"level must lie in 0..{instance.schedule.K}")
        self.instance = instance
        self.k = k
        self.locations = tuple(loc for lvl in instance.levels[:k]
                               for loc in lvl.locations)
        self.universe = instance.atom_locations
        self.size = 2 ** len(self.locations)

    def __len__(self):
        return self.size

    def __getitem__(self, index):
        if not 0 <= index < self.size:
            raise IndexError(index)
        bits = tuple((index >> j) & 1 for j in range(len(self.locations)))
        return AtomLabeling(self.locations, bits, default_bit=0)

    def __iter__(self):
        return (self[i] for i in range(self.size))

    def materialize(self, cap=MATERIALIZE_LIMIT):
        if len(self.locations) > cap:
            raise ValueError(f"family of 2^{len(self.locations)} members is "
                             "too large to materialize")
        return [self[i] for i in range(self.size)]

    def membership_matrix(self):
        """Bit matrix of every labeling against the full atom universe."""
        m = len(self.locations)
        idx = np.arange(self.size, dtype=np.uint64)
        bits = (idx[:, None] >> np.arange(m, dtype=np.uint64)[None, :]) & 1
        pad = np.zeros((self.size, len(self.universe) - m), dtype=bool)
        return np.concatenate([bits.astype(bool), pad], axis=1)


def shattering_subfamily(instance, k):
    """The 2**f_k labelings of the first k levels (default bit 0 elsewhere)."""
    return LabelingFamily(instance, k)


@dataclass(frozen=True)
class LevelCensus:
    k: int
    atom_count: int
    realized: int
    total: int
    status: str  # "complete" | "skipped"


@dataclass(frozen=True)
class SontagInstanceBundle:
    """The instance measure paired with the weight family, with per-level
    shatter censuses confirming the labelings used by the learner exist."""

    measure: AtomicMeasure
    family: SontagFamily
    censuses: tuple


def sontag_instance(instance, w_max=10 ** 6, alpha=sontag.DEFAULT_ALPHA,
                    census_atom_cap=12, budget=sontag.DEFAULT_BUDGET):
    """Pair the instance with the weight family on [0, w_max].

    Runs a shatter census over each level-prefix union of atoms when the
    prefix is small enough; larger prefixes report status "skipped" so the
    budget decision is always explicit.
    """
    measure = instance.measure()
    family = SontagFamily(float(w_max), alpha)
    censuses = []
    prefixes = []
    if instance.schedule.K == 0:
        prefixes.append((0, (instance.residual_location,)))
    locs = []
    for lvl in instance.levels:
        locs.extend(lvl.locations)
        prefixes.append((lvl.index, tuple(locs)))
    for k, points in prefixes:
        if len(points) > census_atom_cap:
            censuses.append(LevelCensus(k, len(points), 0, 2 ** len(points),
                                        "skipped"))
            continue
        census = sontag.shatter_census(points, w_max, alpha=alpha, budget=budget)
        censuses.append(LevelCensus(k, len(points), census.realized,
                                    census.total, "complete"))
    return SontagInstanceBundle(measure, family, tuple(censuses))
