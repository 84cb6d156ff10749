import math
from fractions import Fraction

import numpy as np
import pytest

from paclab.concepts import AtomLabeling, l1_distance
from paclab.construction import (ComplexitySchedule, EmptyLevelWarning,
                                 RateFunction, build_measure,
                                 shattering_subfamily, sontag_instance,
                                 theoretical_profile)


def geometric_eps(count):
    return tuple(Fraction(1, 5) ** k for k in range(1, count + 1))


# ---------------------------------------------------------------------------
# schedules


def test_schedule_requires_exact_one_fifth_start():
    with pytest.raises(ValueError):
        ComplexitySchedule(eps=(Fraction(1, 4), Fraction(1, 8)),
                           f=RateFunction.poly(1), K=1)


def test_schedule_requires_strict_decrease():
    with pytest.raises(ValueError):
        ComplexitySchedule(eps=(Fraction(1, 5), Fraction(1, 5)),
                           f=RateFunction.poly(1), K=1)


def test_schedule_reads_decimal_floats_exactly():
    sched = ComplexitySchedule(eps=(0.2, 0.04, 0.008), f=RateFunction.poly(2),
                               K=2)
    assert sched.eps == (Fraction(1, 5), Fraction(1, 25), Fraction(1, 125))


def test_schedule_enforces_linear_floor():
    with pytest.raises(ValueError):
        ComplexitySchedule(eps=geometric_eps(3),
                           f=RateFunction.poly(1, Fraction(1, 10)), K=2)
    ComplexitySchedule(eps=geometric_eps(3),
                       f=RateFunction.poly(1, Fraction(1, 10)), K=2,
                       linear_coeff=Fraction(1, 10))


def test_schedule_json_round_trip():
    sched = ComplexitySchedule.default()
    doc = sched.to_json()
    assert ComplexitySchedule.from_json(doc) == sched
    with pytest.raises(ValueError):
        ComplexitySchedule.from_json({**doc, "bogus": 1})


def test_rate_function_kinds():
    assert RateFunction.poly(2)(Fraction(5)) == 25
    assert RateFunction.exponential(2)(Fraction(5)) == 32
    table = RateFunction.table([(5, 7), (25, 9)])
    assert table(Fraction(5)) == 7
    assert table(Fraction(30)) == 9
    with pytest.raises(ValueError):
        table(Fraction(1))


# ---------------------------------------------------------------------------
# the constructed measure


def test_default_instance_arithmetic():
    inst = build_measure(ComplexitySchedule.default())
    assert [lvl.size for lvl in inst.levels] == [25, 600]
    assert [lvl.mass for lvl in inst.levels] == [0.8, 0.16]
    assert inst.residual_mass == 0.04
    measure = inst.measure()
    assert abs(math.fsum(a.mass for a in measure.atoms) - 1.0) <= 1e-12


def test_linear_rate_instance():
    sched = ComplexitySchedule(eps=geometric_eps(3), f=RateFunction.poly(1),
                               K=2)
    inst = build_measure(sched)
    assert [lvl.size for lvl in inst.levels] == [5, 20]
    assert [lvl.mass for lvl in inst.levels] == [0.8, 0.16]
    assert inst.residual_mass == 0.04
    assert inst.levels[0].locations == tuple(
        math.log(p) for p in (2, 3, 5, 7, 11))


def test_superexponential_rate():
    sched = ComplexitySchedule(eps=geometric_eps(2),
                               f=RateFunction.exponential(2), K=1)
    inst = build_measure(sched)
    assert inst.levels[0].size == 32
    assert inst.levels[0].mass == 0.8
    assert inst.residual_mass == pytest.approx(0.2)


def test_mass_telescoping_is_exact():
    for K, f in [(2, RateFunction.poly(2)), (3, RateFunction.poly(1)),
                 (1, RateFunction.exponential(2))]:
        sched = ComplexitySchedule(eps=geometric_eps(K + 1), f=f, K=K)
        inst = build_measure(sched)
        total_levels = sum((lvl.mass_exact for lvl in inst.levels),
                           Fraction(0))
        assert total_levels == 5 * (sched.eps[0] - sched.eps[K])
        assert total_levels + inst.residual_mass_exact == 1


def test_empty_level_warns():
    sched = ComplexitySchedule(eps=geometric_eps(3),
                               f=RateFunction.table([(5, 3), (25, 3)]), K=2,
                               linear_coeff=Fraction(1, 10))
    with pytest.warns(EmptyLevelWarning):
        inst = build_measure(sched)
    assert [lvl.size for lvl in inst.levels] == [3, 0]


def test_non_integer_rate_values_are_ceiled():
    sched = ComplexitySchedule(eps=geometric_eps(3),
                               f=RateFunction.poly(1, Fraction(1, 2)), K=2,
                               linear_coeff=Fraction(1, 2))
    assert sched.f_values() == (3, 13)  # ceil(5/2), ceil(25/2)
    inst = build_measure(sched)
    assert [lvl.size for lvl in inst.levels] == [3, 10]


def test_level_sizes_are_rate_differences():
    sched = ComplexitySchedule(eps=geometric_eps(4), f=RateFunction.poly(2),
                               K=3)
    inst = build_measure(sched)
    f_vals = sched.f_values()
    sizes = [lvl.size for lvl in inst.levels]
    assert sizes[0] == f_vals[0]
    assert all(s == b - a for s, a, b in zip(sizes[1:], f_vals, f_vals[1:]))
    assert all(s >= 0 for s in sizes)


# ---------------------------------------------------------------------------
# theoretical profile


def test_profile_formula_values():
    inst = build_measure(ComplexitySchedule.default())
    prof = theoretical_profile(inst, 0.1)
    row1, row2 = prof.rows
    assert (row1.f_k, row2.f_k) == (25, 625)
    assert row1.upper == math.ceil((32 / 0.2) * (25 + math.log2(10)))
    assert row1.lower == 1  # ceil(0.0128 * 25)
    assert row2.lower == 8  # ceil(0.0128 * 625)
    assert row2.cover_size == 2 ** 625
    assert all(r.lower <= r.upper for r in prof.rows)


def test_profile_delta_one_drops_confidence_term():
    inst = build_measure(ComplexitySchedule.default())
    prof = theoretical_profile(inst, 1.0)
    assert prof.rows[0].upper == math.ceil((32 / 0.2) * 25)


def test_profile_lower_is_monotone_when_rate_is():
    sched = ComplexitySchedule(eps=geometric_eps(4), f=RateFunction.poly(2),
                               K=3)
    prof = theoretical_profile(build_measure(sched), 0.1)
    lowers = [r.lower for r in prof.rows]
    assert lowers == sorted(lowers)


def test_profile_small_family_sharpening():
    sched = ComplexitySchedule(eps=geometric_eps(2), f=RateFunction.poly(1),
                               K=1)
    prof = theoretical_profile(build_measure(sched), 0.1)
    # f_1 = 5: the explicit packing of 32 labelings beats ceil(0.0128 * 5) = 1
    assert prof.rows[0].lower >= 1


# ---------------------------------------------------------------------------
# shattering subfamilies


def small_instance():
    sched = ComplexitySchedule(eps=geometric_eps(3),
                               f=RateFunction.poly(1, Fraction(2, 5)), K=2,
                               linear_coeff=Fraction(2, 5))
    return build_measure(sched)


def test_subfamily_size_and_indexing():
    inst = small_instance()  # f = (2, 10): level sizes 2 and 8
    fam = shattering_subfamily(inst, 1)
    assert fam.size == 4
    members = fam.materialize()
    assert len(members) == 4
    assert members[3].bits == (1, 1)
    assert members[1].contains(inst.levels[0].locations[0])


def test_subfamily_is_its_own_zero_radius_cover():
    from paclab.bounds import FiniteFamily, greedy_cover
    inst = small_instance()
    fam = shattering_subfamily(inst, 1)
    finite = FiniteFamily(fam.materialize(), inst.measure())
    centers, k = greedy_cover(finite, 1e-9)
    assert k == fam.size


def test_subfamily_net_radius_bound():
    inst = small_instance()
    measure = inst.measure()
    rng = np.random.default_rng(5)
    universe = inst.level_locations
    for k in (1, 2):
        fam = shattering_subfamily(inst, k)
        prefix = len(fam.locations)
        tail_bound = float(5 * inst.schedule.eps[k])
        for _ in range(50):
            bits = [int(b) for b in rng.integers(0, 2, size=len(universe))]
            target = AtomLabeling(universe, tuple(bits), default_bit=0)
            index = sum(b << j for j, b in enumerate(bits[:prefix]))
            nearest = fam[index]
            d = l1_distance(target, nearest, measure)
            assert d <= tail_bound + 1e-12


def test_subfamily_len_overflows_for_huge_families():
    inst = build_measure(ComplexitySchedule.default())
    fam = shattering_subfamily(inst, 2)
    assert fam.size == 2 ** 625
    with pytest.raises(OverflowError):
        len(fam)


# ---------------------------------------------------------------------------
# pairing with the weight family


def test_sontag_instance_census_linear_rate():
    sched = ComplexitySchedule(eps=geometric_eps(2), f=RateFunction.poly(1),
                               K=1)
    bundle = sontag_instance(build_measure(sched), w_max=10 ** 6)
    census = bundle.censuses[0]
    assert (census.realized, census.total) == (32, 32)
    assert census.status == "complete"


def test_sontag_instance_degenerate_depth_zero():
    sched = ComplexitySchedule(eps=geometric_eps(1), f=RateFunction.poly(1),
                               K=0)
    inst = build_measure(sched)
    assert inst.levels == ()
    assert inst.residual_mass == 1.0
    bundle = sontag_instance(inst)
    assert (bundle.censuses[0].realized, bundle.censuses[0].total) == (2, 2)


def test_sontag_instance_skips_oversized_census():
    inst = build_measure(ComplexitySchedule.default())
    bundle = sontag_instance(inst, census_atom_cap=12)
    assert all(c.status == "skipped" for c in bundle.censuses)


def test_sontag_expectation_is_atom_mass_sum():
    from paclab.concepts import SontagConcept
    from paclab.measures import expect_indicator
    sched = ComplexitySchedule(eps=geometric_eps(2), f=RateFunction.poly(1),
                               K=1)
    inst = build_measure(sched)
    measure = inst.measure()
    concept = SontagConcept(17.3)
    expected = sum(a.mass for a in measure.atoms
                   if math.cos(17.3 * a.location) >= 0)
    assert expect_indicator(measure, concept) == expected
