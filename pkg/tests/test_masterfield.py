from fractions import Fraction

from stochlim.correlator import FOCK, GAUSSIAN, limit_correlator
from stochlim.diagrams import count_non_crossing
from stochlim.masterfield import (
    BogoliubovCoeffs,
    MasterLetter,
    _reduce_all_orders,
    _reduce_leftmost,
    bosonic_double_check,
    check_free_equivalence,
    expand_master_word,
    free_correlator,
)
from stochlim.scalars import (
    DeltaK,
    EnergyDelta,
    MFactor,
    Monomial,
    ScalarSum,
    TimeDelta,
    apply_momentum_deltas,
)
from stochlim.symbols import TimeLabel, WaveLabel, dot, dot_p, omega
from stochlim.words import balanced_patterns, word_from_pattern

HALF = Fraction(1, 2)


def labels(n):
    return (
        [TimeLabel(f"t{i}") for i in range(1, n + 1)],
        [WaveLabel(f"k{i}") for i in range(1, n + 1)],
    )


def test_two_point_absorption_channel():
    word = word_from_pattern([-1, 1])
    (t1, t2), (k1, k2) = labels(2)
    expected = apply_momentum_deltas(
        ScalarSum.of(
            Monomial.build(
                two_pi=1,
                factors=[
                    TimeDelta(t1 - t2),
                    EnergyDelta(omega(k1) + HALF * dot(k1, k1) + dot_p(k1)),
                    MFactor(k1, 1),
                    DeltaK(k1, k2),
                ],
            )
        )
    )
    assert free_correlator(word, GAUSSIAN) == expected


def test_two_point_emission_channel():
    word = word_from_pattern([1, -1])
    (t1, t2), (k1, k2) = labels(2)
    expected = apply_momentum_deltas(
        ScalarSum.of(
            Monomial.build(
                two_pi=1,
                factors=[
                    TimeDelta(t2 - t1),
                    EnergyDelta(omega(k2) - HALF * dot(k2, k2) + dot_p(k2)),
                    MFactor(k2, 0),
                    DeltaK(k2, k1),
                ],
            )
        )
    )
    assert free_correlator(word, GAUSSIAN) == expected
    # only the occupation-weighted channel contributes, so Fock kills it
    assert free_correlator(word, FOCK).is_zero


def test_nested_four_point_inner_shift():
    word = word_from_pattern([-1, -1, 1, 1])
    result = free_correlator(word, GAUSSIAN)
    assert len(result.terms) == 1
    (t, k) = labels(4)
    k1, k2 = k[0], k[1]
    inner = omega(k2) + HALF * dot(k2, k2) + dot_p(k2) + dot(k1, k2)
    assert inner.normalized() in result.terms[0].energy_deltas


def test_expansion_has_all_channels():
    word = word_from_pattern([-1, 1])
    branches = expand_master_word(word)
    assert len(branches) == 4
    species = {(b[0].species, b[0].dag, b[1].species, b[1].dag) for b in branches}
    assert (1, False, 1, True) in species
    assert (2, True, 2, False) in species


def test_cross_species_adjacency_vanishes():
    t, k = labels(4)
    letters = (
        MasterLetter(1, False, t[0], k[0]),
        MasterLetter(2, True, t[1], k[1]),
    )
    assert _reduce_leftmost(letters) is None


def test_unreducible_word_vanishes():
    t, k = labels(2)
    letters = (
        MasterLetter(2, True, t[0], k[0]),
        MasterLetter(2, False, t[1], k[1]),
    )
    assert _reduce_leftmost(letters) is None


def test_reduction_confluence():
    for n in (2, 4, 6):
        for pattern in balanced_patterns(n):
            word = word_from_pattern(pattern)
            for branch in expand_master_word(word):
                assert len(_reduce_all_orders(branch)) == 1


def test_channel_count_equals_non_crossing():
    for n in (2, 4, 6):
        for pattern in balanced_patterns(n):
            word = word_from_pattern(pattern)
            assert len(free_correlator(word, GAUSSIAN).terms) == count_non_crossing(
                pattern
            )


def test_free_equivalence_up_to_six():
    for n in (2, 4, 6):
        for pattern in balanced_patterns(n):
            word = word_from_pattern(pattern)
            for state in (FOCK, GAUSSIAN):
                report = check_free_equivalence(word, state)
                assert report.equal, (pattern, state.kind, report)


def test_equivalence_report_diff():
    # feed two different words through the report machinery by hand
    word_a = word_from_pattern([-1, 1])
    lhs = limit_correlator(word_a, GAUSSIAN)
    rhs = free_correlator(word_from_pattern([1, -1]), GAUSSIAN)
    assert lhs != rhs


def test_bosonic_double_symbolic_occupation():
    coeffs = BogoliubovCoeffs.from_occupation()
    assert coeffs.normalized
    assert bosonic_double_check(coeffs)


def test_bosonic_double_fock_reduction():
    coeffs = BogoliubovCoeffs.from_occupation(v2=(0, 0))
    assert bosonic_double_check(coeffs)
    assert coeffs.u2 == (1, 0)


def test_bosonic_double_numeric():
    coeffs = BogoliubovCoeffs.from_occupation(v2=(Fraction(3, 4), 0))
    assert bosonic_double_check(coeffs)


def test_bosonic_double_rejects_unnormalized():
    bad = BogoliubovCoeffs(u2=(Fraction(2), Fraction(0)), v2=(Fraction(2), Fraction(0)))
    assert not bosonic_double_check(bad)
