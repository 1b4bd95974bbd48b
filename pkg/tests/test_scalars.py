import random
from fractions import Fraction

import pytest

from stochlim.scalars import (
    DeltaK,
    EnergyDelta,
    MFactor,
    Monomial,
    OscExp,
    ScalarSum,
    TimeDelta,
    apply_momentum_deltas,
    multiply,
    q_factor,
)
from stochlim.symbols import TimeComb, TimeLabel, WaveLabel, dot, dot_p, omega

T1, T2, T3 = (TimeLabel(f"t{i}") for i in (1, 2, 3))
K1, K2, K3 = (WaveLabel(f"k{i}") for i in (1, 2, 3))


def osc_sum(*factors, **kw):
    return ScalarSum.of(Monomial.build(factors=list(factors), **kw))


def test_merge_exponents_with_equal_time():
    a = osc_sum(OscExp(T1 - T2, omega(K1)))
    b = osc_sum(OscExp(T1 - T2, dot_p(K1)))
    merged = osc_sum(OscExp(T1 - T2, omega(K1) + dot_p(K1)))
    assert multiply(a, b) == merged


def test_zero_annihilates():
    a = osc_sum(OscExp(T1 - T2, omega(K1)))
    assert multiply(a, ScalarSum.zero()).is_zero


def test_exponent_cancellation_gives_unit():
    a = osc_sum(OscExp(T1 - T2, omega(K1)))
    b = osc_sum(OscExp(T1 - T2, -omega(K1)))
    assert multiply(a, b) == ScalarSum.unit()


def test_factored_forms_compare_equal():
    # exp((i/l^2)(t1-t2)E) written as a difference or as two single-time rows
    diff_form = osc_sum(OscExp(T1 - T2, omega(K1)))
    row_form = osc_sum(
        OscExp(TimeComb.of(T1), omega(K1)), OscExp(TimeComb.of(T2), -omega(K1))
    )
    assert diff_form == row_form


def test_q_factor_is_negated_exponent():
    assert ScalarSum.of(Monomial.build(factors=[q_factor(T1 - T2, omega(K1))])) == osc_sum(
        OscExp(T1 - T2, -omega(K1))
    )


def test_sum_merges_structurally_identical_terms():
    m = Monomial.build(rational=Fraction(1, 3), factors=[OscExp(T1 - T2, omega(K1))])
    s = ScalarSum.from_iter([m, m, m])
    assert len(s.terms) == 1
    assert s.terms[0].rational == 1
    cancel = ScalarSum.from_iter([m, m.scaled(-1)])
    assert cancel.is_zero


def test_canonicalization_idempotent():
    m = Monomial.build(
        rational=Fraction(-3, 2),
        two_pi=1,
        lam=-2,
        factors=[
            OscExp(T2 - T1, omega(K2), pairing=True),
            DeltaK(K2, K1),
            MFactor(K2, 1),
        ],
    )
    rebuilt = Monomial.build(
        rational=m.rational,
        two_pi=m.two_pi,
        lam=m.lam,
        factors=[OscExp(TimeComb.of(l), e) for l, e in m.osc]
        + [DeltaK(a, b) for a, b in m.delta_k]
        + [MFactor(w, o) for w, o in m.m_factors],
        quotas=m.quotas,
    )
    assert m == rebuilt
    once = apply_momentum_deltas(ScalarSum.of(m))
    assert apply_momentum_deltas(once) == once


def _random_monomial(rng):
    times = [TimeLabel(f"t{i}") for i in range(1, 5)]
    waves = [WaveLabel(f"k{i}") for i in range(1, 5)]
    factors = []
    for _ in range(rng.randint(0, 3)):
        t = rng.choice(times) - rng.choice(times)
        e = omega(rng.choice(waves)) + Fraction(rng.randint(-2, 2)) * dot(
            rng.choice(waves), rng.choice(waves)
        )
        if not t.is_zero and not e.is_zero:
            factors.append(OscExp(t, e))
    if rng.random() < 0.5:
        a, b = rng.sample(waves, 2)
        factors.append(DeltaK(a, b))
    if rng.random() < 0.5:
        factors.append(MFactor(rng.choice(waves), rng.randint(0, 1)))
    return Monomial.build(
        rational=Fraction(rng.randint(1, 5), rng.randint(1, 3)),
        lam=rng.choice([0, -2]),
        factors=factors,
    )


def test_multiply_associative_commutative():
    rng = random.Random(5)
    for _ in range(60):
        a = ScalarSum.of(_random_monomial(rng))
        b = ScalarSum.of(_random_monomial(rng))
        c = ScalarSum.of(_random_monomial(rng))
        assert multiply(a, b) == multiply(b, a)
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
        assert multiply(a, b + c) == multiply(a, b) + multiply(a, c)


def test_momentum_delta_substitution():
    s = osc_sum(DeltaK(K1, K2), OscExp(T1 - T2, dot(K2, K3)))
    expect = osc_sum(DeltaK(K1, K2), OscExp(T1 - T2, dot(K1, K3)))
    assert apply_momentum_deltas(s) == expect

    s2 = osc_sum(DeltaK(K1, K2), OscExp(T1 - T2, dot_p(K2)))
    expect2 = osc_sum(DeltaK(K1, K2), OscExp(T1 - T2, dot_p(K1)))
    assert apply_momentum_deltas(s2) == expect2


def test_momentum_delta_chain_closure():
    s = osc_sum(
        DeltaK(K1, K2),
        DeltaK(K2, K3),
        OscExp(T1 - T2, omega(K3) + dot_p(K2)),
        MFactor(K3, 0),
    )
    expect = osc_sum(
        DeltaK(K1, K2),
        DeltaK(K2, K3),
        OscExp(T1 - T2, omega(K1) + dot_p(K1)),
        MFactor(K1, 0),
    )
    assert apply_momentum_deltas(s) == expect


def test_momentum_delta_can_cancel_rows():
    s = osc_sum(DeltaK(K1, K2), OscExp(T1 - T2, dot(K1, K3) - dot(K2, K3)))
    unified = apply_momentum_deltas(s)
    assert unified.terms[0].osc == ()


def test_delta_factor_validation():
    with pytest.raises(ValueError):
        Monomial.build(factors=[DeltaK(K1, K1)])
    with pytest.raises(ValueError):
        Monomial.build(factors=[TimeDelta(TimeComb.zero())])
    with pytest.raises(ValueError):
        Monomial.build(factors=[MFactor(K1, 2)])
    with pytest.raises(ValueError):
        Monomial.build(factors=[OscExp(TimeComb.zero(), omega(K1), pairing=True)])


def test_delta_sign_normalization():
    a = osc_sum(TimeDelta(T1 - T2), EnergyDelta(omega(K1) - dot_p(K2)))
    b = osc_sum(TimeDelta(T2 - T1), EnergyDelta(dot_p(K2) - omega(K1)))
    assert a == b


def test_json_round_trip():
    rng = random.Random(9)
    for _ in range(20):
        s = ScalarSum.from_iter([_random_monomial(rng) for _ in range(3)])
        assert ScalarSum.from_json(s.to_json()) == s
    limit_like = ScalarSum.of(
        Monomial.build(
            two_pi=2,
            factors=[
                TimeDelta(T1 - T2),
                EnergyDelta(omega(K1) + dot_p(K1)),
                DeltaK(K1, K2),
                MFactor(K1, 1),
            ],
        )
    )
    assert ScalarSum.from_json(limit_like.to_json()) == limit_like


def test_render_deterministic():
    m = Monomial.build(
        rational=Fraction(1, 2),
        two_pi=1,
        lam=-2,
        factors=[OscExp(T1 - T2, omega(K1), pairing=True), DeltaK(K1, K2)],
    )
    text = ScalarSum.of(m).render()
    assert text == (
        "1/2 * (2pi) * lam^-2 * pair(t1 - t2) * "
        "exp{(i/lam^2)[t1: w(k1); t2: -w(k1)]} * dk(k1,k2)"
    )
