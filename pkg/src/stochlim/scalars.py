"""Scalar expressions: exact sums of monomials.

A monomial is a product of an exact rational, formal powers of 2pi and
of the coupling lam, oscillating exponents, delta factors and occupation
factors.  Equality of sums is structural equality of canonical forms,
so canonicalization is the load-bearing part of this module:

* The oscillating content exp((i/lam^2) * sum_r T_r * E_r) is expanded
  into one energy row per time label.  Products that were written with
  composite time arguments, such as exp((i/lam^2)(t - t') * E), compare
  equal to the same content written as two single-time factors; the
  different computation paths of this package produce both shapes.
* Each pairing owns one 1/lam^2 quota, recorded as the sign-normalized
  time combination of its exponent.  The quota multiset is part of the
  canonical form; the stochastic limit consumes exactly these quotas.
* Momentum deltas identify wave labels per monomial through a union
  find with the smallest label as representative (applyMomentumDeltas);
  the delta factors themselves keep their original labels.

The imaginary unit never appears in coefficients; it lives only in the
semantics of the oscillating exponent and is materialized in the numeric
evaluator.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .symbols import EnergyComb, TimeComb, TimeLabel, WaveLabel

__all__ = [
    "OscExp",
    "DeltaK",
    "TimeDelta",
    "EnergyDelta",
    "MFactor",
    "Monomial",
    "ScalarSum",
    "multiply",
    "apply_momentum_deltas",
    "q_factor",
]


@dataclass(frozen=True)
class OscExp:
    """exp((i/lam^2) * time * energy); pairing=True attaches a 1/lam^2 quota."""

    time: TimeComb
    energy: EnergyComb
    pairing: bool = False


@dataclass(frozen=True)
class DeltaK:
    """Momentum delta d(k - k'), symmetric in its two labels."""

    left: WaveLabel
    right: WaveLabel


@dataclass(frozen=True)
class TimeDelta:
    """d(T) for a time combination T; a limit object."""

    time: TimeComb


@dataclass(frozen=True)
class EnergyDelta:
    """d(E) for an energy combination E, operator valued in p; a limit object."""

    energy: EnergyComb


@dataclass(frozen=True)
class MFactor:
    """Occupation factor N(k) + offset with offset 0 or 1."""

    wave: WaveLabel
    offset: int


Factor = Union[OscExp, DeltaK, TimeDelta, EnergyDelta, MFactor]


def q_factor(time: TimeComb, energy: EnergyComb, pairing: bool = False) -> OscExp:
    """The oscillating exponent exp(-(i/lam^2) * time * energy)."""
    return OscExp(time, -energy, pairing)


def _pair_key(p: tuple[WaveLabel, WaveLabel]) -> tuple:
    return (p[0].sort_key, p[1].sort_key)


@dataclass(frozen=True)
class Monomial:
    """One canonical product term.

    Do not call the constructor directly; Monomial.build normalizes.
    """

    rational: Fraction
    two_pi: int
    lam: int
    quotas: tuple[TimeComb, ...]
    osc: tuple[tuple[TimeLabel, EnergyComb], ...]
    time_deltas: tuple[TimeComb, ...]
    energy_deltas: tuple[EnergyComb, ...]
    delta_k: tuple[tuple[WaveLabel, WaveLabel], ...]
    m_factors: tuple[tuple[WaveLabel, int], ...]

    @classmethod
    def build(
        cls,
        rational=1,
        two_pi: int = 0,
        lam: int = 0,
        factors: Iterable[Factor] = (),
        quotas: Iterable[TimeComb] = (),
    ) -> "Monomial":
        rows: dict[TimeLabel, EnergyComb] = {}
        quota_list: list[TimeComb] = []
        for q in quotas:
            if q.is_zero:
                raise ValueError("a pairing quota needs a nonzero time argument")
            quota_list.append(q.normalized())
        tds: list[TimeComb] = []
        eds: list[EnergyComb] = []
        dks: list[tuple[WaveLabel, WaveLabel]] = []
        mfs: list[tuple[WaveLabel, int]] = []
        for f in factors:
            if isinstance(f, OscExp):
                if f.time.is_zero or f.energy.is_zero:
                    if f.pairing:
                        raise ValueError(
                            "a pairing exponent needs nonzero time and energy"
                        )
                    continue
                if f.pairing:
                    quota_list.append(f.time.normalized())
                for label, c in f.time.coeffs:
                    prev = rows.get(label, EnergyComb.zero())
                    rows[label] = prev + f.energy.scale(c)
            elif isinstance(f, TimeDelta):
                if f.time.is_zero:
                    raise ValueError("time delta of the zero combination")
                tds.append(f.time.normalized())
            elif isinstance(f, EnergyDelta):
                if f.energy.is_zero:
                    raise ValueError("energy delta of the zero combination")
                eds.append(f.energy.normalized())
            elif isinstance(f, DeltaK):
                if f.left == f.right:
                    raise ValueError("momentum delta needs two distinct labels")
                pair = tuple(sorted((f.left, f.right), key=lambda w: w.sort_key))
                dks.append(pair)  # type: ignore[arg-type]
            elif isinstance(f, MFactor):
                if f.offset not in (0, 1):
                    raise ValueError("occupation offset must be 0 or 1")
                mfs.append((f.wave, f.offset))
            else:
                raise TypeError(f"not a scalar factor: {f!r}")
        osc = tuple(
            sorted(
                ((l, e) for l, e in rows.items() if not e.is_zero),
                key=lambda le: le[0].sort_key,
            )
        )
        return cls(
            rational=Fraction(rational),
            two_pi=two_pi,
            lam=lam,
            quotas=tuple(sorted(quota_list, key=lambda t: t.sort_key)),
            osc=osc,
            time_deltas=tuple(sorted(tds, key=lambda t: t.sort_key)),
            energy_deltas=tuple(sorted(eds, key=lambda e: e.sort_key)),
            delta_k=tuple(sorted(dks, key=_pair_key)),
            m_factors=tuple(
                sorted(mfs, key=lambda mo: (mo[0].sort_key, mo[1]))
            ),
        )

    @classmethod
    def one(cls) -> "Monomial":
        return cls.build()

    @property
    def is_zero(self) -> bool:
        return self.rational == 0

    def scaled(self, r) -> "Monomial":
        return Monomial(
            rational=self.rational * Fraction(r),
            two_pi=self.two_pi,
            lam=self.lam,
            quotas=self.quotas,
            osc=self.osc,
            time_deltas=self.time_deltas,
            energy_deltas=self.energy_deltas,
            delta_k=self.delta_k,
            m_factors=self.m_factors,
        )

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not isinstance(other, Monomial):
            return NotImplemented
        rows: dict[TimeLabel, EnergyComb] = dict(self.osc)
        for label, e in other.osc:
            prev = rows.get(label, EnergyComb.zero())
            rows[label] = prev + e
        osc = tuple(
            sorted(
                ((l, e) for l, e in rows.items() if not e.is_zero),
                key=lambda le: le[0].sort_key,
            )
        )
        return Monomial(
            rational=self.rational * other.rational,
            two_pi=self.two_pi + other.two_pi,
            lam=self.lam + other.lam,
            quotas=tuple(
                sorted(self.quotas + other.quotas, key=lambda t: t.sort_key)
            ),
            osc=osc,
            time_deltas=tuple(
                sorted(self.time_deltas + other.time_deltas, key=lambda t: t.sort_key)
            ),
            energy_deltas=tuple(
                sorted(
                    self.energy_deltas + other.energy_deltas, key=lambda e: e.sort_key
                )
            ),
            delta_k=tuple(sorted(self.delta_k + other.delta_k, key=_pair_key)),
            m_factors=tuple(
                sorted(
                    self.m_factors + other.m_factors,
                    key=lambda mo: (mo[0].sort_key, mo[1]),
                )
            ),
        )

    @property
    def merge_key(self) -> tuple:
        """Everything but the rational coefficient; equal keys merge in a sum."""
        return (
            self.two_pi,
            self.lam,
            tuple(q.sort_key for q in self.quotas),
            tuple((l.sort_key, e.sort_key) for l, e in self.osc),
            tuple(t.sort_key for t in self.time_deltas),
            tuple(e.sort_key for e in self.energy_deltas),
            tuple(_pair_key(p) for p in self.delta_k),
            tuple((w.sort_key, o) for w, o in self.m_factors),
        )

    def render(self) -> str:
        parts: list[str] = []
        if self.rational != 1 or not (
            self.two_pi
            or self.lam
            or self.osc
            or self.time_deltas
            or self.energy_deltas
            or self.delta_k
            or self.m_factors
        ):
            parts.append(str(self.rational))
        if self.two_pi:
            parts.append("(2pi)" if self.two_pi == 1 else f"(2pi)^{self.two_pi}")
        if self.lam:
            parts.append(f"lam^{self.lam}")
        for q in self.quotas:
            parts.append(f"pair({q.render()})")
        if self.osc:
            rows = "; ".join(f"{l.name}: {e.render()}" for l, e in self.osc)
            parts.append("exp{(i/lam^2)[" + rows + "]}")
        for t in self.time_deltas:
            parts.append(f"dT({t.render()})")
        for e in self.energy_deltas:
            parts.append(f"dE({e.render()})")
        for a, b in self.delta_k:
            parts.append(f"dk({a.name},{b.name})")
        for w, off in self.m_factors:
            parts.append(f"N({w.name})" if off == 0 else f"(N({w.name})+1)")
        return " * ".join(parts)


@dataclass(frozen=True)
class ScalarSum:
    """Canonical sum of monomials: sorted, merged, zero terms dropped."""

    terms: tuple[Monomial, ...]

    @classmethod
    def of(cls, *monomials: Monomial) -> "ScalarSum":
        return cls.from_iter(monomials)

    @classmethod
    def from_iter(cls, monomials: Iterable[Monomial]) -> "ScalarSum":
        by_key: dict[tuple, Monomial] = {}
        for m in monomials:
            if m.is_zero:
                continue
            key = m.merge_key
            if key in by_key:
                by_key[key] = dataclasses.replace(
                    m, rational=by_key[key].rational + m.rational
                )
            else:
                by_key[key] = m
        kept = [m for m in by_key.values() if not m.is_zero]
        kept.sort(key=lambda m: m.merge_key)
        return cls(tuple(kept))

    @classmethod
    def zero(cls) -> "ScalarSum":
        return cls(())

    @classmethod
    def unit(cls) -> "ScalarSum":
        return cls.of(Monomial.one())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ScalarSum") -> "ScalarSum":
        return ScalarSum.from_iter(self.terms + other.terms)

    def __mul__(self, other: "ScalarSum | Monomial") -> "ScalarSum":
        if isinstance(other, Monomial):
            other = ScalarSum.of(other)
        if not isinstance(other, ScalarSum):
            return NotImplemented
        return ScalarSum.from_iter(
            a * b for a, b in itertools.product(self.terms, other.terms)
        )

    def scaled(self, r) -> "ScalarSum":
        return ScalarSum.from_iter(m.scaled(r) for m in self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        return "\n+ ".join(m.render() for m in self.terms)

    def to_json(self) -> dict:
        def tc(t: TimeComb):
            return [[l.name, c] for l, c in t.coeffs]

        def ec(e: EnergyComb):
            from .symbols import _KIND_NAMES  # local: serialization detail

            return [
                [_KIND_NAMES[b.kind], [w.name for w in b.waves], c.numerator, c.denominator]
                for b, c in e.terms
            ]

        return {
            "terms": [
                {
                    "rational": [m.rational.numerator, m.rational.denominator],
                    "twoPi": m.two_pi,
                    "lambda": m.lam,
                    "pairs": [tc(q) for q in m.quotas],
                    "osc": [[l.name, ec(e)] for l, e in m.osc],
                    "timeDeltas": [tc(t) for t in m.time_deltas],
                    "energyDeltas": [ec(e) for e in m.energy_deltas],
                    "waveDeltas": [[a.name, b.name] for a, b in m.delta_k],
                    "occupation": [[w.name, o] for w, o in m.m_factors],
                }
                for m in self.terms
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "ScalarSum":
        from .symbols import _EBasis, _KINDS_BY_NAME

        def tc(items) -> TimeComb:
            return TimeComb.make([(TimeLabel(n), int(c)) for n, c in items])

        def ec(items) -> EnergyComb:
            return EnergyComb.make(
                [
                    (
                        _EBasis(_KINDS_BY_NAME[kind], tuple(WaveLabel(n) for n in waves)),
                        Fraction(int(num), int(den)),
                    )
                    for kind, waves, num, den in items
                ]
            )

        monomials = []
        for t in data["terms"]:
            factors: list[Factor] = []
            for name, e in t["osc"]:
                factors.append(OscExp(TimeComb.of(TimeLabel(name)), ec(e)))
            for item in t["timeDeltas"]:
                factors.append(TimeDelta(tc(item)))
            for item in t["energyDeltas"]:
                factors.append(EnergyDelta(ec(item)))
            for a, b in t["waveDeltas"]:
                factors.append(DeltaK(WaveLabel(a), WaveLabel(b)))
            for w, o in t["occupation"]:
                factors.append(MFactor(WaveLabel(w), int(o)))
            monomials.append(
                Monomial.build(
                    rational=Fraction(t["rational"][0], t["rational"][1]),
                    two_pi=int(t["twoPi"]),
                    lam=int(t["lambda"]),
                    factors=factors,
                    quotas=[tc(q) for q in t["pairs"]],
                )
            )
        return cls.from_iter(monomials)


def multiply(a: ScalarSum, b: ScalarSum) -> ScalarSum:
    """Product of two sums in canonical form."""
    return a * b


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[WaveLabel, WaveLabel] = {}

    def find(self, x: WaveLabel) -> WaveLabel:
        p = self.parent.get(x, x)
        if p == x:
            return x
        root = self.find(p)
        self.parent[x] = root
        return root

    def union(self, a: WaveLabel, b: WaveLabel) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if rb.sort_key < ra.sort_key:
            ra, rb = rb, ra
        self.parent[rb] = ra


def _unify_monomial(m: Monomial) -> Monomial:
    if not m.delta_k:
        return m
    uf = _UnionFind()
    for a, b in m.delta_k:
        uf.union(a, b)
    rep = uf.find
    factors: list[Factor] = []
    for label, e in m.osc:
        factors.append(OscExp(TimeComb.of(label), e.subst_waves(rep)))
    for t in m.time_deltas:
        factors.append(TimeDelta(t))
    for e in m.energy_deltas:
        factors.append(EnergyDelta(e.subst_waves(rep)))
    for a, b in m.delta_k:
        factors.append(DeltaK(a, b))
    for w, o in m.m_factors:
        factors.append(MFactor(rep(w), o))
    return Monomial.build(
        rational=m.rational,
        two_pi=m.two_pi,
        lam=m.lam,
        factors=factors,
        quotas=m.quotas,
    )


def apply_momentum_deltas(s: "ScalarSum | Monomial"):
    """Substitute, per monomial, every delta-identified wave label by the
    smallest label of its delta chain (the delta factors stay)."""
    if isinstance(s, Monomial):
        return _unify_monomial(s)
    return ScalarSum.from_iter(_unify_monomial(m) for m in s.terms)
