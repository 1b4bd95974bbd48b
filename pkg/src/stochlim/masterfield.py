"""The free master-field algebra and its Fock-state evaluator.

The limit of an annihilation-type entangled operator splits into two
free channels, b(t,k) = b1(t,k) + b2+(t,k), independent in the free
sense (an annihilator meeting a creator of the other species gives the
zero operator).  Expectations are evaluated by repeated contraction of
adjacent annihilator-creator pairs; no diagrams are enumerated here,
which keeps this path independent of the diagram engine it is checked
against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .correlator import StateSpec, apply_state, limit_correlator
from .scalars import (
    DeltaK,
    EnergyDelta,
    MFactor,
    Monomial,
    ScalarSum,
    TimeDelta,
    apply_momentum_deltas,
)
from .symbols import TimeLabel, WaveLabel, dot, dot_p, omega, shift_p
from .words import OperatorWord

__all__ = [
    "MasterLetter",
    "BogoliubovCoeffs",
    "free_correlator",
    "check_free_equivalence",
    "EquivalenceReport",
    "bosonic_double_check",
]

# Moving a function of p leftward across a master letter shifts p by the
# letter's field momentum: from b1 p = (p+k) b1, b2 p = (p-k) b2 and their
# adjoints.  Keyed by (species, dagger).
_PASS_SHIFT = {
    (1, False): +1,  # b1
    (1, True): -1,   # b1+
    (2, False): -1,  # b2
    (2, True): +1,   # b2+
}


@dataclass(frozen=True)
class MasterLetter:
    species: int  # 1 or 2
    dag: bool
    time: TimeLabel
    wave: WaveLabel


def expand_master_word(word: OperatorWord) -> list[tuple[MasterLetter, ...]]:
    """All species assignments of b = b1 + b2+ and b+ = b1+ + b2."""
    choices = []
    for letter in word.letters:
        if letter.eps == -1:
            options = [(1, False), (2, True)]
        else:
            options = [(1, True), (2, False)]
        choices.append(
            [MasterLetter(sp, dag, letter.time, letter.wave) for sp, dag in options]
        )
    out: list[tuple[MasterLetter, ...]] = [()]
    for opts in choices:
        out = [prefix + (o,) for prefix in out for o in opts]
    return out


def _contract(letters: list[MasterLetter], i: int, scalar: Monomial) -> Monomial:
    """Pairing value of the adjacent (annihilator, creator) pair at i, i+1,
    its p-dependence shifted across the letters still standing to the left."""
    ann, cre = letters[i], letters[i + 1]
    sign = Fraction(1, 2) if ann.species == 1 else Fraction(-1, 2)
    energy = omega(ann.wave) + sign * dot(ann.wave, ann.wave) + dot_p(ann.wave)
    for passed in letters[:i]:
        energy = shift_p(
            energy, passed.wave, _PASS_SHIFT[(passed.species, passed.dag)]
        )
    return scalar * Monomial.build(
        two_pi=1,
        factors=[
            TimeDelta(ann.time - cre.time),
            EnergyDelta(energy),
            MFactor(ann.wave, 1 if ann.species == 1 else 0),
            DeltaK(ann.wave, cre.wave),
        ],
    )


def _reduce_leftmost(letters: Iterable[MasterLetter]) -> Optional[Monomial]:
    """Contract the leftmost adjacent annihilator-creator pair until the word
    is empty; None when the word cannot be fully contracted."""
    ls = list(letters)
    scalar = Monomial.one()
    while ls:
        site = next(
            (i for i in range(len(ls) - 1) if not ls[i].dag and ls[i + 1].dag),
            None,
        )
        if site is None:
            return None
        if ls[site].species != ls[site + 1].species:
            return None  # cross-species product is the zero operator
        scalar = _contract(ls, site, scalar)
        del ls[site : site + 2]
    return scalar


def _reduce_all_orders(letters: tuple[MasterLetter, ...]) -> set:
    """Outcomes of every reduction order, canonicalized; confluence means
    the returned set is a singleton."""
    outcomes: set[ScalarSum] = set()

    def go(ls: tuple[MasterLetter, ...], scalar: Monomial) -> None:
        if not ls:
            outcomes.add(apply_momentum_deltas(ScalarSum.of(scalar)))
            return
        sites = [
            i for i in range(len(ls) - 1) if not ls[i].dag and ls[i + 1].dag
        ]
        if not sites:
            outcomes.add(ScalarSum.zero())
            return
        for site in sites:
            if ls[site].species != ls[site + 1].species:
                outcomes.add(ScalarSum.zero())
                continue
            work = list(ls)
            new_scalar = _contract(work, site, scalar)
            go(tuple(work[:site] + work[site + 2 :]), new_scalar)

    go(tuple(letters), Monomial.one())
    return outcomes


def free_correlator(word: OperatorWord, state: StateSpec) -> ScalarSum:
    """Fock expectation of the master-field word mapped from the given
    creation/annihilation word."""
    if not word.balanced:
        return ScalarSum.zero()
    parts = []
    for branch in expand_master_word(word):
        value = _reduce_leftmost(branch)
        if value is not None:
            parts.append(value)
    return apply_momentum_deltas(apply_state(ScalarSum.from_iter(parts), state))


@dataclass(frozen=True)
class EquivalenceReport:
    equal: bool
    only_diagram: tuple[str, ...]
    only_free: tuple[str, ...]


def check_free_equivalence(word: OperatorWord, state: StateSpec) -> EquivalenceReport:
    """Compare the diagram-built limit against the free-algebra evaluation."""
    lhs = limit_correlator(word, state)
    rhs = free_correlator(word, state)
    if lhs == rhs:
        return EquivalenceReport(True, (), ())
    lhs_terms = {m.merge_key: m for m in lhs.terms}
    rhs_terms = {m.merge_key: m for m in rhs.terms}
    only_l = tuple(
        lhs_terms[k].render() for k in sorted(lhs_terms.keys() - rhs_terms.keys())
    )
    only_r = tuple(
        rhs_terms[k].render() for k in sorted(rhs_terms.keys() - lhs_terms.keys())
    )
    # equal keys with different rationals also count as a diff
    for k in sorted(lhs_terms.keys() & rhs_terms.keys()):
        if lhs_terms[k].rational != rhs_terms[k].rational:
            only_l += (lhs_terms[k].render(),)
            only_r += (rhs_terms[k].render(),)
    return EquivalenceReport(False, only_l, only_r)


@dataclass(frozen=True)
class BogoliubovCoeffs:
    """|u|^2 and |v|^2 as linear forms a + b*nu in a formal occupation nu.

    Numeric coefficients use nu_coeff = 0; the symbolic occupation N(k)
    is (0, 1).  The mixing a(k) -> u a1(k) + v a2+(k) preserves the
    commutator exactly when u2 - v2 = 1.
    """

    u2: tuple[Fraction, Fraction]
    v2: tuple[Fraction, Fraction]

    @classmethod
    def from_occupation(cls, v2=(0, 1)) -> "BogoliubovCoeffs":
        v2 = (Fraction(v2[0]), Fraction(v2[1]))
        return cls(u2=(v2[0] + 1, v2[1]), v2=v2)

    @property
    def normalized(self) -> bool:
        return (
            self.u2[0] - self.v2[0] == 1 and self.u2[1] - self.v2[1] == 0
        )


def _double_pair_weight(coeffs: BogoliubovCoeffs, left: str, right: str):
    """Vacuum pairing weight of two mixed letters; letters are 'a' or 'a+'.

    Expanding a = u a1 + v a2+ and a+ = u a1+ + v a2 over the double Fock
    vacuum, only annihilator-before-creator pairings of equal species
    survive: a a+ keeps the u a1 * u a1+ branch, a+ a keeps v a2 * v a2+.
    """
    if left == "a" and right == "a+":
        return coeffs.u2
    if left == "a+" and right == "a":
        return coeffs.v2
    return (Fraction(0), Fraction(0))


def bosonic_double_check(coeffs: BogoliubovCoeffs) -> bool:
    """Verify the bosonic mixing reproduces a mean-zero Gaussian state:
    <a+ a> = |v|^2 d(k-k'), <a a+> = (|v|^2 + 1) d(k-k'), <a a> = <a+ a+> = 0,
    under the exact normalization |u|^2 - |v|^2 = 1."""
    if not coeffs.normalized:
        return False
    v2 = coeffs.v2
    checks = [
        _double_pair_weight(coeffs, "a", "a+") == (v2[0] + 1, v2[1]),
        _double_pair_weight(coeffs, "a+", "a") == v2,
        _double_pair_weight(coeffs, "a", "a") == (0, 0),
        _double_pair_weight(coeffs, "a+", "a+") == (0, 0),
    ]
    return all(checks)
