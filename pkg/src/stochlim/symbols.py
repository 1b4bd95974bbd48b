"""Formal labels and exact linear combinations.

Times and wave vectors stay opaque symbols end to end; nothing in the
engine ever assigns them components.  Energies live in the span of the
basis symbols w(k) (dispersion), k.k' (dot products between wave
vectors, k.k allowed) and k.p (dot product with the particle momentum),
with exact rational coefficients.  Time combinations carry integer
coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

__all__ = [
    "TimeLabel",
    "WaveLabel",
    "TimeComb",
    "EnergyComb",
    "omega",
    "dot",
    "dot_p",
    "shift_p",
]

_DIGIT_SPLIT = re.compile(r"(\d+)")


def _natural_key(name: str) -> tuple:
    # orders k2 before k10 and never compares int with str
    return tuple(
        (0, int(part)) if part.isdigit() else (1, part)
        for part in _DIGIT_SPLIT.split(name)
        if part
    )


@dataclass(frozen=True)
class TimeLabel:
    name: str

    @property
    def sort_key(self) -> tuple:
        return _natural_key(self.name)

    def __sub__(self, other: "TimeLabel") -> "TimeComb":
        return TimeComb.diff(self, other)

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class WaveLabel:
    name: str

    @property
    def sort_key(self) -> tuple:
        return _natural_key(self.name)

    def __repr__(self) -> str:
        return self.name


def _signed_join(parts: list[tuple[str, bool]]) -> str:
    """Join rendered terms, folding leading signs into ' + ' / ' - '."""
    if not parts:
        return "0"
    text, negative = parts[0]
    out = ("-" + text) if negative else text
    for text, negative in parts[1:]:
        out += (" - " if negative else " + ") + text
    return out


@dataclass(frozen=True)
class TimeComb:
    """Integer combination of time labels; the empty combination is zero."""

    coeffs: tuple[tuple[TimeLabel, int], ...]

    @staticmethod
    def make(items: Iterable[tuple[TimeLabel, int]]) -> "TimeComb":
        acc: dict[TimeLabel, int] = {}
        for label, c in items:
            acc[label] = acc.get(label, 0) + c
        kept = [(l, c) for l, c in acc.items() if c]
        kept.sort(key=lambda lc: lc[0].sort_key)
        return TimeComb(tuple(kept))

    @staticmethod
    def of(label: TimeLabel, coeff: int = 1) -> "TimeComb":
        return TimeComb.make([(label, coeff)])

    @staticmethod
    def diff(a: TimeLabel, b: TimeLabel) -> "TimeComb":
        return TimeComb.make([(a, 1), (b, -1)])

    @staticmethod
    def zero() -> "TimeComb":
        return TimeComb(())

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, label: TimeLabel) -> int:
        for l, c in self.coeffs:
            if l == label:
                return c
        return 0

    @property
    def support(self) -> tuple[TimeLabel, ...]:
        return tuple(l for l, _ in self.coeffs)

    def __add__(self, other: "TimeComb") -> "TimeComb":
        return TimeComb.make(list(self.coeffs) + list(other.coeffs))

    def __neg__(self) -> "TimeComb":
        return TimeComb(tuple((l, -c) for l, c in self.coeffs))

    def __sub__(self, other: "TimeComb") -> "TimeComb":
        return self + (-other)

    def scale(self, c: int) -> "TimeComb":
        if c == 0:
            return TimeComb.zero()
        return TimeComb(tuple((l, c * cc) for l, cc in self.coeffs))

    def normalized(self) -> "TimeComb":
        """Flip the overall sign so the earliest label has a positive coefficient."""
        if self.coeffs and self.coeffs[0][1] < 0:
            return -self
        return self

    @property
    def sort_key(self) -> tuple:
        return tuple((l.sort_key, c) for l, c in self.coeffs)

    def render(self) -> str:
        parts = []
        for l, c in self.coeffs:
            mag = l.name if abs(c) == 1 else f"{abs(c)} {l.name}"
            parts.append((mag, c < 0))
        return _signed_join(parts)

    def __repr__(self) -> str:
        return self.render()


_W, _DOT, _KP = 0, 1, 2
_KIND_NAMES = {_W: "w", _DOT: "dot", _KP: "kp"}
_KINDS_BY_NAME = {v: k for k, v in _KIND_NAMES.items()}


@dataclass(frozen=True)
class _EBasis:
    kind: int
    waves: tuple[WaveLabel, ...]

    @property
    def sort_key(self) -> tuple:
        return (self.kind, tuple(w.sort_key for w in self.waves))

    def subst(self, rep: Callable[[WaveLabel], WaveLabel]) -> "_EBasis":
        waves = tuple(rep(w) for w in self.waves)
        if self.kind == _DOT:
            waves = tuple(sorted(waves, key=lambda w: w.sort_key))
        return _EBasis(self.kind, waves)

    def render(self) -> str:
        if self.kind == _W:
            return f"w({self.waves[0].name})"
        if self.kind == _DOT:
            return f"{self.waves[0].name}.{self.waves[1].name}"
        return f"{self.waves[0].name}.p"

    def evaluate(
        self,
        omega_v: Mapping[str, float],
        dot_v: Mapping[tuple[str, str], float],
        dot_p_v: Mapping[str, float],
    ) -> float:
        if self.kind == _W:
            name = self.waves[0].name
            if name not in omega_v:
                raise KeyError(self.render())
            return omega_v[name]
        if self.kind == _DOT:
            key = (self.waves[0].name, self.waves[1].name)
            if key not in dot_v:
                raise KeyError(self.render())
            return dot_v[key]
        name = self.waves[0].name
        if name not in dot_p_v:
            raise KeyError(self.render())
        return dot_p_v[name]


@dataclass(frozen=True)
class EnergyComb:
    """Exact rational combination of energy basis symbols.

    The dot-product symbol is stored with its two labels sorted, so
    dot(a, b) and dot(b, a) are the same term.
    """

    terms: tuple[tuple[_EBasis, Fraction], ...]

    @staticmethod
    def make(items: Iterable[tuple[_EBasis, Fraction]]) -> "EnergyComb":
        acc: dict[_EBasis, Fraction] = {}
        for basis, c in items:
            acc[basis] = acc.get(basis, Fraction(0)) + c
        kept = [(b, c) for b, c in acc.items() if c]
        kept.sort(key=lambda bc: bc[0].sort_key)
        return EnergyComb(tuple(kept))

    @staticmethod
    def zero() -> "EnergyComb":
        return EnergyComb(())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "EnergyComb") -> "EnergyComb":
        return EnergyComb.make(list(self.terms) + list(other.terms))

    def __neg__(self) -> "EnergyComb":
        return EnergyComb(tuple((b, -c) for b, c in self.terms))

    def __sub__(self, other: "EnergyComb") -> "EnergyComb":
        return self + (-other)

    def scale(self, c) -> "EnergyComb":
        c = Fraction(c)
        if c == 0:
            return EnergyComb.zero()
        return EnergyComb(tuple((b, c * cc) for b, cc in self.terms))

    def __rmul__(self, c) -> "EnergyComb":
        return self.scale(c)

    def normalized(self) -> "EnergyComb":
        if self.terms and self.terms[0][1] < 0:
            return -self
        return self

    def subst_waves(self, rep: Callable[[WaveLabel], WaveLabel]) -> "EnergyComb":
        return EnergyComb.make([(b.subst(rep), c) for b, c in self.terms])

    @property
    def sort_key(self) -> tuple:
        return tuple(
            (b.sort_key, c.numerator, c.denominator) for b, c in self.terms
        )

    def evaluate(self, omega_v, dot_v, dot_p_v) -> float:
        return sum(
            float(c) * b.evaluate(omega_v, dot_v, dot_p_v) for b, c in self.terms
        )

    def render(self) -> str:
        parts = []
        for b, c in self.terms:
            mag = b.render() if abs(c) == 1 else f"{abs(c)} {b.render()}"
            parts.append((mag, c < 0))
        return _signed_join(parts)

    def __repr__(self) -> str:
        return self.render()


def omega(k: WaveLabel) -> EnergyComb:
    """The dispersion symbol w(k)."""
    return EnergyComb(((_EBasis(_W, (k,)), Fraction(1)),))


def dot(a: WaveLabel, b: WaveLabel) -> EnergyComb:
    """The dot product a.b of two wave vectors (a.a is the square)."""
    waves = tuple(sorted((a, b), key=lambda w: w.sort_key))
    return EnergyComb(((_EBasis(_DOT, waves), Fraction(1)),))


def dot_p(k: WaveLabel) -> EnergyComb:
    """The dot product k.p with the particle momentum."""
    return EnergyComb(((_EBasis(_KP, (k,)), Fraction(1)),))


def shift_p(energy: EnergyComb, j: WaveLabel, sign: int) -> EnergyComb:
    """Substitute p -> p + sign*k_j: every c*(k.p) term adds c*sign*(k.k_j)."""
    if sign not in (1, -1):
        raise ValueError("shift sign must be +1 or -1")
    extra = []
    for basis, c in energy.terms:
        if basis.kind == _KP:
            extra.append((dot(basis.waves[0], j).terms[0][0], c * sign))
    if not extra:
        return energy
    return EnergyComb.make(list(energy.terms) + extra)
