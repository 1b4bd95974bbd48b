"""Operator words: ordered sequences of creation/annihilation letters."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .symbols import TimeLabel, WaveLabel

__all__ = [
    "Letter",
    "OperatorWord",
    "PatternError",
    "word_from_pattern",
    "parse_pattern",
    "balanced_patterns",
]


class PatternError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"pattern token {position}: {message}")
        self.position = position


@dataclass(frozen=True)
class Letter:
    eps: int  # -1 annihilation, +1 creation
    time: TimeLabel
    wave: WaveLabel


@dataclass(frozen=True)
class OperatorWord:
    letters: tuple[Letter, ...]

    @classmethod
    def build(cls, letters: Iterable[Letter]) -> "OperatorWord":
        letters = tuple(letters)
        times = [l.time for l in letters]
        waves = [l.wave for l in letters]
        if len(set(times)) != len(times) or len(set(waves)) != len(waves):
            raise ValueError("word labels must be pairwise distinct symbols")
        for l in letters:
            if l.eps not in (-1, 1):
                raise ValueError("letter sign must be -1 or +1")
        return cls(letters)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def pattern(self) -> tuple[int, ...]:
        return tuple(l.eps for l in self.letters)

    @property
    def balanced(self) -> bool:
        return sum(self.pattern) == 0


def word_from_pattern(pattern: Sequence[int]) -> OperatorWord:
    """Word with positional labels t1..tN, k1..kN."""
    return OperatorWord.build(
        Letter(eps, TimeLabel(f"t{i + 1}"), WaveLabel(f"k{i + 1}"))
        for i, eps in enumerate(pattern)
    )


def parse_pattern(text: str) -> tuple[int, ...]:
    """Whitespace separated tokens: "a" annihilation, "a+" creation."""
    out = []
    for pos, token in enumerate(text.split(), start=1):
        if token == "a":
            out.append(-1)
        elif token == "a+":
            out.append(1)
        else:
            raise PatternError(f"expected 'a' or 'a+', got {token!r}", pos)
    return tuple(out)


def balanced_patterns(length: int) -> list[tuple[int, ...]]:
    """All sign patterns of the given even length with equally many +1 and -1."""
    if length % 2:
        return []
    out = []
    for creations in combinations(range(length), length // 2):
        pattern = [-1] * length
        for i in creations:
            pattern[i] = 1
        out.append(tuple(pattern))
    return out
