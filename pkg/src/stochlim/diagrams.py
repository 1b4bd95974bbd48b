"""Pair partitions of balanced operator patterns.

A diagram matches every creation position with an annihilation position;
edges are drawn as arcs above the word, and the crossing/nesting
relations between arcs drive both the exact correlator and its limit.
Positions are 1-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

__all__ = [
    "Edge",
    "Diagram",
    "Relation",
    "classify",
    "enumerate_pairings",
    "is_non_crossing",
    "count_non_crossing",
    "count_fock_surviving",
]


class Relation(enum.Enum):
    DISJOINT = "disjoint"
    CONTAINS = "contains"      # first edge strictly contains the second
    INSIDE = "inside"          # first edge sits strictly inside the second
    LEFT_CROSS = "left-cross"  # a(l) < a(j) < b(l) < b(j)
    RIGHT_CROSS = "right-cross"


@dataclass(frozen=True)
class Edge:
    creation: int
    annihilation: int

    def __post_init__(self) -> None:
        if self.creation == self.annihilation:
            raise ValueError("edge endpoints must differ")
        if self.creation < 1 or self.annihilation < 1:
            raise ValueError("positions are 1-based")

    @property
    def a(self) -> int:
        return min(self.creation, self.annihilation)

    @property
    def b(self) -> int:
        return max(self.creation, self.annihilation)

    @property
    def delta(self) -> int:
        """+1 when the creation sits right of the annihilation, else -1."""
        return 1 if self.creation > self.annihilation else -1


def classify(l: Edge, j: Edge) -> Relation:
    if l.b < j.a or j.b < l.a:
        return Relation.DISJOINT
    if l.a < j.a and j.b < l.b:
        return Relation.CONTAINS
    if j.a < l.a and l.b < j.b:
        return Relation.INSIDE
    if l.a < j.a < l.b < j.b:
        return Relation.LEFT_CROSS
    if j.a < l.a < j.b < l.b:
        return Relation.RIGHT_CROSS
    raise ValueError(f"edges share an endpoint: {l}, {j}")


@dataclass(frozen=True)
class Diagram:
    """Edges numbered by their left vertices, covering every position once."""

    edges: tuple[Edge, ...]

    @classmethod
    def build(cls, edges) -> "Diagram":
        edges = tuple(sorted(edges, key=lambda e: e.a))
        positions = sorted(p for e in edges for p in (e.creation, e.annihilation))
        if positions != list(range(1, 2 * len(edges) + 1)):
            raise ValueError("edges must cover positions 1..N exactly once")
        return cls(edges)

    def __str__(self) -> str:
        return "".join(f"({e.creation},{e.annihilation})" for e in self.edges)


def enumerate_pairings(pattern: Sequence[int]) -> tuple[Diagram, ...]:
    """All matchings of creations with annihilations, in lexicographic order
    of the assignment vector taken in ascending creation order.  Unbalanced
    patterns have no pairings."""
    creations = [i + 1 for i, eps in enumerate(pattern) if eps == 1]
    annihilations = [i + 1 for i, eps in enumerate(pattern) if eps == -1]
    if len(creations) != len(annihilations):
        return ()
    out = []
    for assignment in permutations(annihilations):
        out.append(
            Diagram.build(Edge(c, a) for c, a in zip(creations, assignment))
        )
    return tuple(out)


def is_non_crossing(d: Diagram) -> bool:
    for i, l in enumerate(d.edges):
        for j in d.edges[i + 1 :]:
            if classify(l, j) in (Relation.LEFT_CROSS, Relation.RIGHT_CROSS):
                return False
    return True


def count_non_crossing(pattern: Sequence[int]) -> int:
    return sum(1 for d in enumerate_pairings(pattern) if is_non_crossing(d))


def count_fock_surviving(pattern: Sequence[int]) -> int:
    """Diagrams in which every creation follows its annihilation."""
    return sum(
        1
        for d in enumerate_pairings(pattern)
        if all(e.delta == 1 for e in d.edges)
    )
