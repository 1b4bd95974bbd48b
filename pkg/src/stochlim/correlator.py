"""Correlation functions of entangled operators and their weak-coupling limit.

The exact N-point correlator is a sum over pair partitions.  Every edge
contributes a 1/lam^2 pairing exponent whose energy carries the edge's
orientation and the momentum shifts inherited from enclosing edges;
crossing edges leave extra single-time exponents behind.  In the limit
lam -> 0 each pairing exponent turns into 2pi * dT * dE while any
oscillation that cannot be matched to a pairing quota suppresses its
whole term, which is why only non-crossing diagrams survive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diagrams import (
    Diagram,
    Edge,
    Relation,
    classify,
    enumerate_pairings,
    is_non_crossing,
)
from .scalars import (
    DeltaK,
    EnergyDelta,
    MFactor,
    Monomial,
    OscExp,
    ScalarSum,
    TimeDelta,
    apply_momentum_deltas,
)
from .symbols import EnergyComb, TimeComb, dot, dot_p, omega
from .words import OperatorWord

__all__ = [
    "StateSpec",
    "FOCK",
    "GAUSSIAN",
    "temperature",
    "LimitStructureError",
    "pairing_factor",
    "finite_lambda_correlator",
    "take_limit",
    "limit_correlator",
    "apply_state",
]


@dataclass(frozen=True)
class StateSpec:
    """Gaussian field state: Fock vacuum, symbolic occupation N(k), or a
    temperature state (beta only matters to the numeric harness)."""

    kind: str
    beta: float | None = None
    dispersion: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("fock", "gaussian", "temperature"):
            raise ValueError(f"unknown state kind {self.kind!r}")
        if self.kind == "temperature" and (self.beta is None or self.beta <= 0):
            raise ValueError("temperature state needs beta > 0")


FOCK = StateSpec("fock")
GAUSSIAN = StateSpec("gaussian")


def temperature(beta: float, dispersion: str = "generic") -> StateSpec:
    return StateSpec("temperature", beta=beta, dispersion=dispersion)


class LimitStructureError(ValueError):
    """A sum whose lam powers cannot be matched to pairing quotas."""


def apply_state(s: ScalarSum, state: StateSpec) -> ScalarSum:
    """In the Fock state N(k) = 0: N-weighted terms drop, N+1 becomes 1."""
    if state.kind != "fock":
        return s
    kept = []
    for m in s.terms:
        if any(off == 0 for _, off in m.m_factors):
            continue
        factors = [TimeDelta(t) for t in m.time_deltas]
        factors += [EnergyDelta(e) for e in m.energy_deltas]
        factors += [DeltaK(a, b) for a, b in m.delta_k]
        factors += [
            OscExp(TimeComb.of(label), energy) for label, energy in m.osc
        ]
        kept.append(
            Monomial.build(
                rational=m.rational,
                two_pi=m.two_pi,
                lam=m.lam,
                factors=factors,
                quotas=m.quotas,
            )
        )
    return ScalarSum.from_iter(kept)


def _check_edge(edge: Edge, word: OperatorWord) -> None:
    letters = word.letters
    if edge.b > len(letters):
        raise ValueError("edge endpoint outside the word")
    if letters[edge.creation - 1].eps != 1 or letters[edge.annihilation - 1].eps != -1:
        raise ValueError("edge endpoints have the wrong letter signs")


def _bare_edge_energy(edge: Edge, word: OperatorWord) -> EnergyComb:
    cre = word.letters[edge.creation - 1]
    return (
        omega(cre.wave)
        + Fraction(edge.delta, 2) * dot(cre.wave, cre.wave)
        + dot_p(cre.wave)
    )


def _edge_energy(edge: Edge, word: OperatorWord, diagram: Diagram) -> EnergyComb:
    """Bare edge energy plus the momentum shifts from every enclosing edge."""
    cre = word.letters[edge.creation - 1]
    energy = _bare_edge_energy(edge, word)
    for other in diagram.edges:
        if other == edge:
            continue
        if classify(other, edge) is Relation.CONTAINS:
            outer_cre = word.letters[other.creation - 1]
            energy = energy + other.delta * dot(outer_cre.wave, cre.wave)
    return energy


def pairing_factor(edge: Edge, word: OperatorWord) -> Monomial:
    """The two-point pairing of one edge: (1/lam^2) * exp with the edge's
    orientation energy * occupation * momentum delta."""
    _check_edge(edge, word)
    cre = word.letters[edge.creation - 1]
    ann = word.letters[edge.annihilation - 1]
    return Monomial.build(
        lam=-2,
        factors=[
            OscExp(cre.time - ann.time, _bare_edge_energy(edge, word), pairing=True),
            MFactor(cre.wave, (edge.delta + 1) // 2),
            DeltaK(cre.wave, ann.wave),
        ],
    )


def _diagram_monomial(word: OperatorWord, diagram: Diagram) -> Monomial:
    letters = word.letters
    m = Monomial.one()
    for edge in diagram.edges:
        cre = letters[edge.creation - 1]
        ann = letters[edge.annihilation - 1]
        factors = [
            OscExp(cre.time - ann.time, _edge_energy(edge, word, diagram), pairing=True),
            MFactor(cre.wave, (edge.delta + 1) // 2),
            DeltaK(cre.wave, ann.wave),
        ]
        for other in diagram.edges:
            if other == edge:
                continue
            rel = classify(other, edge)
            if rel is Relation.LEFT_CROSS:
                pos = other.b
            elif rel is Relation.RIGHT_CROSS:
                pos = other.a
            else:
                continue
            vertex = letters[pos - 1]
            factors.append(
                OscExp(
                    TimeComb.of(vertex.time),
                    (vertex.eps * edge.delta) * dot(vertex.wave, cre.wave),
                )
            )
        m = m * Monomial.build(lam=-2, factors=factors)
    return m


def finite_lambda_correlator(word: OperatorWord, state: StateSpec) -> ScalarSum:
    """Exact correlator at finite coupling: sum over all pair partitions."""
    if not word.balanced:
        return ScalarSum.zero()
    terms = [_diagram_monomial(word, d) for d in enumerate_pairings(word.pattern)]
    return apply_momentum_deltas(apply_state(ScalarSum.from_iter(terms), state))


def _absorb(quotas, rows):
    """Solve sum_j C[t][j] * F_j = rows[t] exactly.

    Returns the list of F_j, or None when the system is inconsistent (the
    leftover oscillation has no 1/lam^2 quota and kills the monomial).
    Raises when the quota time combinations are linearly dependent.
    """
    labels = sorted(
        {l for q in quotas for l in q.support} | set(rows),
        key=lambda l: l.sort_key,
    )
    n = len(quotas)
    matrix = [[Fraction(q.coeff(l)) for q in quotas] for l in labels]
    rhs = [rows.get(l, EnergyComb.zero()) for l in labels]
    pivot_row_of: list[int] = []
    r = 0
    for col in range(n):
        pivot = next(
            (i for i in range(r, len(labels)) if matrix[i][col] != 0), None
        )
        if pivot is None:
            raise LimitStructureError("pairing quotas are linearly dependent")
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        rhs[r], rhs[pivot] = rhs[pivot], rhs[r]
        inv = 1 / matrix[r][col]
        matrix[r] = [c * inv for c in matrix[r]]
        rhs[r] = rhs[r].scale(inv)
        for i in range(len(labels)):
            if i != r and matrix[i][col] != 0:
                f = matrix[i][col]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
                rhs[i] = rhs[i] - rhs[r].scale(f)
        pivot_row_of.append(r)
        r += 1
    for i in range(r, len(labels)):
        if not rhs[i].is_zero:
            return None
    return [rhs[pivot_row_of[j]] for j in range(n)]


def take_limit(s: ScalarSum) -> ScalarSum:
    """lam -> 0 limit: every pairing quota becomes 2pi * dT * dE; oscillation
    not matched by a quota sends its monomial to zero."""
    out = []
    for m in s.terms:
        if m.time_deltas or m.energy_deltas:
            raise LimitStructureError("input already contains limit factors")
        n = len(m.quotas)
        if m.lam != -2 * n:
            raise LimitStructureError(
                f"lam power {m.lam} does not match {n} pairing quotas"
            )
        deltas = _absorb(m.quotas, dict(m.osc))
        if deltas is None:
            continue
        if any(e.is_zero for e in deltas):
            raise LimitStructureError("pairing exponent with vanishing energy")
        factors = [TimeDelta(t) for t in m.quotas]
        factors += [EnergyDelta(e) for e in deltas]
        factors += [DeltaK(a, b) for a, b in m.delta_k]
        factors += [MFactor(w, o) for w, o in m.m_factors]
        out.append(
            Monomial.build(
                rational=m.rational, two_pi=m.two_pi + n, lam=0, factors=factors
            )
        )
    return ScalarSum.from_iter(out)


def limit_correlator(word: OperatorWord, state: StateSpec) -> ScalarSum:
    """Direct limit construction: non-crossing diagrams only, each edge a
    2pi * dT * dE * occupation * momentum-delta block."""
    if not word.balanced:
        return ScalarSum.zero()
    letters = word.letters
    terms = []
    for diagram in enumerate_pairings(word.pattern):
        if not is_non_crossing(diagram):
            continue
        m = Monomial.one()
        for edge in diagram.edges:
            cre = letters[edge.creation - 1]
            ann = letters[edge.annihilation - 1]
            m = m * Monomial.build(
                two_pi=1,
                factors=[
                    TimeDelta(cre.time - ann.time),
                    EnergyDelta(_edge_energy(edge, word, diagram)),
                    MFactor(cre.wave, (edge.delta + 1) // 2),
                    DeltaK(cre.wave, ann.wave),
                ],
            )
        terms.append(m)
    return apply_momentum_deltas(apply_state(ScalarSum.from_iter(terms), state))
