"""The probability calculus on Z2^|U|: brackets, Born rule, measurement, evolution.

Probabilities are exact rationals end to end; floating point appears only
in norm values and display.  Sampling uses a counter-based pseudorandom
scheme keyed by (seed, step index), so cascades are reproducible and
independent of evaluation order.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .attributes import Attribute, is_csca, value_sort_key
from .errors import BasisError, EmptyStateError, QmSetsError
from .gf2 import (
    LinearMap,
    SetKet,
    apply_map,
    is_nonsingular,
    standard_basis,
    standard_ket,
    to_basis,
)
from .universe import SetPartition, indiscrete, join as partition_join


def _require_standard(s: SetKet) -> frozenset[str]:
    if not s.basis.is_standard:
        raise BasisError(
            "operand must be expressed in the standard basis; convert with to_basis"
        )
    return s.to_subset()


def bracket(t: SetKet, s: SetKet) -> int:
    """Overlap count |T intersect S| for standard-basis kets."""
    tt = _require_standard(t)
    ss = _require_standard(s)
    if t.universe != s.universe:
        raise QmSetsError("bracket operands on different universes")
    return len(tt & ss)


class Norm(NamedTuple):
    value: float
    squared: int


def norm(s: SetKet) -> Norm:
    """sqrt(|S|) together with the exact squared norm |S|."""
    squared = len(_require_standard(s))
    return Norm(math.sqrt(squared), squared)


@dataclass(frozen=True)
class KetBraResolution:
    """Termwise singleton resolution of the bracket and of the ket itself."""

    value: int
    resolution: tuple[SetKet, ...]  # the singleton constituents of S


def ketbra_resolve(t: SetKet, s: SetKet) -> KetBraResolution:
    """Sum over u of <T|{u}><{u}|S>, with the singleton resolution of S."""
    tt = _require_standard(t)
    ss = _require_standard(s)
    universe = s.universe
    total = 0
    resolution = []
    for u in universe:
        term = (1 if u in tt else 0) * (1 if u in ss else 0)
        total += term
    for u in universe:
        if u in ss:
            resolution.append(standard_ket(universe, [u]))
    assert total == len(tt & ss)
    return KetBraResolution(total, tuple(resolution))


@dataclass(frozen=True)
class Outcome:
    value: str
    probability: Fraction
    collapsed: SetKet


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact outcome distribution conditioned on a nonempty state."""

    state: SetKet
    outcomes: tuple[Outcome, ...]

    def __post_init__(self):
        total = sum((o.probability for o in self.outcomes), Fraction(0))
        if total != 1:
            raise QmSetsError(f"probabilities sum to {total}, not 1")
        state_set = self.state.to_subset()
        union: set[str] = set()
        for o in self.outcomes:
            if o.probability < 0:
                raise QmSetsError("negative probability")
            collapsed = o.collapsed.to_subset()
            if not collapsed:
                raise QmSetsError("empty collapsed state")
            if union & collapsed:
                raise QmSetsError("collapsed states overlap")
            union |= collapsed
        if union != state_set:
            raise QmSetsError("collapsed states do not partition the state")

    def probability_of(self, value: str) -> Fraction:
        for o in self.outcomes:
            if o.value == value:
                return o.probability
        return Fraction(0)


def born_distribution(s: SetKet) -> OutcomeDistribution:
    """Laplacian equal probability over the singletons of a nonempty state."""
    subset = _require_standard(s)
    if not subset:
        raise EmptyStateError("cannot condition on the empty state")
    universe = s.universe
    size = len(subset)
    outcomes = tuple(
        Outcome(u, Fraction(1, size), standard_ket(universe, [u]))
        for u in universe.sort_labels(subset)
    )
    return OutcomeDistribution(s, outcomes)


@dataclass(frozen=True)
class Projection:
    """Projection onto the power set of a preimage: S maps to support & S."""

    support: frozenset[str]

    def __call__(self, s: SetKet) -> SetKet:
        subset = _require_standard(s)
        return standard_ket(s.universe, subset & self.support)


def spectral_decompose(f: Attribute) -> list[tuple[str, Projection]]:
    """Ordered (value, projection) pairs; completeness and orthogonality checked."""
    pairs = [(r, Projection(f.preimage(r))) for r in f.attained_values()]
    covered: set[str] = set()
    for r, proj in pairs:
        if covered & proj.support:
            raise QmSetsError("projections are not orthogonal")
        covered |= proj.support
    if covered != set(f.universe.elements):
        raise QmSetsError("projections do not sum to the identity")
    return pairs


def measure_distribution(f: Attribute, s: SetKet) -> OutcomeDistribution:
    """Pr(r|S) = |f^-1(r) & S| / |S| with collapsed states f^-1(r) & S.

    A state expressed in a non-standard basis is first re-expressed in the
    attribute's home basis (the standard basis of its universe).
    """
    if not s.basis.is_standard:
        s = to_basis(s, standard_basis(f.universe))
    subset = s.to_subset()
    if not subset:
        raise EmptyStateError("cannot measure the empty state")
    size = len(subset)
    outcomes = []
    for r in f.attained_values():
        inter = f.preimage(r) & subset
        if inter:
            outcomes.append(
                Outcome(r, Fraction(len(inter), size), standard_ket(f.universe, inter))
            )
    return OutcomeDistribution(s, outcomes)


def _uniform(seed: int, step: int) -> Fraction:
    """Deterministic uniform draw in [0, 1) keyed by (seed, step)."""
    digest = hashlib.blake2b(
        f"{seed}:{step}".encode(), digest_size=8
    ).digest()
    return Fraction(int.from_bytes(digest, "big"), 1 << 64)


@dataclass(frozen=True)
class MeasurementStep:
    attribute: str
    value: str
    pre_state: SetKet
    post_state: SetKet
    probability: Fraction


@dataclass(frozen=True)
class MeasurementRecord:
    """Audit trail for a sampled measurement cascade."""

    seed: int
    steps: tuple[MeasurementStep, ...]

    @property
    def final_state(self) -> SetKet:
        return self.steps[-1].post_state

    @property
    def value_tuple(self) -> tuple[str, ...]:
        return tuple(step.value for step in self.steps)

    @property
    def path_probability(self) -> Fraction:
        prob = Fraction(1)
        for step in self.steps:
            prob *= step.probability
        return prob


def measure_sample(
    f: Attribute, s: SetKet, seed: int, step: int = 0
) -> MeasurementStep:
    """Draw one outcome from measure_distribution; identical seed, identical draw."""
    dist = measure_distribution(f, s)
    u = _uniform(seed, step)
    cumulative = Fraction(0)
    chosen = dist.outcomes[-1]
    for outcome in dist.outcomes:
        cumulative += outcome.probability
        if u < cumulative:
            chosen = outcome
            break
    return MeasurementStep(
        f.name, chosen.value, dist.state, chosen.collapsed, chosen.probability
    )


def measurement_join_partition(s: SetKet) -> SetPartition:
    """The partition {S, complement of S}, with the empty complement omitted."""
    subset = _require_standard(s)
    universe = s.universe
    complement = set(universe.elements) - subset
    blocks = [b for b in (subset, complement) if b]
    if not blocks:
        return indiscrete(universe)
    return SetPartition.from_blocks(universe, blocks)


@dataclass(frozen=True)
class MeasurementJoin:
    """Join of {S, S^c} with the attribute partition, blocks split by potentiality."""

    partition: SetPartition
    possible: tuple[tuple[str, ...], ...]       # blocks inside S
    not_potential: tuple[tuple[str, ...], ...]  # blocks inside S^c


def measurement_join(f: Attribute, s: SetKet) -> MeasurementJoin:
    from .attributes import inverse_image_partition

    subset = _require_standard(s)
    state_partition = measurement_join_partition(s)
    joined = partition_join(state_partition, inverse_image_partition(f))
    possible = tuple(b for b in joined.blocks if set(b) <= subset)
    not_potential = tuple(b for b in joined.blocks if not set(b) <= subset)
    return MeasurementJoin(joined, possible, not_potential)


def pythagoras_check(p: SetPartition, s: SetKet) -> tuple[int, int]:
    """(|S|, sum over blocks of |B & S|); equal for every partition."""
    subset = _require_standard(s)
    left = len(subset)
    right = sum(len(set(b) & subset) for b in p.blocks)
    return left, right


def evolve(m: LinearMap, s: SetKet) -> SetKet:
    """Distinction-preserving evolution: apply a non-singular map."""
    if not is_nonsingular(m):
        raise QmSetsError(
            "singular map: not a distinction-preserving process"
        )
    return apply_map(m, s)


def csca_measure(
    fs: Sequence[Attribute], s: SetKet, seed: int
) -> MeasurementRecord:
    """Sampled non-degenerate measurement: thread collapses through a CSCA."""
    if not is_csca(fs):
        raise QmSetsError("attribute set is not a CSCA; measurement is degenerate")
    if not s.to_subset():
        raise EmptyStateError("cannot measure the empty state")
    steps = []
    state = s
    for i, f in enumerate(fs):
        step = measure_sample(f, state, seed, step=i)
        steps.append(step)
        state = step.post_state
    record = MeasurementRecord(seed, tuple(steps))
    assert len(record.final_state.to_subset()) == 1
    return record


def csca_final_distribution(
    fs: Sequence[Attribute], s: SetKet
) -> dict[frozenset[str], Fraction]:
    """Exact distribution over final singleton states of a CSCA cascade."""
    if not is_csca(fs):
        raise QmSetsError("attribute set is not a CSCA")
    results: dict[frozenset[str], Fraction] = {}

    def walk(state: SetKet, prob: Fraction, remaining: Sequence[Attribute]):
        if not remaining:
            results[state.to_subset()] = results.get(
                state.to_subset(), Fraction(0)
            ) + prob
            return
        dist = measure_distribution(remaining[0], state)
        for outcome in dist.outcomes:
            walk(outcome.collapsed, prob * outcome.probability, remaining[1:])

    walk(s, Fraction(1), list(fs))
    return results
