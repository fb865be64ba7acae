"""Permutation actions on a universe: closure, axiom checks, orbit partitions.

Composition is left-to-right: compose(t, s) applies t first, then s,
matching the diagram U -t-> U -s-> U.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BoundError, CompatibilityError, GroupError, QmSetsError
from .gf2 import SetKet
from .universe import SetPartition, Universe, discrete

DEFAULT_CLOSURE_BOUND = 10080


@dataclass(frozen=True)
class Permutation:
    """A bijection of the universe, stored as the image tuple in universe order."""

    universe: Universe
    images: tuple[str, ...]

    def __post_init__(self):
        if sorted(self.images) != sorted(self.universe.elements):
            raise QmSetsError("mapping is not a bijection of the universe")

    @classmethod
    def identity(cls, universe: Universe) -> "Permutation":
        return cls(universe, universe.elements)

    @classmethod
    def from_mapping(cls, universe: Universe, mapping: dict[str, str]) -> "Permutation":
        return cls(
            universe, tuple(mapping.get(u, u) for u in universe.elements)
        )

    @classmethod
    def from_cycles(cls, universe: Universe, cycles: Sequence[Sequence[str]]) -> "Permutation":
        mapping: dict[str, str] = {}
        for cycle in cycles:
            for label in cycle:
                if label in mapping:
                    raise QmSetsError(f"label {label!r} repeated across cycles")
            for i, label in enumerate(cycle):
                mapping[label] = cycle[(i + 1) % len(cycle)]
        return cls.from_mapping(universe, mapping)

    def __call__(self, label: str) -> str:
        return self.images[self.universe.position(label)]

    def compose(self, then: "Permutation") -> "Permutation":
        """Apply self first, then the other permutation."""
        if self.universe != then.universe:
            raise CompatibilityError("permutations on different universes")
        return Permutation(
            self.universe, tuple(then(v) for v in self.images)
        )

    def inverse(self) -> "Permutation":
        mapping = {v: u for u, v in zip(self.universe.elements, self.images)}
        return Permutation.from_mapping(self.universe, mapping)

    def apply_set(self, labels: Iterable[str]) -> frozenset[str]:
        return frozenset(self(u) for u in labels)

    def cycle_string(self) -> str:
        seen: set[str] = set()
        parts = []
        for u in self.universe:
            if u in seen:
                continue
            cycle = [u]
            seen.add(u)
            v = self(u)
            while v != u:
                cycle.append(v)
                seen.add(v)
                v = self(v)
            if len(cycle) > 1:
                parts.append("(" + " ".join(cycle) + ")")
        return "".join(parts) or "()"


@dataclass(frozen=True)
class TransformationGroup:
    universe: Universe
    elements: frozenset[Permutation]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class AxiomReport:
    """Result of checking identity, inverses, and closure on a permutation set."""

    has_identity: bool
    missing_inverses: tuple[Permutation, ...]
    closure_violations: tuple[tuple[Permutation, Permutation], ...]

    @property
    def ok(self) -> bool:
        return (
            self.has_identity
            and not self.missing_inverses
            and not self.closure_violations
        )


def generate_group(
    generators: Sequence[Permutation],
    universe: Universe | None = None,
    bound: int = DEFAULT_CLOSURE_BOUND,
) -> TransformationGroup:
    """Smallest group containing the generators, by breadth-first closure."""
    if universe is None:
        if not generators:
            raise QmSetsError("generate_group needs a universe when generators are empty")
        universe = generators[0].universe
    for g in generators:
        if g.universe != universe:
            raise CompatibilityError("generators on different universes")
    identity = Permutation.identity(universe)
    elements: set[Permutation] = {identity}
    frontier = [g for g in generators if g not in elements]
    elements.update(frontier)
    while frontier:
        new: list[Permutation] = []
        for t in frontier:
            for g in list(generators) + [t.inverse()]:
                composed = t.compose(g)
                if composed not in elements:
                    elements.add(composed)
                    new.append(composed)
                    if len(elements) > bound:
                        raise BoundError(
                            f"group closure exceeded bound {bound}"
                        )
        frontier = new
    return TransformationGroup(universe, frozenset(elements))


def verify_group_axioms(g: TransformationGroup) -> AxiomReport:
    """Report any violated group axiom with a witness."""
    identity = Permutation.identity(g.universe)
    has_identity = identity in g.elements
    missing_inverses = tuple(
        sorted(
            (t for t in g.elements if t.inverse() not in g.elements),
            key=lambda t: t.images,
        )
    )
    violations = []
    for t in sorted(g.elements, key=lambda t: t.images):
        for s in sorted(g.elements, key=lambda t: t.images):
            if t.compose(s) not in g.elements:
                violations.append((t, s))
    return AxiomReport(has_identity, missing_inverses, tuple(violations))


def orbit_partition(g: TransformationGroup) -> SetPartition:
    """Partition of the universe into orbits {t(u) : t in G}."""
    report = verify_group_axioms(g)
    if not report.ok:
        raise GroupError("not a group: axiom verification failed")
    remaining = list(g.universe.elements)
    blocks = []
    while remaining:
        u = remaining[0]
        orbit = {t(u) for t in g.elements}
        blocks.append(orbit)
        remaining = [v for v in remaining if v not in orbit]
    return SetPartition.from_blocks(g.universe, blocks)


def is_invariant(g: TransformationGroup, s: SetKet) -> bool:
    """True iff every group element maps the subset into itself."""
    if g.universe != s.universe:
        raise CompatibilityError("group and state on different universes")
    subset = s.to_subset()
    return all(t.apply_set(subset) <= subset for t in g.elements)
