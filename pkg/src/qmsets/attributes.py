"""Attributes f: U -> R, inverse-image partitions, joins, and CSCA checks.

Value labels are opaque tokens with a total order; tokens that parse as
numbers compare numerically, everything else compares as strings after the
numeric tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import chain, combinations
from typing import Iterable, Mapping, Sequence

from .errors import CompatibilityError, QmSetsError
from .gf2 import SetKet, standard_ket
from .universe import SetPartition, Universe, join as partition_join


def value_sort_key(token: str):
    """Numeric tokens first, compared numerically; then lexicographic."""
    try:
        return (0, Fraction(token), "")
    except (ValueError, ZeroDivisionError):
        return (1, Fraction(0), token)


@dataclass(frozen=True)
class Attribute:
    """A total function from universe elements to value labels."""

    name: str
    universe: Universe
    values: tuple[str, ...]  # aligned with universe.elements

    def __post_init__(self):
        if len(self.values) != len(self.universe):
            raise QmSetsError(
                f"attribute {self.name!r} must assign a value to every element"
            )

    @classmethod
    def from_mapping(
        cls, name: str, universe: Universe, mapping: Mapping[str, str]
    ) -> "Attribute":
        missing = [u for u in universe if u not in mapping]
        if missing:
            raise QmSetsError(
                f"attribute {name!r} is partial: no value for {missing[0]!r}"
            )
        extra = [u for u in mapping if u not in universe]
        if extra:
            raise QmSetsError(
                f"attribute {name!r} maps {extra[0]!r} outside the universe"
            )
        return cls(name, universe, tuple(mapping[u] for u in universe))

    def __call__(self, label: str) -> str:
        return self.values[self.universe.position(label)]

    def attained_values(self) -> list[str]:
        return sorted(set(self.values), key=value_sort_key)

    def preimage(self, value: str) -> frozenset[str]:
        return frozenset(
            u for u, v in zip(self.universe.elements, self.values) if v == value
        )


def inverse_image_partition(f: Attribute) -> SetPartition:
    """Blocks are the nonempty preimages f^-1(r)."""
    return SetPartition.from_blocks(
        f.universe, (f.preimage(r) for r in f.attained_values())
    )


def compatible(f: Attribute, g: Attribute) -> bool:
    """True iff both attributes are defined on the same universe."""
    return f.universe == g.universe


@dataclass(frozen=True)
class AnnotatedJoin:
    """Join of inverse-image partitions with each block's value tuple."""

    partition: SetPartition
    block_values: tuple[tuple[str, ...], ...]  # aligned with partition.blocks


def join_attributes(fs: Sequence[Attribute]) -> AnnotatedJoin:
    """Iterated join of the attributes' partitions, blocks tagged (r,...,s)."""
    if not fs:
        raise QmSetsError("join_attributes needs at least one attribute")
    universe = fs[0].universe
    for g in fs[1:]:
        if not compatible(fs[0], g):
            raise CompatibilityError(
                f"attributes {fs[0].name!r} and {g.name!r} are incompatible"
            )
    part = inverse_image_partition(fs[0])
    for g in fs[1:]:
        part = partition_join(part, inverse_image_partition(g))
    tuples = tuple(tuple(f(block[0]) for f in fs) for block in part.blocks)
    return AnnotatedJoin(part, tuples)


def is_csca(fs: Sequence[Attribute]) -> bool:
    """True iff the join of the attributes' partitions is discrete."""
    joined = join_attributes(fs)
    return all(len(block) == 1 for block in joined.partition.blocks)


def eigen_sets(f: Attribute, r: str) -> list[SetKet]:
    """All nonzero vectors of the eigenspace for value r: nonempty S within f^-1(r)."""
    support = f.universe.sort_labels(f.preimage(r))
    subsets = chain.from_iterable(
        combinations(support, k) for k in range(1, len(support) + 1)
    )
    return [standard_ket(f.universe, s) for s in subsets]
