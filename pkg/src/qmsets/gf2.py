"""The power set of a universe as the vector space Z2^n.

Subsets are vectors under symmetric difference.  Bit-vectors (Python ints,
bit i = element i in universe order) are the canonical representation;
label sets are a view.  A ket always carries the basis it is expressed in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BasisError, BoundError, CompatibilityError
from .universe import Universe

DEFAULT_KET_TABLE_BOUND = 10


def subset_to_bits(universe: Universe, labels: Iterable[str]) -> int:
    bits = 0
    for label in labels:
        bits |= 1 << universe.position(label)
    return bits


def bits_to_subset(universe: Universe, bits: int) -> frozenset[str]:
    return frozenset(
        u for i, u in enumerate(universe.elements) if (bits >> i) & 1
    )


def gf2_rank(rows: Sequence[int], n_cols: int) -> int:
    """Rank over GF(2) via Gaussian elimination on int bitsets."""
    work = list(rows)
    rank = 0
    row_idx = 0
    for col in range(n_cols):
        pivot = None
        for r in range(row_idx, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        for r in range(len(work)):
            if r != row_idx and ((work[r] >> col) & 1):
                work[r] ^= work[row_idx]
        rank += 1
        row_idx += 1
        if row_idx == len(work):
            break
    return rank


def gf2_solve(columns: Sequence[int], target: int, n: int) -> int:
    """Solve M x = target over GF(2) where column j of M is columns[j].

    Returns the solution as a bitmask of column indices.  Raises if the
    system is singular or inconsistent.
    """
    # Build augmented rows: row i collects bit i of every column plus target.
    rows = []
    for i in range(n):
        row = 0
        for j, col in enumerate(columns):
            if (col >> i) & 1:
                row |= 1 << j
        if (target >> i) & 1:
            row |= 1 << n
        rows.append(row)
    row_idx = 0
    for col in range(n):
        pivot = None
        for r in range(row_idx, n):
            if (rows[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            raise BasisError("singular system: columns are GF(2)-dependent")
        rows[row_idx], rows[pivot] = rows[pivot], rows[row_idx]
        for r in range(n):
            if r != row_idx and ((rows[r] >> col) & 1):
                rows[r] ^= rows[row_idx]
        row_idx += 1
    solution = 0
    for r in range(n):
        pivot_col = (rows[r] & ((1 << n) - 1)).bit_length() - 1
        if (rows[r] >> n) & 1:
            solution |= 1 << pivot_col
    return solution


@dataclass(frozen=True)
class Basis:
    """An ordered list of |U| GF(2)-independent subsets of the universe.

    Construct through check_basis or standard_basis, which validate
    independence; the raw constructor performs no checks.
    """

    universe: Universe
    name: str
    vector_names: tuple[str, ...]
    vectors: tuple[frozenset[str], ...]

    @property
    def is_standard(self) -> bool:
        return all(
            v == frozenset((u,))
            for u, v in zip(self.universe.elements, self.vectors)
        )

    def vector_bits(self) -> list[int]:
        return [subset_to_bits(self.universe, v) for v in self.vectors]

    def name_position(self, vector_name: str) -> int:
        try:
            return self.vector_names.index(vector_name)
        except ValueError:
            raise BasisError(
                f"{vector_name!r} is not a vector of basis {self.name!r}"
            ) from None


def standard_basis(universe: Universe, name: str = "U") -> Basis:
    return Basis(
        universe,
        name,
        universe.elements,
        tuple(frozenset((u,)) for u in universe.elements),
    )


def check_basis(
    universe: Universe,
    vectors: Sequence[Iterable[str]],
    name: str,
    vector_names: Sequence[str] | None = None,
) -> Basis:
    """Validate a candidate basis: right count and full GF(2) rank."""
    n = len(universe)
    subsets = [frozenset(v) for v in vectors]
    if len(subsets) != n:
        raise BasisError(
            f"basis {name!r} needs exactly {n} vectors, got {len(subsets)}"
        )
    bits = [subset_to_bits(universe, v) for v in subsets]
    for i in range(n):
        if gf2_rank(bits[: i + 1], n) != i + 1:
            witness = "{" + ",".join(sorted(subsets[i], key=universe.position)) + "}"
            raise BasisError(
                f"basis {name!r} is rank-deficient: vector {i} = {witness} "
                f"is a GF(2) combination of earlier vectors"
            )
    if vector_names is None:
        vector_names = tuple(f"{name}{i}" for i in range(n))
    else:
        vector_names = tuple(vector_names)
        if len(vector_names) != n or len(set(vector_names)) != n:
            raise BasisError(f"basis {name!r} needs {n} distinct vector names")
    return Basis(universe, name, vector_names, tuple(subsets))


@dataclass(frozen=True)
class SetKet:
    """A vector of Z2^|U| expressed as a set of coordinates in a named basis."""

    basis: Basis
    coords: frozenset[str]

    def __post_init__(self):
        for c in self.coords:
            self.basis.name_position(c)

    @property
    def universe(self) -> Universe:
        return self.basis.universe

    def to_subset(self) -> frozenset[str]:
        """Expand to the standard-basis subset of U (XOR of basis vectors)."""
        bits = 0
        for c in self.coords:
            bits ^= subset_to_bits(
                self.universe, self.basis.vectors[self.basis.name_position(c)]
            )
        return bits_to_subset(self.universe, bits)

    def sorted_coords(self) -> tuple[str, ...]:
        return tuple(sorted(self.coords, key=self.basis.name_position))

    def __str__(self) -> str:
        return "{" + ",".join(self.sorted_coords()) + "}"


def standard_ket(universe: Universe, labels: Iterable[str], basis: Basis | None = None) -> SetKet:
    if basis is None:
        basis = standard_basis(universe)
    elif not basis.is_standard:
        raise BasisError("standard_ket requires a standard basis")
    return SetKet(basis, frozenset(labels))


def add(s: SetKet, t: SetKet) -> SetKet:
    """GF(2) sum: symmetric difference of coordinate sets in a shared basis."""
    if s.basis != t.basis:
        raise BasisError(
            "kets are expressed in different bases; re-express before adding"
        )
    return SetKet(s.basis, s.coords ^ t.coords)


def to_basis(s: SetKet, target: Basis) -> SetKet:
    """Re-express a ket in another basis over the same universe."""
    if s.universe != target.universe:
        raise CompatibilityError("bases live on different universes")
    if s.basis == target:
        return s
    n = len(s.universe)
    target_bits = subset_to_bits(s.universe, s.to_subset())
    solution = gf2_solve(target.vector_bits(), target_bits, n)
    coords = frozenset(
        target.vector_names[j] for j in range(n) if (solution >> j) & 1
    )
    return SetKet(target, coords)


def _paper_order_key(universe: Universe, bits: int):
    # Descending cardinality, ties broken by alternating-sign colex on the
    # element positions; reproduces the canonical three-basis table layout.
    positions = sorted(
        (i for i in range(len(universe)) if (bits >> i) & 1), reverse=True
    )
    key = [-len(positions)]
    for i, p in enumerate(positions):
        key.append(p if i % 2 == 0 else -p)
    return tuple(key)


def ket_table(
    bases: Sequence[Basis],
    paper_order: bool = False,
    bound: int = DEFAULT_KET_TABLE_BOUND,
) -> list[list[SetKet]]:
    """All 2^n kets, each row the same abstract vector in every basis.

    Default row order is binary counting on the standard-basis subset;
    paper_order lists rows by descending cardinality with the zero vector
    last.
    """
    if not bases:
        raise BasisError("ket_table needs at least one basis")
    universe = bases[0].universe
    for b in bases[1:]:
        if b.universe != universe:
            raise CompatibilityError("all bases must share one universe")
    n = len(universe)
    if n > bound:
        raise BoundError(f"universe size {n} exceeds ket-table bound {bound}")
    std = standard_basis(universe)
    masks = list(range(1 << n))
    if paper_order:
        masks.sort(key=lambda m: _paper_order_key(universe, m))
    rows = []
    for mask in masks:
        ket = SetKet(std, bits_to_subset(universe, mask))
        rows.append([to_basis(ket, b) for b in bases])
    return rows


@dataclass(frozen=True)
class LinearMap:
    """A GF(2) linear map between coordinate spaces over one universe.

    columns[j] is the image (as a codomain coordinate bitmask) of the j-th
    domain basis vector.
    """

    domain: Basis
    codomain: Basis
    columns: tuple[int, ...]

    def __post_init__(self):
        n = len(self.domain.universe)
        if self.domain.universe != self.codomain.universe:
            raise CompatibilityError("domain and codomain universes differ")
        if len(self.columns) != n:
            raise BasisError(f"map needs {n} columns, got {len(self.columns)}")
        for col in self.columns:
            if col < 0 or col >= (1 << n):
                raise BasisError("column bits out of range")

    @classmethod
    def from_column_subsets(
        cls, domain: Basis, codomain: Basis, images: Sequence[Iterable[str]]
    ) -> "LinearMap":
        """Columns given as coordinate-name sets in the codomain basis."""
        cols = []
        for image in images:
            bits = 0
            for name in image:
                bits |= 1 << codomain.name_position(name)
            cols.append(bits)
        return cls(domain, codomain, tuple(cols))


def identity_map(basis: Basis) -> LinearMap:
    n = len(basis.universe)
    return LinearMap(basis, basis, tuple(1 << j for j in range(n)))


def permutation_map(basis: Basis, mapping: dict[str, str]) -> LinearMap:
    """The linear map permuting basis coordinates per the given bijection."""
    cols = []
    for name in basis.vector_names:
        image = mapping.get(name, name)
        cols.append(1 << basis.name_position(image))
    return LinearMap(basis, basis, tuple(cols))


def apply_map(m: LinearMap, s: SetKet) -> SetKet:
    """Matrix-vector product over GF(2)."""
    if s.basis != m.domain:
        raise BasisError("ket is not expressed in the map's domain basis")
    out_bits = 0
    for name in s.coords:
        out_bits ^= m.columns[m.domain.name_position(name)]
    n = len(m.codomain.universe)
    coords = frozenset(
        m.codomain.vector_names[j] for j in range(n) if (out_bits >> j) & 1
    )
    return SetKet(m.codomain, coords)


def is_nonsingular(m: LinearMap) -> bool:
    """True iff the map keeps distinct vectors distinct (full GF(2) rank)."""
    n = len(m.domain.universe)
    return gf2_rank(list(m.columns), n) == n
