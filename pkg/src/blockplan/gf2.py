"""Linear algebra over GF(2) for small generator matrices.

Vectors and matrices are immutable value types holding 0/1 integer
entries; all arithmetic is exact bit arithmetic on Python ints.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "Gf2Vector",
    "Gf2Matrix",
    "rank",
    "mat_mul_t",
    "enumerate_xq",
]


@dataclass(frozen=True)
class Gf2Vector:
    """A length-n vector with entries in {0, 1}."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("entries must be 0 or 1")

    def __len__(self) -> int:
        return len(self.bits)

    def __add__(self, other: "Gf2Vector") -> "Gf2Vector":
        if len(other) != len(self):
            raise ValueError("length mismatch")
        return Gf2Vector(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def dot(self, other: "Gf2Vector") -> int:
        if len(other) != len(self):
            raise ValueError("length mismatch")
        return sum(a & b for a, b in zip(self.bits, other.bits)) & 1

    def is_zero(self) -> bool:
        return not any(self.bits)

    def as_int(self) -> int:
        """Pack entries into an int, first entry most significant."""
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value


@dataclass(frozen=True)
class Gf2Matrix:
    """An r x c matrix over GF(2), stored as a tuple of row vectors."""

    rows: tuple[Gf2Vector, ...]

    def __post_init__(self) -> None:
        if self.rows:
            width = len(self.rows[0])
            if any(len(r) != width for r in self.rows):
                raise ValueError("ragged rows")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "Gf2Matrix":
        return cls(tuple(Gf2Vector(tuple(row)) for row in entries))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def column(self, j: int) -> Gf2Vector:
        return Gf2Vector(tuple(r.bits[j] for r in self.rows))

    def columns(self) -> Iterator[Gf2Vector]:
        for j in range(self.ncols):
            yield self.column(j)

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(tuple(self.column(j) for j in range(self.ncols)))

    def to_lists(self) -> list[list[int]]:
        return [list(r.bits) for r in self.rows]


def rank(m: Gf2Matrix) -> int:
    """Rank over GF(2) by Gaussian elimination on int-packed rows."""
    packed = [r.as_int() for r in m.rows]
    r = 0
    for bit in range(m.ncols - 1, -1, -1):
        mask = 1 << bit
        pivot = next((i for i in range(r, len(packed)) if packed[i] & mask), None)
        if pivot is None:
            continue
        packed[r], packed[pivot] = packed[pivot], packed[r]
        for i in range(len(packed)):
            if i != r and packed[i] & mask:
                packed[i] ^= packed[r]
        r += 1
    return r


def mat_mul_t(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    """Product a @ b.T over GF(2).

    a is q x m and b is p x m; the result is q x p with entry (i, j)
    the parity of the dot product of row i of a and row j of b.
    """
    if a.ncols != b.ncols:
        raise ValueError("inner dimensions differ")
    return Gf2Matrix(
        tuple(
            Gf2Vector(tuple(ra.dot(rb) for rb in b.rows))
            for ra in a.rows
        )
    )


def enumerate_xq(q: int) -> tuple[Gf2Vector, ...]:
    """All 2^q - 1 nonzero GF(2)^q vectors, descending by packed value.

    The first element is the all-ones vector; this fixed order is the
    canonical column/color association used throughout.
    """
    if not 1 <= q <= 16:
        raise ValueError("q must be between 1 and 16")
    out = []
    for value in range(2**q - 1, 0, -1):
        out.append(Gf2Vector(tuple((value >> (q - 1 - i)) & 1 for i in range(q))))
    return tuple(out)
