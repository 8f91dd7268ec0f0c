"""Two-level design matrices with grouped columns.

A design is stored as a tuple of packed sign columns.  Bit i of a column
holds row i: a set bit means +1, a clear bit means -1.  Column 0 is always
the all-ones intercept.  Every remaining column carries a block label; the
intercept's block is labelled 1 and labels are assigned in order of first
appearance, so equal designs always carry equal labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "all_ones",
    "pack_column",
    "unpack_column",
    "column_sum",
    "inner_product",
    "Signature",
    "Design",
]


def all_ones(n: int) -> int:
    """The packed intercept column for n rows."""
    return (1 << n) - 1


def pack_column(values) -> int:
    """Pack a +-1 sequence into an integer, row i at bit i."""
    bits = 0
    for i, value in enumerate(values):
        if value == 1:
            bits |= 1 << i
        else:
            assert value == -1, f"entries must be +-1, got {value}"
    return bits


def unpack_column(bits: int, n: int) -> tuple[int, ...]:
    """Expand a packed column back to a +-1 tuple of length n."""
    return tuple(1 if (bits >> i) & 1 else -1 for i in range(n))


def column_sum(bits: int, n: int) -> int:
    """Sum of the +-1 entries of a packed column."""
    return 2 * bits.bit_count() - n


def inner_product(a: int, b: int, n: int) -> int:
    """Inner product of two packed +-1 columns of length n."""
    return n - 2 * (a ^ b).bit_count()


@dataclass(frozen=True, order=True)
class Signature:
    """Intrinsic shape of a partially extended design.

    Two designs can only be isomorphic when their signatures agree: the
    multiset of block sizes (the intercept counts toward its block) and
    the size of the intercept's block are both preserved by row and
    column permutations.
    """

    n: int
    sizes: tuple[int, ...]  # block sizes, sorted ascending
    intercept_size: int

    @property
    def s(self) -> int:
        return len(self.sizes)

    @property
    def p(self) -> int:
        return sum(self.sizes)


@dataclass(frozen=True)
class Design:
    """An n-run design with grouped +-1 columns, intercept first."""

    n: int
    columns: tuple[int, ...]
    group_of: tuple[int, ...]

    def __post_init__(self) -> None:
        assert len(self.columns) == len(self.group_of)
        assert self.columns[0] == all_ones(self.n), "column 0 must be the intercept"
        assert self.group_of[0] == 1, "the intercept block is labelled 1"

    @property
    def p(self) -> int:
        return len(self.columns)

    @property
    def s(self) -> int:
        return max(self.group_of)

    def group_size(self, g: int) -> int:
        return self.group_of.count(g)

    def group_members(self, g: int) -> tuple[int, ...]:
        return tuple(j for j, label in enumerate(self.group_of) if label == g)

    @cached_property
    def signature(self) -> Signature:
        sizes = sorted(self.group_size(g) for g in range(1, self.s + 1))
        return Signature(
            n=self.n, sizes=tuple(sizes), intercept_size=self.group_size(1)
        )

    @property
    def type_tag(self) -> str:
        """Which of the two partial-block layouts this design realises.

        When s divides p all blocks have equal size and the tag is
        "pure".  Otherwise the intercept's block has either r columns
        ("type1") or r + 1 columns ("type2"), where r = p // s.
        """
        r, rem = divmod(self.p, self.s)
        if rem == 0:
            return "pure"
        return "type1" if self.group_size(1) == r else "type2"

    def matrix(self) -> np.ndarray:
        """The n x p design matrix with +-1 entries."""
        out = np.empty((self.n, self.p), dtype=np.int64)
        for j, bits in enumerate(self.columns):
            for i in range(self.n):
                out[i, j] = 1 if (bits >> i) & 1 else -1
        return out

    def gram(self) -> np.ndarray:
        """The p x p information matrix X'X."""
        x = self.matrix()
        return x.T @ x
