"""Seed design and candidate column sets for the extension search.

Appending a column to a design whose Gram matrix has the Ehlich block
pattern constrains the column hard: its sum must be 3 (inner product 3
with the intercept, so the column joins the intercept's block) or -1, and
its inner product with each of the two seed factor columns is pinned to 3
or -1 depending on the target block.  Starting from the fixed seed design
lets us enumerate those reduced candidate sets once per run size and
reuse them for every extension step.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .designs import Design, all_ones, inner_product

__all__ = [
    "columns_with_sum",
    "initial_design",
    "CandidateSets",
    "enumerate_candidates",
    "count_formulas",
]


def columns_with_sum(n: int, total: int) -> list[int]:
    """All packed +-1 columns of length n with the given entry sum.

    Returned in ascending packed-integer order.  The number of +1 entries
    is (n + total) / 2, so n + total must be even and in range.
    """
    plus, rem = divmod(n + total, 2)
    if rem or not 0 <= plus <= n:
        raise ValueError(f"no +-1 column of length {n} sums to {total}")
    cols = [
        sum(1 << i for i in positions)
        for positions in combinations(range(n), plus)
    ]
    cols.sort()
    return cols


def initial_design(n: int) -> Design:
    """The three-column seed design: intercept plus two factor columns.

    Rows are laid out in a fixed order: (n+1)/4 copies each of the factor
    rows (-1,-1), (-1,+1), (+1,-1), then (n-3)/4 copies of (+1,+1).  Its
    information matrix has diagonal n and every off-diagonal entry -1,
    which is the Ehlich pattern with three singleton blocks.
    """
    if n <= 0 or n % 4 != 3:
        raise ValueError(f"run size must be positive and 3 mod 4, got {n}")
    q = (n + 1) // 4
    col_a = 0
    col_b = 0
    for row in range(2 * q, n):  # (+1,-1) rows then (+1,+1) rows
        col_a |= 1 << row
    for row in range(q, 2 * q):  # (-1,+1) rows
        col_b |= 1 << row
    for row in range(3 * q, n):  # (+1,+1) rows
        col_b |= 1 << row
    return Design(n=n, columns=(all_ones(n), col_a, col_b), group_of=(1, 2, 3))


@dataclass(frozen=True)
class CandidateSets:
    """Reduced candidate columns relative to the seed design of one run size.

    Each pool is sorted ascending by packed value.  The pools partition
    the admissible extensions by target block:

    - intercept_pool: sum 3, inner product -1 with both seed columns; the
      only columns that may join the intercept's block.
    - first_factor_pool: sum -1, inner products (3, -1) with the seed
      columns; extends the block of the first factor column.
    - second_factor_pool: sum -1, inner products (-1, 3); extends the
      block of the second factor column.
    - fresh_pool: sum -1, inner products (-1, -1); the only columns that
      may open a new block, and the pool for every block beyond the
      first three.

    total_sum3 and total_sum_m1 record the sizes of the unreduced
    universes (all columns with sum 3 or -1).
    """

    n: int
    col_a: int
    col_b: int
    intercept_pool: tuple[int, ...]
    first_factor_pool: tuple[int, ...]
    second_factor_pool: tuple[int, ...]
    fresh_pool: tuple[int, ...]
    total_sum3: int
    total_sum_m1: int

    @property
    def reduced_sum_m1_total(self) -> int:
        """Size of the full reduced sum -1 set (all three subcases)."""
        return (
            len(self.first_factor_pool)
            + len(self.second_factor_pool)
            + len(self.fresh_pool)
        )

    def pool_for_group(self, group: int) -> tuple[int, ...]:
        """Candidate pool for appending a column to the given block."""
        if group == 1:
            return self.intercept_pool
        if group == 2:
            return self.first_factor_pool
        if group == 3:
            return self.second_factor_pool
        return self.fresh_pool

    def pool_array(self, group: int) -> np.ndarray:
        """pool_for_group as a cached uint64 array for vector filtering."""
        arrays = self.__dict__.setdefault("_pool_arrays", {})
        group = min(group, 4)
        if group not in arrays:
            arrays[group] = np.array(self.pool_for_group(group), dtype=np.uint64)
        return arrays[group]


def enumerate_candidates(n: int) -> CandidateSets:
    """Filter the full sum 3 and sum -1 universes against the seed design."""
    seed = initial_design(n)
    col_a, col_b = seed.columns[1], seed.columns[2]

    sum3 = columns_with_sum(n, 3)
    intercept_pool = tuple(
        c
        for c in sum3
        if inner_product(c, col_a, n) == -1 and inner_product(c, col_b, n) == -1
    )

    sum_m1 = columns_with_sum(n, -1)
    first, second, fresh = [], [], []
    for c in sum_m1:
        ip_a = inner_product(c, col_a, n)
        ip_b = inner_product(c, col_b, n)
        if ip_a == 3 and ip_b == -1:
            first.append(c)
        elif ip_a == -1 and ip_b == 3:
            second.append(c)
        elif ip_a == -1 and ip_b == -1:
            fresh.append(c)
    return CandidateSets(
        n=n,
        col_a=col_a,
        col_b=col_b,
        intercept_pool=intercept_pool,
        first_factor_pool=tuple(first),
        second_factor_pool=tuple(second),
        fresh_pool=tuple(fresh),
        total_sum3=len(sum3),
        total_sum_m1=len(sum_m1),
    )


def count_formulas(n: int) -> tuple[int, int, int]:
    """Closed-form sizes of the reduced candidate sets for run size n.

    Returns (intercept pool size, full reduced sum -1 size, fresh pool
    size) as binomial sums in x = (n - 3) / 4.  These counts must match
    the exhaustive filter in enumerate_candidates.
    """
    if n <= 0 or n % 4 != 3:
        raise ValueError(f"run size must be positive and 3 mod 4, got {n}")
    x = (n - 3) // 4
    intercept = sum(
        comb(x, i) * comb(x + 1, i + 1) * comb(x + 1, i) ** 2 for i in range(x + 1)
    )
    reduced_m1 = sum(
        comb(x, i)
        * comb(x + 1, i + 1)
        * (comb(x + 1, i + 1) ** 2 + 2 * comb(x + 1, i) ** 2)
        for i in range(x + 1)
    )
    fresh = sum(comb(x, i) * comb(x + 1, i + 1) ** 3 for i in range(x + 1))
    return intercept, reduced_m1, fresh
