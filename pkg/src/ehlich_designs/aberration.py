"""Alias statistics and catalog ranking.

All designs in one catalog share the same information matrix up to
isomorphism, so determinant-based criteria cannot separate them.  What
does separate them is how two- and three-factor interactions contaminate
the first-order estimates.  For a design matrix X (intercept plus k
factor columns) let X_i hold the elementwise products of all i-subsets of
factor columns.  The alias matrix A_i = (X'X)^-1 X' X_i is computed
exactly in rational arithmetic; C_i is the sum of squared entries of A_i
with its intercept row removed.  Smaller (C2, C3), compared
lexicographically, means less aliasing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import floor

import numpy as np

from .canon import canonical_key
from .designs import Design

__all__ = ["AliasStats", "alias_stats", "rank_catalog", "round2"]


@dataclass(frozen=True, order=True)
class AliasStats:
    """Exact squared alias norms of interaction orders two and three."""

    c2: Fraction
    c3: Fraction


def _solve_exact(a: list[list[int]], b: list[list[int]]) -> list[list[Fraction]]:
    """Solve a @ x = b exactly for integer a (p x p) and b (p x q)."""
    p = len(a)
    q = len(b[0]) if b else 0
    rows = [
        [Fraction(a[i][j]) for j in range(p)] + [Fraction(v) for v in b[i]]
        for i in range(p)
    ]
    for col in range(p):
        pivot = next((r for r in range(col, p) if rows[r][col] != 0), None)
        assert pivot is not None, "information matrix must be nonsingular"
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = Fraction(1) / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        lead = rows[col]
        for r in range(p):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], lead)]
    return [row[p : p + q] for row in rows]


def alias_stats(design: Design) -> AliasStats:
    """Exact (C2, C3) for one design.

    Designs with fewer than two factor columns have C2 = 0; fewer than
    three, C3 = 0.
    """
    k = design.p - 1
    if k < 2:
        return AliasStats(Fraction(0), Fraction(0))
    x = design.matrix()
    factors = x[:, 1:]
    pairs = list(combinations(range(k), 2))
    triples = list(combinations(range(k), 3)) if k >= 3 else []
    products = [factors[:, i] * factors[:, j] for i, j in pairs]
    products += [factors[:, i] * factors[:, j] * factors[:, l] for i, j, l in triples]
    interactions = np.stack(products, axis=1)
    gram = (x.T @ x).tolist()
    rhs = (x.T @ interactions).tolist()
    alias = _solve_exact(gram, rhs)
    c2 = Fraction(0)
    c3 = Fraction(0)
    npairs = len(pairs)
    for row in alias[1:]:  # drop the intercept row
        for col, value in enumerate(row):
            if value:
                if col < npairs:
                    c2 += value * value
                else:
                    c3 += value * value
    return AliasStats(c2=c2, c3=c3)


def rank_catalog(
    designs: list[Design],
) -> list[tuple[Design, AliasStats, bytes]]:
    """Sort a catalog by (C2, C3) ascending, canonical key as tiebreak."""
    ranked = [
        (design, alias_stats(design), canonical_key(design.n, design.columns))
        for design in designs
    ]
    ranked.sort(key=lambda item: (item[1].c2, item[1].c3, item[2]))
    return ranked


def round2(value: Fraction) -> str:
    """Format an exact rational to two decimals for the summary tables.

    Display convention: round half-up at the third decimal first, then
    half-up again to two decimals, so values within half a thousandth of
    a midpoint resolve upward.  Exact values stay authoritative; this
    only affects printing.
    """
    assert value >= 0
    mills = floor(value * 1000 + Fraction(1, 2))
    cents = floor(Fraction(mills, 10) + Fraction(1, 2))
    return f"{cents // 100}.{cents % 100:02d}"
