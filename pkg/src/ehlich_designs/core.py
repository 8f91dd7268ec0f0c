"""Exact linear algebra for Ehlich-form information matrices.

For run sizes N with N = 3 (mod 4), the information matrix X'X of a
saturated two-level design on p columns cannot equal N times the identity.
The best achievable structure (Ehlich, 1964) is a block pattern: every
diagonal entry is N, off-diagonal entries are 3 inside each of s diagonal
blocks, and -1 everywhere else, with block sizes as equal as possible.

This module builds those matrices and evaluates their determinants, traces
of inverses, and D- and A-efficiency grids.  Everything is computed in
exact integer and rational arithmetic; floats appear only in the final
D-efficiency root, which is irrational by nature.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "EhlichSpec",
    "make_spec",
    "build_matrix",
    "det_closed_form",
    "trace_inv_closed_form",
    "GridCell",
    "EfficiencyGrid",
    "efficiency_grid",
]


@dataclass(frozen=True)
class EhlichSpec:
    """Shape parameters of the block matrix K(n, p, s).

    The matrix is p x p with diagonal n, entries of 3 within each of s
    diagonal blocks, and -1 between blocks.  Block sizes are as equal as
    possible: u blocks of size r followed by v blocks of size r + 1, so
    that u*r + v*(r+1) = p.  When s divides p, u = s and v = 0.
    """

    n: int
    p: int
    s: int
    r: int
    u: int
    v: int

    @property
    def block_sizes(self) -> tuple[int, ...]:
        """Sizes of the s diagonal blocks, size-r blocks first."""
        return (self.r,) * self.u + (self.r + 1,) * self.v


def make_spec(n: int, p: int, s: int) -> EhlichSpec:
    """Derive the block layout of K(n, p, s).

    Raises ValueError unless n = 3 (mod 4), 1 <= p <= n and 1 <= s <= p.
    """
    if n <= 0 or n % 4 != 3:
        raise ValueError(f"run size must be positive and 3 mod 4, got {n}")
    if not 1 <= p <= n:
        raise ValueError(f"number of columns must be in 1..{n}, got {p}")
    if not 1 <= s <= p:
        raise ValueError(f"number of blocks must be in 1..{p}, got {s}")
    r, rem = divmod(p, s)
    if rem == 0:
        u, v = s, 0
    else:
        u = s * (r + 1) - p
        v = s - u
    spec = EhlichSpec(n=n, p=p, s=s, r=r, u=u, v=v)
    assert spec.u * spec.r + spec.v * (spec.r + 1) == p
    assert spec.u + spec.v == s
    return spec


def build_matrix(spec: EhlichSpec) -> np.ndarray:
    """Dense integer K(n, p, s): diagonal n, 3 within blocks, -1 between."""
    k = np.full((spec.p, spec.p), -1, dtype=np.int64)
    start = 0
    for size in spec.block_sizes:
        k[start : start + size, start : start + size] = 3
        start += size
    np.fill_diagonal(k, spec.n)
    return k


def _block_weights(spec: EhlichSpec) -> list[tuple[int, int]]:
    # (block size r_i, weight L_i = n - 3 + 4 r_i) per block
    return [(size, spec.n - 3 + 4 * size) for size in spec.block_sizes]


def det_closed_form(spec: EhlichSpec) -> int:
    """Exact determinant of K(n, p, s).

    Evaluates the factored form over the blocks: with L_i = n - 3 + 4*r_i,

        det = (n - 3)^(p - s) * (1 - sum_i r_i / L_i) * prod_i L_i,

    which is an integer for every admissible (n, p, s).
    """
    weights = _block_weights(spec)
    product = 1
    for _, w in weights:
        product *= w
    deficit = 1 - sum(Fraction(size, w) for size, w in weights)
    value = Fraction(spec.n - 3) ** (spec.p - spec.s) * deficit * product
    assert value.denominator == 1, "block determinant must be integral"
    return int(value)


def trace_inv_closed_form(spec: EhlichSpec) -> Fraction:
    """Exact trace of K(n, p, s)^-1 as a rational number.

    With L_i = n - 3 + 4*r_i the trace of the inverse is

        sum_i 1/L_i + (p - s)/(n - 3)
            + (sum_i r_i / L_i^2) / (1 - sum_i r_i / L_i).

    Requires K to be nonsingular (always true for p <= n, n >= 7).
    """
    weights = _block_weights(spec)
    deficit = 1 - sum(Fraction(size, w) for size, w in weights)
    if deficit <= 0 or (spec.p > spec.s and spec.n == 3):
        raise ValueError(f"K({spec.n},{spec.p},{spec.s}) is singular")
    total = sum(Fraction(1, w) for _, w in weights)
    if spec.p > spec.s:
        total += Fraction(spec.p - spec.s, spec.n - 3)
    total += sum(Fraction(size, w * w) for size, w in weights) / deficit
    return total


@dataclass(frozen=True)
class GridCell:
    """Exact figures of merit for one (p, s) cell of the efficiency grid."""

    det: int
    trace_inv: Fraction
    d_eff: float  # (det / best det at this p) ** (1/p); 1.0 when optimal
    a_eff: Fraction  # best trace of inverse at this p / this trace


@dataclass(frozen=True)
class EfficiencyGrid:
    """D- and A-efficiencies of all block shapes for one run size.

    For each p in 4..p_max and each s in 1..p the grid holds the exact
    determinant and trace of the inverse of K(n, p, s), efficiencies
    relative to the best s for that p, and the exact argmax/argmin sets.
    Ties in the optimal sets are decided in exact arithmetic.
    """

    n: int
    p_max: int
    cells: dict[tuple[int, int], GridCell]
    optimal_d: dict[int, frozenset[int]]
    optimal_a: dict[int, frozenset[int]]


def efficiency_grid(n: int, p_max: int | None = None) -> EfficiencyGrid:
    """Evaluate the efficiency grid for run size n, p from 4 to p_max."""
    if p_max is None:
        p_max = n
    if not 4 <= p_max <= n:
        raise ValueError(f"p_max must be in 4..{n}, got {p_max}")
    cells: dict[tuple[int, int], GridCell] = {}
    optimal_d: dict[int, frozenset[int]] = {}
    optimal_a: dict[int, frozenset[int]] = {}
    for p in range(4, p_max + 1):
        dets: dict[int, int] = {}
        traces: dict[int, Fraction] = {}
        for s in range(1, p + 1):
            spec = make_spec(n, p, s)
            dets[s] = det_closed_form(spec)
            traces[s] = trace_inv_closed_form(spec)
        best_det = max(dets.values())
        best_trace = min(traces.values())
        optimal_d[p] = frozenset(s for s, d in dets.items() if d == best_det)
        optimal_a[p] = frozenset(s for s, t in traces.items() if t == best_trace)
        for s in range(1, p + 1):
            ratio = Fraction(dets[s], best_det)
            cells[(p, s)] = GridCell(
                det=dets[s],
                trace_inv=traces[s],
                d_eff=float(ratio) ** (1.0 / p),
                a_eff=best_trace / traces[s],
            )
    return EfficiencyGrid(
        n=n, p_max=p_max, cells=cells, optimal_d=optimal_d, optimal_a=optimal_a
    )
