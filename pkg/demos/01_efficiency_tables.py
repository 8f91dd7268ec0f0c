"""
Exact efficiency tables for block-form information matrices
============================================================

For run sizes n = 3 (mod 4), the best information matrices of saturated
main-effects designs have a block pattern: diagonal n, off-diagonal 3
inside blocks and -1 between blocks.  This script evaluates every such
matrix for n = 15 exactly and prints which block counts are D- and
A-optimal for each number of parameters.
"""

from fractions import Fraction

import ehlich_designs as ed

n = 15

# determinants and inverse traces come from closed forms evaluated in
# rational arithmetic, so nothing here depends on float precision
spec = ed.make_spec(n, 10, 5)
print(f"block sizes of K({n},10,5): {spec.block_sizes}")
print(f"det  = {ed.det_closed_form(spec)}")
print(f"tr K^-1 = {ed.trace_inv_closed_form(spec)}")
print()

grid = ed.efficiency_grid(n)

print("p   D-optimal s   A-optimal s   D-eff at s=p   A-eff at s=p")
for p in range(4, n + 1):
    cell = grid.cells[(p, p)]
    d_opt = ",".join(map(str, sorted(grid.optimal_d[p])))
    a_opt = ",".join(map(str, sorted(grid.optimal_a[p])))
    print(f"{p:<3d} {d_opt:<13s} {a_opt:<13s} "
          f"{100 * cell.d_eff:6.2f}%        {100 * float(cell.a_eff):6.2f}%")

# p = 8 has an exact tie: two different block counts give the same
# trace, so two distinct A-optimal matrix forms exist
t7 = ed.trace_inv_closed_form(ed.make_spec(n, 8, 7))
t8 = ed.trace_inv_closed_form(ed.make_spec(n, 8, 8))
print()
print(f"exact A-tie at p=8: tr K(15,8,7)^-1 = {t7}, "
      f"tr K(15,8,8)^-1 = {t8}, equal: {t7 == t8 == Fraction(9, 16)}")
