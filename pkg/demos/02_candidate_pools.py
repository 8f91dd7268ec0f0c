"""
Candidate column pools and their closed-form sizes
==================================================

Catalog construction starts from a fixed three-column design (intercept
plus two factors) and only ever appends columns whose sums and inner
products fit the block pattern.  The pools of admissible columns can be
counted by binomial formulas; this script checks the formulas against
exhaustive enumeration for several run sizes.
"""

import ehlich_designs as ed

for n in (7, 11, 15, 19):
    cands = ed.enumerate_candidates(n)
    intercept_f, reduced_f, fresh_f = ed.count_formulas(n)
    print(f"n = {n}")
    print(f"  columns with sum  3: {cands.total_sum3}")
    print(f"  columns with sum -1: {cands.total_sum_m1}")
    print(f"  joining the intercept block: {len(cands.intercept_pool)}"
          f" (formula {intercept_f})")
    print(f"  joining either seed factor or a fresh block: "
          f"{cands.reduced_sum_m1_total} (formula {reduced_f})")
    print(f"  opening a fresh block: {len(cands.fresh_pool)}"
          f" (formula {fresh_f})")
    assert len(cands.intercept_pool) == intercept_f
    assert cands.reduced_sum_m1_total == reduced_f
    assert len(cands.fresh_pool) == fresh_f
print("all closed forms confirmed by enumeration")
