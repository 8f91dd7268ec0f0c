"""
Persisting catalogs and verifying them later
============================================

Catalog cells are written as plain text design files plus a JSON index
carrying counts, rankings, canonical keys and content hashes.  The
verifier re-derives everything from the stored matrices, so silent
corruption or a stale index cannot go unnoticed.
"""

import tempfile
from pathlib import Path

from ehlich_designs.catalog import emit_grids, materialize_cell, verify_tree

root = Path(tempfile.mkdtemp(prefix="catalog_demo_"))

for p, s in [(4, 4), (4, 3), (5, 5), (5, 4)]:
    tags = ("pure",) if p % s == 0 else ("type1", "type2")
    for tag in tags:
        path, entries = materialize_cell(root, 7, p, s, tag)
        print(f"wrote {path.relative_to(root)}: {len(entries)} designs")

for path in emit_grids(root, 7):
    print(f"wrote {path.relative_to(root)}")
print((root / "N7" / "counts.csv").read_text())

problems = verify_tree(root)
print(f"verification problems: {problems or 'none'}")

# flip one sign inside a stored design and verify again
victim = root / "N7" / "p4_s4_t0.designs"
text = victim.read_text()
pos = text.index("\n\n") + 2
victim.write_text(text[:pos] + ("-" if text[pos] == "+" else "+") + text[pos + 1:])
problems = verify_tree(root)
print("after tampering:")
for line in problems:
    print("  " + line)
