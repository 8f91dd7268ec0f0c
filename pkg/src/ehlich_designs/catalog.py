"""Catalog persistence, integrity checking, and summary grids.

A catalog tree holds one directory per run size (N15, N19, ...).  Each
enumerated cell (p, s, type) is stored as a plain text .designs file:

    header line:  n p s typecode count
    per design:   one blank line, then n rows of p characters from {+,-}

with the intercept column first, so a design file is diff-able and easy
to consume from other tools.  typecode is 0 for cells where s divides p,
else 1 or 2 for the two partial-block layouts.  An index.json per run
size records counts, ranking summaries, optimality flags, canonical keys,
timings, engine and key format versions, and a content hash per cell;
verify_tree re-derives all of it from the design files.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import canon
from .aberration import AliasStats, rank_catalog, round2
from .canon import canonical_key
from .columns import CandidateSets
from .core import efficiency_grid, make_spec
from .designs import Design, all_ones
from .engine import check_ehlich_form, enumerate_class, recover_groups

__all__ = [
    "CatalogEntry",
    "TYPE_CODES",
    "cell_name",
    "build_entries",
    "write_catalog",
    "read_catalog",
    "materialize_cell",
    "emit_grids",
    "verify_tree",
]

ENGINE_VERSION = "0.1.0"

TYPE_CODES = {"pure": 0, "type1": 1, "type2": 2}
CODE_TYPES = {code: tag for tag, code in TYPE_CODES.items()}


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog member: design, exact alias stats, key, class flags."""

    design: Design
    stats: AliasStats
    key: bytes
    d_optimal_class: bool
    a_optimal_class: bool


def cell_name(p: int, s: int, type_tag: str) -> str:
    return f"p{p}_s{s}_t{TYPE_CODES[type_tag]}"


def _class_flags(n: int, p: int, s: int) -> tuple[bool, bool]:
    # The efficiency grid starts at p = 4; smaller cells carry no flags.
    if p < 4:
        return False, False
    grid = efficiency_grid(n, p_max=p)
    return s in grid.optimal_d[p], s in grid.optimal_a[p]


def build_entries(designs: list[Design]) -> list[CatalogEntry]:
    """Rank an enumerated catalog and attach optimality flags."""
    if not designs:
        return []
    first = designs[0]
    d_opt, a_opt = _class_flags(first.n, first.p, first.s)
    return [
        CatalogEntry(design=d, stats=stats, key=key, d_optimal_class=d_opt, a_optimal_class=a_opt)
        for d, stats, key in rank_catalog(designs)
    ]


def _render_design(design: Design) -> str:
    rows = []
    for i in range(design.n):
        rows.append(
            "".join("+" if (c >> i) & 1 else "-" for c in design.columns)
        )
    return "\n".join(rows)


def _index_path(root: Path, n: int) -> Path:
    return Path(root) / f"N{n}" / "index.json"


def _load_index(root: Path, n: int) -> dict:
    path = _index_path(root, n)
    if path.exists():
        return json.loads(path.read_text())
    return {
        "n": n,
        "engine_version": ENGINE_VERSION,
        "key_format_version": canon.KEY_FORMAT_VERSION,
        "cells": {},
    }


def _store_index(root: Path, n: int, index: dict) -> None:
    path = _index_path(root, n)
    tmp = path.with_suffix(".json.tmp")
    tmp.write_text(json.dumps(index, indent=1, sort_keys=True) + "\n")
    tmp.replace(path)


def write_catalog(
    root: Path,
    n: int,
    p: int,
    s: int,
    type_tag: str,
    entries: list[CatalogEntry],
    seconds: float | None = None,
) -> Path:
    """Write one cell's .designs file and update the run-size index."""
    root = Path(root)
    cell_dir = root / f"N{n}"
    cell_dir.mkdir(parents=True, exist_ok=True)
    name = cell_name(p, s, type_tag)
    path = cell_dir / f"{name}.designs"
    blocks = [f"{n} {p} {s} {TYPE_CODES[type_tag]} {len(entries)}"]
    blocks += [_render_design(e.design) for e in entries]
    payload = "\n\n".join(blocks) + "\n"
    path.write_text(payload)

    record: dict = {
        "p": p,
        "s": s,
        "type": type_tag,
        "count": len(entries),
        "sha256": hashlib.sha256(payload.encode()).hexdigest(),
        "keys": [e.key.hex() for e in entries],
    }
    if seconds is not None:
        record["seconds"] = round(seconds, 3)
    if entries:
        head = entries[0]
        record["min_c2"] = str(head.stats.c2)
        record["min_c2_2dp"] = round2(head.stats.c2)
        record["min_c3_at_min_c2"] = str(head.stats.c3)
        record["min_c3_at_min_c2_2dp"] = round2(head.stats.c3)
        record["d_optimal_class"] = head.d_optimal_class
        record["a_optimal_class"] = head.a_optimal_class
    index = _load_index(root, n)
    index["cells"][name] = record
    _store_index(root, n, index)
    return path


def _parse_designs_file(path: Path) -> tuple[int, int, int, int, int, list[Design]]:
    text = Path(path).read_text()
    lines = text.splitlines()
    header = lines[0].split()
    if len(header) != 5:
        raise ValueError(f"{path}: malformed header {lines[0]!r}")
    n, p, s, code, count = map(int, header)
    designs = []
    idx = 1
    for _ in range(count):
        if idx >= len(lines) or lines[idx] != "":
            raise ValueError(f"{path}: expected blank separator at line {idx + 1}")
        idx += 1
        rows = lines[idx : idx + n]
        if len(rows) < n:
            raise ValueError(f"{path}: truncated design block at line {idx + 1}")
        idx += n
        columns = []
        for j in range(p):
            bits = 0
            for i, row in enumerate(rows):
                if len(row) != p or row[j] not in "+-":
                    raise ValueError(f"{path}: bad design row {row!r}")
                if row[j] == "+":
                    bits |= 1 << i
            columns.append(bits)
        if columns[0] != all_ones(n):
            raise ValueError(f"{path}: first column is not the intercept")
        labels = recover_groups(n, tuple(columns))
        designs.append(Design(n=n, columns=tuple(columns), group_of=labels))
    if any(line for line in lines[idx:]):
        raise ValueError(f"{path}: trailing content after {count} designs")
    return n, p, s, code, count, designs


def read_catalog(root: Path, n: int, p: int, s: int, type_tag: str) -> list[CatalogEntry]:
    """Load one cell back as full entries.

    Stats, keys and flags are recomputed from the stored matrices, so a
    round trip through write_catalog/read_catalog is the identity on
    entries.  Gram violations raise EhlichFormError; header or shape
    mismatches raise ValueError.
    """
    path = Path(root) / f"N{n}" / f"{cell_name(p, s, type_tag)}.designs"
    fn, fp, fs, fcode, _, designs = _parse_designs_file(path)
    if (fn, fp, fs, fcode) != (n, p, s, TYPE_CODES[type_tag]):
        raise ValueError(f"{path}: header does not match requested cell")
    expected = make_spec(n, p, s)
    entries = []
    d_opt, a_opt = _class_flags(n, p, s) if designs else (False, False)
    for design in designs:
        spec = check_ehlich_form(design)
        if spec != expected:
            raise ValueError(
                f"{path}: design has layout {spec}, expected {expected}"
            )
        if design.type_tag != type_tag:
            raise ValueError(f"{path}: design type {design.type_tag} != {type_tag}")
    for design, stats, key in rank_catalog(designs):
        entries.append(
            CatalogEntry(
                design=design,
                stats=stats,
                key=key,
                d_optimal_class=d_opt,
                a_optimal_class=a_opt,
            )
        )
    return entries


def materialize_cell(
    root: Path,
    n: int,
    p: int,
    s: int,
    type_tag: str,
    *,
    cands: CandidateSets | None = None,
    cache: dict | None = None,
    workers: int | None = None,
    force: bool = False,
) -> tuple[Path, list[CatalogEntry]]:
    """Enumerate, rank and persist one cell; reuse the file when present."""
    root = Path(root)
    path = root / f"N{n}" / f"{cell_name(p, s, type_tag)}.designs"
    if path.exists() and not force:
        return path, read_catalog(root, n, p, s, type_tag)
    started = time.perf_counter()
    designs = enumerate_class(
        n, p, s, type_tag, cands=cands, cache=cache, workers=workers
    )
    entries = build_entries(designs)
    seconds = time.perf_counter() - started
    path = write_catalog(root, n, p, s, type_tag, entries, seconds=seconds)
    return path, entries


def _cell_tags(p: int, s: int) -> list[str]:
    return ["pure"] if p % s == 0 else ["type1", "type2"]


def emit_grids(root: Path, n: int) -> list[Path]:
    """Write counts/seconds/min-C2 CSV grids for one run size.

    Rows are s = 3..n, columns p = 4..n, matching the catalog scope.
    Cells whose catalogs were never produced stay blank; produced cells
    without solutions print 0 in the counts grid and stay blank in the
    other two.  Cells split into two partial-block types are summed
    (counts, seconds) or minimised (C2) over both, and stay blank unless
    both types are present.
    """
    root = Path(root)
    index = _load_index(root, n)
    cells = index["cells"]

    def lookup(p: int, s: int) -> tuple[str, str, str]:
        records = []
        for tag in _cell_tags(p, s):
            record = cells.get(cell_name(p, s, tag))
            if record is None:
                return "", "", ""
            records.append(record)
        count = sum(r["count"] for r in records)
        seconds = sum(r.get("seconds", 0.0) for r in records)
        mins = [Fraction(r["min_c2"]) for r in records if "min_c2" in r]
        min_c2 = round2(min(mins)) if mins else ""
        return str(count), f"{seconds:.2f}", min_c2

    grids = {"counts": [], "seconds": [], "min_c2": []}
    header = ["s\\p"] + [str(p) for p in range(4, n + 1)]
    for name in grids:
        grids[name].append(header)
    for s in range(3, n + 1):
        rows = {name: [str(s)] for name in grids}
        for p in range(4, n + 1):
            if s > p:
                count = seconds = min_c2 = ""
            else:
                count, seconds, min_c2 = lookup(p, s)
            rows["counts"].append(count)
            rows["seconds"].append(seconds)
            rows["min_c2"].append(min_c2)
        for name in grids:
            grids[name].append(rows[name])
    paths = []
    for name, table in grids.items():
        path = root / f"N{n}" / f"{name}.csv"
        path.write_text("\n".join(",".join(row) for row in table) + "\n")
        paths.append(path)
    return paths


def verify_tree(root: Path) -> list[str]:
    """Re-derive every stored catalog and report inconsistencies.

    Checks per cell: content hash, header, count, Gram pattern and block
    layout of every design, recomputed canonical keys against the stored
    key list (order included), key distinctness, and the ranking summary.
    Returns a list of problems; an empty list means the tree is sound.
    """
    root = Path(root)
    problems: list[str] = []
    index_paths = sorted(root.glob("N*/index.json"))
    if not index_paths:
        return [f"{root}: no catalog indexes found"]
    for index_path in index_paths:
        try:
            index = json.loads(index_path.read_text())
        except ValueError as err:
            problems.append(f"{index_path}: unreadable index: {err}")
            continue
        n = index.get("n")
        if index.get("key_format_version") != canon.KEY_FORMAT_VERSION:
            problems.append(f"{index_path}: unknown key format version")
            continue
        for name, record in sorted(index.get("cells", {}).items()):
            path = index_path.parent / f"{name}.designs"
            label = f"{index_path.parent.name}/{name}"
            if not path.exists():
                problems.append(f"{label}: missing designs file")
                continue
            payload = path.read_bytes()
            digest = hashlib.sha256(payload).hexdigest()
            if digest != record.get("sha256"):
                problems.append(f"{label}: content hash mismatch")
                continue
            try:
                fn, fp, fs, fcode, count, designs = _parse_designs_file(path)
            except ValueError as err:
                problems.append(f"{label}: {err}")
                continue
            if (fn, fp, fs) != (n, record["p"], record["s"]) or fcode != TYPE_CODES[
                record["type"]
            ]:
                problems.append(f"{label}: header disagrees with index record")
                continue
            if count != record["count"] or len(designs) != count:
                problems.append(f"{label}: count mismatch")
                continue
            expected = make_spec(fn, fp, fs)
            keys = []
            bad = False
            for i, design in enumerate(designs):
                try:
                    spec = check_ehlich_form(design)
                except ValueError as err:
                    problems.append(f"{label}: design {i}: {err}")
                    bad = True
                    break
                if spec != expected or design.type_tag != record["type"]:
                    problems.append(f"{label}: design {i}: wrong block layout")
                    bad = True
                    break
                keys.append(canonical_key(design.n, design.columns))
            if bad:
                continue
            if [k.hex() for k in keys] != record.get("keys", []):
                problems.append(f"{label}: canonical keys do not reproduce index")
                continue
            if len(set(keys)) != len(keys):
                problems.append(f"{label}: duplicate canonical keys")
                continue
            if designs:
                ranked = rank_catalog(designs)
                if str(ranked[0][1].c2) != record.get("min_c2"):
                    problems.append(f"{label}: min C2 disagrees with index")
    return problems
