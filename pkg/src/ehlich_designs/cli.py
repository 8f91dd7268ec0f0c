"""Command line front end (installed as ehlich-enum).

Verbs:
    tables        exact determinant / trace / efficiency table for one N
    candidates    candidate column pool sizes, enumerated and closed form
    run           enumerate catalog cells and persist them
    characterize  summarise one cell (count, minimum C2/C3, head design)
    grids         write counts / seconds / min-C2 CSV grids for one N
    verify        re-derive a catalog tree and report inconsistencies

Exit status is 0 on success and 2 on verification failure or invalid
arguments.  EHLICH_THREADS caps worker processes for the enumeration.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .aberration import round2
from .catalog import emit_grids, materialize_cell, verify_tree
from .columns import count_formulas, enumerate_candidates
from .core import efficiency_grid, make_spec
from .engine import worker_count


def _percent(x: float) -> str:
    return f"{100.0 * x:.2f}"


def _cmd_tables(args: argparse.Namespace) -> int:
    grid = efficiency_grid(args.n, p_max=args.pmax)
    lines = ["p,s,det,trace_inv,d_eff_pct,a_eff_pct,d_optimal,a_optimal"]
    for p in range(4, grid.p_max + 1):
        for s in range(1, p + 1):
            cell = grid.cells[(p, s)]
            lines.append(
                ",".join(
                    [
                        str(p),
                        str(s),
                        str(cell.det),
                        str(cell.trace_inv),
                        _percent(cell.d_eff),
                        _percent(float(cell.a_eff)),
                        str(int(s in grid.optimal_d[p])),
                        str(int(s in grid.optimal_a[p])),
                    ]
                )
            )
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_candidates(args: argparse.Namespace) -> int:
    cands = enumerate_candidates(args.n)
    intercept_f, reduced_f, fresh_f = count_formulas(args.n)
    print(f"n = {args.n}")
    print(f"columns with sum 3: {cands.total_sum3}")
    print(f"columns with sum -1: {cands.total_sum_m1}")
    print(f"intercept pool (enumerated / closed form): "
          f"{len(cands.intercept_pool)} / {intercept_f}")
    print(f"reduced sum -1 pool (enumerated / closed form): "
          f"{cands.reduced_sum_m1_total} / {reduced_f}")
    print(f"fresh-block pool (enumerated / closed form): "
          f"{len(cands.fresh_pool)} / {fresh_f}")
    print(f"first factor pool: {len(cands.first_factor_pool)}")
    print(f"second factor pool: {len(cands.second_factor_pool)}")
    ok = (
        len(cands.intercept_pool) == intercept_f
        and cands.reduced_sum_m1_total == reduced_f
        and len(cands.fresh_pool) == fresh_f
    )
    print("closed forms match enumeration" if ok else "MISMATCH")
    return 0 if ok else 2


def _tags_for(p: int, s: int, requested: str) -> list[str]:
    if p % s == 0:
        if requested in ("1", "2"):
            raise ValueError(
                f"cell p={p} s={s} has equal blocks; --type {requested} does not apply"
            )
        return ["pure"]
    if requested == "1":
        return ["type1"]
    if requested == "2":
        return ["type2"]
    return ["type1", "type2"]


def _run_cells(args: argparse.Namespace, cells: list[tuple[int, int]]) -> int:
    out = Path(args.out)
    cache: dict = {}
    workers = worker_count(None)
    for p, s in cells:
        make_spec(args.n, p, s)
        if s < 3:
            print(f"n={args.n} p={p} s={s}: skipped (needs s >= 3)")
            continue
        for tag in _tags_for(p, s, args.type):
            path, entries = materialize_cell(
                out, args.n, p, s, tag,
                cache=cache, workers=workers, force=args.force,
            )
            print(f"n={args.n} p={p} s={s} {tag}: {len(entries)} designs -> {path}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    if args.grid:
        cells = [(p, s) for p in range(4, args.n + 1) for s in range(3, p + 1)]
    elif args.all_s:
        if args.p is None:
            raise ValueError("--all-s needs --p")
        cells = [(args.p, s) for s in range(3, args.p + 1)]
    else:
        if args.p is None or args.s is None:
            raise ValueError("run needs --p and --s (or --all-s / --grid)")
        cells = [(args.p, args.s)]
    return _run_cells(args, cells)


def _cmd_characterize(args: argparse.Namespace) -> int:
    make_spec(args.n, args.p, args.s)
    out = Path(args.out)
    total = 0
    best = None
    head_path = None
    for tag in _tags_for(args.p, args.s, args.type):
        path, entries = materialize_cell(out, args.n, args.p, args.s, tag)
        total += len(entries)
        if entries:
            stats = entries[0].stats
            if best is None or (stats.c2, stats.c3) < (best.c2, best.c3):
                best = stats
                head_path = path
    print(f"n={args.n} p={args.p} s={args.s}: {total} non-isomorphic designs")
    if best is None:
        print("no designs in this cell")
        return 0
    print(f"minimum C2: {round2(best.c2)} ({best.c2})")
    print(f"C3 at that minimum: {round2(best.c3)} ({best.c3})")
    print(f"best design: first block of {head_path}")
    return 0


def _cmd_grids(args: argparse.Namespace) -> int:
    for path in emit_grids(Path(args.out), args.n):
        print(f"wrote {path}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    problems = verify_tree(Path(args.dir))
    if problems:
        for problem in problems:
            print(problem)
        print(f"{len(problems)} problem(s) found")
        return 2
    print("catalog tree verified")
    return 0


def _add_n(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True,
                        help="run size, must be 3 mod 4")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ehlich-enum",
        description="Enumerate and characterise saturated two-level designs "
                    "whose information matrix has a block pattern.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tables = sub.add_parser("tables", help="exact efficiency table")
    _add_n(p_tables)
    p_tables.add_argument("--pmax", type=int, default=None)
    p_tables.add_argument("--out", default=None, help="CSV output path")
    p_tables.set_defaults(func=_cmd_tables)

    p_cand = sub.add_parser("candidates", help="candidate pool sizes")
    _add_n(p_cand)
    p_cand.set_defaults(func=_cmd_candidates)

    p_run = sub.add_parser("run", help="enumerate and persist catalog cells")
    _add_n(p_run)
    p_run.add_argument("--p", type=int, default=None)
    p_run.add_argument("--s", type=int, default=None)
    p_run.add_argument("--type", choices=("1", "2", "both"), default="both")
    p_run.add_argument("--all-s", action="store_true",
                       help="all s = 3..p for the given p")
    p_run.add_argument("--grid", action="store_true",
                       help="every cell with 4 <= p <= n, 3 <= s <= p")
    p_run.add_argument("--out", default="catalogs")
    p_run.add_argument("--force", action="store_true",
                       help="recompute cells even when already on disk")
    p_run.set_defaults(func=_cmd_run)

    p_char = sub.add_parser("characterize", help="summarise one cell")
    _add_n(p_char)
    p_char.add_argument("--p", type=int, required=True)
    p_char.add_argument("--s", type=int, required=True)
    p_char.add_argument("--type", choices=("1", "2", "both"), default="both")
    p_char.add_argument("--out", default="catalogs")
    p_char.set_defaults(func=_cmd_characterize)

    p_grids = sub.add_parser("grids", help="write summary CSV grids")
    _add_n(p_grids)
    p_grids.add_argument("--out", default="catalogs")
    p_grids.set_defaults(func=_cmd_grids)

    p_verify = sub.add_parser("verify", help="check a catalog tree")
    p_verify.add_argument("dir")
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
