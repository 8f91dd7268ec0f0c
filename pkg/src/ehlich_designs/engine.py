"""Catalog enumeration by grouped column extension.

Designs grow one column per step along a fixed schedule derived from the
block layout: phase 1 opens the blocks beyond the seed's three as
singletons, each full phase i = 2..r appends one column to every block
(the intercept's block last), and when s does not divide p a final
partial phase tops up v blocks to size r + 1.  The partial phase comes in
two flavours that cannot mix: either the intercept's block stays at r
columns (type1) or it is one of the blocks raised to r + 1 (type2).

After every step the extended designs are cut down to one representative
per isomorphism class via canonical keys, so work scales with the number
of classes.  Steps that top up one block among several of equal size try
every such block: the blocks are only interchangeable up to isomorphisms
of the particular design, so extending a single fixed block could lose
classes.  Intermediate stages are cached by their schedule prefix and
shared between targets that grow through the same stages.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from .canon import DedupStore, canonical_key
from .columns import CandidateSets, enumerate_candidates, initial_design
from .core import EhlichSpec, make_spec
from .designs import Design, all_ones, inner_product

__all__ = [
    "Step",
    "schedule",
    "extend_one",
    "enumerate_class",
    "EhlichFormError",
    "recover_groups",
    "check_ehlich_form",
    "worker_count",
]

TYPE_TAGS = ("pure", "type1", "type2")

# raw extensions per stage below this skip the process pool
_PARALLEL_THRESHOLD = 512


@dataclass(frozen=True)
class Step:
    """One column-appending step: which phase, and the nominal block."""

    phase: int
    group: int
    fresh: bool  # True when the step opens a new singleton block


def schedule(spec: EhlichSpec, type_tag: str) -> tuple[Step, ...]:
    """The p - 3 extension steps leading from the seed design to (p, s).

    Rejects s < 3 (such shapes are never optimal for p >= 4 and the seed
    already occupies three blocks) and type tags inconsistent with the
    block layout: "pure" requires v = 0, "type1"/"type2" require v > 0.
    """
    if spec.s < 3:
        raise ValueError(f"enumeration needs at least 3 blocks, got s={spec.s}")
    if type_tag not in TYPE_TAGS:
        raise ValueError(f"unknown type tag {type_tag!r}")
    if spec.v == 0 and type_tag != "pure":
        raise ValueError(f"s divides p: only 'pure' is valid, got {type_tag!r}")
    if spec.v > 0 and type_tag == "pure":
        raise ValueError("s does not divide p: choose 'type1' or 'type2'")
    steps = [Step(phase=1, group=g, fresh=True) for g in range(4, spec.s + 1)]
    for phase in range(2, spec.r + 1):
        for g in (*range(2, spec.s + 1), 1):
            steps.append(Step(phase=phase, group=g, fresh=False))
    if spec.v:
        phase = spec.r + 1
        if type_tag == "type1":
            groups = range(spec.s - spec.v + 1, spec.s + 1)
        else:
            steps.append(Step(phase=phase, group=1, fresh=False))
            groups = range(spec.s - spec.v + 2, spec.s + 1)
        for g in groups:
            steps.append(Step(phase=phase, group=g, fresh=False))
    assert len(steps) == spec.p - 3
    return tuple(steps)


def extend_one(design: Design, group: int, cands: CandidateSets) -> list[Design]:
    """All one-column extensions of a design into the given block.

    The candidate pool already guarantees the right sum and the right
    inner products with the seed columns; the remaining constraints
    (inner product 3 with columns of the target block, -1 with every
    other column) are checked here.  Extensions come back in ascending
    candidate order.
    """
    n = design.n
    assert 1 <= group <= design.s + 1, f"block {group} out of range"
    pool = cands.pool_array(min(group, 4))
    keep = np.ones(len(pool), dtype=bool)
    for idx in range(3, design.p):
        want = 3 if design.group_of[idx] == group else -1
        distance = (n - want) // 2  # Hamming distance fixing the inner product
        keep &= np.bitwise_count(pool ^ np.uint64(design.columns[idx])) == distance
    labels = design.group_of + (group,)
    return [
        Design(n=n, columns=design.columns + (int(c),), group_of=labels)
        for c in pool[keep]
    ]


def _targets(design: Design, step: Step, spec: EhlichSpec) -> tuple[int, ...]:
    # The blocks a step may extend.  In the partial phase every block of
    # the promoted size is a valid target: which of them ends up larger
    # is not determined up to isomorphism, so all must be tried.
    if step.fresh:
        return (design.s + 1,)
    if step.group == 1:
        return (1,)
    if step.phase > spec.r:
        return tuple(
            g for g in range(2, design.s + 1) if design.group_size(g) == spec.r
        )
    return (step.group,)


def _token(step: Step, spec: EhlichSpec) -> str:
    # Cache token: steps whose nominal block label does not matter are
    # collapsed so equal stages are shared across targets.
    if step.fresh:
        return "+"
    if step.group == 1:
        return "1"
    if step.phase > spec.r:
        return "*"
    return f"{step.phase}:{step.group}"


def worker_count(explicit: int | None = None) -> int:
    """Resolve the worker process count; EHLICH_THREADS caps it."""
    if explicit is not None:
        return max(1, explicit)
    env = os.environ.get("EHLICH_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _key_of(design: Design) -> bytes:
    return canonical_key(design.n, design.columns)


def _stage_keys(raw: list[Design], workers: int) -> list[bytes]:
    if workers > 1 and len(raw) >= _PARALLEL_THRESHOLD:
        chunk = max(16, len(raw) // (workers * 8))
        with Pool(workers) as pool:
            return pool.map(_key_of, raw, chunksize=chunk)
    return [_key_of(d) for d in raw]


def _extend_stage(
    parents: list[Design],
    step: Step,
    spec: EhlichSpec,
    cands: CandidateSets,
    workers: int,
) -> list[Design]:
    raw: list[Design] = []
    for parent in parents:
        for group in _targets(parent, step, spec):
            raw.extend(extend_one(parent, group, cands))
    store = DedupStore()
    stage = []
    for design, key in zip(raw, _stage_keys(raw, workers)):
        if store.test_and_insert(key, design):
            stage.append(design)
    return stage


def enumerate_class(
    n: int,
    p: int,
    s: int,
    type_tag: str = "pure",
    *,
    cands: CandidateSets | None = None,
    cache: dict | None = None,
    workers: int | None = None,
) -> list[Design]:
    """One representative per isomorphism class of n-run designs whose
    information matrix is K(n, p, s) with the given partial-block type.

    Representatives keep the construction orientation: columns 1 and 2
    are the seed design's factor columns.  The result order and content
    are deterministic and independent of the worker count.  Passing a
    shared cache dict reuses intermediate stages across calls.
    """
    spec = make_spec(n, p, s)
    steps = schedule(spec, type_tag)
    if cands is None:
        cands = enumerate_candidates(n)
    nworkers = worker_count(workers)
    stage = [initial_design(n)]
    prefix: tuple[str, ...] = ()
    for step in steps:
        prefix += (_token(step, spec),)
        if cache is not None and (n, prefix) in cache:
            stage = cache[(n, prefix)]
            continue
        stage = _extend_stage(stage, step, spec, cands, nworkers)
        if cache is not None:
            cache[(n, prefix)] = stage
    return list(stage)


class EhlichFormError(ValueError):
    """A Gram matrix cell violating the Ehlich block pattern."""

    def __init__(self, row: int, col: int, reason: str):
        self.row = row
        self.col = col
        super().__init__(f"Gram cell ({row}, {col}): {reason}")


def recover_groups(n: int, columns: tuple[int, ...]) -> tuple[int, ...]:
    """Read the block partition off the Gram matrix of packed columns.

    Blocks are the cliques of the "inner product 3" relation; labels are
    assigned by first column occurrence, so the intercept's block is 1.
    Raises EhlichFormError at the first cell breaking the pattern.
    """
    p = len(columns)
    if columns[0] != all_ones(n):
        raise EhlichFormError(0, 0, "column 0 is not the all-ones intercept")
    gram = [
        [inner_product(columns[i], columns[j], n) for j in range(p)] for i in range(p)
    ]
    for i in range(p):
        for j in range(i + 1, p):
            if gram[i][j] not in (3, -1):
                raise EhlichFormError(
                    i, j, f"off-diagonal entry {gram[i][j]} not in {{3, -1}}"
                )
    labels = [0] * p
    next_label = 0
    for i in range(p):
        if labels[i]:
            continue
        next_label += 1
        labels[i] = next_label
        for j in range(i + 1, p):
            if gram[i][j] == 3:
                if labels[j]:
                    raise EhlichFormError(i, j, "blocks are not disjoint cliques")
                labels[j] = next_label
    for i in range(p):
        for j in range(i + 1, p):
            same = labels[i] == labels[j]
            if same != (gram[i][j] == 3):
                raise EhlichFormError(i, j, "blocks are not disjoint cliques")
    return tuple(labels)


def check_ehlich_form(design: Design) -> EhlichSpec:
    """Validate a design's Gram matrix and return its recovered layout.

    Checks that the +3 relation partitions the columns into blocks, that
    the stored labels agree with that partition, and that the block sizes
    are as equal as possible; returns the matching EhlichSpec.
    """
    labels = recover_groups(design.n, design.columns)
    if labels != design.group_of:
        first = next(j for j in range(design.p) if labels[j] != design.group_of[j])
        raise EhlichFormError(
            0, first, "stored block labels disagree with the Gram matrix"
        )
    s = max(labels)
    spec = make_spec(design.n, design.p, s)
    sizes = sorted(labels.count(g) for g in range(1, s + 1))
    if sizes != sorted(spec.block_sizes):
        raise EhlichFormError(
            0, 0, f"block sizes {sizes} are not as equal as possible"
        )
    return spec
