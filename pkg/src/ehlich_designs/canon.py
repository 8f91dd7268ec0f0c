"""Canonical labelling of designs under row, column and sign symmetry.

Two designs are isomorphic when one maps onto the other by permuting
rows, permuting the factor columns, and flipping the sign of individual
factor columns; the all-ones intercept column stays fixed.  This module
assigns every design a canonical key: the lexicographically smallest
row-major bit packing of the factor-column matrix over that whole group.

The minimum is found by a depth-first search over row orders.  Fixing a
first row determines every column's sign (flip it so the first entry is
-1); from then on columns are kept in an ordered partition of
interchangeable-so-far classes, refined row by row, so the best reachable
row encoding at each depth is known exactly and branches that cannot beat
the incumbent are cut.  Only rows achieving the minimal encoding at a
node are explored, duplicate rows are collapsed, and the first row is
restricted to a class singled out by an isomorphism-invariant profile.

Key layout (version 1): byte 0 format version, byte 1 run count n, byte 2
column count p, then the n*(p-1) bits of the canonical factor matrix in
row-major order, most significant bit first, zero-padded to whole bytes.
A set bit encodes +1.
"""

from __future__ import annotations

import threading
from typing import Iterable

from .designs import Design, all_ones

__all__ = [
    "KEY_FORMAT_VERSION",
    "canonical_key",
    "canonical_form",
    "decode_key",
    "scramble",
    "apply_isomorphism",
    "DedupStore",
]

KEY_FORMAT_VERSION = 1

_LOW_ONES = [(1 << k) - 1 for k in range(32)]


def _row_words(n: int, columns: tuple[int, ...]) -> list[int]:
    # word per row over the factor columns; bit j holds column j + 1
    m = len(columns) - 1
    words = []
    for i in range(n):
        w = 0
        for j in range(m):
            if (columns[j + 1] >> i) & 1:
                w |= 1 << j
        words.append(w)
    return words


def _search(n: int, words: list[int], m: int) -> tuple[list[int], list[int]]:
    """Minimal row readings over the symmetry group, with the row order."""
    best_readings: list[int] | None = None
    best_rows: list[int] | None = None
    low_ones = _LOW_ONES

    # Restrict the first row to the class minimising an invariant profile:
    # the sorted Hamming distances to all other rows, which no column
    # permutation or sign flip can change.
    profiles = [
        tuple(sorted((words[i] ^ words[k]).bit_count() for k in range(n) if k != i))
        for i in range(n)
    ]
    least = min(profiles)
    first_rows = [i for i in range(n) if profiles[i] == least]

    def descend(
        used: int,
        flip: int,
        groups: tuple[tuple[int, int], ...],
        depth: int,
        readings: list[int],
        rows: list[int],
    ) -> None:
        nonlocal best_readings, best_rows
        if depth == n:
            if best_readings is None or readings < best_readings:
                best_readings = readings.copy()
                best_rows = rows.copy()
            return
        candidates: list[tuple[int, int]] = []  # (row, adjusted word)
        lowest = -1
        seen_words: set[int] = set()
        for row in range(n):
            if (used >> row) & 1:
                continue
            w = words[row]
            if w in seen_words:  # duplicate rows are interchangeable
                continue
            seen_words.add(w)
            adjusted = w ^ flip
            reading = 0
            for gmask, gsize in groups:
                ones = (adjusted & gmask).bit_count()
                reading = (reading << gsize) | low_ones[ones]
            if lowest < 0 or reading < lowest:
                lowest = reading
                candidates = [(row, adjusted)]
            elif reading == lowest:
                candidates.append((row, adjusted))
        # Only rows realising the minimal reading can start a minimal
        # completion of this prefix.  Prune against the incumbent when the
        # prefix matches it exactly; the comparison is recomputed here
        # because the incumbent may have improved since the parent call.
        if best_readings is not None and readings == best_readings[:depth]:
            if lowest > best_readings[depth]:
                return
        readings.append(lowest)
        for row, adjusted in candidates:
            refined = []
            for gmask, gsize in groups:
                ones_mask = gmask & adjusted
                if ones_mask == 0 or ones_mask == gmask:
                    refined.append((gmask, gsize))
                    continue
                zeros_mask = gmask & ~ones_mask
                ones = ones_mask.bit_count()
                refined.append((zeros_mask, gsize - ones))
                refined.append((ones_mask, ones))
            rows.append(row)
            descend(used | (1 << row), flip, tuple(refined), depth + 1, readings, rows)
            rows.pop()
        readings.pop()

    whole = ((1 << m) - 1, m)
    seen_first: set[int] = set()
    for row in first_rows:
        if words[row] in seen_first:
            continue
        seen_first.add(words[row])
        # the first row fixes the signs; its reading is always zero
        descend(1 << row, words[row], (whole,), 1, [0], [row])
    assert best_readings is not None and best_rows is not None
    return best_readings, best_rows


def _pack_key(n: int, p: int, readings: Iterable[int]) -> bytes:
    m = p - 1
    big = 0
    for reading in readings:
        big = (big << m) | reading
    nbits = n * m
    big <<= (-nbits) % 8
    return bytes([KEY_FORMAT_VERSION, n, p]) + big.to_bytes((nbits + 7) // 8, "big")


def canonical_key(n: int, columns: tuple[int, ...]) -> bytes:
    """Canonical key of a design given as packed columns, intercept first.

    The input need not have an Ehlich-form Gram matrix; any +-1 matrix
    whose first column is the intercept gets a key, and two inputs get
    equal keys exactly when they are isomorphic.
    """
    assert columns[0] == all_ones(n), "column 0 must be the intercept"
    m = len(columns) - 1
    if m == 0:
        return _pack_key(n, 1, [])
    readings, _ = _search(n, _row_words(n, columns), m)
    return _pack_key(n, len(columns), readings)


def canonical_form(
    n: int, columns: tuple[int, ...]
) -> tuple[bytes, list[int], list[int], list[int]]:
    """Canonical key plus the witnessing isomorphism.

    Returns (key, row_order, column_order, sign_flips): placing original
    row row_order[t] at position t, original factor column
    column_order[u] at position u, and negating the factor columns with
    sign_flips[u] == 1 yields exactly the matrix packed in the key.
    """
    assert columns[0] == all_ones(n)
    m = len(columns) - 1
    if m == 0:
        return _pack_key(n, 1, []), list(range(n)), [], []
    words = _row_words(n, columns)
    readings, rows = _search(n, words, m)
    flip = words[rows[0]]
    groups = [list(range(m))]
    for row in rows[1:]:
        adjusted = words[row] ^ flip
        refined = []
        for group in groups:
            zeros = [j for j in group if not (adjusted >> j) & 1]
            ones = [j for j in group if (adjusted >> j) & 1]
            if zeros:
                refined.append(zeros)
            if ones:
                refined.append(ones)
        groups = refined
    column_order = [j for group in groups for j in group]
    sign_flips = [(flip >> j) & 1 for j in column_order]
    return _pack_key(n, len(columns), readings), rows, column_order, sign_flips


def decode_key(key: bytes) -> tuple[int, int, tuple[int, ...]]:
    """Unpack a canonical key into (n, p, packed columns with intercept)."""
    if len(key) < 3 or key[0] != KEY_FORMAT_VERSION:
        raise ValueError("unknown key format")
    n, p = key[1], key[2]
    m = p - 1
    nbits = n * m
    assert len(key) == 3 + (nbits + 7) // 8, "key length mismatch"
    big = int.from_bytes(key[3:], "big") >> ((-nbits) % 8)
    columns = [all_ones(n)]
    for j in range(m):
        bits = 0
        for i in range(n):
            reading = (big >> (m * (n - 1 - i))) & ((1 << m) - 1)
            if (reading >> (m - 1 - j)) & 1:
                bits |= 1 << i
        columns.append(bits)
    return n, p, tuple(columns)


def apply_isomorphism(
    n: int,
    columns: tuple[int, ...],
    row_order: list[int],
    column_order: list[int],
    sign_flips: list[int],
) -> tuple[int, ...]:
    """Apply (row order, factor column order, sign flips) to packed columns.

    Row i of the result is row row_order[i] of the input; factor column u
    of the result is input factor column column_order[u], negated when
    sign_flips[u] is 1.  The intercept stays in front.
    """
    full = all_ones(n)
    out = [full]
    for u, src in enumerate(column_order):
        c = columns[src + 1]
        bits = 0
        for i in range(n):
            if (c >> row_order[i]) & 1:
                bits |= 1 << i
        if sign_flips[u]:
            bits ^= full
        out.append(bits)
    return tuple(out)


def scramble(rng, n: int, columns: tuple[int, ...]) -> tuple[int, ...]:
    """Apply a random isomorphism; rng is a random.Random instance."""
    m = len(columns) - 1
    row_order = list(range(n))
    rng.shuffle(row_order)
    column_order = list(range(m))
    rng.shuffle(column_order)
    sign_flips = [rng.randrange(2) for _ in range(m)]
    return apply_isomorphism(n, columns, row_order, column_order, sign_flips)


class DedupStore:
    """First-wins store of canonical keys and their representatives.

    test_and_insert is atomic under a lock, so concurrent workers that
    race on the same key agree on a single representative and the store
    never holds two entries for one isomorphism class.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._reps: dict[bytes, Design] = {}

    def test_and_insert(self, key: bytes, design: Design) -> bool:
        """Insert under key if unseen; True means the key was new."""
        with self._lock:
            if key in self._reps:
                return False
            self._reps[key] = design
            return True

    def __len__(self) -> int:
        return len(self._reps)

    def __contains__(self, key: bytes) -> bool:
        return key in self._reps

    def get(self, key: bytes) -> Design | None:
        return self._reps.get(key)

    def keys(self) -> list[bytes]:
        return list(self._reps)

    def representatives(self) -> list[Design]:
        return list(self._reps.values())
