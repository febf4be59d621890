"""Block-Skipping Pruning.

Sorting the pattern-block bounds partitions the feature domain into value
regions; a lookup table maps each region to the pattern blocks a feature in
that region can never match. A mismatching stream block therefore rules out
whole future queue positions at once, which the skip state consumes to jump
the processing cursor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elb import BlockFeature, ElbProfile

__all__ = [
    "LookupTable",
    "build_lookup",
    "region_of",
    "region_table_entry",
    "skip_set",
    "SkipState",
]


@dataclass(frozen=True)
class LookupTable:
    """Value regions over sorted dedup'd block bounds, and per-region
    mismatching pattern blocks.

    ``boundaries`` holds the A-1 finite bound values; region i (1-based) is
    the open interval (beta_{i-1}, beta_i) with -inf/+inf sentinels.
    ``table[i-1, j-1]`` is True iff region i misses block j entirely.
    """

    boundaries: np.ndarray
    table: np.ndarray  # bool, shape (A, N)
    block_lower: np.ndarray
    block_upper: np.ndarray

    @property
    def n_regions(self) -> int:
        return self.table.shape[0]

    @property
    def n_blocks(self) -> int:
        return self.table.shape[1]


def build_lookup(profile: ElbProfile) -> LookupTable:
    """Precompute the region -> mismatching-blocks table for one profile.

    Sentinel (infinite) bounds, such as the SEQ variant's block 1, never
    contribute boundaries and never appear in any table entry.
    """
    bu = profile.block_upper
    bl = profile.block_lower
    values = np.concatenate([bu[np.isfinite(bu)], bl[np.isfinite(bl)]])
    boundaries = np.unique(values)
    A = boundaries.shape[0] + 1
    lo = np.concatenate(([-np.inf], boundaries))  # region i = (lo[i-1], hi[i-1])
    hi = np.concatenate((boundaries, [np.inf]))
    # open region (a, c) misses closed [l, u] iff c <= l or u <= a
    table = (hi[:, None] <= bl[None, :]) | (bu[None, :] <= lo[:, None])
    return LookupTable(boundaries, table.reshape(A, profile.N), bl.copy(), bu.copy())


def region_of(lookup: LookupTable, f: float) -> tuple[int, ...]:
    """1-based region index holding ``f``; a feature exactly on a boundary
    belongs to the union of the two adjoining regions."""
    i = int(np.searchsorted(lookup.boundaries, f, side="left"))
    if i < lookup.boundaries.shape[0] and lookup.boundaries[i] == f:
        return (i + 1, i + 2)
    return (i + 1,)


def region_table_entry(lookup: LookupTable, f: float) -> set[int]:
    """Pattern blocks (1-based) that a feature of value ``f`` cannot match.

    On a boundary the entry is the intersection of both adjoining regions'
    entries: a block is skippable only if both sides miss it. Blocks whose
    bounds actually contain the boundary value are additionally excluded
    (degenerate point blocks [beta, beta] would otherwise be skipped).
    """
    regions = region_of(lookup, f)
    rows = lookup.table[regions[0] - 1]
    for ri in regions[1:]:
        rows = rows & lookup.table[ri - 1]
        rows = rows & ~((lookup.block_lower <= f) & (f <= lookup.block_upper))
    return {j + 1 for j in np.flatnonzero(rows)}


def skip_set(lookup: LookupTable, f: BlockFeature) -> set[int]:
    """Queue indices ruled out by block B_i: {i - j + 1 for mismatching j}."""
    return {f.block_index - j + 1 for j in region_table_entry(lookup, f.value)}


class SkipState:
    """Bookkeeping for the skipping loop: a ring bitmap of skippable queue
    indices within N of the cursor, plus the cursor itself."""

    def __init__(self, lookup: LookupTable):
        self.lookup = lookup
        self.N = lookup.n_blocks
        self._ring = np.zeros(self.N, dtype=bool)
        self.cursor = 1  # next queue index to process

    def mark(self, queue_indices) -> None:
        """Merge skippable queue indices; stale indices behind the cursor are
        dropped (their queues are already decided)."""
        for q in queue_indices:
            if self.cursor <= q < self.cursor + self.N:
                self._ring[q % self.N] = True

    def is_marked(self, q: int) -> bool:
        return bool(self._ring[q % self.N])

    def consume(self, q: int) -> bool:
        """Advance the cursor past queue ``q``; returns True if ``q`` was
        marked skippable (and clears its slot for reuse)."""
        marked = bool(self._ring[q % self.N])
        self._ring[q % self.N] = False
        self.cursor = q + 1
        return marked
