"""Ground-truth and baseline machinery for testing and benchmarking.

Everything here favors obviousness over speed: exhaustive segmentation
enumeration, a step-1 sequential scan, and the two naive fixed-boundary
pattern transformations (plus the threshold-inflating transformation that
actually is sound as a coarse prefilter).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import MatchReport, Pattern, is_fine_grained_match, normalized_euclidean
from .postprocess import verify_baseline

__all__ = [
    "FixedSegment",
    "sequential_scan",
    "exhaustive_verify",
    "scheme1_split",
    "scheme2_split",
    "prefilter_transform",
    "fixed_segments_match",
]

_ENUM_GUARD = 10**6


@dataclass(frozen=True)
class FixedSegment:
    """A fixed-boundary subpattern: inclusive 1-based span plus threshold."""

    start: int
    end: int
    threshold: float


def sequential_scan(p: Pattern, stream: Sequence[float]) -> list[MatchReport]:
    """Slide by one element and verify every window exactly. The reference
    answer set for all pruning paths."""
    s = np.asarray(stream, dtype=np.float64)
    out = []
    for t in range(1, s.shape[0] - p.n + 2):
        report = verify_baseline(s[t - 1 : t - 1 + p.n], p, window_start=t)
        if report is not None:
            out.append(report)
    return out


def exhaustive_verify(c: Sequence[float], p: Pattern) -> list[tuple[int, ...]]:
    """Enumerate every breakpoint combination; returns all valid witnesses
    (empty list = reject). Guarded against combinatorial blowup."""
    ranges = [range(l, r + 1) for l, r in p.regions]
    total = 1
    for rng in ranges:
        total *= len(rng)
        if total > _ENUM_GUARD:
            raise ValueError(f"more than {_ENUM_GUARD} segmentations")
    ca = np.asarray(c, dtype=np.float64)
    witnesses = []
    for bps in itertools.product(*ranges):
        if is_fine_grained_match(p, ca, bps):
            witnesses.append(bps)
    return witnesses


def scheme1_split(p: Pattern) -> list[FixedSegment]:
    """Fix each breakpoint at the region edge adjoining the larger-threshold
    neighbor; keeps b segments with the original thresholds. Not sound."""
    bps = []
    for k in range(1, p.b):
        l, r = p.regions[k - 1]
        bps.append(l if p.thresholds[k - 1] <= p.thresholds[k] else r)
    cuts = [0, *bps, p.n]
    return [
        FixedSegment(cuts[k] + 1, cuts[k + 1], p.thresholds[k]) for k in range(p.b)
    ]


def scheme2_split(p: Pattern) -> list[FixedSegment]:
    """Turn each break region into its own segment with the larger of the two
    adjacent thresholds; yields 2b-1 segments. Not sound either."""
    out = []
    for k in range(1, p.b + 1):
        out.append(
            FixedSegment(p.region_right(k - 1) + 1, p.region_left(k), p.thresholds[k - 1])
        )
        if k < p.b:
            l, r = p.regions[k - 1]
            out.append(FixedSegment(l + 1, r, max(p.thresholds[k - 1], p.thresholds[k])))
    return out


def prefilter_transform(p: Pattern) -> list[FixedSegment]:
    """Drop the fuzzy parts and inflate each threshold to its maximal
    allowable value: every fine-grained match still passes, so the result is
    a sound coarse prefilter."""
    out = []
    for k in range(1, p.b + 1):
        start = p.region_right(k - 1) + 1
        end = p.region_left(k)
        scale = (p.region_right(k) - p.region_left(k - 1)) / (end - start + 1)
        out.append(FixedSegment(start, end, p.thresholds[k - 1] * np.sqrt(scale)))
    return out


def fixed_segments_match(
    segments: list[FixedSegment], c: Sequence[float], p: Pattern
) -> bool:
    """True iff the candidate satisfies every fixed segment's threshold."""
    ca = np.asarray(c, dtype=np.float64)
    for seg in segments:
        d = normalized_euclidean(
            ca[seg.start - 1 : seg.end], p.elements[seg.start - 1 : seg.end]
        )
        if d > seg.threshold:
            return False
    return True
