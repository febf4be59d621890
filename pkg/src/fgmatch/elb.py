"""Equal-Length Block profiles.

Both block representations share the same skeleton: a per-position envelope
[L_i, U_i] around the pattern, and per-block bounds taken as the min/max of
the envelope over each w-wide block. A window block is summarized by a
single feature value (last element or mean); a window can only match the
pattern if every feature falls inside its aligned block's bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Pattern

__all__ = [
    "ElbProfile",
    "BlockFeature",
    "max_distance",
    "theta_ele",
    "theta_seq",
    "build_profile_ele",
    "build_profile_seq",
    "build_profile",
    "block_feature",
    "block_matches",
    "segment_span",
]

ELE = "ele"
SEQ = "seq"


@dataclass(frozen=True)
class ElbProfile:
    """Envelope plus per-block bounds for one block width ``w``.

    Arrays are 0-based: ``upper[i-1]`` is U_i, ``block_upper[j-1]`` is the
    j-th block's upper bound. For the SEQ variant the envelope is undefined
    (NaN) for positions < w, and block 1 carries sentinel bounds (-inf, +inf)
    so it can never prune.
    """

    variant: str
    w: int
    N: int
    upper: np.ndarray
    lower: np.ndarray
    block_upper: np.ndarray
    block_lower: np.ndarray
    max_distances: np.ndarray  # md(1)..md(b)


@dataclass(frozen=True)
class BlockFeature:
    """Feature of one global stream block, with its absolute block index."""

    block_index: int
    value: float


def segment_span(p: Pattern, i: int) -> tuple[int, int]:
    """(k_min, k_max): segment indices position ``i`` can take over all
    segmentations. Inside BR_k the position may land in segment k or k+1;
    everywhere else the segment is unique."""
    if not 1 <= i <= p.n:
        raise ValueError(f"position {i} out of range 1..{p.n}")
    for k in range(1, p.b):
        l, r = p.regions[k - 1]
        if l < i <= r:
            return k, k + 1
    for k in range(1, p.b + 1):
        if p.region_right(k - 1) < i <= p.region_left(k):
            return k, k
    raise AssertionError("unreachable for a valid pattern")


def max_distance(p: Pattern, k: int) -> float:
    """md(k) = eps_k * sqrt(r_k - l_{k-1}): the largest Euclidean distance
    segment k may accumulate under any segmentation."""
    if not 1 <= k <= p.b:
        raise ValueError(f"segment index {k} out of range 1..{p.b}")
    return p.thresholds[k - 1] * math.sqrt(p.region_right(k) - p.region_left(k - 1))


def _md_array(p: Pattern) -> np.ndarray:
    return np.array([max_distance(p, k) for k in range(1, p.b + 1)])


def theta_ele(p: Pattern, i: int) -> float:
    """Per-element envelope half-width: the largest md(k) among the segments
    position ``i`` can belong to."""
    k_lo, k_hi = segment_span(p, i)
    return max(max_distance(p, k) for k in range(k_lo, k_hi + 1))


def theta_seq(p: Pattern, i: int, w: int) -> float:
    """Envelope half-width for the w-length subsequence ending at ``i``:
    sqrt(sum of md(k)^2 over every segment the subsequence can touch, / w)."""
    if i < w:
        raise ValueError(f"position {i} < block width {w}")
    k_lo, _ = segment_span(p, i - w + 1)
    _, k_hi = segment_span(p, i)
    md = _md_array(p)
    return math.sqrt(float(np.sum(md[k_lo - 1 : k_hi] ** 2)) / w)


def _check_width(p: Pattern, w: int) -> None:
    if not 1 <= w <= p.n:
        raise ValueError(f"block width {w} out of range 1..{p.n}")


def _block_bounds(upper: np.ndarray, lower: np.ndarray, w: int, N: int):
    bu = upper[: N * w].reshape(N, w).max(axis=1)
    bl = lower[: N * w].reshape(N, w).min(axis=1)
    return bu, bl


def build_profile_ele(p: Pattern, w: int) -> ElbProfile:
    """Element-based profile: U_i = p_i + theta_ele(i), feature = last element."""
    _check_width(p, w)
    n = p.n
    theta = np.array([theta_ele(p, i) for i in range(1, n + 1)])
    upper = p.elements + theta
    lower = p.elements - theta
    N = n // w
    bu, bl = _block_bounds(upper, lower, w, N)
    return ElbProfile(ELE, w, N, upper, lower, bu, bl, _md_array(p))


def build_profile_seq(p: Pattern, w: int) -> ElbProfile:
    """Subsequence-based profile: the envelope brackets the mean of every
    aligned w-length pattern subsequence; feature = block mean."""
    _check_width(p, w)
    n = p.n
    cs = np.concatenate(([0.0], np.cumsum(p.elements)))
    upper = np.full(n, np.nan)
    lower = np.full(n, np.nan)
    for i in range(w, n + 1):
        mu = (cs[i] - cs[i - w]) / w
        th = theta_seq(p, i, w)
        upper[i - 1] = mu + th
        lower[i - 1] = mu - th
    N = n // w
    bu, bl = _block_bounds(upper, lower, w, N)
    # Block 1 spans positions 1..w of which only position w has an envelope.
    bu[0] = np.inf
    bl[0] = -np.inf
    return ElbProfile(SEQ, w, N, upper, lower, bu, bl, _md_array(p))


def build_profile(p: Pattern, w: int, variant: str) -> ElbProfile:
    if variant == ELE:
        return build_profile_ele(p, w)
    if variant == SEQ:
        return build_profile_seq(p, w)
    raise ValueError(f"unknown ELB variant {variant!r}")


def block_feature(
    profile: ElbProfile, block_values: Sequence[float], block_index: int
) -> BlockFeature:
    """Summarize one w-length block: last value (ELE) or mean (SEQ)."""
    v = np.asarray(block_values, dtype=np.float64)
    if v.shape[0] != profile.w:
        raise ValueError(f"block needs exactly {profile.w} values, got {v.shape[0]}")
    value = float(v[-1]) if profile.variant == ELE else float(v.mean())
    return BlockFeature(int(block_index), value)


def block_matches(profile: ElbProfile, f: BlockFeature | float, j: int) -> bool:
    """Inclusive containment of the feature in pattern block j's bounds."""
    if not 1 <= j <= profile.N:
        raise ValueError(f"block index {j} out of range 1..{profile.N}")
    value = f.value if isinstance(f, BlockFeature) else float(f)
    return bool(profile.block_lower[j - 1] <= value <= profile.block_upper[j - 1])
