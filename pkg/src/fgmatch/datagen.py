"""Synthetic data generation for experiments and acceptance runs.

Streams are random walks of centered uniform increments; pattern instances
are spliced in at Bernoulli-sampled, non-overlapping starts and the true
positions are kept as ground truth. Thresholds are derived from a single
threshold_ratio against each segment's value range, and break regions come
from extending fixed breakpoints symmetrically.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .core import Pattern

__all__ = [
    "random_walk",
    "embed_patterns",
    "thresholds_from_ratio",
    "extend_breakpoints",
    "synthesize_pattern",
]


def random_walk(length: int, r: float = 0.0, seed: int = 0) -> np.ndarray:
    """s_i = r + sum of (u_j - 0.5) for j <= i, u_j uniform in [0, 1].

    PCG64 keyed by ``seed``; identical seeds give bit-identical streams on
    any platform.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    return r + np.cumsum(rng.random(length) - 0.5)


def embed_patterns(
    stream: Sequence[float],
    instances: Sequence[Sequence[float]],
    probability: float,
    seed: int = 0,
) -> tuple[np.ndarray, list[int]]:
    """Overwrite non-overlapping stretches of the stream with randomly chosen
    instances at Bernoulli-sampled starts.

    Instances are level-shifted to splice continuously at the insertion
    point. Returns (new stream, 1-based embedding starts).
    """
    if not instances:
        raise ValueError("no instances to embed")
    insts = [np.asarray(x, dtype=np.float64) for x in instances]
    n = max(x.shape[0] for x in insts)
    if probability < 0 or probability > 1.0 / n:
        raise ValueError(
            f"occurrence probability {probability} outside [0, 1/n] = [0, {1.0 / n:.3g}]"
        )
    s = np.array(stream, dtype=np.float64)
    rng = np.random.Generator(np.random.PCG64(seed))
    positions: list[int] = []
    t = 0  # 0-based candidate start
    limit = s.shape[0] - n
    while t <= limit:
        if probability > 0 and rng.random() < probability:
            inst = insts[int(rng.integers(len(insts)))]
            m = inst.shape[0]
            shifted = inst + (s[t] - inst[0])
            s[t : t + m] = shifted
            positions.append(t + 1)
            t += m  # no overlap
        else:
            t += 1
    return s, positions


def thresholds_from_ratio(
    elements: Sequence[float],
    regions: Sequence[tuple[int, int]],
    ratio: float,
) -> tuple[float, ...]:
    """eps_k = ratio * value range of segment k over its widest possible
    extent (l_{k-1}, r_k]."""
    if not 0 < ratio:
        raise ValueError("ratio must be positive")
    e = np.asarray(elements, dtype=np.float64)
    n = e.shape[0]
    b = len(regions) + 1
    lefts = [0] + [l for l, _ in regions] + [n]
    rights = [0] + [r for _, r in regions] + [n]
    out = []
    for k in range(1, b + 1):
        lo, hi = lefts[k - 1], rights[k]
        seg = e[lo:hi]
        rng = float(seg.max() - seg.min())
        if rng == 0.0:
            raise ValueError(f"segment {k} has zero value range")
        out.append(ratio * rng)
    return tuple(out)


def extend_breakpoints(
    breakpoints: Sequence[int], radius: int, n: int
) -> tuple[tuple[int, int], ...]:
    """BR_k = [bp_k - radius, bp_k + radius], clamped to [1, n-1]; raises if
    the produced regions overlap."""
    regions = []
    for bp in breakpoints:
        l = max(1, bp - radius)
        r = min(n - 1, bp + radius)
        regions.append((l, r))
    for k in range(1, len(regions)):
        if regions[k - 1][1] >= regions[k][0]:
            raise ValueError(
                f"radius {radius} makes regions {regions[k - 1]} and "
                f"{regions[k]} overlap"
            )
    return tuple(regions)


def default_radius(breakpoints: Sequence[int], n: int) -> int:
    """10% of the shortest segment length (at least 1)."""
    cuts = [0, *breakpoints, n]
    shortest = min(cuts[i + 1] - cuts[i] for i in range(len(cuts) - 1))
    return max(1, int(round(0.1 * shortest)))


def synthesize_pattern(
    length: int,
    segments: int,
    seed: int = 0,
    radius: int | None = None,
    threshold_ratio: float = 0.2,
) -> Pattern:
    """Build a pattern from a fresh random walk with evenly spaced
    breakpoints; convenience wrapper for benchmarks and the CLI."""
    if segments < 1 or length < 2 * segments:
        raise ValueError("need at least two elements per segment")
    elements = random_walk(length, seed=seed)
    bps = [round(k * length / segments) for k in range(1, segments)]
    if radius is None:
        radius = default_radius(bps, length)
    regions = extend_breakpoints(bps, radius, length)
    thresholds = thresholds_from_ratio(elements, regions, threshold_ratio)
    return Pattern(elements, regions, thresholds)
