"""Shared generators and reference constructions for the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from fgmatch.core import Pattern


def rand_pattern(
    rng: np.random.Generator,
    n_range=(20, 200),
    b_range=(1, 4),
    region_width=(1, 5),
) -> Pattern:
    """Random valid pattern over a random walk, with tight-ish thresholds."""
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    b = int(rng.integers(b_range[0], b_range[1] + 1))
    elements = np.cumsum(rng.uniform(-0.5, 0.5, n))
    regions = []
    # place b-1 disjoint regions with r_k < l_{k+1}, all within [1, n-1]
    for attempt in range(200):
        cuts = np.sort(rng.choice(np.arange(1, n), size=b - 1, replace=False))
        widths = rng.integers(region_width[0], region_width[1] + 1, size=b - 1)
        regions = []
        ok = True
        prev_r = 0
        for c, width in zip(cuts, widths):
            l = int(max(1, c - width // 2))
            r = int(min(n - 1, l + width - 1))
            l = max(l, r - width + 1, 1)
            if l <= prev_r:
                ok = False
                break
            regions.append((l, r))
            prev_r = r
        if ok:
            break
    else:  # pragma: no cover - generator fallback
        regions = [(k * (n // b), k * (n // b)) for k in range(1, b)]
    thresholds = tuple(float(rng.uniform(0.2, 1.5)) for _ in range(b))
    return Pattern(elements, tuple(regions), thresholds)


def perturbed_candidate(rng: np.random.Generator, p: Pattern, scale: float) -> np.ndarray:
    """Pattern plus noise sized relative to the smallest threshold; around
    scale ~ 1 the candidate sits near the accept/reject boundary."""
    amp = scale * min(p.thresholds)
    return p.elements + rng.uniform(-amp, amp, p.n)


def exhaustive_window_accepts(stream: np.ndarray, p: Pattern) -> np.ndarray:
    """Boolean accept flag for every window start, by enumerating every
    breakpoint combination (vectorized over windows via cumulative sums)."""
    n, b = p.n, p.b
    T = stream.shape[0] - n + 1
    if T <= 0:
        return np.zeros(0, dtype=bool)
    win = np.lib.stride_tricks.sliding_window_view(stream, n)[:T]
    d2 = (win - p.elements) ** 2
    cum = np.concatenate([np.zeros((T, 1)), np.cumsum(d2, axis=1)], axis=1)
    accepted = np.zeros(T, dtype=bool)
    for bps in itertools.product(*[range(l, r + 1) for l, r in p.regions]):
        cuts = (0, *bps, n)
        ok = np.ones(T, dtype=bool)
        for k in range(b):
            lo, hi = cuts[k], cuts[k + 1]
            eps = p.thresholds[k]
            ok &= cum[:, hi] - cum[:, lo] <= eps * eps * (hi - lo)
        accepted |= ok
    return accepted


# -- frozen worked-example constructions -------------------------------------


@pytest.fixture
def breakpoint_walk_instance():
    """11-element, 2-segment instance whose potential-set walk has been
    verified by hand: region [5,8], thresholds (4, 3); residuals chosen so
    the running budget hits 15 at position 5 and -16 at position 8, the
    potential set is {6, 7, 8}, and the best breakpoint is 7 with back-scan
    value -1."""
    p = Pattern(np.zeros(11), ((5, 8),), (4.0, 3.0))
    resid = np.array(
        [np.sqrt(70.0), 0, 0, 0, 5.0, 0.0, 4.0, 1.0, 4.0, 0.0, 0.0]
    )
    return p, p.elements + resid


@pytest.fixture
def three_block_bounds():
    """Block bounds [7,11], [14,17], [2,9] used by the lookup-table worked
    examples (7 value regions from 6 distinct boundary values)."""
    bl = np.array([7.0, 14.0, 2.0])
    bu = np.array([11.0, 17.0, 9.0])
    return bl, bu


@pytest.fixture
def fuzzy_only_candidate():
    """9-element instance accepted by fine-grained matching only at an
    interior breakpoint (bp=5): residuals (0,0,0,0,6,4,7,4,3), one break
    region [4,6], thresholds (4, 5). Any fixed split at a region edge
    fails."""
    p = Pattern(np.zeros(9), ((4, 6),), (4.0, 5.0))
    c = np.array([0, 0, 0, 0, 6, 4, 7, 4, 3], dtype=np.float64)
    return p, c
