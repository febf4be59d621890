"""Exact candidate verification.

Whether a window matches depends on where the breakpoints land inside their
break regions. Instead of trying every combination, both verifiers work on
the deviation budget delta(i, eps) = |c_i - p_i|^2 - eps^2: an interval
satisfies its threshold exactly when the budget sums to <= 0. The adaptive
verifier keeps a single optimal breakpoint per region (right boundary with
the smallest budget carried into the next segment), which dominates every
other feasible choice, so one left-to-right pass plus one region-width
backward pass per region decides the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import MatchReport, Pattern, normalized_euclidean

__all__ = [
    "delta",
    "big_delta",
    "PotentialSet",
    "potential_set",
    "optimal_breakpoint",
    "verify_adaptive",
    "verify_baseline",
]

# Above this length, running budget sums use compensated accumulation:
# accept/reject hinges on the sign of near-zero sums.
_KAHAN_THRESHOLD = 4096


class _Acc:
    """Running sum; Kahan-compensated when requested."""

    __slots__ = ("value", "_c", "_kahan")

    def __init__(self, kahan: bool):
        self.value = 0.0
        self._c = 0.0
        self._kahan = kahan

    def add(self, x: float) -> float:
        if self._kahan:
            y = x - self._c
            t = self.value + y
            self._c = (t - self.value) - y
            self.value = t
        else:
            self.value += x
        return self.value


def delta(c: Sequence[float], p: Pattern, i: int, eps: float) -> float:
    """delta(i, eps) = |c_i - p_i|^2 - eps^2 (1-based position)."""
    if not 1 <= i <= p.n:
        raise ValueError(f"position {i} out of range 1..{p.n}")
    d = float(c[i - 1]) - float(p.elements[i - 1])
    return d * d - eps * eps


def big_delta(c: Sequence[float], p: Pattern, l: int, r: int, eps: float) -> float:
    """Sum of delta(i, eps) over [l, r]; <= 0 iff ED_norm(c[l:r], p[l:r]) <= eps."""
    if l > r:
        raise ValueError(f"l = {l} > r = {r}")
    return math.fsum(delta(c, p, i, eps) for i in range(l, r + 1))


@dataclass(frozen=True)
class PotentialSet:
    """Feasible right boundaries of segment k for a fixed left anchor."""

    region_index: int
    left_anchor: int
    members: tuple[int, ...]


def potential_set(c: Sequence[float], p: Pattern, k: int, left_anchor: int) -> PotentialSet:
    """All j in BR_k with Delta(left_anchor, j, eps_k) <= 0, one rightward scan."""
    if not 1 <= k <= p.b - 1:
        raise ValueError(f"region index {k} out of range 1..{p.b - 1}")
    lk, rk = p.regions[k - 1]
    eps = p.thresholds[k - 1]
    acc = _Acc(p.n > _KAHAN_THRESHOLD)
    members = []
    for i in range(left_anchor, rk + 1):
        total = acc.add(delta(c, p, i, eps))
        if i >= lk and total <= 0.0:
            members.append(i)
    return PotentialSet(k, left_anchor, tuple(members))


def optimal_breakpoint(c: Sequence[float], p: Pattern, ps: PotentialSet, k: int) -> int:
    """The PS member minimizing Delta(j+1, r_k+1, eps_{k+1}), found by one
    leftward scan; ties go to the rightmost member."""
    if not ps.members:
        raise ValueError("empty potential set")
    if not 1 <= k <= p.b - 1:
        raise ValueError(f"region index {k} out of range 1..{p.b - 1}")
    lk, rk = p.regions[k - 1]
    eps_next = p.thresholds[k]
    in_ps = set(ps.members)
    acc = _Acc(p.n > _KAHAN_THRESHOLD)
    best = -1
    best_val = math.inf
    for i in range(rk + 1, lk, -1):
        total = acc.add(delta(c, p, i, eps_next))
        j = i - 1
        if j in in_ps and total < best_val:
            best, best_val = j, total
    return best


def _report(c: np.ndarray, p: Pattern, bps: list[int], window_start: int) -> MatchReport:
    cuts = [0, *bps, p.n]
    dists = tuple(
        normalized_euclidean(c[cuts[k] : cuts[k + 1]], p.elements[cuts[k] : cuts[k + 1]])
        for k in range(p.b)
    )
    return MatchReport(window_start, tuple(bps), dists)


def verify_adaptive(
    c: Sequence[float], p: Pattern, window_start: int = 1, with_stats: bool = False
):
    """Linear-time exact verification via optimal breakpoints.

    Returns a MatchReport or None; with ``with_stats`` returns
    (report_or_None, fresh_delta_evaluations). Budget terms computed during
    a region's backward scan are reused by the next forward scan, so each
    position is evaluated at most twice.
    """
    ca = np.asarray(c, dtype=np.float64)
    pe = p.elements
    n, b = p.n, p.b
    if ca.shape[0] != n:
        raise ValueError(f"candidate length {ca.shape[0]} != pattern length {n}")
    kahan = n > _KAHAN_THRESHOLD
    evals = 0

    def fresh(i: int, eps2: float) -> float:
        nonlocal evals
        evals += 1
        d = ca[i - 1] - pe[i - 1]
        return d * d - eps2

    bps: list[int] = []
    left = 1
    cache: dict[int, float] = {}
    for k in range(1, b):
        lk, rk = p.regions[k - 1]
        eps2 = p.thresholds[k - 1] ** 2
        acc = _Acc(kahan)
        ps: set[int] = set()
        for i in range(left, rk + 1):
            term = cache[i] if i in cache else fresh(i, eps2)
            if acc.add(term) <= 0.0 and i >= lk:
                ps.add(i)
        if not ps:
            return (None, evals) if with_stats else None
        eps2_next = p.thresholds[k] ** 2
        cache = {}
        acc2 = _Acc(kahan)
        best = -1
        best_val = math.inf
        for i in range(rk + 1, lk, -1):
            term = fresh(i, eps2_next)
            cache[i] = term
            total = acc2.add(term)
            if (i - 1) in ps and total < best_val:
                best, best_val = i - 1, total
        bps.append(best)
        left = best + 1

    eps2 = p.thresholds[b - 1] ** 2
    acc = _Acc(kahan)
    for i in range(left, n + 1):
        acc.add(cache[i] if i in cache else fresh(i, eps2))
    if acc.value > 0.0:
        return (None, evals) if with_stats else None
    report = _report(ca, p, bps, window_start)
    return (report, evals) if with_stats else report


def verify_baseline(c: Sequence[float], p: Pattern, window_start: int = 1):
    """Exact verification by chaining full potential sets region by region.

    Worst case O(n r^2); kept as the reference implementation and the
    sequential-scan verifier. Returns a MatchReport or None.
    """
    ca = np.asarray(c, dtype=np.float64)
    n, b = p.n, p.b
    if ca.shape[0] != n:
        raise ValueError(f"candidate length {ca.shape[0]} != pattern length {n}")
    d2 = (ca - p.elements) ** 2
    cum = np.concatenate(([0.0], np.cumsum(d2)))

    def seg_ok(i: int, j: int, eps: float) -> bool:
        # segment (i, j]: normalized distance <= eps
        return cum[j] - cum[i] <= eps * eps * (j - i)

    prev: dict[int, int] = {0: 0}
    maps: list[dict[int, int]] = []  # maps[k-1]: region-k breakpoint -> predecessor
    for k in range(1, b):
        lk, rk = p.regions[k - 1]
        eps = p.thresholds[k - 1]
        cur: dict[int, int] = {}
        for j in range(lk, rk + 1):
            for i in prev:
                if seg_ok(i, j, eps):
                    cur[j] = i
                    break
        if not cur:
            return None
        maps.append(cur)
        prev = cur

    for i in prev:
        if seg_ok(i, n, p.thresholds[b - 1]):
            chain = [0] * (b - 1)
            node = i
            for k in range(b - 1, 0, -1):
                chain[k - 1] = node
                node = maps[k - 1][node]
            return _report(ca, p, chain, window_start)
    return None
