"""Streaming pruning loop.

The stream is cut into disjoint w-length global blocks; a FIFO queue holds
the newest N block features. Each completed block decides one queue: any
feature outside its aligned pattern block's bounds prunes the w windows the
queue covers, otherwise those windows become candidates and are verified
exactly once their data has fully arrived.

``MatchEngine`` is the element-at-a-time streaming implementation;
``run()`` is a batch fast path over a whole in-memory stream built on the
compiled kernels. Both produce identical decisions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .bsp import LookupTable, SkipState, build_lookup, region_table_entry
from .core import MatchReport, Pattern, validate_pattern
from .elb import SEQ, BlockFeature, ElbProfile, build_profile
from .oracles import exhaustive_verify
from .postprocess import verify_adaptive, verify_baseline

__all__ = ["EngineStats", "QueueDecision", "MatchEngine", "run", "region_arrays"]


@dataclass
class EngineStats:
    values_seen: int = 0
    blocks_seen: int = 0
    features_computed: int = 0
    queues_processed: int = 0
    queues_pruned: int = 0
    queues_skipped: int = 0
    candidates: int = 0
    matches: int = 0
    block_comparisons: int = 0
    delta_evals: int = 0


@dataclass(frozen=True)
class QueueDecision:
    """Outcome of one completed queue: 'warmup', 'pruned' or 'candidates'."""

    kind: str
    window_starts: tuple[int, ...] = ()


def region_arrays(p: Pattern) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(ls, rs, eps) kernel arrays with the l_0 = r_0 = 0, l_b = r_b = n
    sentinels."""
    ls = np.array([p.region_left(k) for k in range(p.b + 1)], dtype=np.int64)
    rs = np.array([p.region_right(k) for k in range(p.b + 1)], dtype=np.int64)
    eps = np.asarray(p.thresholds, dtype=np.float64)
    return ls, rs, eps


def _exhaustive_report(c: np.ndarray, p: Pattern, start: int) -> MatchReport | None:
    witnesses = exhaustive_verify(c, p)
    if not witnesses:
        return None
    from .core import normalized_euclidean, segment_bounds

    bps = witnesses[0]
    dists = []
    for k in range(1, p.b + 1):
        lo, hi = segment_bounds(p, bps, k)
        dists.append(normalized_euclidean(c[lo - 1 : hi], p.elements[lo - 1 : hi]))
    return MatchReport(start, tuple(bps), tuple(dists))


_VERIFIERS: dict[str, Callable] = {
    "adaptive": lambda c, p, t: verify_adaptive(c, p, window_start=t),
    "baseline": lambda c, p, t: verify_baseline(c, p, window_start=t),
    "exhaustive": _exhaustive_report,
}


class MatchEngine:
    """Single-writer streaming matcher over one stream.

    Parameters mirror the CLI: ELB variant, block width, BSP on/off and the
    post-processing verifier.
    """

    def __init__(
        self,
        pattern: Pattern,
        width: int,
        variant: str = SEQ,
        use_bsp: bool = False,
        verifier: str = "adaptive",
    ):
        problems = validate_pattern(pattern)
        if problems:
            raise ValueError("invalid pattern: " + "; ".join(problems))
        if verifier not in _VERIFIERS:
            raise ValueError(f"unknown verifier {verifier!r}")
        self.pattern = pattern
        self.profile: ElbProfile = build_profile(pattern, width, variant)
        self.verifier = verifier
        self.use_bsp = use_bsp
        self.lookup: LookupTable | None = None
        self._skip: SkipState | None = None
        if use_bsp:
            self.lookup = build_lookup(self.profile)
            self._skip = SkipState(self.lookup)
        self.stats = EngineStats()

        n, w = pattern.n, self.profile.w
        self._cap = n + 2 * w
        self._ring = np.empty(self._cap, dtype=np.float64)
        self._partial: list[float] = []
        self._queue: deque[tuple[BlockFeature, np.ndarray | None]] = deque(
            maxlen=self.profile.N
        )
        self._next_ts = 1
        self._pending: deque[int] = deque()  # candidate starts awaiting data
        self._early_pruned: deque[int] = deque()  # pruned starts, data not complete

    # -- streaming ingestion -------------------------------------------------

    def push_value(self, value: float, ts: int | None = None) -> list[MatchReport]:
        """Ingest one element; returns matches confirmed by this element."""
        if ts is None:
            ts = self._next_ts
        if ts != self._next_ts:
            raise ValueError(f"timestamp gap: expected {self._next_ts}, got {ts}")
        self._next_ts += 1
        self.stats.values_seen += 1
        self._ring[(ts - 1) % self._cap] = value
        self._partial.append(float(value))

        if len(self._partial) == self.profile.w:
            self.stats.blocks_seen += 1
            self.stats.features_computed += 1
            from .elb import block_feature

            f = block_feature(self.profile, self._partial, self.stats.blocks_seen)
            self._partial.clear()
            decision = self.push_block(f)
            if decision.kind == "candidates":
                self._pending.extend(decision.window_starts)
            elif decision.kind == "pruned":
                now = self._next_ts - 1
                for t in decision.window_starts:
                    if t + self.pattern.n - 1 > now:
                        self._early_pruned.append(t)

        return self._drain(ts)

    def push_block(self, f: BlockFeature) -> QueueDecision:
        """Feed one completed global-block feature; decides at most one queue."""
        N = self.profile.N
        if self._queue and f.block_index != self._queue[-1][0].block_index + 1:
            raise ValueError(
                f"non-consecutive block index {f.block_index}; expected "
                f"{self._queue[-1][0].block_index + 1}"
            )
        row = None
        if self.use_bsp:
            mism = region_table_entry(self.lookup, f.value)
            row = np.zeros(N, dtype=bool)
            for j in mism:
                row[j - 1] = True
        self._queue.append((f, row))
        if len(self._queue) < N:
            return QueueDecision("warmup")

        q = f.block_index - N + 1
        w = self.profile.w
        starts = tuple(range((q - 1) * w + 1, (q - 1) * w + 1 + w))
        if self.use_bsp:
            pruned = self._decide_bsp(q)
        else:
            pruned = self._decide_plain()
        self.stats.queues_processed += 1
        if pruned:
            self.stats.queues_pruned += 1
            return QueueDecision("pruned", starts)
        self.stats.candidates += len(starts)
        return QueueDecision("candidates", starts)

    def _decide_plain(self) -> bool:
        bu, bl = self.profile.block_upper, self.profile.block_lower
        for j, (f, _) in enumerate(self._queue):
            self.stats.block_comparisons += 1
            if not (bl[j] <= f.value <= bu[j]):
                return True
        return False

    def _decide_bsp(self, q: int) -> bool:
        skip = self._skip
        if skip.is_marked(q):
            skip.consume(q)
            self.stats.queues_skipped += 1
            return True
        N = self.profile.N
        entries = list(self._queue)
        pruned = False
        for j in range(N, 0, -1):
            self.stats.block_comparisons += 1
            f, row = entries[j - 1]
            skip.mark(f.block_index - jj for jj in np.flatnonzero(row))
            if skip.is_marked(q):
                pruned = True
                break
        skip.consume(q)
        return pruned

    def _drain(self, now: int) -> list[MatchReport]:
        n = self.pattern.n
        out = []
        verify = _VERIFIERS[self.verifier]
        while self._pending and self._pending[0] + n - 1 <= now:
            t = self._pending.popleft()
            idx = (t - 1 + np.arange(n)) % self._cap
            report = verify(self._ring[idx], self.pattern, t)
            if report is not None:
                self.stats.matches += 1
                out.append(report)
        return out

    def early_window_decision(self) -> set[int]:
        """Starts of windows already known pruned before all their elements
        arrived."""
        now = self._next_ts - 1
        n = self.pattern.n
        while self._early_pruned and self._early_pruned[0] + n - 1 <= now:
            self._early_pruned.popleft()
        return set(self._early_pruned)


def run(
    pattern: Pattern,
    stream: Sequence[float],
    width: int,
    variant: str = SEQ,
    use_bsp: bool = False,
    verifier: str = "adaptive",
) -> tuple[list[MatchReport], EngineStats]:
    """Batch fast path over an in-memory stream; decisions identical to
    MatchEngine fed element by element."""
    problems = validate_pattern(pattern)
    if problems:
        raise ValueError("invalid pattern: " + "; ".join(problems))
    s = np.ascontiguousarray(stream, dtype=np.float64)
    profile = build_profile(pattern, width, variant)
    ls, rs, eps = region_arrays(pattern)
    w, N, n = profile.w, profile.N, pattern.n

    stats = EngineStats(values_seen=int(s.shape[0]))
    features = _kernels.compute_features(s, w, profile.variant == SEQ)
    stats.blocks_seen = stats.features_computed = int(features.shape[0])

    if use_bsp:
        lookup = build_lookup(profile)
        pass_q, iters, skipped = _kernels.queue_scan_bsp(
            features, profile.block_upper, profile.block_lower,
            lookup.boundaries, lookup.table,
        )
        stats.block_comparisons = int(iters)
        stats.queues_skipped = int(skipped)
    else:
        pass_q, comps = _kernels.queue_scan_plain(
            features, profile.block_upper, profile.block_lower
        )
        stats.block_comparisons = int(comps)

    nq = max(int(features.shape[0]) - N + 1, 0)
    stats.queues_processed = nq
    stats.queues_pruned = nq - int(pass_q.shape[0])

    starts = ((pass_q - 1)[:, None] * w + 1 + np.arange(w)[None, :]).ravel()
    starts = starts[starts + n - 1 <= s.shape[0]].astype(np.int64)
    stats.candidates = int(starts.shape[0])

    reports: list[MatchReport] = []
    if verifier == "adaptive":
        flags, bps, evals = _kernels.verify_starts_adaptive(s, starts, pattern.elements, ls, rs, eps)
        stats.delta_evals = int(evals.sum())
        from .postprocess import _report

        for i in np.flatnonzero(flags):
            t = int(starts[i])
            reports.append(
                _report(s[t - 1 : t - 1 + n], pattern, [int(v) for v in bps[i, : pattern.b - 1]], t)
            )
    elif verifier == "baseline":
        flags = _kernels.verify_starts_baseline(s, starts, pattern.elements, ls, rs, eps)
        for i in np.flatnonzero(flags):
            t = int(starts[i])
            reports.append(verify_baseline(s[t - 1 : t - 1 + n], pattern, window_start=t))
    elif verifier == "exhaustive":
        for t in starts:
            t = int(t)
            report = _exhaustive_report(s[t - 1 : t - 1 + n], pattern, t)
            if report is not None:
                reports.append(report)
    else:
        raise ValueError(f"unknown verifier {verifier!r}")

    stats.matches = len(reports)
    return reports, stats
