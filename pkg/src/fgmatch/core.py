"""Pattern and stream data model shared by all other modules.

A pattern is a sequence of values split into ``b`` segments by ``b - 1``
fuzzy break regions. Each segment carries its own threshold on the
normalized Euclidean distance. Positions in the public API are 1-based and
inclusive (matching the file formats); internal numpy arrays are 0-based.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Pattern",
    "MatchReport",
    "normalized_euclidean",
    "segment_bounds",
    "is_fine_grained_match",
    "validate_pattern",
    "load_pattern",
    "save_pattern",
]


@dataclass(frozen=True)
class Pattern:
    """A fine-grained pattern: values, break regions and per-segment thresholds.

    Attributes
    ----------
    elements : np.ndarray
        Pattern values p_1..p_n, stored 0-based.
    regions : tuple[tuple[int, int], ...]
        The b-1 break regions [l_k, r_k], 1-based inclusive positions.
    thresholds : tuple[float, ...]
        Positive per-segment thresholds, normalized-Euclidean units.
    """

    elements: np.ndarray
    regions: tuple[tuple[int, int], ...]
    thresholds: tuple[float, ...]

    def __init__(self, elements, regions=(), thresholds=()):
        object.__setattr__(
            self, "elements", np.ascontiguousarray(elements, dtype=np.float64)
        )
        object.__setattr__(
            self, "regions", tuple((int(l), int(r)) for l, r in regions)
        )
        object.__setattr__(self, "thresholds", tuple(float(e) for e in thresholds))

    @property
    def n(self) -> int:
        return int(self.elements.shape[0])

    @property
    def b(self) -> int:
        return len(self.thresholds)

    def region_left(self, k: int) -> int:
        """l_k with the sentinels l_0 = 0 and l_b = n."""
        if k == 0:
            return 0
        if k == self.b:
            return self.n
        return self.regions[k - 1][0]

    def region_right(self, k: int) -> int:
        """r_k with the sentinels r_0 = 0 and r_b = n."""
        if k == 0:
            return 0
        if k == self.b:
            return self.n
        return self.regions[k - 1][1]


@dataclass(frozen=True)
class MatchReport:
    """One accepted window: start timestamp, witness breakpoints, distances."""

    window_start: int
    breakpoints: tuple[int, ...]
    segment_distances: tuple[float, ...]


def normalized_euclidean(x: Sequence[float], y: Sequence[float]) -> float:
    """Euclidean distance divided by sqrt(element count).

    Raises ValueError on empty input or length mismatch.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise ValueError(f"length mismatch: {xa.shape} vs {ya.shape}")
    m = xa.shape[0]
    if m == 0:
        raise ValueError("empty input")
    d = xa - ya
    return math.sqrt(float(np.dot(d, d)) / m)


def segment_bounds(p: Pattern, breakpoints: Sequence[int], k: int) -> tuple[int, int]:
    """Inclusive 1-based span (bp_{k-1}+1, bp_k) of segment k under a segmentation.

    ``breakpoints`` are the b-1 chosen breakpoints; bp_0 = 0 and bp_b = n.
    """
    if not 1 <= k <= p.b:
        raise ValueError(f"segment index {k} out of range 1..{p.b}")
    bps = (0, *map(int, breakpoints), p.n)
    return bps[k - 1] + 1, bps[k]


def is_fine_grained_match(
    p: Pattern, values: Sequence[float], breakpoints: Sequence[int]
) -> bool:
    """True iff every segment of ``values`` is within its threshold under
    the given segmentation."""
    w = np.asarray(values, dtype=np.float64)
    if w.shape[0] != p.n:
        raise ValueError(f"window length {w.shape[0]} != pattern length {p.n}")
    for k in range(1, p.b + 1):
        lo, hi = segment_bounds(p, breakpoints, k)
        d = normalized_euclidean(w[lo - 1 : hi], p.elements[lo - 1 : hi])
        if d > p.thresholds[k - 1]:
            return False
    return True


def validate_pattern(p: Pattern) -> list[str]:
    """Check every Pattern invariant; returns a list of violations (empty = ok)."""
    problems: list[str] = []
    n, b = p.n, p.b
    if n < 1:
        problems.append("empty pattern")
    if b < 1:
        problems.append("no thresholds (b must be >= 1)")
    if len(p.regions) != b - 1:
        problems.append(
            f"region count {len(p.regions)} != thresholds - 1 ({b - 1})"
        )
    for k, eps in enumerate(p.thresholds, start=1):
        if not eps > 0 or not math.isfinite(eps):
            problems.append(f"non-positive threshold eps_{k} = {eps}")
    for k, (l, r) in enumerate(p.regions, start=1):
        if not (1 <= l <= r < n):
            problems.append(f"region BR_{k} = [{l}, {r}] outside 1 <= l <= r < {n}")
    for k in range(1, len(p.regions)):
        if p.regions[k - 1][1] >= p.regions[k][0]:
            problems.append(
                f"overlapping regions: r_{k} = {p.regions[k - 1][1]} >= "
                f"l_{k + 1} = {p.regions[k][0]}"
            )
    if not np.all(np.isfinite(p.elements)):
        problems.append("non-finite pattern element")
    return problems


def _require_valid(p: Pattern) -> None:
    problems = validate_pattern(p)
    if problems:
        raise ValueError("invalid pattern: " + "; ".join(problems))


def load_pattern(path: str | Path, sidecar: str | Path | None = None) -> Pattern:
    """Load a pattern from JSON, or from a CSV of elements plus a JSON sidecar.

    JSON layout: {"elements": [...], "regions": [[l, r], ...],
    "thresholds": [...]} with 1-based positions.
    """
    path = Path(path)
    if path.suffix.lower() == ".csv" or sidecar is not None:
        if sidecar is None:
            candidate = path.with_suffix(path.suffix + ".json")
            if not candidate.exists():
                raise ValueError(
                    "CSV pattern needs a JSON sidecar for regions/thresholds"
                )
            sidecar = candidate
        with open(path, newline="") as fh:
            elements = [float(row[0]) for row in csv.reader(fh) if row]
        meta = json.loads(Path(sidecar).read_text())
        p = Pattern(elements, meta.get("regions", ()), meta["thresholds"])
    else:
        data = json.loads(path.read_text())
        p = Pattern(data["elements"], data.get("regions", ()), data["thresholds"])
    _require_valid(p)
    return p


def save_pattern(p: Pattern, path: str | Path) -> None:
    payload = {
        "elements": [float(v) for v in p.elements],
        "regions": [list(r) for r in p.regions],
        "thresholds": list(p.thresholds),
    }
    Path(path).write_text(json.dumps(payload))
