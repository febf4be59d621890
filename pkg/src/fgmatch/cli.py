"""Command-line front end: gen, match, inspect, bench."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import datagen, engine, oracles
from ._backend import BACKEND
from .bsp import build_lookup
from .core import Pattern, load_pattern, save_pattern, validate_pattern
from .elb import build_profile
from .engine import region_arrays
from . import _kernels

log = logging.getLogger("fgmatch")


def _setup_logging() -> None:
    level = os.environ.get("FGM_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _resolve_block(spec: str, n: int) -> int:
    """'5%' resolves against the pattern length; plain integers pass through."""
    spec = spec.strip()
    if spec.endswith("%"):
        w = max(1, round(n * float(spec[:-1]) / 100.0))
    else:
        w = int(spec)
    if not 1 <= w <= n:
        raise ValueError(f"block width {w} out of range 1..{n}")
    return w


def _load_stream(path: str) -> np.ndarray:
    if path == "-":
        values = [float(line) for line in sys.stdin if line.strip()]
        return np.asarray(values, dtype=np.float64)
    with open(path, newline="") as fh:
        return np.asarray(
            [float(row[0]) for row in csv.reader(fh) if row], dtype=np.float64
        )


def _load_pattern_checked(path: str) -> Pattern:
    p = load_pattern(path)
    problems = validate_pattern(p)
    if problems:
        raise ValueError("invalid pattern: " + "; ".join(problems))
    return p


def cmd_match(args) -> int:
    p = _load_pattern_checked(args.pattern)
    stream = _load_stream(args.stream)
    w = _resolve_block(args.block, p.n)
    t0 = time.perf_counter()
    reports, stats = engine.run(
        p, stream, w, variant=args.elb, use_bsp=args.bsp == "on", verifier=args.verify
    )
    wall = time.perf_counter() - t0
    nwin = max(int(stream.shape[0]) - p.n + 1, 0)
    out = sys.stdout
    if args.report == "jsonl":
        for r in reports:
            out.write(json.dumps({
                "window_start": r.window_start,
                "breakpoints": list(r.breakpoints),
                "segment_distances": list(r.segment_distances),
            }) + "\n")
    else:
        writer = csv.writer(out)
        writer.writerow(["window_start", "breakpoints", "segment_distances"])
        for r in reports:
            writer.writerow([
                r.window_start,
                " ".join(map(str, r.breakpoints)),
                " ".join(f"{d:.9g}" for d in r.segment_distances),
            ])
    summary = {
        "windows": nwin,
        "pruned": nwin - stats.candidates,
        "wall_time_s": wall,
        "per_window_mean_s": wall / nwin if nwin else 0.0,
        "backend": BACKEND,
        **asdict(stats),
    }
    print(json.dumps({"stats": summary}), file=sys.stderr)
    return 0


def cmd_gen(args) -> int:
    if args.pattern:
        p = _load_pattern_checked(args.pattern)
    else:
        p = datagen.synthesize_pattern(
            args.pattern_len, args.segments, seed=args.seed,
            threshold_ratio=args.threshold_ratio,
        )
        if args.out_pattern:
            save_pattern(p, args.out_pattern)
            log.info("wrote synthesized pattern to %s", args.out_pattern)
    stream = datagen.random_walk(args.len, seed=args.seed)
    positions: list[int] = []
    if args.prob > 0:
        stream, positions = datagen.embed_patterns(
            stream, [p.elements], args.prob, seed=args.seed + 1
        )
    np.savetxt(args.out_stream, stream, fmt="%.17g")
    truth = {
        "positions": positions,
        "parameters": {
            "length": args.len,
            "probability": args.prob,
            "seed": args.seed,
            "pattern_length": p.n,
            "splice": "level-shifted to the stream value at the insertion point",
        },
    }
    Path(args.out_truth).write_text(json.dumps(truth))
    print(f"stream: {args.out_stream} ({args.len} values, "
          f"{len(positions)} embedded); truth: {args.out_truth}")
    return 0


def cmd_inspect(args) -> int:
    p = _load_pattern_checked(args.pattern)
    w = _resolve_block(args.block, p.n)
    profile = build_profile(p, w, args.elb)
    lookup = build_lookup(profile)

    def _num(v: float):
        return v if np.isfinite(v) else str(v)

    payload = {
        "variant": profile.variant,
        "w": profile.w,
        "N": profile.N,
        "block_upper": [_num(float(v)) for v in profile.block_upper],
        "block_lower": [_num(float(v)) for v in profile.block_lower],
        "max_distances": [float(v) for v in profile.max_distances],
        "lookup": {
            "boundaries": [float(v) for v in lookup.boundaries],
            "table": [
                sorted(int(j) + 1 for j in np.flatnonzero(lookup.table[i]))
                for i in range(lookup.n_regions)
            ],
        },
    }
    json.dump(payload, sys.stdout, indent=2)
    print()
    return 0


def _bench_methods(p, stream, w, ls, rs, eps):
    """Timed single runs of every method; returns {name: (starts, seconds)}."""
    pe = p.elements
    seg = oracles.prefilter_transform(p)
    sstart = np.array([s.start for s in seg], dtype=np.int64)
    send = np.array([s.end for s in seg], dtype=np.int64)
    seps = np.array([s.threshold for s in seg], dtype=np.float64)

    out = {}
    t0 = time.perf_counter()
    ss = _kernels.scan_baseline(stream, pe, ls, rs, eps)
    out["SS"] = (set(ss.tolist()), time.perf_counter() - t0)
    t0 = time.perf_counter()
    pf = _kernels.scan_prefilter(stream, pe, sstart, send, seps, ls, rs, eps)
    out["prefilter+SS"] = (set(pf.tolist()), time.perf_counter() - t0)
    for variant in ("ele", "seq"):
        for bsp in (False, True):
            name = f"ELB-{variant.upper()}" + ("+BSP" if bsp else "")
            t0 = time.perf_counter()
            reports, _ = engine.run(p, stream, w, variant=variant, use_bsp=bsp)
            out[name] = (
                {r.window_start for r in reports}, time.perf_counter() - t0
            )
    return out


_SWEEPS = {
    "region": [0.10, 0.25, 0.40, 0.55, 0.70],
    "threshold": [0.05, 0.10, 0.20, 0.30],
    "probability": [1e-5, 5e-5, 1e-4, 5e-4, 1e-3],
    "block": [0.01, 0.05, 0.10, 0.20, 0.40],
}


def cmd_bench(args) -> int:
    values = _SWEEPS[args.axis]
    writer = csv.writer(sys.stdout)
    writer.writerow(["axis", "value", "method", "matches",
                     "per_window_us", "speedup_vs_ss"])
    for val in values:
        seed = args.seed
        # defaults: block 5%, threshold_ratio 20%, probability 1e-4
        threshold_ratio = val if args.axis == "threshold" else 0.2
        prob = val if args.axis == "probability" else 1e-4
        block_ratio = val if args.axis == "block" else 0.05

        base = datagen.synthesize_pattern(
            args.pattern_len, args.segments, seed=seed,
            threshold_ratio=threshold_ratio,
        )
        if args.axis == "region":
            bps = [round(k * args.pattern_len / args.segments)
                   for k in range(1, args.segments)]
            cuts = [0, *bps, args.pattern_len]
            shortest = min(cuts[i + 1] - cuts[i] for i in range(len(cuts) - 1))
            radius = max(1, int(round(val * shortest / 2)))
            regions = datagen.extend_breakpoints(bps, radius, args.pattern_len)
            base = Pattern(
                base.elements, regions,
                datagen.thresholds_from_ratio(base.elements, regions, threshold_ratio),
            )
        prob = min(prob, 1.0 / base.n)
        stream = datagen.random_walk(args.len, seed=seed)
        stream, _ = datagen.embed_patterns(stream, [base.elements], prob, seed=seed + 1)
        w = max(1, round(block_ratio * base.n))
        ls, rs, eps = region_arrays(base)
        results = _bench_methods(base, stream, w, ls, rs, eps)
        ss_set, ss_time = results["SS"]
        nwin = args.len - base.n + 1
        for name, (starts, seconds) in results.items():
            if starts != ss_set:
                print(f"MISMATCH: {name} disagrees with SS at {args.axis}={val}",
                      file=sys.stderr)
                return 1
            writer.writerow([
                args.axis, val, name, len(starts),
                f"{seconds / nwin * 1e6:.4f}", f"{ss_time / seconds:.3f}",
            ])
    return 0


def main(argv=None) -> int:
    _setup_logging()
    ap = argparse.ArgumentParser(prog="fgmatch",
                                 description="fine-grained streaming pattern matching")
    sub = ap.add_subparsers(dest="cmd", required=True)

    m = sub.add_parser("match", help="run the matcher over a stream")
    m.add_argument("--pattern", required=True)
    m.add_argument("--stream", required=True, help="CSV file or - for stdin")
    m.add_argument("--elb", choices=["ele", "seq"], default="seq")
    m.add_argument("--block", default="5%", help="block width: integer or percent")
    m.add_argument("--bsp", choices=["on", "off"], default="on")
    m.add_argument("--verify", choices=["adaptive", "baseline", "exhaustive"],
                   default="adaptive")
    m.add_argument("--report", choices=["jsonl", "csv"], default="jsonl")
    m.add_argument("--seed", type=int, default=0)
    m.set_defaults(func=cmd_match)

    g = sub.add_parser("gen", help="generate a stream with embedded patterns")
    g.add_argument("--len", type=int, default=1_000_000)
    g.add_argument("--prob", type=float, default=1e-4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--pattern", help="pattern JSON to embed (else synthesized)")
    g.add_argument("--pattern-len", type=int, default=235)
    g.add_argument("--segments", type=int, default=5)
    g.add_argument("--threshold-ratio", type=float, default=0.2)
    g.add_argument("--out-pattern", default="pattern.json")
    g.add_argument("--out-stream", default="stream.csv")
    g.add_argument("--out-truth", default="truth.json")
    g.set_defaults(func=cmd_gen)

    i = sub.add_parser("inspect", help="dump block bounds and lookup table")
    i.add_argument("--pattern", required=True)
    i.add_argument("--elb", choices=["ele", "seq"], default="seq")
    i.add_argument("--block", default="5%")
    i.set_defaults(func=cmd_inspect)

    b = sub.add_parser("bench", help="sweep one axis across all methods")
    b.add_argument("--axis", choices=sorted(_SWEEPS), required=True)
    b.add_argument("--len", type=int, default=200_000)
    b.add_argument("--pattern-len", type=int, default=235)
    b.add_argument("--segments", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_bench)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
