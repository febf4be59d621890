"""Hot numeric kernels.

Every function here is numba-compilable and gets jitted at import unless
FGM_BACKEND=numpy is set (see ``fgmatch._backend``). Arrays are 0-based;
position and block arguments follow the 1-based convention of the rest of
the package. ``ls``/``rs`` are int64 arrays of length b+1 holding the region
edges with sentinels l_0 = r_0 = 0 and l_b = r_b = n.
"""

import numpy as np

from ._backend import jit


@jit
def adaptive_verify(c, pe, ls, rs, eps, bps_out):
    """Optimal-breakpoint verification of one candidate window.

    Returns (accepted, fresh delta evaluations). On acceptance ``bps_out``
    holds the witness breakpoints. Budget terms computed in a region's
    backward pass are cached and reused by the next forward pass, keeping
    evaluations <= 2n.
    """
    n = pe.shape[0]
    b = eps.shape[0]
    evals = 0
    left = 1
    cache_lo = 0
    cache_hi = -1
    cache = np.empty(0, np.float64)
    for k in range(1, b):
        lk = ls[k]
        rk = rs[k]
        e2 = eps[k - 1] * eps[k - 1]
        acc = 0.0
        found = False
        ps = np.zeros(rk - lk + 1, np.bool_)
        for i in range(left, rk + 1):
            if cache_lo <= i <= cache_hi:
                term = cache[i - cache_lo]
            else:
                d = c[i - 1] - pe[i - 1]
                term = d * d - e2
                evals += 1
            acc += term
            if i >= lk and acc <= 0.0:
                ps[i - lk] = True
                found = True
        if not found:
            return False, evals
        e2n = eps[k] * eps[k]
        cache_lo = lk + 1
        cache_hi = rk + 1
        cache = np.empty(rk + 1 - lk, np.float64)
        acc2 = 0.0
        best = -1
        best_val = 0.0
        for i in range(rk + 1, lk, -1):
            d = c[i - 1] - pe[i - 1]
            term = d * d - e2n
            evals += 1
            cache[i - cache_lo] = term
            acc2 += term
            j = i - 1
            if j >= lk and ps[j - lk] and (best < 0 or acc2 < best_val):
                best = j
                best_val = acc2
        bps_out[k - 1] = best
        left = best + 1
    e2 = eps[b - 1] * eps[b - 1]
    acc = 0.0
    for i in range(left, n + 1):
        if cache_lo <= i <= cache_hi:
            acc += cache[i - cache_lo]
        else:
            d = c[i - 1] - pe[i - 1]
            acc += d * d - e2
            evals += 1
    return acc <= 0.0, evals


@jit
def baseline_accept(cum, ls, rs, eps, n):
    """Potential-set chaining over the cumulative squared-diff array
    (cum[i] = sum of squared diffs over positions 1..i)."""
    b = eps.shape[0]
    prev = np.zeros(1, np.int64)
    for k in range(1, b):
        lk = ls[k]
        rk = rs[k]
        e2 = eps[k - 1] * eps[k - 1]
        cur = np.empty(rk - lk + 1, np.int64)
        m = 0
        for j in range(lk, rk + 1):
            for ii in range(prev.shape[0]):
                i = prev[ii]
                if cum[j] - cum[i] <= e2 * (j - i):
                    cur[m] = j
                    m += 1
                    break
        if m == 0:
            return False
        prev = cur[:m]
    e2 = eps[b - 1] * eps[b - 1]
    for ii in range(prev.shape[0]):
        i = prev[ii]
        if cum[n] - cum[i] <= e2 * (n - i):
            return True
    return False


@jit
def scan_baseline(stream, pe, ls, rs, eps):
    """Step-1 sequential scan; returns accepted window starts (1-based)."""
    n = pe.shape[0]
    nwin = stream.shape[0] - n + 1
    if nwin < 1:
        return np.empty(0, np.int64)
    out = np.empty(nwin, np.int64)
    m = 0
    cum = np.empty(n + 1, np.float64)
    for t in range(1, nwin + 1):
        cum[0] = 0.0
        for i in range(n):
            d = stream[t - 1 + i] - pe[i]
            cum[i + 1] = cum[i] + d * d
        if baseline_accept(cum, ls, rs, eps, n):
            out[m] = t
            m += 1
    return out[:m]


@jit
def scan_prefilter(stream, pe, sstart, send, seps, ls, rs, eps):
    """Coarse prefilter (core segments, inflated thresholds) in front of the
    exact baseline check; returns accepted window starts."""
    n = pe.shape[0]
    nwin = stream.shape[0] - n + 1
    if nwin < 1:
        return np.empty(0, np.int64)
    nseg = sstart.shape[0]
    out = np.empty(nwin, np.int64)
    m = 0
    cum = np.empty(n + 1, np.float64)
    for t in range(1, nwin + 1):
        ok = True
        for k in range(nseg):
            acc = 0.0
            for i in range(sstart[k], send[k] + 1):
                d = stream[t - 1 + i - 1] - pe[i - 1]
                acc += d * d
            if acc > seps[k] * seps[k] * (send[k] - sstart[k] + 1):
                ok = False
                break
        if not ok:
            continue
        cum[0] = 0.0
        for i in range(n):
            d = stream[t - 1 + i] - pe[i]
            cum[i + 1] = cum[i] + d * d
        if baseline_accept(cum, ls, rs, eps, n):
            out[m] = t
            m += 1
    return out[:m]


@jit
def compute_features(stream, w, use_mean):
    """Per-global-block features: block mean (SEQ) or last element (ELE)."""
    nb = stream.shape[0] // w
    f = np.empty(nb, np.float64)
    for i in range(nb):
        if use_mean:
            acc = 0.0
            for j in range(i * w, (i + 1) * w):
                acc += stream[j]
            f[i] = acc / w
        else:
            f[i] = stream[(i + 1) * w - 1]
    return f


@jit
def queue_scan_plain(features, bu, bl):
    """Block-based matching: oldest-first queue scan with early exit.

    Returns (passing queue indices, bound comparisons performed).
    """
    nb = features.shape[0]
    N = bu.shape[0]
    nq = nb - N + 1
    if nq < 1:
        return np.empty(0, np.int64), 0
    out = np.empty(nq, np.int64)
    m = 0
    comps = 0
    for q in range(1, nq + 1):
        ok = True
        for j in range(1, N + 1):
            comps += 1
            v = features[q + j - 2]
            if v < bl[j - 1] or v > bu[j - 1]:
                ok = False
                break
        if ok:
            out[m] = q
            m += 1
    return out[:m], comps


@jit
def block_skip_rows(features, bu, bl, boundaries, table):
    """Per-block mismatch rows via the value-region lookup table.

    Features landing exactly on a boundary are resolved against the raw
    block bounds (exact, and sound even for degenerate point blocks).
    """
    nb = features.shape[0]
    N = bu.shape[0]
    nbound = boundaries.shape[0]
    rows = np.zeros((nb, N), np.bool_)
    for i in range(nb):
        v = features[i]
        r = np.searchsorted(boundaries, v)
        if r < nbound and boundaries[r] == v:
            for j in range(N):
                rows[i, j] = v < bl[j] or v > bu[j]
        else:
            for j in range(N):
                rows[i, j] = table[r, j]
    return rows


@jit
def queue_scan_bsp(features, bu, bl, boundaries, table):
    """Block-skipping queue scan: newest-first, merging per-block skip sets
    into a ring bitmap ahead of the cursor.

    Returns (passing queue indices, scan iterations, queues skipped).
    Decisions per queue are identical to queue_scan_plain.
    """
    nb = features.shape[0]
    N = bu.shape[0]
    nq = nb - N + 1
    if nq < 1:
        return np.empty(0, np.int64), 0, 0
    rows = block_skip_rows(features, bu, bl, boundaries, table)
    ring = np.zeros(N, np.bool_)
    out = np.empty(nq, np.int64)
    m = 0
    iters = 0
    skipped = 0
    for q in range(1, nq + 1):
        slot = q % N
        if ring[slot]:
            ring[slot] = False
            skipped += 1
            continue
        pruned = False
        for j in range(N, 0, -1):
            iters += 1
            bidx = q + j - 1
            for jj in range(1, N + 1):
                if rows[bidx - 1, jj - 1]:
                    tgt = bidx - jj + 1
                    if q <= tgt < q + N:
                        ring[tgt % N] = True
            if ring[slot]:
                pruned = True
                break
        ring[slot] = False
        if not pruned:
            out[m] = q
            m += 1
    return out[:m], iters, skipped


@jit
def verify_starts_adaptive(stream, starts, pe, ls, rs, eps):
    """Adaptive verification of many window starts against one pattern."""
    n = pe.shape[0]
    b = eps.shape[0]
    m = starts.shape[0]
    flags = np.zeros(m, np.bool_)
    bps = np.zeros((m, max(b - 1, 1)), np.int64)
    evals = np.zeros(m, np.int64)
    for s in range(m):
        t = starts[s]
        ok, ev = adaptive_verify(stream[t - 1 : t - 1 + n], pe, ls, rs, eps, bps[s])
        flags[s] = ok
        evals[s] = ev
    return flags, bps, evals


@jit
def verify_starts_baseline(stream, starts, pe, ls, rs, eps):
    """Baseline verification of many window starts; accept flags only."""
    n = pe.shape[0]
    m = starts.shape[0]
    flags = np.zeros(m, np.bool_)
    cum = np.empty(n + 1, np.float64)
    for s in range(m):
        t = starts[s]
        cum[0] = 0.0
        for i in range(n):
            d = stream[t - 1 + i] - pe[i]
            cum[i + 1] = cum[i] + d * d
        flags[s] = baseline_accept(cum, ls, rs, eps, n)
    return flags
