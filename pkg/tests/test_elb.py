import itertools
import math

import numpy as np
import pytest

from fgmatch.core import Pattern
from fgmatch.elb import (
    BlockFeature,
    block_feature,
    block_matches,
    build_profile,
    build_profile_ele,
    build_profile_seq,
    max_distance,
    segment_span,
    theta_ele,
    theta_seq,
)

from conftest import rand_pattern

RNG = np.random.default_rng(7)


def enumerated_segments(p: Pattern, i: int) -> set[int]:
    """Which segment index can position i take, over every segmentation?"""
    out = set()
    for bps in itertools.product(*[range(l, r + 1) for l, r in p.regions]):
        out.add(1 + sum(bp < i for bp in bps))
    return out


def test_max_distance_formula():
    p = Pattern(np.zeros(15), ((4, 5), (11, 13)), (1.0, 1.0, 2.0))
    assert max_distance(p, 1) == pytest.approx(math.sqrt(5))
    assert max_distance(p, 3) == pytest.approx(2 * math.sqrt(15 - 11))
    single = Pattern(np.zeros(9), (), (0.5,))
    assert max_distance(single, 1) == pytest.approx(0.5 * 3)
    with pytest.raises(ValueError):
        max_distance(p, 0)
    with pytest.raises(ValueError):
        max_distance(p, 4)


def test_theta_ele_branches():
    p = Pattern(np.zeros(12), ((4, 6),), (1.0, 2.0))
    md1, md2 = max_distance(p, 1), max_distance(p, 2)
    assert theta_ele(p, 2) == pytest.approx(md1)  # strictly inside segment 1
    assert theta_ele(p, 5) == pytest.approx(max(md1, md2))  # inside the region
    assert theta_ele(p, 4) == pytest.approx(md1)  # position l_k: segment 1 only
    assert theta_ele(p, 10) == pytest.approx(md2)


def test_theta_ele_against_segment_enumeration():
    for _ in range(30):
        p = rand_pattern(RNG, n_range=(10, 30), b_range=(2, 3), region_width=(1, 3))
        for i in range(1, p.n + 1):
            segs = enumerated_segments(p, i)
            lo, hi = segment_span(p, i)
            assert segs == set(range(lo, hi + 1))
            want = max(max_distance(p, k) for k in segs)
            assert theta_ele(p, i) == pytest.approx(want)


def test_theta_seq_single_and_two_segment_spans():
    p = Pattern(np.zeros(20), ((8, 10),), (1.0, 2.0))
    w = 3
    md1, md2 = max_distance(p, 1), max_distance(p, 2)
    assert theta_seq(p, 5, w) == pytest.approx(md1 / math.sqrt(w))
    assert theta_seq(p, 16, w) == pytest.approx(md2 / math.sqrt(w))
    # subsequence [8:10] can touch both segments
    assert theta_seq(p, 10, w) == pytest.approx(math.sqrt((md1**2 + md2**2) / w))
    with pytest.raises(ValueError):
        theta_seq(p, 2, w)


def test_theta_seq_against_segment_enumeration():
    for _ in range(20):
        p = rand_pattern(RNG, n_range=(12, 30), b_range=(2, 3), region_width=(1, 3))
        w = int(RNG.integers(2, 5))
        md = [max_distance(p, k) for k in range(1, p.b + 1)]
        for i in range(w, p.n + 1):
            k_lo = min(enumerated_segments(p, i - w + 1))
            k_hi = max(enumerated_segments(p, i))
            want = math.sqrt(sum(md[k - 1] ** 2 for k in range(k_lo, k_hi + 1)) / w)
            assert theta_seq(p, i, w) == pytest.approx(want)


def test_profile_ele_constant_pattern():
    n, c = 12, 3.5
    p = Pattern(np.full(n, c), (), (1.0,))
    prof = build_profile_ele(p, 3)
    assert np.allclose(prof.upper, c + math.sqrt(n))
    assert np.allclose(prof.lower, c - math.sqrt(n))
    assert np.allclose(prof.block_upper, prof.block_upper[0])


def test_profile_block_count_with_width_three():
    p = Pattern(np.zeros(15), ((4, 5), (11, 13)), (1.0, 1.0, 1.0))
    for variant in ("ele", "seq"):
        assert build_profile(p, 3, variant).N == 5


def test_block_bounds_are_envelope_extrema():
    for variant in ("ele", "seq"):
        p = rand_pattern(RNG, n_range=(20, 60), b_range=(1, 3))
        w = int(RNG.integers(2, 8))
        prof = build_profile(p, w, variant)
        for j in range(1, prof.N + 1):
            sl = slice((j - 1) * w, j * w)
            if variant == "seq" and j == 1:
                assert prof.block_upper[0] == math.inf
                assert prof.block_lower[0] == -math.inf
                continue
            assert prof.block_upper[j - 1] == np.nanmax(prof.upper[sl])
            assert prof.block_lower[j - 1] == np.nanmin(prof.lower[sl])
            assert np.all(prof.upper[sl][~np.isnan(prof.upper[sl])]
                          <= prof.block_upper[j - 1])


def test_seq_envelope_undefined_before_width():
    p = rand_pattern(RNG, n_range=(20, 40), b_range=(1, 2))
    prof = build_profile_seq(p, 4)
    assert np.all(np.isnan(prof.upper[:3]))
    assert np.all(np.isfinite(prof.upper[3:]))


def test_envelope_monotone_in_thresholds():
    base = rand_pattern(RNG, n_range=(20, 40), b_range=(2, 3))
    wider = Pattern(base.elements, base.regions,
                    tuple(e * 1.5 for e in base.thresholds))
    for variant in ("ele", "seq"):
        a = build_profile(base, 3, variant)
        b = build_profile(wider, 3, variant)
        mask = ~np.isnan(a.upper)
        assert np.all(b.upper[mask] >= a.upper[mask])
        assert np.all(b.lower[mask] <= a.lower[mask])


def test_width_validation():
    p = rand_pattern(RNG, n_range=(20, 20), b_range=(1, 1))
    with pytest.raises(ValueError):
        build_profile_ele(p, 0)
    with pytest.raises(ValueError):
        build_profile_ele(p, 21)
    assert build_profile_ele(p, 20).N == 1  # weak but legal


def test_block_feature_variants():
    p = rand_pattern(RNG, n_range=(20, 20), b_range=(1, 1))
    ele = build_profile_ele(p, 4)
    seq = build_profile_seq(p, 4)
    vals = [1.0, 2.0, 3.0, 10.0]
    assert block_feature(ele, vals, 5).value == 10.0
    assert block_feature(seq, vals, 5).value == pytest.approx(4.0)
    with pytest.raises(ValueError):
        block_feature(ele, [1.0, 2.0], 1)


def test_block_matches_inclusive_and_sentinel():
    p = rand_pattern(RNG, n_range=(20, 20), b_range=(1, 1))
    prof = build_profile_seq(p, 4)
    # feature exactly at an upper bound matches
    j = 2
    f = BlockFeature(9, float(prof.block_upper[j - 1]))
    assert block_matches(prof, f, j)
    # SEQ block 1 never prunes
    assert block_matches(prof, BlockFeature(1, 1e12), 1)
    assert block_matches(prof, BlockFeature(1, -1e12), 1)
    with pytest.raises(ValueError):
        block_matches(prof, f, 0)
