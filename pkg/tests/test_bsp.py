import math

import numpy as np
import pytest

from fgmatch.bsp import (
    LookupTable,
    SkipState,
    build_lookup,
    region_of,
    region_table_entry,
    skip_set,
)
from fgmatch.elb import BlockFeature, ElbProfile, block_matches, build_profile

from conftest import rand_pattern

RNG = np.random.default_rng(83)


def profile_from_bounds(bl, bu) -> ElbProfile:
    """Wrap raw block bounds in a profile (envelope fields unused here)."""
    n = len(bl)
    return ElbProfile(
        "ele", 1, n,
        np.asarray(bu, dtype=float), np.asarray(bl, dtype=float),
        np.asarray(bu, dtype=float), np.asarray(bl, dtype=float),
        np.ones(1),
    )


@pytest.fixture
def three_block_lookup(three_block_bounds):
    bl, bu = three_block_bounds
    return build_lookup(profile_from_bounds(bl, bu))


def test_lookup_boundaries_and_region_count(three_block_lookup):
    lk = three_block_lookup
    assert list(lk.boundaries) == [2, 7, 9, 11, 14, 17]
    assert lk.n_regions == 7


def test_lookup_table_worked_rows(three_block_lookup):
    lk = three_block_lookup
    # rows are 0-based internally; entries are 1-based block indices
    assert set(np.flatnonzero(lk.table[1]) + 1) == {1, 2}   # (2, 7)
    assert set(np.flatnonzero(lk.table[6]) + 1) == {1, 2, 3}  # (17, inf)


def test_lookup_single_all_covering_block():
    lk = build_lookup(profile_from_bounds([-np.inf], [np.inf]))
    assert lk.n_regions == 1
    assert not lk.table.any()


def test_region_of_values(three_block_lookup):
    lk = three_block_lookup
    assert region_of(lk, 5.0) == (2,)
    assert region_of(lk, -100.0) == (1,)
    assert region_of(lk, 100.0) == (7,)
    assert region_of(lk, 7.0) == (2, 3)  # boundary spans both neighbors


def test_boundary_entry_is_intersection(three_block_lookup):
    lk = three_block_lookup
    left = set(np.flatnonzero(lk.table[1]) + 1)
    right = set(np.flatnonzero(lk.table[2]) + 1)
    got = region_table_entry(lk, 7.0)
    # 7 touches block 1's bounds [7, 11] inclusively, so 1 is never skippable
    assert got == (left & right) - {1}
    assert 1 not in got


def test_boundary_point_block_never_skipped():
    # degenerate block [5, 5]: a feature exactly at 5 matches it inclusively
    lk = build_lookup(profile_from_bounds([5.0, 8.0], [5.0, 9.0]))
    assert 1 not in region_table_entry(lk, 5.0)


def test_feature_matching_example(three_block_bounds):
    bl, bu = three_block_bounds
    prof = profile_from_bounds(bl, bu)
    f = BlockFeature(3, 4.0)
    assert block_matches(prof, f, 3)
    assert not block_matches(prof, f, 1)
    assert not block_matches(prof, f, 2)


def test_skip_set_worked_example(three_block_lookup):
    assert skip_set(three_block_lookup, BlockFeature(3, 4.0)) == {2, 3}
    assert skip_set(three_block_lookup, BlockFeature(2, 5.0)) == {1, 2}


def test_skip_set_empty_when_inside_everything():
    lk = build_lookup(profile_from_bounds([0.0, 1.0], [10.0, 11.0]))
    assert skip_set(lk, BlockFeature(4, 5.0)) == set()


def test_skip_set_equals_direct_loop_oracle():
    for _ in range(50):
        p = rand_pattern(RNG, n_range=(20, 80), b_range=(1, 3))
        w = int(RNG.integers(2, 7))
        variant = RNG.choice(["ele", "seq"])
        prof = build_profile(p, w, variant)
        lk = build_lookup(prof)
        for _ in range(40):
            i = int(RNG.integers(1, 50))
            value = float(RNG.normal() * 3)
            if RNG.random() < 0.3 and len(lk.boundaries):
                value = float(RNG.choice(lk.boundaries))  # exercise boundaries
            f = BlockFeature(i, value)
            want = {
                i - j + 1
                for j in range(1, prof.N + 1)
                if not block_matches(prof, f, j)
            }
            assert skip_set(lk, f) == want


def test_table_soundness_and_completeness():
    p = rand_pattern(RNG, n_range=(30, 80), b_range=(2, 3))
    prof = build_profile(p, 4, "ele")
    lk = build_lookup(prof)
    lo = prof.block_lower.min() - 1
    hi = prof.block_upper.max() + 1
    values = RNG.uniform(lo, hi, 100_000)
    for value in values[:2000]:  # python-loop sample of the vector below
        entry = region_table_entry(lk, float(value))
        for j in range(1, prof.N + 1):
            if j in entry:
                assert not block_matches(prof, float(value), j)
            elif float(value) not in lk.boundaries:
                assert block_matches(prof, float(value), j)
    # vectorized full-size soundness check
    region_idx = np.searchsorted(lk.boundaries, values, side="left")
    strict = ~np.isin(values, lk.boundaries)
    miss = lk.table[region_idx[strict]]
    inside = (prof.block_lower[None, :] <= values[strict, None]) & (
        values[strict, None] <= prof.block_upper[None, :]
    )
    assert not np.any(miss & inside)       # soundness
    assert np.array_equal(miss, ~inside)   # completeness off-boundary


def test_skip_state_ring_protocol(three_block_lookup):
    st = SkipState(three_block_lookup)
    st.mark([2, 3])
    assert not st.consume(1)
    assert st.is_marked(2)
    assert st.consume(2)
    assert st.consume(3)
    # stale marks behind the cursor are dropped
    st.mark([1])
    assert not st.is_marked(1)
    assert not st.consume(4)


def test_skip_state_memory_is_bounded(three_block_lookup):
    st = SkipState(three_block_lookup)
    N = three_block_lookup.n_blocks
    for q in range(1, 10_000):
        st.mark([q + N - 1])
        st.consume(q)
    assert st._ring.shape == (N,)


def test_sequential_skip_walkthrough(three_block_lookup):
    """Features 5 (block 2) then 4 (block 3) rule out queues 1..3; the next
    undecided queue is 4."""
    lk = three_block_lookup
    st = SkipState(lk)
    st.mark(skip_set(lk, BlockFeature(2, 5.0)))
    st.mark(skip_set(lk, BlockFeature(3, 4.0)))
    assert all(st.is_marked(q) for q in (1, 2, 3))
    for q in (1, 2, 3):
        assert st.consume(q)
    assert not st.is_marked(4)
