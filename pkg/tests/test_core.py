import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import shallowsort as ss
from shallowsort.core import new_counters, WALKBACK_STEPS, PARTITION_READS, PARTITION_SWAPS

import oracles

int_lists = st.lists(st.integers(-5, 5), max_size=60)


def test_detect_runs_sorted_is_one_run():
    a = [1, 2, 2, 3]
    assert ss.detect_runs(a) == [(0, 4, -1)]


def test_detect_runs_reverses_descending_run():
    a = [3, 2, 1]
    assert ss.detect_runs(a) == [(0, 3, -1)]
    assert a == [1, 2, 3]


def test_detect_runs_mixed_example():
    a = [1, 3, 2, 2, 4, 1]
    # frozen from oracles.normalized_runs
    assert [(r.start, r.len) for r in ss.detect_runs(a)] == [(0, 2), (2, 3), (5, 1)]
    assert a == [1, 3, 2, 2, 4, 1]
    assert oracles.normalized_runs([1, 3, 2, 2, 4, 1])[1] == [(0, 2), (2, 3), (5, 1)]


def test_detect_runs_empty():
    assert ss.detect_runs([]) == []
    assert ss.detect_runs(np.array([], dtype=np.int64)) == []


@settings(max_examples=300, deadline=None)
@given(int_lists)
def test_detect_runs_tiles_with_strict_descents(values):
    a = np.array(values, dtype=np.int64)
    runs = ss.detect_runs(a)
    want_a, want_runs = oracles.normalized_runs(values)
    assert a.tolist() == want_a
    assert [(r.start, r.len) for r in runs] == want_runs
    pos = 0
    for r in runs:
        assert r.start == pos and r.len >= 1
        assert all(a[i] <= a[i + 1] for i in range(r.start, r.start + r.len - 1))
        if r.start > 0:
            assert a[r.start] < a[r.start - 1]
        pos += r.len
    assert pos == len(values)


@settings(max_examples=100, deadline=None)
@given(int_lists)
def test_detect_runs_interpreted_matches_compiled(values):
    a = list(values)
    b = np.array(values, dtype=np.int64)
    assert ss.detect_runs(a, lt=lambda x, y: x < y) == ss.detect_runs(b)
    assert a == b.tolist()


@pytest.mark.parametrize("lengths, want", [([4], 0.0), ([2, 2], 1.0), ([2, 1, 1], 1.5)])
def test_run_entropy_examples(lengths, want):
    assert ss.run_entropy(lengths) == pytest.approx(want, abs=1e-15)
    assert oracles.entropy_exact(lengths) == pytest.approx(want, abs=1e-15)


def test_run_entropy_rejects_empty_profile():
    with pytest.raises(ValueError):
        ss.run_entropy([])
    with pytest.raises(ValueError):
        ss.run_entropy([3, 0])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 10 ** 5), min_size=1, max_size=200))
def test_run_entropy_matches_brute_force(lengths):
    want = oracles.entropy_exact(lengths)
    got = ss.run_entropy(lengths)
    assert abs(got - want) <= 1e-12 * max(1.0, want)


def test_run_entropy_large_profile(rng):
    lengths = rng.integers(1, 50, 40000).tolist()
    assert sum(lengths) <= 10 ** 6 * 2
    want = oracles.entropy_exact(lengths)
    assert abs(ss.run_entropy(lengths) - want) <= 1e-12 * want


def test_run_entropy_bounded_by_log_n(rng):
    lengths = rng.integers(1, 9, 500).tolist()
    assert 0 <= ss.run_entropy(lengths) <= math.log2(sum(lengths))


@pytest.mark.parametrize("end, budget, want", [(5, 10, 5), (5, 3, None)])
def test_scan_run_leftward_examples(suite, end, budget, want):
    a = np.array([1, 5, 6, 7, 9, 2, 3, 4], dtype=np.int64)
    ms = new_counters()
    got = suite.core.scan_run_leftward(a, end, budget, ms)
    assert (None if got < 0 else got) == want
    assert oracles.scan_oracle(a.tolist(), end, budget) == want
    assert ms[WALKBACK_STEPS] == min(budget, 5)


def test_scan_run_leftward_budget_edge():
    a = np.array([2, 3], dtype=np.int64)
    assert ss.scan_run_leftward(a, 2, 1) is None
    assert ss.scan_run_leftward(a, 2, 2) == 2


def test_scan_run_leftward_counts_steps():
    ms = new_counters()
    a = np.array([1, 5, 6, 7, 9, 2, 3, 4], dtype=np.int64)
    assert ss.scan_run_leftward(a, 8, ss.UNBOUNDED, metrics=ms) == 3
    assert ms[WALKBACK_STEPS] == 3


@settings(max_examples=200, deadline=None)
@given(int_lists.filter(lambda v: len(v) > 0))
def test_scan_with_budget_n_agrees_with_detect_runs(values):
    a = np.array(values, dtype=np.int64)
    runs = ss.detect_runs(a)
    for r in runs:
        assert ss.scan_run_leftward(a, r.start + r.len, len(a)) == r.len


def test_stable_segregate_example():
    assert ss.stable_segregate([0, 1, 1, 0, 0, 1]) == [0, 0, 0, 1, 1, 1]
    assert oracles.segregate_oracle([0, 1, 1, 0, 0, 1]) == [0, 0, 0, 1, 1, 1]


def _profile_array(lengths, rng):
    from shallowsort.bench import profile_values

    return profile_values(lengths, rng)


def test_partition_example(rng):
    a = _profile_array([5, 1, 6], rng)
    before = a.copy()
    w, m = ss.partition_short_runs(a, 2)
    assert w == 11
    assert a[:5].tolist() == before[:5].tolist()
    assert a[5:11].tolist() == before[6:12].tolist()
    assert a[11] == before[5]


def test_partition_all_long_is_identity(rng):
    a = _profile_array([5, 7, 9], rng)
    before = a.copy()
    w, m = ss.partition_short_runs(a, 4)
    assert w == len(a)
    assert np.array_equal(a, before)
    assert m.partition_swaps == 0


def test_partition_threshold_at_least_n(rng):
    a = _profile_array([5, 7, 9], rng)
    w, _ = ss.partition_short_runs(a, len(a))
    assert w == 0


def check_partition(lengths, threshold, rng):
    a = _profile_array(lengths, rng)
    ss.detect_runs(a)
    before = a.copy()
    runs = ss.detect_runs(before.copy())
    ms = new_counters()
    from shallowsort.suite import jit_suite

    w = jit_suite().core.partition_short_runs(a, threshold, ms)
    longs = [before[r.start:r.start + r.len] for r in runs if r.len > threshold]
    want = np.concatenate(longs) if longs else np.array([], dtype=np.int64)
    n = len(a)
    return (w == len(want) and np.array_equal(a[:w], want)
            and sorted(a.tolist()) == sorted(before.tolist())
            and ms[PARTITION_READS] <= 4 * n and ms[PARTITION_SWAPS] <= n)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(2, 30), min_size=1, max_size=40), st.integers(1, 20))
def test_partition_preserves_long_runs(lengths, threshold):
    assert check_partition(lengths, threshold, np.random.default_rng(len(lengths)))


def test_partition_interpreted_with_tags():
    # runs 4, 2, 3, 6 with the input position riding along
    keys = [1, 2, 3, 4, 0, 5, 1, 2, 3, 0, 2, 3, 4, 5, 6]
    a = list(zip(keys, range(len(keys))))
    w, _ = ss.partition_short_runs(a, 3, lt=lambda x, y: x[0] < y[0])
    assert [t for _, t in a[:w]] == [0, 1, 2, 3, 9, 10, 11, 12, 13, 14]
    assert sorted(t for _, t in a[w:]) == [4, 5, 6, 7, 8]


@pytest.mark.parametrize("before, after, want", [
    ([2, 1], [1, 2], True),
    ([2, 1], [1, 1], False),
    ([1, 1, 2], [1, 2, 1], False),
])
def test_verify_sorted_permutation_examples(before, after, want):
    assert ss.verify_sorted_permutation(before, after) is want
    assert ss.verify_sorted_permutation(np.array(before), np.array(after)) is want


def test_verify_with_comparator_and_equivalent_blocks():
    lt = lambda x, y: x[0] < y[0]
    before = [(1, "a"), (0, "b"), (1, "c")]
    assert ss.verify_sorted_permutation(before, [(0, "b"), (1, "c"), (1, "a")], lt)
    assert not ss.verify_sorted_permutation(before, [(0, "b"), (1, "c"), (1, "c")], lt)


def test_metrics_round_trip():
    ms = np.arange(13, dtype=np.int64)
    assert np.array_equal(ss.Metrics.from_array(ms).to_array(), ms)


def test_ceil_log2():
    assert [ss.ceil_log2(n) for n in (0, 1, 2, 3, 4, 5, 1024, 1025)] == [0, 0, 1, 2, 2, 3, 10, 11]
