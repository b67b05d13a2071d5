"""Run model, entropy, backward run scans, short-run partitioning and counters.

Everything that touches array elements is built by :func:`make_core_impl`,
which follows the usual numba idiom of taking a ``wrap`` decorator and an
``lt`` comparator: ``wrap`` is the identity for the pure-Python flavour and
``numba.njit`` for the compiled one.
"""

from __future__ import annotations

import collections
import functools
import math
from dataclasses import dataclass, fields
from typing import Callable, Sequence

import numpy as np

# Counter slots of the int64 metrics vector shared by every kernel.
COMPARISONS = 0
MOVES = 1
WALKBACK_STEPS = 2
ENCODE_OPS = 3
DECODE_OPS = 4
MAX_STACK_DEPTH = 5
MERGE_COST = 6
MERGE_COMPARISONS = 7
PUSHES = 8
MERGES = 9
POWER_MISMATCHES = 10
PARTITION_READS = 11
PARTITION_SWAPS = 12
N_SLOTS = 13

# Budget value meaning "walk until the run start is found".
UNBOUNDED = -1


@dataclass
class Metrics:
    """Instrumentation collected over one sort.

    ``merge_cost`` is the total size of every run produced by a merge.
    ``max_stack_depth`` counts physically stored stack entries, so the
    shallow engines report their window occupancy, not the logical height.
    """

    comparisons: int = 0
    moves: int = 0
    walkback_steps: int = 0
    encode_ops: int = 0
    decode_ops: int = 0
    max_stack_depth: int = 0
    merge_cost: int = 0
    merge_comparisons: int = 0
    pushes: int = 0
    merges: int = 0
    power_mismatches: int = 0
    partition_reads: int = 0
    partition_swaps: int = 0

    @classmethod
    def from_array(cls, ms: np.ndarray) -> "Metrics":
        return cls(*(int(v) for v in ms[:N_SLOTS]))

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=np.int64)


def new_counters() -> np.ndarray:
    return np.zeros(N_SLOTS, dtype=np.int64)


RunEntry = collections.namedtuple("RunEntry", ("start", "len", "aux"), defaults=(-1,))


def run_entropy(lengths: Sequence[int]) -> float:
    """Run-based entropy, in bits, of a run-length profile."""
    n = sum(lengths)
    if n <= 0:
        raise ValueError("run profile must be nonempty")
    h = 0.0
    for r in lengths:
        if r < 1:
            raise ValueError("run lengths must be positive")
        h += (r / n) * math.log2(n / r)
    return h


def stable_segregate(flags: list) -> list:
    """Two-pointer 0/1 segregation: zeros move forward stably, ones follow."""
    out = list(flags)
    w = 0
    for j, bit in enumerate(out):
        if bit == 0:
            out[w], out[j] = out[j], out[w]
            w += 1
    return out


def _cmp_from_lt(lt: Callable) -> Callable:
    def cmp(x, y):
        if lt(x, y):
            return -1
        if lt(y, x):
            return 1
        return 0

    return cmp


def verify_sorted_permutation(before, after, lt: Callable | None = None) -> bool:
    """True iff ``after`` is non-decreasing and a multiset permutation of ``before``."""
    if len(before) != len(after):
        return False
    if lt is None and isinstance(before, np.ndarray) and isinstance(after, np.ndarray):
        if len(after) > 1 and np.any(after[1:] < after[:-1]):
            return False
        return bool(np.array_equal(np.sort(before, kind="stable"), after))
    if lt is None:
        lt = lambda x, y: x < y
    for i in range(1, len(after)):
        if lt(after[i], after[i - 1]):
            return False
    key = functools.cmp_to_key(_cmp_from_lt(lt))
    want = sorted(before, key=key)
    got = list(after)
    # Equivalent elements may legally appear in any order, so compare
    # each equivalence block as a multiset (by equality, no hashing).
    i = 0
    while i < len(want):
        j = i + 1
        while j < len(want) and not lt(want[i], want[j]):
            j += 1
        block = list(got[i:j])
        for x in want[i:j]:
            for t, y in enumerate(block):
                if y == x:
                    del block[t]
                    break
            else:
                return False
        i = j
    return True


def ceil_log2(n: int) -> int:
    """Smallest e with 2**e >= n (0 for n <= 1)."""
    e = 0
    while (1 << e) < n:
        e += 1
    return e


def make_core_impl(wrap, lt=None):

    def default_lt(a, b):
        return a < b

    if lt is not None and hasattr(lt, "py_func"):
        LT = lt  # already compiled
    else:
        LT = wrap(lt if lt is not None else default_lt)

    @wrap
    def less(x, y, ms):
        ms[COMPARISONS] += 1
        return LT(x, y)

    @wrap
    def reverse_range(a, lo, hi, ms):
        hi -= 1
        while lo < hi:
            t = a[lo]
            a[lo] = a[hi]
            a[hi] = t
            lo += 1
            hi -= 1
            ms[MOVES] += 2

    @wrap
    def normalize_runs(a, ms):
        """Reverse every maximal strictly decreasing run, left to right."""
        n = len(a)
        i = 0
        while i < n - 1:
            j = i + 2
            if less(a[i + 1], a[i], ms):
                while j < n and less(a[j], a[j - 1], ms):
                    j += 1
                reverse_range(a, i, j, ms)
            else:
                while j < n and not less(a[j], a[j - 1], ms):
                    j += 1
            i = j

    @wrap
    def next_run_end(a, lo, hi, ms):
        """End (exclusive) of the non-decreasing run starting at ``lo``."""
        j = lo + 1
        while j < hi and not less(a[j], a[j - 1], ms):
            j += 1
        return j

    @wrap
    def fill_runs(a, out, ms):
        """Normalize ``a`` and write (start, len) rows into ``out``; return the count."""
        normalize_runs(a, ms)
        n = len(a)
        k = 0
        i = 0
        while i < n:
            e = next_run_end(a, i, n, ms)
            out[k, 0] = i
            out[k, 1] = e - i
            k += 1
            i = e
        return k

    @wrap
    def scan_run_leftward(a, end, budget, ms):
        """Length of the run ending at ``end``, or -1 once ``budget`` cells are inspected."""
        i = end - 1
        steps = 0
        while True:
            if budget >= 0 and steps >= budget:
                ms[WALKBACK_STEPS] += steps
                return -1
            steps += 1
            if i == 0 or less(a[i], a[i - 1], ms):
                ms[WALKBACK_STEPS] += steps
                return steps
            i -= 1

    @wrap
    def partition_short_runs(a, threshold, ms):
        """Move runs of length <= threshold behind the long runs; return the long-region length.

        Long runs keep their order and contents; short-run elements end up in
        an unspecified order.  Runs are classified while sweeping, so no run
        table is kept.
        """
        n = len(a)
        w = 0
        j = 0
        while j < n:
            c0 = ms[COMPARISONS]
            e = next_run_end(a, j, n, ms)
            ms[PARTITION_READS] += 2 * (ms[COMPARISONS] - c0)
            if e - j > threshold:
                if w == j:
                    w = e
                else:
                    for t in range(j, e):
                        x = a[w]
                        a[w] = a[t]
                        a[t] = x
                        w += 1
                    ms[PARTITION_SWAPS] += e - j
                    ms[PARTITION_READS] += 2 * (e - j)
                    ms[MOVES] += 2 * (e - j)
            j = e
        return w

    return CoreImpl(wrap, LT, less, reverse_range, normalize_runs, next_run_end,
                    fill_runs, scan_run_leftward, partition_short_runs)


CoreImpl = collections.namedtuple(
    "CoreImpl",
    ("wrap", "LT", "less", "reverse_range", "normalize_runs", "next_run_end",
     "fill_runs", "scan_run_leftward", "partition_short_runs"),
)
