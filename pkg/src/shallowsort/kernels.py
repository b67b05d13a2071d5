"""Merging two adjacent sorted blocks.

Two stable kernels are provided.  ``BUFFERED`` copies the shorter block
aside and does a two-finger merge.  ``ROTATION`` is the symmetric
binary-split merge (SymMerge) driven by an explicit frame stack, with
rotations done by three reversals; it uses no element workspace.

The ROTATION kernel must never allocate: its only state is loop indices plus
the caller-supplied ``work`` vector of ``WORK_CELLS`` integers, a constant
that does not depend on n.
"""

from __future__ import annotations

import collections
import enum

import numpy as np

from .core import MERGE_COMPARISONS, MERGE_COST, MERGES, MOVES, COMPARISONS


class MergeKind(enum.IntEnum):
    BUFFERED = 0
    ROTATION = 1


BUFFERED = int(MergeKind.BUFFERED)
ROTATION = int(MergeKind.ROTATION)

# SymMerge recursion depth is at most ceil(log2(len)) <= 64, and a
# depth-first sweep keeps at most depth + 1 frames pending.
MAX_FRAMES = 70
WORK_CELLS = 3 * MAX_FRAMES


def new_work() -> np.ndarray:
    return np.zeros(WORK_CELLS, dtype=np.int64)


def make_kernel_impl(wrap, core):
    less = core.less
    reverse_range = core.reverse_range

    @wrap
    def merge_buffered(a, lo, mid, hi, ms):
        if mid - lo <= hi - mid:
            tmp = a[lo:mid].copy()
            nl = mid - lo
            ms[MOVES] += nl
            i = 0
            j = mid
            k = lo
            while i < nl and j < hi:
                if less(a[j], tmp[i], ms):
                    a[k] = a[j]
                    j += 1
                else:
                    a[k] = tmp[i]
                    i += 1
                k += 1
            ms[MOVES] += k - lo
            while i < nl:
                a[k] = tmp[i]
                i += 1
                k += 1
                ms[MOVES] += 1
        else:
            tmp = a[mid:hi].copy()
            nr = hi - mid
            ms[MOVES] += nr
            i = mid - 1
            j = nr - 1
            k = hi - 1
            while i >= lo and j >= 0:
                if less(tmp[j], a[i], ms):
                    a[k] = a[i]
                    i -= 1
                else:
                    a[k] = tmp[j]
                    j -= 1
                k -= 1
            ms[MOVES] += hi - 1 - k
            while j >= 0:
                a[k] = tmp[j]
                j -= 1
                k -= 1
                ms[MOVES] += 1

    @wrap
    def rotate(a, lo, mid, hi, ms):
        reverse_range(a, lo, mid, ms)
        reverse_range(a, mid, hi, ms)
        reverse_range(a, lo, hi, ms)

    @wrap
    def merge_rotation(a, lo, mid, hi, ms, work):
        sp = 0
        work[0] = lo
        work[1] = mid
        work[2] = hi
        sp = 1
        while sp > 0:
            sp -= 1
            a0 = work[3 * sp]
            m = work[3 * sp + 1]
            b = work[3 * sp + 2]
            if m - a0 == 1:
                # insert a[a0] before the first element of [m, b) not less than it
                i = m
                j = b
                while i < j:
                    h = (i + j) >> 1
                    if less(a[h], a[a0], ms):
                        i = h + 1
                    else:
                        j = h
                if i - 1 > a0:
                    x = a[a0]
                    for k in range(a0, i - 1):
                        a[k] = a[k + 1]
                    a[i - 1] = x
                    ms[MOVES] += i - a0
                continue
            if b - m == 1:
                # insert a[m] after the last element of [a0, m) not greater than it
                i = a0
                j = m
                while i < j:
                    h = (i + j) >> 1
                    if not less(a[m], a[h], ms):
                        i = h + 1
                    else:
                        j = h
                if m > i:
                    x = a[m]
                    for k in range(m, i, -1):
                        a[k] = a[k - 1]
                    a[i] = x
                    ms[MOVES] += m - i + 1
                continue
            half = (a0 + b) >> 1
            nn = half + m
            if m > half:
                start = nn - b
                r = half
            else:
                start = a0
                r = m
            p = nn - 1
            while start < r:
                c = (start + r) >> 1
                if not less(a[p - c], a[c], ms):
                    start = c + 1
                else:
                    r = c
            end = nn - start
            if start < m and m < end:
                rotate(a, start, m, end, ms)
            if half < end and end < b:
                work[3 * sp] = half
                work[3 * sp + 1] = end
                work[3 * sp + 2] = b
                sp += 1
            if a0 < start and start < half:
                work[3 * sp] = a0
                work[3 * sp + 1] = start
                work[3 * sp + 2] = half
                sp += 1

    @wrap
    def merge_adjacent(a, lo, mid, hi, kind, ms, work):
        """Stably merge sorted a[lo:mid] and a[mid:hi] in place."""
        if lo >= mid or mid >= hi:
            return
        c0 = ms[COMPARISONS]
        if kind == BUFFERED:
            merge_buffered(a, lo, mid, hi, ms)
        else:
            merge_rotation(a, lo, mid, hi, ms, work)
        ms[MERGE_COMPARISONS] += ms[COMPARISONS] - c0
        ms[MERGE_COST] += hi - lo
        ms[MERGES] += 1

    @wrap
    def plain_mergesort(a, lo, hi, kind, ms, work):
        """Bottom-up mergesort of a[lo:hi] over fixed-width blocks."""
        width = 1
        while width < hi - lo:
            i = lo
            while i + width < hi:
                e = i + 2 * width
                if e > hi:
                    e = hi
                merge_adjacent(a, i, i + width, e, kind, ms, work)
                i += 2 * width
            width *= 2

    return KernelImpl(merge_buffered, rotate, merge_rotation, merge_adjacent, plain_mergesort)


KernelImpl = collections.namedtuple(
    "KernelImpl",
    ("merge_buffered", "rotate", "merge_rotation", "merge_adjacent", "plain_mergesort"),
)
