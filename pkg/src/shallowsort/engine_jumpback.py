"""Strictly in-place driver that stores evicted run lengths inside the runs themselves.

Runs of length at most 3*lam (lam = ceil(log2 n) + 1) are moved behind the
long runs and sorted separately.  Every long run is long enough to carry a
lam-bit tag in its last lam + 1 cells:

    code = (len << 1) | scheme        bit 0 of L is the most significant

and a cell L[i] reads as 1 iff it is >= the pivot cell just before L.

scheme 0 (pivot): the first lam cells F all sit below the pivot, so a zero
bit swaps L[i] with F[i].  scheme 1 (marker): the middle of the run is
constant; L is copied into the middle block M, then rewritten with the two
global markers m1 < m2 and the pivot cell becomes m2.

Long-run contents are scrambled while encoded, so run boundaries are never
rediscovered by scanning.  Equal keys can trade places, so this engine is
not stable.
"""

from __future__ import annotations

import collections

import numpy as np

from .core import DECODE_OPS, ENCODE_OPS, MOVES, ceil_log2
from .kernels import WORK_CELLS
from .policies import (CAPACITY, H_CAP, H_CNT, H_DEPTH, H_MODE, H_N, H_TRACE, LEN, N_HDR, START,
                       STOP, VIEW_FULL)

PIVOT = 0
MARKER = 1


class EncodingCorruptionError(ValueError):
    """A run tag decoded to a length no live long run can have."""


def jump_lambda(n: int) -> int:
    return ceil_log2(n) + 1


def make_jumpback_impl(wrap, core, kernels, policies, standard):
    less = core.less
    clog2 = wrap(ceil_log2)
    merge_adjacent = kernels.merge_adjacent
    plain_mergesort = kernels.plain_mergesort
    policy_step = policies.policy_step
    push_run = policies.push_run
    drop_bottom = policies.drop_bottom
    insert_bottom = policies.insert_bottom
    apply_merge = standard.apply_merge
    next_run_end = core.next_run_end
    normalize_runs = core.normalize_runs
    partition_short_runs = core.partition_short_runs

    @wrap
    def is_pivotable(a, start, length, lam, ms):
        return less(a[start + lam - 1], a[start + length - lam - 1], ms)

    @wrap
    def write_bits(a, start, length, lam, code, scheme, m1, m2, ms):
        """Write the lam-bit ``code`` into the run using the given scheme."""
        end = start + length
        lo = end - lam
        if scheme == PIVOT:
            for i in range(lam):
                if (code >> (lam - 1 - i)) & 1 == 0:
                    t = a[lo + i]
                    a[lo + i] = a[start + i]
                    a[start + i] = t
                    ms[MOVES] += 2
        else:
            mid = start + lam
            for i in range(lam):
                a[mid + i] = a[lo + i]
            for i in range(lam):
                if (code >> (lam - 1 - i)) & 1 == 0:
                    a[lo + i] = m1
                else:
                    a[lo + i] = m2
            a[end - lam - 1] = m2
            ms[MOVES] += 2 * lam + 1

    @wrap
    def read_bits(a, end, lam, ms):
        p = a[end - lam - 1]
        code = 0
        for i in range(lam):
            code <<= 1
            if not less(a[end - lam + i], p, ms):
                code |= 1
        return code

    @wrap
    def unwrite_bits(a, start, length, lam, code, scheme, ms):
        end = start + length
        lo = end - lam
        if scheme == PIVOT:
            for i in range(lam):
                if (code >> (lam - 1 - i)) & 1 == 0:
                    t = a[lo + i]
                    a[lo + i] = a[start + i]
                    a[start + i] = t
                    ms[MOVES] += 2
        else:
            mid = start + lam
            for i in range(lam):
                a[lo + i] = a[mid + i]
            f = a[start + lam - 1]
            for i in range(lam):
                a[mid + i] = f
            a[end - lam - 1] = f
            ms[MOVES] += 2 * lam + 1

    @wrap
    def encode_run_length(a, start, length, lam, m1, m2, ms):
        """Tag the run with its own length; returns the scheme used."""
        scheme = PIVOT if is_pivotable(a, start, length, lam, ms) else MARKER
        write_bits(a, start, length, lam, (length << 1) | scheme, scheme, m1, m2, ms)
        ms[ENCODE_OPS] += 1
        return scheme

    @wrap
    def decode_run_length(a, end, lam, ms):
        """(length, scheme) of the tagged run ending at ``end``; length -1 if the tag is invalid."""
        ms[DECODE_OPS] += 1
        if end < lam + 1:
            return -1, 0
        code = read_bits(a, end, lam, ms)
        length = code >> 1
        if length < 3 * lam + 1 or end - length < 0:
            return -1, 0
        return length, code & 1

    @wrap
    def reverse_encoding(a, start, length, scheme, lam, ms):
        unwrite_bits(a, start, length, lam, (length << 1) | scheme, scheme, ms)

    @wrap
    def find_markers(a, ms):
        """Index pair (i, j) with a[i] < a[j] from the first two distinct values, or (-1, -1)."""
        n = len(a)
        for j in range(1, n):
            if less(a[j], a[0], ms):
                return j, 0
            if less(a[0], a[j], ms):
                return 0, j
        return -1, -1

    @wrap
    def refill(a, st, hdr, lam, ms):
        # keep the window full so policies only ever read held rows
        while hdr[H_CNT] < hdr[H_CAP] and hdr[H_DEPTH] > hdr[H_CNT]:
            end = st[0, START]
            length, scheme = decode_run_length(a, end, lam, ms)
            if length < 0:
                raise RuntimeError("corrupt run encoding")
            reverse_encoding(a, end - length, length, scheme, lam, ms)
            insert_bottom(st, hdr, ms, end - length, length)

    @wrap
    def sort_jumpback(a, pid, param, kind, ms, trace, record):
        n = len(a)
        normalize_runs(a, ms)
        i1, i2 = find_markers(a, ms)
        if i1 < 0:
            return 0
        m1 = a[i1]
        m2 = a[i2]
        lam = clog2(n) + 1
        work = np.zeros(WORK_CELLS, dtype=np.int64)
        if n <= 8 * lam:
            plain_mergesort(a, 0, n, kind, ms, work)
            return 0
        split = partition_short_runs(a, 3 * lam, ms)
        if split == 0:
            plain_mergesort(a, 0, n, kind, ms, work)
            return 0
        plain_mergesort(a, split, n, kind, ms, work)

        k = CAPACITY[pid]
        st = np.zeros((k, 3), dtype=np.int64)
        hdr = np.zeros(N_HDR, dtype=np.int64)
        hdr[H_CAP] = k
        hdr[H_MODE] = VIEW_FULL
        hdr[H_N] = split
        pos = 0
        while pos < split:
            e = next_run_end(a, pos, split, ms)
            if hdr[H_CNT] == k:
                encode_run_length(a, st[0, START], st[0, LEN], lam, m1, m2, ms)
                drop_bottom(st, hdr)
            push_run(st, hdr, ms, pos, e - pos)
            pos = e
            while True:
                d = policy_step(pid, param, a, st, hdr, ms)
                if d == STOP:
                    break
                apply_merge(a, st, hdr, ms, d, kind, work, trace, record)
                refill(a, st, hdr, lam, ms)
        while hdr[H_DEPTH] > 1:
            apply_merge(a, st, hdr, ms, 1, kind, work, trace, record)
            refill(a, st, hdr, lam, ms)
        merge_adjacent(a, 0, split, n, kind, ms, work)
        return hdr[H_TRACE]

    return JumpbackImpl(is_pivotable, write_bits, read_bits, unwrite_bits, encode_run_length,
                        decode_run_length, reverse_encoding, find_markers, refill, sort_jumpback)


JumpbackImpl = collections.namedtuple(
    "JumpbackImpl",
    ("is_pivotable", "write_bits", "read_bits", "unwrite_bits", "encode_run_length",
     "decode_run_length", "reverse_encoding", "find_markers", "refill", "sort_jumpback"),
)
