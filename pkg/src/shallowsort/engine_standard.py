"""Reference driver: an unbounded run stack where every length is known."""

from __future__ import annotations

import collections

import numpy as np

from .core import POWER_MISMATCHES
from .kernels import WORK_CELLS
from .policies import (AUX, H_CNT, H_DEPTH, H_N, H_TRACE, LEN, MERGE_R3_R2, START, STOP,
                       VIEW_FULL, N_HDR, H_CAP, H_MODE, POWERSORT)


def make_standard_impl(wrap, core, kernels, policies):
    merge_adjacent = kernels.merge_adjacent
    policy_step = policies.policy_step
    npow = policies.node_power
    push_run = policies.push_run
    next_run_end = core.next_run_end
    normalize_runs = core.normalize_runs

    @wrap
    def apply_merge(a, st, hdr, ms, which, kind, work, trace, record):
        """Merge R3 into R2 (``which`` == MERGE_R3_R2) or R2 into R1; both rows must be held."""
        cnt = hdr[H_CNT]
        i = cnt - 3 if which == MERGE_R3_R2 else cnt - 2
        lo = st[i, START]
        ll = st[i, LEN]
        rl = st[i + 1, LEN]
        merge_adjacent(a, lo, lo + ll, lo + ll + rl, kind, ms, work)
        if record:
            t = hdr[H_TRACE]
            trace[t, 0] = lo
            trace[t, 1] = ll
            trace[t, 2] = rl
            hdr[H_TRACE] = t + 1
        # the merged run keeps the upper run's label, hence its aux
        st[i, LEN] = ll + rl
        st[i, AUX] = st[i + 1, AUX]
        for t in range(i + 1, cnt - 1):
            st[t, START] = st[t + 1, START]
            st[t, LEN] = st[t + 1, LEN]
            st[t, AUX] = st[t + 1, AUX]
        hdr[H_CNT] = cnt - 1
        hdr[H_DEPTH] -= 1

    @wrap
    def recheck_powers(st, hdr, ms):
        """Recompute every cached power and count those that moved."""
        n = hdr[H_N]
        for i in range(hdr[H_CNT] - 1):
            cached = st[i, AUX]
            if cached >= 0:
                lo = st[i, START]
                m1 = 2 * lo + st[i, LEN]
                m2 = 2 * st[i + 1, START] + st[i + 1, LEN]
                if npow(m1, m2, n) != cached:
                    ms[POWER_MISMATCHES] += 1

    @wrap
    def sort_standard(a, pid, param, kind, ms, trace, record, check_powers):
        n = len(a)
        normalize_runs(a, ms)
        st = np.zeros((n + 1, 3), dtype=np.int64)
        hdr = np.zeros(N_HDR, dtype=np.int64)
        hdr[H_CAP] = n + 1
        hdr[H_MODE] = VIEW_FULL
        hdr[H_N] = n
        work = np.zeros(WORK_CELLS, dtype=np.int64)
        pos = 0
        while pos < n:
            e = next_run_end(a, pos, n, ms)
            push_run(st, hdr, ms, pos, e - pos)
            pos = e
            while True:
                d = policy_step(pid, param, a, st, hdr, ms)
                if d == STOP:
                    break
                apply_merge(a, st, hdr, ms, d, kind, work, trace, record)
                if check_powers and pid == POWERSORT:
                    recheck_powers(st, hdr, ms)
        while hdr[H_DEPTH] > 1:
            apply_merge(a, st, hdr, ms, 1, kind, work, trace, record)
        return hdr[H_TRACE]

    return StandardImpl(apply_merge, recheck_powers, sort_standard)


StandardImpl = collections.namedtuple("StandardImpl", ("apply_merge", "recheck_powers", "sort_standard"))
