"""Strictly in-place driver that keeps only the top k runs and walks back for the rest.

When a policy needs a length the window no longer holds, the view scans
leftward from the deepest held run start.  A scan that exhausts its budget
leaves nothing behind; the next probe starts over.
"""

from __future__ import annotations

import collections

import numpy as np

from .core import UNBOUNDED
from .kernels import WORK_CELLS
from .policies import CAPACITY, H_CAP, H_CNT, H_DEPTH, H_MODE, H_N, H_TRACE, N_HDR, STOP, VIEW_WALK


def make_walkback_impl(wrap, core, kernels, policies, standard):
    policy_step = policies.policy_step
    push_run = policies.push_run
    drop_bottom = policies.drop_bottom
    view_len = policies.view_len
    apply_merge = standard.apply_merge
    next_run_end = core.next_run_end
    normalize_runs = core.normalize_runs

    @wrap
    def collapse_walkback(a, st, hdr, ms, kind, work, trace, record):
        while hdr[H_DEPTH] > 1:
            view_len(a, st, hdr, ms, 2, UNBOUNDED)
            apply_merge(a, st, hdr, ms, 1, kind, work, trace, record)

    @wrap
    def sort_walkback(a, pid, param, kind, ms, trace, record):
        n = len(a)
        normalize_runs(a, ms)
        k = CAPACITY[pid]
        st = np.zeros((k, 3), dtype=np.int64)
        hdr = np.zeros(N_HDR, dtype=np.int64)
        hdr[H_CAP] = k
        hdr[H_MODE] = VIEW_WALK
        hdr[H_N] = n
        work = np.zeros(WORK_CELLS, dtype=np.int64)
        pos = 0
        while pos < n:
            e = next_run_end(a, pos, n, ms)
            if hdr[H_CNT] == k:
                drop_bottom(st, hdr)
            push_run(st, hdr, ms, pos, e - pos)
            pos = e
            while True:
                d = policy_step(pid, param, a, st, hdr, ms)
                if d == STOP:
                    break
                apply_merge(a, st, hdr, ms, d, kind, work, trace, record)
        collapse_walkback(a, st, hdr, ms, kind, work, trace, record)
        return hdr[H_TRACE]

    return WalkbackImpl(collapse_walkback, sort_walkback)


WalkbackImpl = collections.namedtuple("WalkbackImpl", ("collapse_walkback", "sort_walkback"))


def walkback_cost_report(walkback_steps: int, merge_cost: int, n: int) -> float:
    """Walk-back steps per unit of (merge cost + n)."""
    if merge_cost + n == 0:
        return 0.0
    return walkback_steps / (merge_cost + n)
