"""Merge policies evaluated against a (possibly shallow) view of the run stack.

Stack state is two int64 arrays so the same code runs compiled or not:

``st``  -- (capacity, 3) rows of (start, len, aux), bottom row first; the
          top run R1 is row ``cnt - 1``.
``hdr`` -- scalars: known-row count, logical stack height, capacity, view
          mode, the array length used for node powers and the number of
          merge-trace rows written so far.

A policy asks for r_j through :func:`view_len` together with a budget.  A
full view answers exactly.  A walk view scans leftward for rows it does not
hold and answers -1 when the budget runs out; every budget below is chosen
so that -1 can only happen when the comparison it feeds is false.
"""

from __future__ import annotations

import collections
import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import MAX_STACK_DEPTH, PUSHES, UNBOUNDED

START = 0
LEN = 1
AUX = 2

H_CNT = 0
H_DEPTH = 1
H_CAP = 2
H_MODE = 3
H_N = 4
H_TRACE = 5
N_HDR = 6

VIEW_FULL = 0
VIEW_WALK = 1

STOP = 0
MERGE_R2_R1 = 1
MERGE_R3_R2 = 2


class PolicyKind(enum.IntEnum):
    POWERSORT = 0
    CADAPTIVE_SHIVERS = 1
    SHIVERS = 2
    ALPHA_STACK = 3
    TWO_MERGE = 4
    ALPHA_MERGE = 5
    TIMSORT = 6
    ORIGINAL_TIMSORT = 7


POWERSORT = 0
CADAPTIVE_SHIVERS = 1
SHIVERS = 2
ALPHA_STACK = 3
TWO_MERGE = 4
ALPHA_MERGE = 5
TIMSORT = 6
ORIGINAL_TIMSORT = 7

# Shallow-stack capacity k per policy, indexed by PolicyKind.
CAPACITY = np.array([3, 3, 2, 2, 3, 4, 4, 4], dtype=np.int64)

_DEFAULT_PARAM = {
    PolicyKind.CADAPTIVE_SHIVERS: 1.0,
    PolicyKind.ALPHA_STACK: 2.0,
    PolicyKind.ALPHA_MERGE: 1.8,
}

_NAMES = {
    "powersort": PolicyKind.POWERSORT,
    "cadaptive-shivers": PolicyKind.CADAPTIVE_SHIVERS,
    "shivers": PolicyKind.SHIVERS,
    "alpha-stack": PolicyKind.ALPHA_STACK,
    "two-merge": PolicyKind.TWO_MERGE,
    "alpha-merge": PolicyKind.ALPHA_MERGE,
    "timsort": PolicyKind.TIMSORT,
    "original-timsort": PolicyKind.ORIGINAL_TIMSORT,
}

POLICY_NAMES = tuple(_NAMES)
WALKABLE = ("powersort", "cadaptive-shivers", "shivers", "alpha-stack", "two-merge",
            "original-timsort")


@dataclass(frozen=True)
class Policy:
    """A merge policy and its real parameter (c or alpha; ignored by the others)."""

    kind: PolicyKind
    param: float = 0.0

    def __post_init__(self):
        if self.kind == PolicyKind.CADAPTIVE_SHIVERS and not self.param > 0:
            raise ValueError("c must be positive")
        if self.kind in (PolicyKind.ALPHA_STACK, PolicyKind.ALPHA_MERGE) and not self.param > 1:
            raise ValueError("alpha must exceed 1")

    @classmethod
    def of(cls, kind, param: float | None = None) -> "Policy":
        if isinstance(kind, Policy):
            return kind
        if isinstance(kind, str):
            name, _, arg = kind.partition(":")
            kind = _NAMES[name]
            if arg:
                param = float(arg)
        kind = PolicyKind(kind)
        if param is None:
            param = _DEFAULT_PARAM.get(kind, 0.0)
        return cls(kind, float(param))

    @property
    def name(self) -> str:
        base = next(k for k, v in _NAMES.items() if v == self.kind)
        if self.kind in _DEFAULT_PARAM:
            return f"{base}:{self.param:g}"
        return base

    @property
    def capacity(self) -> int:
        return int(CAPACITY[self.kind])


def node_power(mid_left_x2, mid_right_x2, n):
    """Depth of the shallowest tree node in the doubled-midpoint interval (left, right].

    The tree is the perfect binary tree laid over [0, n): its root sits at the
    array centre with depth 0.  Midpoints are passed doubled (2*start + len)
    so they stay integral; a run's doubled midpoint is always below 2n.
    """
    two_n = 2 * n
    p = 1
    while (mid_left_x2 << p) // two_n == (mid_right_x2 << p) // two_n:
        p += 1
    return p - 1


def shivers_level(r, c):
    """floor(log2(r / c)); negative when r < c."""
    m, e = math.frexp(r / c)
    return e - 1


def make_policy_impl(wrap, core):
    scan_run_leftward = core.scan_run_leftward
    npow = wrap(node_power)
    level = wrap(shivers_level)

    @wrap
    def view_len(a, st, hdr, ms, j, budget):
        """r_j, or -1 when the walk exhausts ``budget`` before finding the run start."""
        cnt = hdr[H_CNT]
        if j <= cnt:
            return st[cnt - j, LEN]
        if hdr[H_MODE] != VIEW_WALK:
            raise RuntimeError("stack view lost a run it should hold")
        end = st[0, START]
        length = -1
        for d in range(cnt + 1, j + 1):
            b = budget if d == j else UNBOUNDED
            length = scan_run_leftward(a, end, b, ms)
            if length < 0:
                return -1
            c = hdr[H_CNT]
            if c < hdr[H_CAP]:
                for t in range(c, 0, -1):
                    st[t, START] = st[t - 1, START]
                    st[t, LEN] = st[t - 1, LEN]
                    st[t, AUX] = st[t - 1, AUX]
                st[0, START] = end - length
                st[0, LEN] = length
                st[0, AUX] = -1
                hdr[H_CNT] = c + 1
                if c + 1 > ms[MAX_STACK_DEPTH]:
                    ms[MAX_STACK_DEPTH] = c + 1
            end -= length
        return length

    @wrap
    def view_aux(st, hdr, j):
        cnt = hdr[H_CNT]
        if j <= cnt:
            return st[cnt - j, AUX]
        return -1

    @wrap
    def view_set_aux(st, hdr, j, v):
        cnt = hdr[H_CNT]
        if j <= cnt:
            st[cnt - j, AUX] = v

    @wrap
    def push_run(st, hdr, ms, start, length):
        cnt = hdr[H_CNT]
        st[cnt, START] = start
        st[cnt, LEN] = length
        st[cnt, AUX] = -1
        hdr[H_CNT] = cnt + 1
        hdr[H_DEPTH] += 1
        ms[PUSHES] += 1
        if cnt + 1 > ms[MAX_STACK_DEPTH]:
            ms[MAX_STACK_DEPTH] = cnt + 1

    @wrap
    def drop_bottom(st, hdr):
        """Forget the deepest held row (the run itself stays on the logical stack)."""
        cnt = hdr[H_CNT]
        for t in range(cnt - 1):
            st[t, START] = st[t + 1, START]
            st[t, LEN] = st[t + 1, LEN]
            st[t, AUX] = st[t + 1, AUX]
        hdr[H_CNT] = cnt - 1

    @wrap
    def insert_bottom(st, hdr, ms, start, length):
        cnt = hdr[H_CNT]
        for t in range(cnt, 0, -1):
            st[t, START] = st[t - 1, START]
            st[t, LEN] = st[t - 1, LEN]
            st[t, AUX] = st[t - 1, AUX]
        st[0, START] = start
        st[0, LEN] = length
        st[0, AUX] = -1
        hdr[H_CNT] = cnt + 1
        if cnt + 1 > ms[MAX_STACK_DEPTH]:
            ms[MAX_STACK_DEPTH] = cnt + 1

    @wrap
    def powersort_step(a, st, hdr, ms):
        if hdr[H_DEPTH] < 2:
            return STOP
        n = hdr[H_N]
        cnt = hdr[H_CNT]
        s1 = st[cnt - 1, START]
        r1 = st[cnt - 1, LEN]
        r2 = view_len(a, st, hdr, ms, 2, UNBOUNDED)
        s2 = s1 - r2
        p2 = npow(2 * s2 + r2, 2 * s1 + r1, n)
        view_set_aux(st, hdr, 2, p2)
        if hdr[H_DEPTH] < 3:
            return STOP
        p3 = view_aux(st, hdr, 3)
        if p3 < 0:
            # a run of length >= n / 2**p2 has power <= p2
            budget = ((n + (1 << p2) - 1) >> p2) + 1
            r3 = view_len(a, st, hdr, ms, 3, budget)
            if r3 < 0:
                return STOP
            p3 = npow(2 * (s2 - r3) + r3, 2 * s2 + r2, n)
            view_set_aux(st, hdr, 3, p3)
        if p3 > p2:
            return MERGE_R3_R2
        return STOP

    @wrap
    def cadaptive_shivers_step(a, st, hdr, ms, c):
        if hdr[H_DEPTH] < 3:
            return STOP
        r1 = view_len(a, st, hdr, ms, 1, UNBOUNDED)
        r2 = view_len(a, st, hdr, ms, 2, UNBOUNDED)
        big = r1 if r1 > r2 else r2
        r3 = view_len(a, st, hdr, ms, 3, 2 * big + 1)
        if r3 < 0:
            return STOP
        l1 = level(r1, c)
        l2 = level(r2, c)
        top = l1 if l1 > l2 else l2
        if level(r3, c) <= top:
            return MERGE_R3_R2
        return STOP

    @wrap
    def shivers_step(a, st, hdr, ms):
        if hdr[H_DEPTH] < 2:
            return STOP
        r1 = view_len(a, st, hdr, ms, 1, UNBOUNDED)
        r2 = view_len(a, st, hdr, ms, 2, 2 * r1)
        if r2 < 0:
            return STOP
        if (1 << level(r2, 1.0)) <= r1:
            return MERGE_R2_R1
        return STOP

    @wrap
    def alpha_stack_step(a, st, hdr, ms, alpha):
        if hdr[H_DEPTH] < 2:
            return STOP
        r1 = view_len(a, st, hdr, ms, 1, UNBOUNDED)
        r2 = view_len(a, st, hdr, ms, 2, int(math.ceil(alpha * r1)))
        if r2 >= 0 and r2 < alpha * r1:
            return MERGE_R2_R1
        return STOP

    @wrap
    def two_merge_step(a, st, hdr, ms):
        if hdr[H_DEPTH] < 3:
            return STOP
        r1 = view_len(a, st, hdr, ms, 1, UNBOUNDED)
        r2 = view_len(a, st, hdr, ms, 2, 2 * r1)
        if r2 < 0 or not r2 < 2 * r1:
            return STOP
        r3 = view_len(a, st, hdr, ms, 3, r1)
        if r3 >= 0 and r3 < r1:
            return MERGE_R3_R2
        return MERGE_R2_R1

    @wrap
    def alpha_merge_step(a, st, hdr, ms, alpha):
        # runs below the bottom of the stack count as infinitely long
        depth = hdr[H_DEPTH]
        if depth < 2:
            return STOP
        r1 = view_len(a, st, hdr, ms, 1, UNBOUNDED)
        r2 = view_len(a, st, hdr, ms, 2, int(math.ceil(alpha * r1)))
        if not (r2 >= 0 and r2 < alpha * r1):
            if depth < 3:
                return STOP
            r2 = view_len(a, st, hdr, ms, 2, UNBOUNDED)
            r3 = view_len(a, st, hdr, ms, 3, int(math.ceil(alpha * r2)))
            if not (r3 >= 0 and r3 < alpha * r2):
                return STOP
        if depth < 3:
            return MERGE_R2_R1
        r3 = view_len(a, st, hdr, ms, 3, r1)
        if r3 >= 0 and r3 < r1:
            return MERGE_R3_R2
        return MERGE_R2_R1

    @wrap
    def timsort_step(a, st, hdr, ms, fourth):
        depth = hdr[H_DEPTH]
        r1 = view_len(a, st, hdr, ms, 1, UNBOUNDED)
        if depth > 3:
            r3 = view_len(a, st, hdr, ms, 3, r1)
            if r3 >= 0 and r1 > r3:
                return MERGE_R3_R2
        if depth > 2:
            r2 = view_len(a, st, hdr, ms, 2, r1)
            if r2 >= 0 and r1 >= r2:
                return MERGE_R2_R1
        if depth > 3:
            r2 = view_len(a, st, hdr, ms, 2, UNBOUNDED)
            r3 = view_len(a, st, hdr, ms, 3, r1 + r2)
            if r3 >= 0 and r1 + r2 >= r3:
                return MERGE_R2_R1
        if fourth and depth > 4:
            r2 = view_len(a, st, hdr, ms, 2, UNBOUNDED)
            r3 = view_len(a, st, hdr, ms, 3, UNBOUNDED)
            r4 = view_len(a, st, hdr, ms, 4, r2 + r3)
            if r4 >= 0 and r2 + r3 >= r4:
                return MERGE_R2_R1
        return STOP

    @wrap
    def policy_step(pid, param, a, st, hdr, ms):
        """Next action of policy ``pid`` for the current stack."""
        if pid == POWERSORT:
            return powersort_step(a, st, hdr, ms)
        if pid == CADAPTIVE_SHIVERS:
            return cadaptive_shivers_step(a, st, hdr, ms, param)
        if pid == SHIVERS:
            return shivers_step(a, st, hdr, ms)
        if pid == ALPHA_STACK:
            return alpha_stack_step(a, st, hdr, ms, param)
        if pid == TWO_MERGE:
            return two_merge_step(a, st, hdr, ms)
        if pid == ALPHA_MERGE:
            return alpha_merge_step(a, st, hdr, ms, param)
        if pid == TIMSORT:
            return timsort_step(a, st, hdr, ms, True)
        return timsort_step(a, st, hdr, ms, False)

    return PolicyImpl(npow, level, view_len, view_aux, view_set_aux, push_run, drop_bottom,
                      insert_bottom, policy_step)


PolicyImpl = collections.namedtuple(
    "PolicyImpl",
    ("node_power", "shivers_level", "view_len", "view_aux", "view_set_aux", "push_run",
     "drop_bottom", "insert_bottom", "policy_step"),
)


def new_stack(capacity: int, mode: int, n: int):
    st = np.zeros((max(capacity, 1), 3), dtype=np.int64)
    hdr = np.zeros(N_HDR, dtype=np.int64)
    hdr[H_CAP] = capacity
    hdr[H_MODE] = mode
    hdr[H_N] = n
    return st, hdr
