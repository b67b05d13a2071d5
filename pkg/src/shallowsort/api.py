"""Public entry points.

Numeric numpy arrays (and plain lists of ints or floats) go through the
numba-compiled suite.  Anything else, or any plain Python ``lt``, goes
through the interpreted suite, which is the same code without compilation.
A comparator compiled with ``numba.njit`` keeps the compiled path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import UNBOUNDED, Metrics, RunEntry, ceil_log2, new_counters
from .engine_jumpback import MARKER, PIVOT, EncodingCorruptionError
from .kernels import BUFFERED, ROTATION, MergeKind, new_work
from .policies import (MERGE_R2_R1, MERGE_R3_R2, STOP, VIEW_FULL, H_CNT, H_DEPTH, N_HDR, H_CAP,
                       H_MODE, H_N, Policy)
from .suite import jit_suite, py_suite


class Engine(str, enum.Enum):
    STANDARD = "standard"
    WALKBACK = "walkback"
    JUMPBACK = "jumpback"


ENGINES = tuple(e.value for e in Engine)


class Decision(enum.IntEnum):
    STOP = STOP
    MERGE_R2_R1 = MERGE_R2_R1
    MERGE_R3_R2 = MERGE_R3_R2


def default_kernel(engine) -> MergeKind:
    return MergeKind.BUFFERED if Engine(engine) is Engine.STANDARD else MergeKind.ROTATION


def _kind(kernel) -> MergeKind:
    if isinstance(kernel, str):
        return MergeKind[kernel.upper()]
    return MergeKind(kernel)


@dataclass
class SortReport:
    policy: str
    engine: str
    kernel: str
    n: int
    metrics: Metrics
    trace: list = field(default_factory=list)


def _numeric(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype.kind in "if" and a.ndim == 1


def _is_jitted(lt) -> bool:
    return lt is not None and hasattr(lt, "py_func")


def _prepare(a, lt):
    """(suite, working array, write-back target or None)."""
    if lt is None or _is_jitted(lt):
        if _numeric(a):
            return jit_suite(lt), a, None
        if isinstance(a, list) and all(type(x) is int for x in a):
            try:
                return jit_suite(lt), np.array(a, dtype=np.int64), a
            except OverflowError:
                pass
    return py_suite(lt.py_func if _is_jitted(lt) else lt), a, None


def _write_back(target, work):
    if target is not None:
        target[:] = work.tolist()


def sort(a, policy="powersort", engine="standard", kernel=None, lt=None, trace=False,
         check_powers=False) -> SortReport:
    """Sort ``a`` in place and report the instrumentation counters.

    ``trace`` records every policy-driven merge as (left.start, left.len,
    right.len).  ``check_powers`` makes the standard engine recompute every
    cached PowerSort power after each merge and count mismatches.
    """
    pol = Policy.of(policy)
    eng = Engine(engine)
    kind = default_kernel(eng) if kernel is None else _kind(kernel)
    suite, arr, target = _prepare(a, lt)
    n = len(arr)
    ms = new_counters()
    rows = np.zeros((max(n, 1) if trace else 1, 3), dtype=np.int64)
    pid, param = int(pol.kind), float(pol.param)
    if eng is Engine.STANDARD:
        t = suite.standard.sort_standard(arr, pid, param, int(kind), ms, rows, bool(trace),
                                         bool(check_powers))
    elif eng is Engine.WALKBACK:
        t = suite.walkback.sort_walkback(arr, pid, param, int(kind), ms, rows, bool(trace))
    else:
        t = suite.jumpback.sort_jumpback(arr, pid, param, int(kind), ms, rows, bool(trace))
    _write_back(target, arr)
    steps = [tuple(int(v) for v in r) for r in rows[:t]] if trace else []
    return SortReport(pol.name, eng.value, kind.name.lower(), n, Metrics.from_array(ms), steps)


def detect_runs(a, lt=None) -> list:
    """Normalize ``a`` in place (descending runs reversed) and list its runs."""
    suite, arr, target = _prepare(a, lt)
    out = np.zeros((max(len(arr), 1), 2), dtype=np.int64)
    k = suite.core.fill_runs(arr, out, new_counters())
    _write_back(target, arr)
    return [RunEntry(int(s), int(r)) for s, r in out[:k]]


def run_lengths(a, lt=None) -> list:
    """Run lengths of a copy of ``a``; ``a`` itself is untouched."""
    b = a.copy() if isinstance(a, np.ndarray) else list(a)
    return [r.len for r in detect_runs(b, lt)]


def scan_run_leftward(a, end, budget=UNBOUNDED, lt=None, metrics=None):
    """Length of the run ending at ``end``, or None once ``budget`` cells were inspected."""
    suite, arr, _ = _prepare(a, lt)
    ms = new_counters() if metrics is None else metrics
    r = suite.core.scan_run_leftward(arr, end, budget, ms)
    return None if r < 0 else int(r)


def partition_short_runs(a, threshold, lt=None):
    """Move short runs behind long ones; returns (long_region_len, Metrics)."""
    suite, arr, target = _prepare(a, lt)
    ms = new_counters()
    w = suite.core.partition_short_runs(arr, threshold, ms)
    _write_back(target, arr)
    return int(w), Metrics.from_array(ms)


def merge_adjacent(a, left: RunEntry, right: RunEntry, kind=MergeKind.BUFFERED, lt=None,
                   metrics=None) -> RunEntry:
    if left.start + left.len != right.start:
        raise ValueError("runs are not adjacent")
    suite, arr, target = _prepare(a, lt)
    ms = new_counters() if metrics is None else metrics
    suite.kernels.merge_adjacent(arr, left.start, right.start, right.start + right.len,
                                 int(_kind(kind)), ms, new_work())
    _write_back(target, arr)
    return RunEntry(left.start, left.len + right.len, right.aux)


def policy_step(policy, lengths, depth=None, n=None) -> Decision:
    """Decision of ``policy`` for a full stack whose run lengths are ``lengths`` (bottom first).

    ``depth`` may exceed len(lengths) to model runs below the ones given;
    those are never read by a decision that only needs the given ones.
    """
    pol = Policy.of(policy)
    lengths = list(lengths)
    depth = len(lengths) if depth is None else depth
    st = np.zeros((max(len(lengths), 1) + 1, 3), dtype=np.int64)
    hdr = np.zeros(N_HDR, dtype=np.int64)
    pos = (n or sum(lengths)) - sum(lengths)
    for i, r in enumerate(lengths):
        st[i] = (pos, r, -1)
        pos += r
    hdr[H_CNT] = len(lengths)
    hdr[H_DEPTH] = depth
    hdr[H_CAP] = len(st)
    hdr[H_MODE] = VIEW_FULL
    hdr[H_N] = n or sum(lengths)
    suite = py_suite()
    d = suite.policies.policy_step(int(pol.kind), float(pol.param), None, st, hdr, new_counters())
    return Decision(d)


def jump_lambda(n: int) -> int:
    """Bits per length tag for arrays of size n; runs up to 3x this are short."""
    return ceil_log2(n) + 1


def find_markers(a, lt=None):
    """The first two distinct values as (smaller, larger), or None if all are equal."""
    suite, arr, _ = _prepare(a, lt)
    i, j = suite.jumpback.find_markers(arr, new_counters())
    if i < 0:
        return None
    return arr[i], arr[j]


def is_pivotable(a, start, length, lam, lt=None) -> bool:
    suite, arr, _ = _prepare(a, lt)
    return bool(suite.jumpback.is_pivotable(arr, start, length, lam, new_counters()))


def write_bits(a, start, length, lam, bits, scheme, markers=None, lt=None):
    """Write an explicit bit string (most significant first) into a run."""
    if len(bits) != lam:
        raise ValueError("need exactly lam bits")
    code = 0
    for b in bits:
        code = (code << 1) | (1 if b else 0)
    suite, arr, target = _prepare(a, lt)
    m1, m2 = markers if markers is not None else (arr[start], arr[start])
    suite.jumpback.write_bits(arr, start, length, lam, code, int(scheme), m1, m2, new_counters())
    _write_back(target, arr)


def read_bits(a, end, lam, lt=None) -> list:
    suite, arr, _ = _prepare(a, lt)
    code = suite.jumpback.read_bits(arr, end, lam, new_counters())
    return [(code >> (lam - 1 - i)) & 1 for i in range(lam)]


def encode_run_length(a, start, length, lam, markers, lt=None, metrics=None) -> int:
    """Tag a long run with its own length; returns PIVOT or MARKER."""
    if length < 3 * lam + 1:
        raise ValueError("run too short to carry a length tag")
    if length >= 1 << (lam - 1):
        raise ValueError("run too long for a lam-bit tag")
    suite, arr, target = _prepare(a, lt)
    ms = new_counters() if metrics is None else metrics
    m1, m2 = markers
    s = suite.jumpback.encode_run_length(arr, start, length, lam, m1, m2, ms)
    _write_back(target, arr)
    return int(s)


def decode_run_length(a, end, lam, lt=None, metrics=None):
    """(length, scheme) of the tagged run ending at ``end``."""
    suite, arr, _ = _prepare(a, lt)
    ms = new_counters() if metrics is None else metrics
    length, scheme = suite.jumpback.decode_run_length(arr, end, lam, ms)
    if length < 0:
        raise EncodingCorruptionError(f"no valid length tag ends at {end}")
    return int(length), int(scheme)


def reverse_encoding(a, start, length, scheme, lam, lt=None, metrics=None):
    suite, arr, target = _prepare(a, lt)
    ms = new_counters() if metrics is None else metrics
    suite.jumpback.reverse_encoding(arr, start, length, int(scheme), lam, ms)
    _write_back(target, arr)


__all__ = [
    "BUFFERED", "ROTATION", "PIVOT", "MARKER", "Engine", "ENGINES", "Decision", "SortReport",
    "default_kernel", "sort", "detect_runs", "run_lengths", "scan_run_leftward",
    "partition_short_runs", "merge_adjacent", "policy_step", "jump_lambda", "find_markers",
    "is_pivotable", "write_bits", "read_bits", "encode_run_length", "decode_run_length",
    "reverse_encoding",
]
