"""Input generators, the experiment grid, CSV output and trace comparison."""

from __future__ import annotations

import csv
import io
import itertools
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, field, fields
from typing import Sequence

import numpy as np

from . import api
from .core import ceil_log2, run_entropy, verify_sorted_permutation
from .kernels import MergeKind
from .policies import Policy

FAMILIES = ("uniform", "sorted", "reversed", "few-distinct", "run-profile", "counterexample-a",
            "counterexample-b")


class ConfigError(ValueError):
    pass


class VerificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class InputSpec:
    family: str
    n: int
    seed: int = 0
    alphabet: int = 4
    profile: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}")
        if self.n < 0:
            raise ConfigError("n must be non-negative")
        if self.family == "few-distinct" and self.alphabet < 1:
            raise ConfigError("alphabet must be positive")
        if self.family == "run-profile":
            if any(r < 1 for r in self.profile) or sum(self.profile) != self.n:
                raise ConfigError(f"run profile must be positive lengths summing to {self.n}")
        if self.family.startswith("counterexample"):
            counterexample_profile(self.family, self.n)

    @property
    def label(self) -> str:
        if self.family == "few-distinct":
            return f"few-distinct:{self.alphabet}"
        return self.family


def counterexample_profile(family: str, n: int) -> list:
    """Run lengths of the two TimSort-hostile families: three halving runs, then 2-runs."""
    if n % 16 or n < 16:
        raise ConfigError(f"{family} needs n divisible by 16, got {n}")
    head = [n // 2, n // 4, n // 8]
    if family == "counterexample-a":
        return head + [2] * (n // 16)
    k = n // (16 * ceil_log2(n))
    if k < 1:
        raise ConfigError(f"{family} needs n >= 16 * ceil(log2 n), got {n}")
    return head + [2] * k + [n // 8 - 2 * k]


def profile_values(profile: Sequence[int], rng) -> np.ndarray:
    """Distinct values whose ascending runs have exactly the given lengths."""
    n = int(sum(profile))
    a = rng.permutation(n).astype(np.int64)
    bounds = np.cumsum([0] + list(profile))
    for s, e in zip(bounds[:-1], bounds[1:]):
        a[s:e].sort()
    for b in bounds[1:-1]:
        if a[b - 1] < a[b]:
            a[b - 1], a[b] = a[b], a[b - 1]
    if ascending_runs(a) != list(profile):
        # a singleton run can spoil its neighbour's repair; fall back to descending bands
        a = np.empty(n, dtype=np.int64)
        top = n
        for s, e in zip(bounds[:-1], bounds[1:]):
            a[s:e] = np.arange(top - (e - s), top)
            top -= e - s
    return a


def ascending_runs(a) -> list:
    """Lengths of the maximal non-decreasing stretches, with no reversal step."""
    n = len(a)
    if n == 0:
        return []
    cuts = np.flatnonzero(np.asarray(a[1:]) < np.asarray(a[:-1])) + 1
    edges = np.concatenate(([0], cuts, [n]))
    return np.diff(edges).tolist()


def generate(spec: InputSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    if spec.family == "uniform":
        return rng.permutation(n).astype(np.int64)
    if spec.family == "sorted":
        return np.arange(n, dtype=np.int64)
    if spec.family == "reversed":
        return np.arange(n, 0, -1, dtype=np.int64)
    if spec.family == "few-distinct":
        return rng.integers(0, spec.alphabet, n).astype(np.int64)
    if spec.family == "run-profile":
        return profile_values(spec.profile, rng)
    prof = counterexample_profile(spec.family, n)
    a = profile_values(prof, rng)
    if api.run_lengths(a) != prof:
        raise ConfigError(f"generated {spec.family} does not have the intended run profile")
    return a


@dataclass
class TrialRecord:
    algorithm: str
    engine: str
    family: str
    n: int
    seed: int
    comparisons: int
    moves: int
    walkback_steps: int
    encode_ops: int
    decode_ops: int
    max_stack_depth: int
    merge_cost: int
    wall_ns: int
    entropy: float
    run_count: int


COLUMNS = tuple(f.name for f in fields(TrialRecord))


def engine_label(engine: str, kind) -> str:
    if kind is None or MergeKind(kind) == api.default_kernel(engine):
        return engine
    return f"{engine}/{MergeKind(kind).name.lower()}"


def run_trial(spec: InputSpec, policy, engine: str, kind=None, timed=True) -> TrialRecord:
    a = generate(spec)
    lengths = api.run_lengths(a)
    before = a.copy()
    t0 = time.perf_counter_ns()
    rep = api.sort(a, policy, engine, kind)
    wall = time.perf_counter_ns() - t0 if timed else 0
    pol = Policy.of(policy)
    if not verify_sorted_permutation(before, a):
        raise VerificationError(
            f"unsorted output: family={spec.label} n={spec.n} seed={spec.seed} "
            f"policy={pol.name} engine={engine}")
    m = rep.metrics
    return TrialRecord(pol.name, engine_label(engine, kind), spec.label, spec.n, spec.seed,
                       m.comparisons, m.moves, m.walkback_steps, m.encode_ops, m.decode_ops,
                       m.max_stack_depth, m.merge_cost, wall,
                       run_entropy(lengths) if lengths else 0.0, len(lengths))


def _sort_key(r: TrialRecord):
    return (r.family, r.n, r.algorithm, r.engine, r.seed)


def run_experiment(specs: Sequence[InputSpec], policies, engines, kinds=(None,), repetitions=5,
                   workers=1, timed=True) -> list:
    """One verified record per (spec, policy, engine, kernel, repetition).

    Repetition r of a spec uses seed ``spec.seed + r``.  With ``timed`` off
    wall_ns is left at 0 so that reruns produce identical records.
    """
    cells = []
    for spec, pol, eng, kind, r in itertools.product(specs, policies, engines, kinds,
                                                     range(repetitions)):
        s = InputSpec(spec.family, spec.n, spec.seed + r, spec.alphabet, spec.profile)
        cells.append((s, pol, eng, kind, timed))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            out = list(ex.map(lambda c: run_trial(*c), cells))
    else:
        out = [run_trial(*c) for c in cells]
    return sorted(out, key=_sort_key)


def median_records(records: Sequence[TrialRecord]) -> list:
    """Collapse repetitions into one row of medians per (algorithm, engine, family, n)."""
    groups = {}
    for r in records:
        groups.setdefault((r.family, r.n, r.algorithm, r.engine), []).append(r)
    out = []
    for (family, n, alg, eng), rs in sorted(groups.items()):
        med = {}
        for c in COLUMNS[5:]:
            v = statistics.median(getattr(r, c) for r in rs)
            med[c] = v if c == "entropy" else int(round(v))
        out.append(TrialRecord(alg, eng, family, n, min(r.seed for r in rs), **med))
    return out


def _format(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def report_csv(records: Sequence[TrialRecord], destination) -> None:
    if not records:
        raise ValueError("no records to write")
    rows = sorted(records, key=_sort_key)
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_format(v) for v in astuple(r)])
    text = buf.getvalue()
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise OSError(f"cannot write {os.fspath(destination)}: {e.strerror}") from e


def read_csv(source) -> list:
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="utf-8", newline="") as f:
            text = f.read()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != COLUMNS:
        raise ValueError("not a trial CSV")
    types = [f.type for f in fields(TrialRecord)]
    out = []
    for row in rows[1:]:
        vals = []
        for t, v in zip(types, row):
            vals.append(v if t == "str" else float(v) if t == "float" else int(v))
        out.append(TrialRecord(*vals))
    return out


@dataclass
class TraceComparison:
    equal: bool
    index: int = -1
    left: tuple | None = None
    right: tuple | None = None
    lengths: tuple = field(default=(0, 0))


def long_run_prefix(a) -> np.ndarray:
    """The long-run prefix the jump-back engine sorts with its policy."""
    b = np.array(a, dtype=np.int64)
    api.detect_runs(b)
    w, _ = api.partition_short_runs(b, 3 * api.jump_lambda(len(b)))
    return b[:w].copy()


def compare_traces(source, policy, engine_a, engine_b, kind_a=None, kind_b=None) -> TraceComparison:
    """Sort identical copies with two engines and report the first differing merge."""
    a = generate(source) if isinstance(source, InputSpec) else np.asarray(source)
    ta = api.sort(a.copy(), policy, engine_a, kind_a, trace=True).trace
    tb = api.sort(a.copy(), policy, engine_b, kind_b, trace=True).trace
    for i, (x, y) in enumerate(zip(ta, tb)):
        if x != y:
            return TraceComparison(False, i, x, y, (len(ta), len(tb)))
    if len(ta) != len(tb):
        i = min(len(ta), len(tb))
        x = ta[i] if i < len(ta) else None
        y = tb[i] if i < len(tb) else None
        return TraceComparison(False, i, x, y, (len(ta), len(tb)))
    return TraceComparison(True, lengths=(len(ta), len(tb)))


def random_profile(n: int, runs: int, rng) -> tuple:
    """Run lengths of ``runs`` runs with uniformly random cut points."""
    runs = max(1, min(runs, n))
    cuts = np.sort(rng.choice(np.arange(1, n), size=runs - 1, replace=False)) if runs > 1 else []
    return tuple(np.diff(np.concatenate(([0], cuts, [n]))).astype(int).tolist())


def make_spec(family: str, n: int, seed: int = 0, runs: int | None = None) -> InputSpec:
    """Build a spec from a family token such as ``few-distinct:8`` or ``run-profile``.

    ``run-profile`` draws a random profile (sqrt(n) runs unless ``runs`` is given)
    from the seed, so the spec is reproducible from the token alone.
    """
    name, _, arg = family.partition(":")
    if name == "few-distinct":
        return InputSpec(name, n, seed, alphabet=int(arg) if arg else 4)
    if name == "run-profile":
        if n == 0:
            return InputSpec(name, 0, seed)
        r = int(arg) if arg else runs if runs else max(1, int(round(n ** 0.5)))
        prof = random_profile(n, r, np.random.default_rng([seed, n, r]))
        return InputSpec(name, n, seed, profile=prof)
    return InputSpec(name, n, seed)
