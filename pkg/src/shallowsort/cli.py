"""Command-line front end: gen, sort, bench, stats, trace-diff."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import api, bench
from .core import run_entropy, verify_sorted_permutation
from .policies import POLICY_NAMES, Policy

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def read_array(path: str, fmt: str) -> np.ndarray:
    if fmt == "bin":
        return np.fromfile(path, dtype="<i8").astype(np.int64)
    with open(path, encoding="utf-8") as f:
        return np.array([int(tok) for tok in f.read().split()], dtype=np.int64)


def write_array(path: str, a: np.ndarray, fmt: str) -> None:
    if fmt == "bin":
        a.astype("<i8").tofile(path)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.writelines(f"{int(x)}\n" for x in a)


def _csv_list(text: str) -> list:
    return [t.strip() for t in text.split(",") if t.strip()]


def _sizes(text: str) -> list:
    out = []
    for t in _csv_list(text):
        out.append(1 << int(t[2:]) if t.startswith("2^") else int(t))
    return out


def cmd_gen(args) -> int:
    if args.family == "run-profile" and args.profile:
        prof = tuple(int(t) for t in _csv_list(args.profile))
        spec = bench.InputSpec("run-profile", sum(prof), args.seed, profile=prof)
    else:
        spec = bench.make_spec(args.family, args.n, args.seed, args.runs)
    write_array(args.out, bench.generate(spec), args.format)
    return EXIT_OK


def cmd_sort(args) -> int:
    a = read_array(args.file, args.format)
    before = a.copy()
    rep = api.sort(a, args.policy, args.engine, args.kernel)
    if args.verify and not verify_sorted_permutation(before, a):
        print(f"verification failed: {args.file}", file=sys.stderr)
        return EXIT_FAILED
    write_array(args.file, a, args.format)
    print(f"policy={rep.policy} engine={rep.engine} kernel={rep.kernel} n={rep.n}")
    for k, v in vars(rep.metrics).items():
        print(f"{k}={v}")
    return EXIT_OK


def cmd_bench(args) -> int:
    specs = []
    for n in _sizes(args.sizes):
        for fam in _csv_list(args.families):
            specs.append(bench.make_spec(fam, n, args.seed))
    kinds = [None] if not args.kernels else [k.upper() for k in _csv_list(args.kernels)]
    kinds = [None if k is None else api.MergeKind[k] for k in kinds]
    records = bench.run_experiment(specs, _csv_list(args.policies), _csv_list(args.engines),
                                   kinds, args.reps, args.workers, timed=not args.no_timing)
    if args.medians:
        records = bench.median_records(records)
    if args.out == "-":
        bench.report_csv(records, sys.stdout)
    else:
        bench.report_csv(records, args.out)
        print(f"wrote {len(records)} rows to {args.out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    a = read_array(args.file, args.format)
    lengths = api.run_lengths(a)
    h = run_entropy(lengths) if lengths else 0.0
    print(f"n={len(a)}")
    print(f"runs={len(lengths)}")
    print(f"entropy={h:.6f}")
    return EXIT_OK


def cmd_trace_diff(args) -> int:
    if args.file:
        src = read_array(args.file, args.format)
    else:
        src = bench.make_spec(args.family, args.n, args.seed)
    if args.long_prefix:
        src = bench.long_run_prefix(src if isinstance(src, np.ndarray) else bench.generate(src))
    res = bench.compare_traces(src, args.policy, args.engine_a, args.engine_b)
    if res.equal:
        print(f"traces equal ({res.lengths[0]} merges)")
        return EXIT_OK
    print(f"traces differ at merge {res.index}: {args.engine_a}={res.left} "
          f"{args.engine_b}={res.right} (lengths {res.lengths[0]} vs {res.lengths[1]})")
    return EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shallowsort",
                                description="In-place natural mergesorts and their benchmark harness.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_format(sp):
        sp.add_argument("--format", choices=("text", "bin"), default="text",
                        help="one decimal integer per line, or raw little-endian int64")

    g = sub.add_parser("gen", help="write a generated input file")
    g.add_argument("--family", required=True,
                   help="uniform, sorted, reversed, few-distinct[:A], run-profile[:R], "
                        "counterexample-a, counterexample-b")
    g.add_argument("--n", type=int, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--runs", type=int, default=None, help="run count for run-profile")
    g.add_argument("--profile", default="", help="explicit run lengths for run-profile, e.g. 5,1,6")
    g.add_argument("--out", required=True)
    add_format(g)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("sort", help="sort a file in place")
    s.add_argument("file")
    s.add_argument("--policy", default="powersort", help=f"one of {', '.join(POLICY_NAMES)}; "
                   "alpha/c via name:value")
    s.add_argument("--engine", choices=api.ENGINES, default="standard")
    s.add_argument("--kernel", choices=("buffered", "rotation"), default=None)
    s.add_argument("--verify", action="store_true")
    add_format(s)
    s.set_defaults(func=cmd_sort)

    b = sub.add_parser("bench", help="run an experiment grid and write CSV")
    b.add_argument("--families", default="uniform")
    b.add_argument("--sizes", default="2^14", help="comma list; 2^k allowed")
    b.add_argument("--policies", default="powersort")
    b.add_argument("--engines", default="standard,walkback,jumpback")
    b.add_argument("--kernels", default="", help="comma list of buffered/rotation; "
                   "default uses each engine's own kernel")
    b.add_argument("--reps", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--medians", action="store_true", help="one row of medians per cell")
    b.add_argument("--no-timing", action="store_true", help="write wall_ns as 0")
    b.add_argument("--out", default="-")
    b.set_defaults(func=cmd_bench)

    st = sub.add_parser("stats", help="entropy and run count of a file")
    st.add_argument("file")
    add_format(st)
    st.set_defaults(func=cmd_stats)

    t = sub.add_parser("trace-diff", help="compare merge traces of two engines")
    t.add_argument("--file", default=None)
    t.add_argument("--family", default="uniform")
    t.add_argument("--n", type=int, default=4096)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--policy", default="powersort")
    t.add_argument("--engine-a", choices=api.ENGINES, default="standard")
    t.add_argument("--engine-b", choices=api.ENGINES, default="walkback")
    t.add_argument("--long-prefix", action="store_true",
                   help="use only the long-run prefix the jump-back engine works on")
    add_format(t)
    t.set_defaults(func=cmd_trace_diff)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "policy", None):
            Policy.of(args.policy)
        return args.func(args)
    except (bench.ConfigError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except bench.VerificationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
