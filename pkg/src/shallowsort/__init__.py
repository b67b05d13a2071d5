"""Stack-based natural mergesorts with full-stack, walk-back and jump-back engines."""

from .api import (ENGINES, MARKER, PIVOT, Decision, Engine, SortReport, decode_run_length,
                  default_kernel, detect_runs, encode_run_length, find_markers, is_pivotable,
                  jump_lambda, merge_adjacent, partition_short_runs, policy_step, read_bits,
                  reverse_encoding, run_lengths, scan_run_leftward, sort, write_bits)
from .core import (UNBOUNDED, Metrics, RunEntry, ceil_log2, run_entropy, stable_segregate,
                   verify_sorted_permutation)
from .engine_jumpback import EncodingCorruptionError
from .engine_walkback import walkback_cost_report
from .kernels import BUFFERED, ROTATION, MergeKind
from .policies import CAPACITY, POLICY_NAMES, WALKABLE, Policy, PolicyKind, node_power, shivers_level

__version__ = "0.1.0"
