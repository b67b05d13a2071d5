"""Assembles the kernel factories into a compiled or interpreted suite."""

from __future__ import annotations

import functools
from types import SimpleNamespace

from .core import make_core_impl
from .engine_jumpback import make_jumpback_impl
from .engine_standard import make_standard_impl
from .engine_walkback import make_walkback_impl
from .kernels import make_kernel_impl
from .policies import make_policy_impl


def _identity(f):
    return f


def build_suite(wrap, lt=None) -> SimpleNamespace:
    core = make_core_impl(wrap, lt)
    kernels = make_kernel_impl(wrap, core)
    policies = make_policy_impl(wrap, core)
    standard = make_standard_impl(wrap, core, kernels, policies)
    walkback = make_walkback_impl(wrap, core, kernels, policies, standard)
    jumpback = make_jumpback_impl(wrap, core, kernels, policies, standard)
    return SimpleNamespace(core=core, kernels=kernels, policies=policies, standard=standard,
                           walkback=walkback, jumpback=jumpback, compiled=wrap is not _identity)


@functools.lru_cache(maxsize=None)
def jit_suite(lt=None) -> SimpleNamespace:
    """Suite compiled with numba for int64/float64 arrays; ``lt`` must be jit-compilable."""
    import numba

    return build_suite(functools.partial(numba.njit, nogil=True), lt)


def py_suite(lt=None) -> SimpleNamespace:
    """Interpreted suite; works on any indexable sequence and any ``lt``."""
    return build_suite(_identity, lt)
