import numba
import numpy as np
import pytest

from shallowsort.suite import jit_suite, py_suite

ACCEPTANCE_LINES = []


@numba.njit
def tag_lt(x, y):
    return (x >> 32) < (y >> 32)


def tagged(keys):
    """int64 values carrying the key in the high half and the input position in the low half."""
    keys = np.asarray(keys, dtype=np.int64)
    return (keys << 32) | np.arange(len(keys), dtype=np.int64)


@pytest.fixture(params=["jit", "py"])
def suite(request):
    return jit_suite() if request.param == "jit" else py_suite()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
