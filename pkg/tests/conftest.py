from pathlib import Path

import numpy as np
import pytest

from reldim.algebra import path_algebra_example
from reldim.modules import direct_sum, regular_module, simple_module

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def gf7():
    return path_algebra_example("field")


@pytest.fixture(scope="session")
def a2():
    return path_algebra_example("A2")


@pytest.fixture(scope="session")
def dual():
    return path_algebra_example("dual")


@pytest.fixture(scope="session")
def k_dual(dual):
    return simple_module(dual, 0)


@pytest.fixture(scope="session")
def t_dual(dual, k_dual):
    """Lambda plus its simple, over k[x]/x^2."""
    return direct_sum([regular_module(dual), k_dual]).module


@pytest.fixture(scope="session")
def end_ctx(t_dual):
    from reldim.functor import end_algebra

    return end_algebra(t_dual, seed=0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
