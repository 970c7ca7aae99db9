import numpy as np
import pytest

from cpdgevd.datasets import load_rank5_benchmark
from cpdgevd.tensor import default_rng


@pytest.fixture(scope="session")
def bench():
    return load_rank5_benchmark()


@pytest.fixture(scope="session")
def printed_tensor(bench):
    # slices in the order they are printed
    return np.stack(bench.slices, axis=2)


@pytest.fixture
def rng():
    return default_rng(12345)


# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
