import numpy as np
import pytest

from subcycle.physgrid import DrivingPulse, FrequencyGrid
from subcycle.squeezing import bloch_messiah, compute_kernel

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def kernel5():
    return compute_kernel(DrivingPulse(16.0, 5.0), FrequencyGrid.from_thz(0.1, 400.0, 400))


@pytest.fixture(scope="session")
def modes5(kernel5):
    return bloch_messiah(kernel5, 1e-3)


@pytest.fixture(scope="session")
def kernel_weak():
    return compute_kernel(DrivingPulse(16.0, 0.1), FrequencyGrid.from_thz(0.1, 400.0, 400))


@pytest.fixture(scope="session")
def modes_weak(kernel_weak):
    return bloch_messiah(kernel_weak, 1e-4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
