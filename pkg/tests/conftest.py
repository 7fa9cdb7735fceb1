import math

import numpy as np
import pytest

from arraydirectivity import DirectionSpec

# Lines recorded by tests/test_acceptance.py, printed once at the end of the run.
ACCEPTANCE_LINES = []


@pytest.fixture
def diag():
    """Desired direction (pi/4, pi/4) at unit wave number."""
    return DirectionSpec(math.pi / 4, math.pi / 4, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
