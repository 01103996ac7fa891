import numpy as np
import pytest

from scatmem.core import Coupling
from scatmem.synthesis import KBounds

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20020601)


@pytest.fixture
def coupling():
    return Coupling(2.0, 2.0)


@pytest.fixture
def bounds(coupling):
    return KBounds.for_coupling(coupling)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
