import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fermi_gig.rng import SplitMix64  # noqa: E402

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def rng():
    return SplitMix64(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


def fro(a):
    return float(np.linalg.norm(a))
