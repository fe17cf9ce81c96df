import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from frfbands import STANDARD_GRID, FrfSet  # noqa: E402


@pytest.fixture
def grid():
    return STANDARD_GRID


def random_set(n, seed, grid=STANDARD_GRID, scale=1.0):
    rng = np.random.default_rng(seed)
    m = len(grid)
    return FrfSet(grid, scale * (rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))))


@pytest.fixture
def make_set():
    return random_set


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(module.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
