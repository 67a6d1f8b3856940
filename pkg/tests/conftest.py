import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config.stash[_RESULTS] = []


@pytest.fixture
def criterion(request):
    """Record an acceptance verdict; the summary prints one line per criterion."""
    results = request.config.stash[_RESULTS]

    def record(label, passed, detail=""):
        results.append((label, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in sorted(results, key=lambda r: _key(r[0])):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")


def _key(label):
    head = label.split()[0]
    digits = "".join(c for c in head if c.isdigit())
    return (int(digits) if digits else 0, label)
