"""Shared fixtures and the acceptance summary printed at the end of a run."""

from importlib import resources

import numpy as np
import pytest

from sigtron.data import Dataset

ACCEPTANCE = {}


def record(number, ok, detail):
    """Remember one acceptance verdict; :func:`pytest_terminal_summary` prints it."""
    ACCEPTANCE[number] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def fixture_paths():
    base = resources.files("sigtron") / "fixtures"
    return str(base / "imbalanced_train.csv"), str(base / "imbalanced_test.csv")


@pytest.fixture
def blobs():
    """Two well separated 2-d Gaussian classes, 30 points each."""
    rng = np.random.default_rng(7)
    X = np.vstack([rng.normal([2.0, 1.0], 0.7, (30, 2)), rng.normal([-2.0, -1.0], 0.7, (30, 2))])
    y = np.r_[np.ones(30, int), -np.ones(30, int)]
    return Dataset(X, y)


@pytest.fixture
def three_blobs():
    rng = np.random.default_rng(11)
    centers = np.array([[3.0, 0.0], [-3.0, 0.0], [0.0, 3.0]])
    X = np.vstack([rng.normal(c, 0.6, (20, 2)) for c in centers])
    y = np.repeat(np.arange(3), 20)
    return Dataset(X, y, ("a", "b", "c"), binary=False)
