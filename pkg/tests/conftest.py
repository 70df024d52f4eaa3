import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from crowdfs import Dataset  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = Path(os.environ.get("CROWDFS_DATA_DIR", ROOT / "data"))


def make_dataset(X, y, name="toy"):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = list(y)
    labels = sorted(set(y))
    return Dataset(
        X,
        [labels.index(v) for v in y],
        tuple(f"f{j + 1}" for j in range(X.shape[1])),
        tuple(str(v) for v in labels),
        name=name,
    )


@pytest.fixture
def perfect_toy():
    """Feature 0 is the label (and a perfect 1-NN separator); feature 1 is noise."""
    rng = np.random.default_rng(3)
    y = np.array([0, 1] * 10)
    noise = rng.random(20)
    return make_dataset(np.column_stack([y.astype(float), noise]), y)


@pytest.fixture
def xor_toy():
    """Four jittered corner clusters labelled by XOR of the two coordinates."""
    rng = np.random.default_rng(11)
    rows, labels = [], []
    for cx in (0.0, 1.0):
        for cy in (0.0, 1.0):
            for _ in range(6):
                rows.append([cx + 0.05 * rng.standard_normal(), cy + 0.05 * rng.standard_normal()])
                labels.append(int(cx) ^ int(cy))
    return make_dataset(rows, labels)


_acceptance_lines = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and (
        rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed")
    ):
        title = (item.function.__doc__ or item.name).strip().splitlines()[0]
        if hasattr(item, "callspec"):
            title = f"{title} [{item.callspec.id}]"
        _acceptance_lines.append(f"[{rep.outcome.upper():6}] {title}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
