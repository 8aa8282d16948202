from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from fdp.data_model import Dataset

settings.register_profile("fdp", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("fdp")

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA_DIR


def make_dataset(values, labels, names=None, ids=None):
    values = np.asarray(values, dtype=float)
    k, n = values.shape
    names = names or [f"x{j + 1}" for j in range(n)]
    ids = ids or [f"S{i:03d}" for i in range(k)]
    return Dataset(names, values, labels, ids)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
