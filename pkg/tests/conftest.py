import json
from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def load_complex_matrix(entries):
    return np.array([[complex(float(re), float(im)) for re, im in row] for row in entries])


@pytest.fixture(scope="session")
def w_golden():
    return json.loads((DATA / "w_triplet_golden.json").read_text())


@pytest.fixture(scope="session")
def psi_golden():
    return json.loads((DATA / "psi_golden.json").read_text())


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    def record(number, title, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: "
                                f"{title} -- {detail}")
        print(ACCEPTANCE_LINES[-1])
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
