from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# Base corpus plus five connected words drawn once with random.Random(20261018)
# (n in {3, 4}, 4 <= N <= 8) and frozen here.
BASE_CORPUS = ["2: 1", "2: 1 1 1", "2: 1 1 1 1 1", "3: 1 2 1"]
RANDOM_CORPUS = ["3: 1 2 1 1 1 2", "3: 1 1 2 1", "3: 1 2 2 2", "3: 2 1 2 2 1 2 2 1", "4: 2 2 1 2 3"]
CORPUS = BASE_CORPUS + RANDOM_CORPUS
TREFOIL = "2: 1 1 1"


@pytest.fixture
def report(capsys):
    """Print one line that survives pytest's output capture."""

    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")

    return emit
