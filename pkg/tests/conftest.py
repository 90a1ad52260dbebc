import random
from pathlib import Path

import pytest

from mid.compressors import CompressionSource, SizeCache

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def src():
    return CompressionSource(cache=SizeCache())


@pytest.fixture(scope="session")
def corpus_dir():
    return FIXTURES / "corpus"


@pytest.fixture(scope="session")
def counterexample_dir():
    return FIXTURES / "counterexample"


def seeded_random(seed: int, n: int) -> bytes:
    return random.Random(seed).randbytes(n)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
