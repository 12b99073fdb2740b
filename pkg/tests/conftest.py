import numpy as np
import pytest

from nilcomm.exactmat import PrimeField

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption(
        "--extended",
        action="store_true",
        default=False,
        help="run the theorem sweep up to n = 14 instead of n = 12",
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def field():
    return PrimeField()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
