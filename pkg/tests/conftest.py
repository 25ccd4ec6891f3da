import random

import pytest

from nlcrypt.nlbox import create_session


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def session_factory():
    seeds = iter(range(10_000, 20_000))

    def make(count):
        return create_session(next(seeds), count)

    return make


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
