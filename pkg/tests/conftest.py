import functools

import pytest

from cambrian.coxeter import build_system, enumerate_group

ACCEPTANCE_LINES = {}


@functools.lru_cache(maxsize=None)
def weak_order(label):
    return enumerate_group(build_system(label))


@pytest.fixture(scope="session")
def weak():
    return weak_order


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
