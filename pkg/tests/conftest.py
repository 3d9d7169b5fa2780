import pytest

from corpus import group
from prodmix.io import CORPUS


@pytest.fixture(params=CORPUS)
def corpus_name(request):
    return request.param


@pytest.fixture
def s3():
    return group("s3")


@pytest.fixture
def a5():
    return group("a5")


@pytest.fixture
def psl27():
    return group("psl27")


@pytest.fixture
def c2():
    return group("c2")


def pytest_terminal_summary(terminalreporter):
    from corpus import ACCEPTANCE
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
