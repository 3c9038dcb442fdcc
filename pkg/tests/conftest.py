import pytest

from equisquare.square import parse_square

from support import E5_TEXT, E6_TEXT


@pytest.fixture
def e5():
    return parse_square(E5_TEXT)


@pytest.fixture
def e6():
    return parse_square(E6_TEXT)


@pytest.fixture
def swap2():
    return parse_square("0,1\n1,0")


@pytest.fixture
def same2():
    return parse_square("a,a\na,a")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in mod.REPORT:
            terminalreporter.write_line(line)
