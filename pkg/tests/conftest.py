import sys

import pytest

from bsrinf.gcgroup import BSParams, build_gc


@pytest.fixture
def g13():
    return build_gc(BSParams.of(1, 3), 2)


@pytest.fixture
def g26():
    return build_gc(BSParams.of(2, 6), 2)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
