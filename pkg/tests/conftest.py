import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tracecascade.catalog import chain_alphabet, path_alphabet, triangle_alphabet  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture
def A1():
    return path_alphabet()


@pytest.fixture
def A2():
    return triangle_alphabet()


@pytest.fixture
def A3():
    return chain_alphabet()


@pytest.fixture
def data():
    return DATA


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.REPORT:
        terminalreporter.section("acceptance")
        for line in sorted(mod.REPORT, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
