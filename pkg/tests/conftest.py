import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pipsheaf.lattice import BlockExponent, close_lattice  # noqa: E402
from pipsheaf.sheaf import SymbolSpace  # noqa: E402


def E(*values):
    return BlockExponent(values)


@pytest.fixture(scope="session")
def L1():
    return close_lattice([E(1)], lhs_mode=True)


@pytest.fixture(scope="session")
def L2():
    return close_lattice([E(1, 0), E(0, 1)], lhs_mode=True)


@pytest.fixture(scope="session")
def grid():
    return close_lattice([E(1, 0), E(0, 1), E(1, -1)], lhs_mode=True)


G4 = [(1, 0), (0, 1), (0, 0), (-1, -1)]


@pytest.fixture(scope="session")
def symbols4():
    return SymbolSpace(2, G4)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
