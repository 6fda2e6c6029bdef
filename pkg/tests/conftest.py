from pathlib import Path

import pytest

from core_revealer.instances import parse_instance
from core_revealer.model import AgentId, Problem

DATA = Path(__file__).parent / "data"

# Paper-style labels for the two worked examples.
A1a, A1b, A1c = AgentId(0, 0), AgentId(0, 1), AgentId(0, 2)
A2a, A2b = AgentId(1, 0), AgentId(1, 1)
A3a = AgentId(2, 0)
# House ids: h1..h5 -> 0..4
H1, H2, H3, H4, H5 = range(5)


@pytest.fixture
def fig2() -> Problem:
    return parse_instance((DATA / "fig2.json").read_text())


@pytest.fixture
def ex1() -> Problem:
    return parse_instance((DATA / "ex1.json").read_text())


@pytest.fixture
def case1() -> Problem:
    """Four agents on one cycle 1a -> 2a -> 1b -> 3a -> 1a with distinct endowments."""
    return Problem.build(
        [2, 1, 1],
        [1, 1, 1, 1],
        endowment={A1a: 0, A2a: 1, A1b: 2, A3a: 3},
        allocation={A1a: 1, A2a: 2, A1b: 3, A3a: 0},
    )


_acceptance_lines: list[str] = []


@pytest.fixture
def acceptance_report():
    return _acceptance_lines.append


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
