import numpy as np
import pytest

from blindrank.graph import Graph, load_karate
from blindrank.signals import make_normalized_filter

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def karate():
    return load_karate()


@pytest.fixture(scope="session")
def karate_filter(karate):
    return make_normalized_filter(karate)


@pytest.fixture
def k2():
    return Graph(np.array([[0, 1], [1, 0]]))


@pytest.fixture
def k3():
    return Graph(np.ones((3, 3)) - np.eye(3))


@pytest.fixture
def star5():
    return Graph.from_edges(5, [(0, i) for i in range(1, 5)])


@pytest.fixture(scope="session")
def acceptance_report():
    def report(criterion, passed, detail):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
