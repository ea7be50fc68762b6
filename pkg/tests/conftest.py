import math

import pytest

from qgraph import EdgePotential, build_bouquet, load_graph_spec, fixture_path

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def fig8():
    return build_bouquet((1, 1))


@pytest.fixture
def bouquet13():
    return build_bouquet((1, 3))


@pytest.fixture
def bouquet335():
    return build_bouquet((3, 3, 5))


@pytest.fixture
def cycle4():
    return load_graph_spec(fixture_path("cycle4"))[0]


@pytest.fixture
def pm1():
    return {"e1_1": EdgePotential.constant(1.0), "e2_1": EdgePotential.constant(-1.0)}


PI2 = math.pi**2
