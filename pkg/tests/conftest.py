import networkx as nx
import pytest

from combforge import catalog


def nx_of(trunc):
    """networkx copy of a truncation, for brute-force comparisons."""
    g = nx.Graph()
    g.add_nodes_from(trunc.vertices)
    g.add_edges_from(trunc.edges())
    return g


@pytest.fixture(params=[s.name for s in catalog.list_families()])
def spec(request):
    return catalog.family(request.param)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
