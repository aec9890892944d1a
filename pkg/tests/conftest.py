import networkx as nx
import numpy as np
import pytest

from motifwalk.graph import Graph, graph_from_networkx, largest_connected_component


def nx_graph(g, name=None) -> Graph:
    return graph_from_networkx(g, name=name)


def connected_gnp(n, p, seed) -> Graph:
    """LCC of G(n, p); retries seeds until the component has at least 5 nodes."""
    while True:
        g = largest_connected_component(nx_graph(nx.gnp_random_graph(n, p, seed=seed)))
        if g.node_count >= 5:
            return g
        seed += 1000


def star(leaves) -> Graph:
    return nx_graph(nx.star_graph(leaves), name=f"star{leaves}")


@pytest.fixture
def triangle():
    return Graph.from_edges([(0, 1), (1, 2), (2, 0)], name="triangle")


@pytest.fixture
def k4():
    return nx_graph(nx.complete_graph(4), name="K4")


@pytest.fixture
def k5():
    return nx_graph(nx.complete_graph(5), name="K5")


@pytest.fixture
def karate():
    return nx_graph(nx.karate_club_graph(), name="karate")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def write_edges(tmp_path):
    def write(lines, name="g.txt"):
        p = tmp_path / name
        p.write_text("\n".join(lines) + "\n")
        return p
    return write


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
