import gzip

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motifwalk.graph import (EmptyGraphError, Graph, GraphFormatError, induced_subgraph_edges,
                             is_connected, largest_connected_component, load_cache,
                             load_edge_list, pair_index, save_cache, write_edge_list)

from conftest import nx_graph


def test_loader_normalizes(write_edges):
    p = write_edges(["# comment", "% konect comment", "10 20", "20 10", "20 30", "30 30",
                     "10 20", "", "30 40 1 1234567"])
    g = load_edge_list(p)
    assert g.node_count == 4
    assert g.edge_count == 3
    assert g.labels.tolist() == [10, 20, 30, 40]
    assert g.neighbors(1).tolist() == [0, 2]
    assert g.name == "g.txt"


def test_loader_symmetrizes_directed_input():
    g = load_edge_list(["0 1", "1 2", "2 3"])
    for u, v in [(0, 1), (1, 2), (2, 3)]:
        assert g.has_edge(u, v) and g.has_edge(v, u)


def test_loader_reads_gzip(tmp_path):
    p = tmp_path / "g.txt.gz"
    with gzip.open(p, "wt") as fh:
        fh.write("1 2\n2 3\n3 1\n")
    assert load_edge_list(p).edge_count == 3


@pytest.mark.parametrize("line", ["1", "1 x", "a b", "1 -2"])
def test_loader_reports_bad_line(line):
    with pytest.raises(GraphFormatError) as err:
        load_edge_list(["0 1", "# fine", line])
    assert err.value.line_number == 3
    assert "line 3" in str(err.value)


def test_loader_rejects_empty():
    with pytest.raises(EmptyGraphError):
        load_edge_list(["# nothing", "5 5"])


def test_write_then_load_roundtrip(tmp_path, karate):
    p = tmp_path / "k.txt"
    write_edge_list(karate, p)
    again = load_edge_list(p)
    # ids come back in first-seen order, so compare through the labels
    assert again.edge_count == karate.edge_count
    edges = {tuple(sorted(e)) for e in again.labels[again.edges()].tolist()}
    assert edges == {tuple(sorted(e)) for e in karate.labels[karate.edges()].tolist()}


def test_cache_roundtrip(tmp_path, karate):
    p = tmp_path / "k.npz"
    save_cache(karate, p)
    g = load_cache(p)
    assert g == karate
    assert np.array_equal(g.labels, karate.labels)
    assert g.name == "karate"


def test_csr_is_read_only(k4):
    with pytest.raises(ValueError):
        k4.indices[0] = 3


def test_degrees_and_sum(karate):
    assert karate.degree_sum == 2 * karate.edge_count == 156
    assert karate.degrees.sum() == karate.degree_sum


def test_has_edge_matches_networkx():
    h = nx.gnp_random_graph(30, 0.2, seed=4)
    g = nx_graph(h)
    for u in range(30):
        for v in range(30):
            assert g.has_edge(u, v) == h.has_edge(u, v)


def test_largest_component_and_ties():
    g = Graph.from_edges([(0, 1), (2, 3), (4, 5), (5, 6)], n_nodes=8)
    lcc = largest_connected_component(g)
    assert lcc.labels.tolist() == [4, 5, 6]
    tie = Graph.from_edges([(3, 4), (0, 1)], n_nodes=5)
    assert largest_connected_component(tie).labels.tolist() == [0, 1]
    assert not is_connected(g)
    assert is_connected(lcc)
    assert largest_connected_component(lcc) is lcc


def test_pair_index_order():
    assert pair_index(3) == [(0, 1), (0, 2), (1, 2)]
    assert len(pair_index(5)) == 10


def test_induced_edges_on_k4(k4):
    assert induced_subgraph_edges(k4, [0, 1, 2]) == 0b111
    assert induced_subgraph_edges(k4, [0, 1, 2, 3]) == 63


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 14), st.integers(0, 14)), min_size=1, max_size=60))
def test_from_edges_is_simple_and_symmetric(edges):
    g = Graph.from_edges(edges, n_nodes=15)
    for v in range(15):
        nb = g.neighbors(v).tolist()
        assert nb == sorted(set(nb))
        assert v not in nb
        for u in nb:
            assert v in g.neighbors(u).tolist()
    expected = {tuple(sorted(e)) for e in edges if e[0] != e[1]}
    assert g.edge_count == len(expected)


def test_subgraph_keeps_labels(karate):
    sub = karate.subgraph([0, 1, 2, 33])
    assert sub.labels.tolist() == [0, 1, 2, 33]
    assert sub.has_edge(0, 1)
