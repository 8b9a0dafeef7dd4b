import itertools
import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from quantum_cluster import IncompatibilityGraph, ursell_bruteforce, ursell_fast


def graph_of(g: nx.Graph) -> IncompatibilityGraph:
    g = nx.convert_node_labels_to_integers(g)
    return IncompatibilityGraph.from_edges(g.number_of_nodes(), g.edges())


@pytest.mark.parametrize(
    "graph, value",
    [
        (nx.empty_graph(1), Fraction(1)),
        (nx.complete_graph(2), Fraction(-1, 2)),
        (nx.complete_graph(3), Fraction(1, 3)),
        (nx.path_graph(3), Fraction(1, 6)),
        (nx.empty_graph(2), Fraction(0)),
        (nx.empty_graph(3), Fraction(0)),
    ],
)
def test_known_values(graph, value):
    h = graph_of(graph)
    assert ursell_bruteforce(h) == value
    assert ursell_fast(h) == value


@pytest.mark.parametrize("n", range(1, 9))
def test_complete_graphs(n):
    # signed count of connected spanning subgraphs of K_n is (-1)^(n-1) (n-1)!
    expected = Fraction((-1) ** (n - 1), n)
    assert ursell_fast(graph_of(nx.complete_graph(n))) == expected
    if n <= 6:
        assert ursell_bruteforce(graph_of(nx.complete_graph(n))) == expected


@pytest.mark.parametrize("n", range(1, 9))
def test_trees(n):
    tree = nx.from_prufer_sequence([(3 * k + n) % n for k in range(n - 2)]) if n > 2 else nx.path_graph(n)
    expected = Fraction((-1) ** (n - 1), math.factorial(n))
    assert ursell_fast(graph_of(tree)) == expected
    assert ursell_bruteforce(graph_of(tree)) == expected


@pytest.mark.parametrize("n", range(3, 9))
def test_cycles(n):
    # a cycle stays connected after removing at most one edge
    expected = Fraction((-1) ** n + n * (-1) ** (n - 1), math.factorial(n))
    assert ursell_fast(graph_of(nx.cycle_graph(n))) == expected
    assert ursell_bruteforce(graph_of(nx.cycle_graph(n))) == expected


def test_disconnected_is_zero():
    g = nx.disjoint_union(nx.complete_graph(3), nx.path_graph(2))
    assert ursell_fast(graph_of(g)) == 0 == ursell_bruteforce(graph_of(g))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 7), data=st.data())
def test_fast_matches_bruteforce(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=12)) if pairs else []
    h = IncompatibilityGraph.from_edges(n, chosen)
    assert ursell_fast(h) == ursell_bruteforce(h)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 7), data=st.data())
def test_relabeling_invariance(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    perm = data.draw(st.permutations(range(n)))
    a = IncompatibilityGraph.from_edges(n, chosen)
    b = IncompatibilityGraph.from_edges(n, [(perm[i], perm[j]) for i, j in chosen])
    assert ursell_fast(a) == ursell_fast(b)


def test_from_masks_and_validation():
    h = IncompatibilityGraph.from_masks([0b011, 0b110, 0b1000])
    assert h.edges == [(0, 1)]
    assert not h.is_connected()
    assert IncompatibilityGraph.from_masks([1, 1]).is_connected()
    with pytest.raises(ValueError, match="symmetric"):
        IncompatibilityGraph(2, (0b10, 0))
    with pytest.raises(ValueError, match="self-loop"):
        IncompatibilityGraph(1, (1,))
    with pytest.raises(ValueError):
        IncompatibilityGraph(0, ())


def test_size_guards():
    with pytest.raises(ValueError):
        ursell_bruteforce(graph_of(nx.empty_graph(13)))
    with pytest.raises(ValueError):
        ursell_fast(graph_of(nx.empty_graph(21)))
