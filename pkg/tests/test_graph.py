import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from nbcomplexity.errors import ContractViolation, GraphParseError, GuardExceeded, VertexRangeError
from nbcomplexity.graph import (Graph, SubgraphSpec, blowup, canonical_form, canonical_key,
                                closed_ball, enumerate_small_graphs, exact_sphere, format_graph,
                                generate, nonisomorphic_graphs, parse_graph, realize_subgraph)
from oracles import nxg


def test_parse_edge_list_path():
    g = parse_graph("3 2\n0 1\n1 2\n")
    assert g == Graph(3, [(0, 1), (1, 2)])
    assert g.adj == ((1,), (0, 2), (1,))


def test_parse_single_vertex():
    g = parse_graph("1 0\n")
    assert g.n == 1 and g.m == 0


def test_parse_rejects_self_loop():
    with pytest.raises(GraphParseError, match="line 2"):
        parse_graph("2 1\n0 0\n")


def test_parse_out_of_range_vertex():
    with pytest.raises(VertexRangeError, match="line 3"):
        parse_graph("3 2\n0 1\n1 3\n")


def test_parse_bad_token_has_line_number():
    with pytest.raises(GraphParseError, match="line 3"):
        parse_graph("3 2\n0 1\n1 x\n")


def test_parse_duplicates_collapse_and_comments():
    g = parse_graph("# a comment\n3 3\n0 1\n1 0  # again\n1 2\n")
    assert g.m == 2


def test_parse_declared_count_mismatch():
    with pytest.raises(GraphParseError):
        parse_graph("3 5\n0 1\n")


def test_parse_dimacs_roundtrip():
    g = generate("grid", rows=2, cols=3)
    text = format_graph(g, "dimacs")
    assert text.startswith("p edge 6 7")
    assert parse_graph(text, "dimacs") == g
    assert parse_graph("c hello\np edge 2 1\ne 1 2\n", "dimacs") == Graph(2, [(0, 1)])
    with pytest.raises(VertexRangeError):
        parse_graph("p edge 2 1\ne 0 1\n", "dimacs")


@given(graphs(max_n=7))
def test_format_parse_roundtrip(g):
    assert parse_graph(format_graph(g)) == g


def test_graph_invariants_enforced():
    with pytest.raises(ContractViolation):
        Graph(0)
    with pytest.raises(ContractViolation):
        Graph(2, [(1, 1)])
    with pytest.raises(ContractViolation):
        Graph(2, [(0, 2)])


def test_closed_ball_examples(p3):
    assert closed_ball(p3, 1, 0) == {1}
    assert closed_ball(p3, 1, 1) == {0, 1, 2}
    assert closed_ball(generate("cycle", n=5), 0, 2) == set(range(5))


def test_exact_sphere_examples(p3):
    assert exact_sphere(p3, 0, 2) == {2}
    assert exact_sphere(generate("complete", n=4), 0, 2) == frozenset()
    star = generate("complete-bipartite", a=1, b=3)
    assert exact_sphere(star, 0, 1) == {1, 2, 3}


@given(graphs(max_n=7), st.integers(0, 6), st.data())
def test_balls_are_unions_of_disjoint_spheres(g, r, data):
    v = data.draw(st.integers(0, g.n - 1))
    spheres = [exact_sphere(g, v, i) for i in range(r + 1)]
    for a, b in itertools.combinations(spheres, 2):
        assert not a & b
    assert closed_ball(g, v, r) == frozenset().union(*spheres)
    assert closed_ball(g, v, r) <= closed_ball(g, v, r + 1)
    comp = nx.node_connected_component(nxg(g), v)
    assert closed_ball(g, v, g.n) == comp


def test_realize_subgraph_examples():
    k3 = generate("complete", n=3)
    h, _ = realize_subgraph(k3, SubgraphSpec(frozenset({0, 1, 2}), frozenset({(0, 1), (1, 2)})))
    assert h == Graph(3, [(0, 1), (1, 2)])
    c4 = generate("cycle", n=4)
    h, relabel = realize_subgraph(c4, SubgraphSpec.induced(c4, [1, 2, 3]))
    assert nx.is_isomorphic(nxg(h), nx.path_graph(3))
    assert relabel == {1: 0, 2: 1, 3: 2}
    with pytest.raises(ContractViolation):
        realize_subgraph(c4, SubgraphSpec(frozenset({0, 2}), frozenset({(0, 2)})))


@given(graphs(max_n=7))
def test_full_spec_reproduces_graph(g):
    h, _ = realize_subgraph(g, SubgraphSpec.full(g))
    assert h.m == g.m
    assert sorted(map(len, h.adj)) == sorted(map(len, g.adj))


def test_blowup_examples():
    k2 = blowup(generate("complete", n=2), 2).graph
    assert nx.is_isomorphic(nxg(k2), nx.complete_bipartite_graph(2, 2))
    b = blowup(generate("path", n=3), 2)
    assert b.graph.n == 6 and b.graph.m == 8
    assert b.graph.has_edge(b.vertex(0, 1), b.vertex(1, 2))
    assert not b.graph.has_edge(b.vertex(0, 1), b.vertex(0, 2))
    assert b.name(b.vertex(2, 2)) == (2, 2)
    with pytest.raises(ContractViolation):
        blowup(generate("path", n=3), 0)


@given(graphs(max_n=6), st.integers(1, 3))
def test_blowup_adjacency_rule(g, r):
    b = blowup(g, r)
    for x, y in itertools.combinations(range(b.graph.n), 2):
        (u, _), (v, _) = b.name(x), b.name(y)
        assert b.graph.has_edge(x, y) == (u != v and g.has_edge(u, v))
    if r == 1:
        assert b.graph == g


def test_generators():
    assert generate("path", n=3) == Graph(3, [(0, 1), (1, 2)])
    assert generate("complete", n=4).m == 6
    grid = generate("grid", rows=3, cols=3)
    assert (grid.n, grid.m) == (9, 12)
    a = generate("erdos-renyi", n=12, p=0.3, seed=7)
    assert a == generate("erdos-renyi", n=12, p=0.3, seed=7)
    d = generate("random-bounded-degree", n=15, d=3, seed=2)
    assert max(map(len, d.adj)) <= 3
    assert d == generate("random-bounded-degree", n=15, d=3, seed=2)
    with pytest.raises(ContractViolation):
        generate("erdos-renyi", n=5, p=0.5)
    with pytest.raises(ContractViolation):
        generate("cycle", n=2)
    with pytest.raises(ContractViolation):
        generate("nope", n=2)


def test_enumerate_small_graph_counts():
    assert len(list(enumerate_small_graphs(1))) == 1
    assert len(list(enumerate_small_graphs(2))) == 2
    assert len(list(enumerate_small_graphs(2, connected_only=True))) == 1
    assert len(list(enumerate_small_graphs(3, connected_only=True))) == 4
    # connected labelled graphs on 4 and 5 vertices (OEIS A001187)
    assert len(list(enumerate_small_graphs(4, connected_only=True))) == 38
    assert len(list(enumerate_small_graphs(5, connected_only=True))) == 728
    with pytest.raises(GuardExceeded):
        list(enumerate_small_graphs(8))


def test_nonisomorphic_counts():
    # OEIS A000088 and A001349
    assert [len(nonisomorphic_graphs(n)) for n in range(1, 8)] == [1, 2, 4, 11, 34, 156, 1044]
    assert [len(nonisomorphic_graphs(n, True)) for n in range(1, 8)] == [1, 1, 2, 6, 21, 112, 853]
    assert len(list(enumerate_small_graphs(5, dedupe=True))) == 34


def test_nonisomorphic_classes_are_distinct_for_n5():
    gs = [nxg(g) for g in nonisomorphic_graphs(5)]
    for a, b in itertools.combinations(gs, 2):
        assert not nx.is_isomorphic(a, b)


@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_canonical_form_is_relabelling_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    assert canonical_key(h) == canonical_key(g)
    key, cperm = canonical_form(g)
    assert canonical_key(g.relabel(cperm)) == key


@given(graphs(max_n=6), graphs(max_n=6))
def test_canonical_key_separates_non_isomorphic(g, h):
    same = g.n == h.n and nx.is_isomorphic(nxg(g), nxg(h))
    assert (canonical_key(g) == canonical_key(h)) == same


def test_vertex_and_edge_deletion():
    g = generate("path", n=4)
    assert g.without_vertex(1) == Graph(3, [(1, 2)])
    assert g.without_edge(1, 2) == Graph(4, [(0, 1), (2, 3)])
