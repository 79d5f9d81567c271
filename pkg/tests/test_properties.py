"""Cross-module invariants, checked on random small instances."""

import json
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from nbcomplexity.centred import chi_r_exact, is_r_centred
from nbcomplexity.cli import analyze_graph
from nbcomplexity.complexity import nu_exact
from nbcomplexity.expansion import EmbeddingCertificate, gradr_bruteforce, validate_embedding
from nbcomplexity.graph import Graph, generate
from nbcomplexity.signatures import Colouring, hatted_colouring
from nbcomplexity.wcol import Ordering, wcol_exact, wcol_given_order
from oracles import chromatic_by_colourings


@given(graphs(max_n=5))
def test_two_centred_colourings_are_proper(g):
    k, c = chi_r_exact(g, 2)
    assert all(c[a] != c[b] for a, b in g.edges())
    assert k >= chromatic_by_colourings(g)


@given(graphs(max_n=5), st.integers(1, 2))
def test_hatted_colouring_stays_centred(g, r):
    _, c = chi_r_exact(g, 2 * r + 2)
    big, hc = hatted_colouring(g, c, r)
    assert is_r_centred(big.graph, hc, 2 * r + 2)


@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_wcol_monotone_in_radius(g, rnd):
    L = Ordering.random(g.n, rnd)
    per_order = [wcol_given_order(g, L, r) for r in range(5)]
    assert per_order == sorted(per_order)
    exact = [wcol_exact(g, r)[0] for r in range(4)]
    assert exact == sorted(exact)


@given(graphs(min_n=2, max_n=6), st.integers(0, 2), st.data())
def test_nu_is_subgraph_monotone(g, r, data):
    whole = nu_exact(g, r).value
    if g.m:
        u, v = data.draw(st.sampled_from(list(g.edges())))
        assert nu_exact(g.without_edge(u, v), r).value <= whole
    w = data.draw(st.integers(0, g.n - 1))
    assert nu_exact(g.without_vertex(w), r).value <= whole


@given(graphs(min_n=3, max_n=7), st.data())
def test_random_certificate_mutations_are_rejected(g, data):
    rep = gradr_bruteforce(g, Fraction(1))
    cert = rep.witness
    if not cert.phi_e:
        return
    assert validate_embedding(g, cert).holds
    key = data.draw(st.sampled_from(sorted(cert.phi_e)))
    path = tuple(cert.phi_e[key])
    kind = data.draw(st.sampled_from(["drop", "merge", "reverse"]))
    if kind == "drop" and len(path) > 2:
        i = data.draw(st.integers(1, len(path) - 2))
        bad = path[:i] + path[i + 1:]
    elif kind == "merge" and len(cert.phi_e) > 1:
        other = next(k for k in sorted(cert.phi_e) if k != key)
        bad = path[:-1] + tuple(cert.phi_e[other])
    else:
        bad = tuple(reversed(path))
    mutated = EmbeddingCertificate(cert.pattern, cert.phi_v, {**cert.phi_e, key: bad}, cert.depth)
    assert not validate_embedding(g, mutated).holds


@given(graphs(max_n=6), st.sampled_from(["exact", "auto", "heuristic"]))
def test_every_reported_value_has_a_mode(g, policy):
    recs = analyze_graph(g, Fraction(1), ["nu", "wcol", "chi", "grad0", "gradr", "treedepth"],
                         policy, 0, None, None)
    for rec in recs:
        json.dumps(rec)
        if rec["kind"] == "parameter":
            assert rec["mode"] in ("exact", "fixed-instance") or rec["mode"].startswith(
                ("upper-bound", "lower-bound"))


def test_injective_colouring_is_centred_for_all_r():
    g = generate("grid", rows=2, cols=3)
    for r in range(1, 8):
        assert is_r_centred(g, Colouring.of(range(g.n)), r)
    assert is_r_centred(Graph(1), Colouring.of((0,)), 5)
