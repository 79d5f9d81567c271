import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from nbcomplexity.errors import ContractViolation, GuardExceeded
from nbcomplexity.expansion import (EmbeddingCertificate, ceil_log2, corollary14_check,
                                    grad0_exact, gradr_bruteforce, half_integer, lemma12_oracle,
                                    lemma13_check, min_degree_rhs, log2_lower, sparsity_term,
                                    theorem15_check, twice, validate_embedding)
from nbcomplexity.graph import Graph, generate
from oracles import densest_by_subsets, top_grad_by_path_sets

HALF = Fraction(1, 2)
C6 = generate("cycle", n=6)
K3 = generate("complete", n=3)
K4 = generate("complete", n=4)


def c6_as_k3():
    return EmbeddingCertificate(K3, (0, 2, 4), {(0, 1): (0, 1, 2), (1, 2): (2, 3, 4),
                                                (0, 2): (0, 5, 4)}, HALF)


def test_identity_embedding_is_depth_zero():
    g = generate("grid", rows=2, cols=3)
    cert = EmbeddingCertificate(g, tuple(range(g.n)), {e: e for e in g.edges()}, Fraction(0))
    assert validate_embedding(g, cert).holds


def test_subdivided_triangle_in_c6():
    assert validate_embedding(C6, c6_as_k3()).holds
    assert c6_as_k3().density == 1
    assert c6_as_k3().to_lines()[-1] == "depth 1/2"


def test_shared_internal_vertex_is_invalid():
    g = Graph(5, [(0, 4), (1, 4), (2, 4), (3, 4)])
    pattern = Graph(4, [(0, 1), (2, 3)])
    cert = EmbeddingCertificate(pattern, (0, 1, 2, 3), {(0, 1): (0, 4, 1), (2, 3): (2, 4, 3)}, HALF)
    v = validate_embedding(g, cert)
    assert not v.holds and "share" in v.detail


@pytest.mark.parametrize("mutate", [
    lambda c: EmbeddingCertificate(c.pattern, (0, 0, 4), c.phi_e, c.depth),
    lambda c: EmbeddingCertificate(c.pattern, c.phi_v, {**c.phi_e, (0, 1): (0, 2)}, c.depth),
    lambda c: EmbeddingCertificate(c.pattern, c.phi_v, {**c.phi_e, (0, 1): (0, 1, 3)}, c.depth),
    lambda c: EmbeddingCertificate(c.pattern, c.phi_v, {k: v for k, v in c.phi_e.items() if k != (0, 2)}, c.depth),
    lambda c: EmbeddingCertificate(c.pattern, c.phi_v, c.phi_e, Fraction(0)),
    lambda c: EmbeddingCertificate(c.pattern, (0, 2, 9), c.phi_e, c.depth),
])
def test_mutated_certificates_are_rejected(mutate):
    assert not validate_embedding(C6, mutate(c6_as_k3())).holds


def test_branch_vertex_inside_path_is_rejected():
    p3 = generate("path", n=3)
    cert = EmbeddingCertificate(Graph(3, [(0, 2)]), (0, 1, 2), {(0, 2): (0, 1, 2)}, HALF)
    assert not validate_embedding(p3, cert).holds


def test_grad0_examples():
    for n in (1, 2, 5, 8):
        assert grad0_exact(generate("path", n=n)).value == Fraction(n - 1, n)
    assert grad0_exact(K4).value == HALF * 3
    pendant = Graph(5, list(K4.edges()) + [(3, 4)])
    rep = grad0_exact(pendant)
    assert rep.value == Fraction(3, 2) and rep.witness.phi_v == (0, 1, 2, 3)
    assert validate_embedding(pendant, rep.witness).holds
    assert grad0_exact(Graph(3)).value == 0


@given(graphs(max_n=9))
def test_grad0_matches_subset_enumeration(g):
    rep = grad0_exact(g)
    assert rep.value == densest_by_subsets(g)
    assert validate_embedding(g, rep.witness).holds
    assert rep.witness.density == rep.value or rep.value == 0


def test_gradr_examples():
    assert gradr_bruteforce(C6, 0).value == 1
    assert gradr_bruteforce(generate("path", n=6), 2).value == Fraction(5, 6)
    rep = gradr_bruteforce(C6, HALF)
    assert rep.value == 1 and validate_embedding(C6, rep.witness).holds
    tree = Graph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    for r in ("0", "1/2", "1", "3/2", "3"):
        assert gradr_bruteforce(tree, r).value == Fraction(6, 7)
    with pytest.raises(GuardExceeded):
        gradr_bruteforce(generate("path", n=9), 1)


@given(graphs(max_n=5), st.integers(0, 4))
def test_gradr_matches_path_set_oracle(g, twice_r):
    r = Fraction(twice_r, 2)
    rep = gradr_bruteforce(g, r)
    assert rep.value == top_grad_by_path_sets(g, twice_r + 1)
    assert validate_embedding(g, rep.witness).holds
    assert rep.witness.depth <= r


@given(graphs(max_n=7))
def test_gradr_monotone_and_starts_at_grad0(g):
    vals = [gradr_bruteforce(g, Fraction(k, 2)).value for k in range(5)]
    assert vals == sorted(vals)
    assert vals[0] == grad0_exact(g).value


def test_half_integer_parsing():
    assert half_integer("3/2") == Fraction(3, 2)
    assert half_integer(2) == 2 and half_integer("0") == 0
    assert twice("5/2") == 5
    for bad in ("1/3", "-1/2", "x", 0.25):
        with pytest.raises(ContractViolation):
            half_integer(bad)


def test_log_helpers():
    assert [ceil_log2(Fraction(x)) for x in (1, 2, 3, 4, 5)] == [0, 1, 2, 2, 3]
    assert ceil_log2(Fraction(3, 2)) == 1
    assert log2_lower(Fraction(8)) == 3
    assert 1.5849 < log2_lower(Fraction(3)) < math.log2(3)
    assert sparsity_term(Fraction(1)) == 0
    assert sparsity_term(Fraction(2)) == 5445 * 16


def test_min_degree_check_examples():
    assert min_degree_rhs(Fraction(2)) == 24 * 577
    v = lemma13_check(Graph(2, [(0, 1)]))
    assert v.holds and v.data["nu1"] == 2 and v.data["rhs"] == 13848
    assert lemma13_check(generate("complete-bipartite", a=1, b=5)).holds
    v = lemma13_check(generate("complete-bipartite", a=3, b=3))
    assert v.holds and v.data["min_degree"] == 3
    with pytest.raises(ContractViolation):
        lemma13_check(K3)


def test_skewed_bipartite_oracle_examples():
    k = generate("complete-bipartite", a=3, b=4)
    assert lemma12_oracle(k, {0, 1, 2}, {3, 4, 5, 6}, 2, 3) == ({0, 1, 2}, {3, 4, 5, 6})
    a_prime, b_prime = lemma12_oracle(k, {0, 1, 2}, {3, 4, 5, 6}, 2, 2)
    assert len(a_prime) == 2 and b_prime == {3, 4, 5, 6}
    # A = {0..3}, each B vertex sees two consecutive A vertices
    g = Graph(8, [(4, 0), (4, 1), (5, 1), (5, 2), (6, 2), (6, 3), (7, 3), (7, 0)])
    a_prime, b_prime = lemma12_oracle(g, range(4), range(4, 8), 2, 2)
    assert len(a_prime) == 2 and 2 * len(b_prime) >= 4
    with pytest.raises(ContractViolation):
        lemma12_oracle(g, range(4), range(4, 8), 3, 3)
    with pytest.raises(ContractViolation):
        lemma12_oracle(K3, {0}, {1, 2}, 1, 1)


def test_grad0_sparsity_examples():
    v = corollary14_check(generate("path", n=3))
    assert v.holds and v.data["rhs"] == 87120
    v = corollary14_check(Graph(1))
    assert not v.holds and v.data["rhs"] == 0 == v.data["grad0"]


def test_topgrad_bound_examples():
    v = theorem15_check(K4, 1)
    assert v.holds and v.data["grad"] == Fraction(3, 2) and v.data["rhs"] == 261360
    assert theorem15_check(Graph(4), "1/2").holds
    v = theorem15_check(C6, "1/2", nu_cache={1: Fraction(2)})
    assert v.holds and v.data["nu"] == {"1": 2}
    with pytest.raises(GuardExceeded):
        theorem15_check(generate("path", n=9), 1)
