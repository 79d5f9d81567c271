import random

import pytest

from nbcomplexity.errors import ContractViolation, GuardExceeded
from nbcomplexity.graph import Graph
from nbcomplexity.verify import (SUITES, CorpusItem, colouring_is_centred, exhaustive_corpus,
                                 random_corpus, run_suite, x_sets)


def test_corpus_sizes():
    assert len(exhaustive_corpus(4)) == 1 + 1 + 2 + 6
    assert len(exhaustive_corpus(4, connected=False)) == 1 + 2 + 4 + 11
    assert len(exhaustive_corpus(3, labelled=True)) == 1 + 1 + 4
    assert len(exhaustive_corpus(4, min_n=4)) == 6
    idents = [it.ident for it in exhaustive_corpus(4)]
    assert len(set(idents)) == len(idents)


def test_random_corpus_is_seeded():
    a = random_corpus(5, 7, 0.4, seed=3, connected=True)
    b = random_corpus(5, 7, 0.4, seed=3, connected=True)
    assert [it.graph for it in a] == [it.graph for it in b]
    assert all(it.graph.is_connected() for it in a)


def test_x_sets_all_then_sampled():
    rng = random.Random(0)
    assert len(list(x_sets(3, rng, all_upto=5, samples=10))) == 7
    sampled = list(x_sets(7, rng, all_upto=5, samples=10))
    assert len(sampled) == 10 and all(sampled)


@pytest.mark.parametrize("suite", SUITES)
def test_every_suite_holds_on_tiny_corpus(suite):
    corpus = [it for it in exhaustive_corpus(4) if it.graph.n > 1]
    params = {"depths": ["1/2"]} if suite == "theorem15" else {}
    res = run_suite(suite, corpus, seed=1, **params)
    assert res.holds, res.counterexample
    assert res.items == len(corpus)
    assert res.checks + res.skipped > 0


def test_grad0_sparsity_fails_on_single_vertex():
    res = run_suite("corollary14", [CorpusItem("k1", Graph(1))])
    assert not res.holds and res.violations == 1
    assert res.counterexample["graph_id"] == "k1"


def test_suite_is_deterministic():
    corpus = exhaustive_corpus(4)
    a = run_suite("wcol-witness", corpus, seed=7, orders=3, x_samples=3)
    b = run_suite("wcol-witness", corpus, seed=7, orders=3, x_samples=3)
    assert a.to_dict() == b.to_dict()


def test_suite_guards_and_names():
    with pytest.raises(ContractViolation):
        run_suite("lemma99", exhaustive_corpus(2))
    with pytest.raises(GuardExceeded):
        run_suite("theorem15", [CorpusItem("p", Graph(9, [(i, i + 1) for i in range(8)]))])


def test_colouring_is_centred():
    for it in exhaustive_corpus(5):
        assert colouring_is_centred(it.graph, 1)
