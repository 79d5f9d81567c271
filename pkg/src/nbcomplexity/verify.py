"""Property suites over graph corpora, one per verified inequality."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .centred import chi_r_exact, centred_colouring_from_forest, is_r_centred, treedepth_exact
from .complexity import centred_colouring_bound, count_traces, weak_colouring_bound
from .errors import ContractViolation, GuardExceeded
from .expansion import (GRAD_GUARD_N, corollary14_check, grad0_exact, half_integer,
                        lemma13_check, theorem15_check)
from .graph import (Graph, enumerate_small_graphs, format_graph, from_mask, generate,
                    nonisomorphic_graphs)
from .signatures import (_sigma_paths_ends, hatted_class_count_check, laminar_violation,
                         reacher_class_count, refinement_chain_check, signatures_upto)
from .verdict import _plain
from .wcol import Ordering, check_witness_bundle, wcol_exact, witness_bundle

SUITES = ("lemma4", "lemma5", "chain", "lemma7", "lemma9", "wcol-witness", "theorem2",
          "theorem3", "lemma13", "corollary14", "theorem15")

EXHAUSTIVE_LIMIT = 7  # labelled graphs
CLASS_LIMIT = 8  # isomorphism classes


# -- corpora ---------------------------------------------------------------


@dataclass(frozen=True)
class CorpusItem:
    ident: str
    graph: Graph


def exhaustive_corpus(max_n: int, connected: bool = True, labelled: bool = False,
                      min_n: int = 1) -> list[CorpusItem]:
    """Every graph on ``min_n..max_n`` vertices, as labelled graphs or one per isomorphism class."""
    limit = EXHAUSTIVE_LIMIT if labelled else CLASS_LIMIT
    if max_n > limit:
        raise GuardExceeded(f"exhaustive corpus refused for n={max_n} > {limit}",
                            estimate=2 ** (max_n * (max_n - 1) // 2))
    items = []
    for n in range(min_n, max_n + 1):
        if labelled:
            graphs = enumerate_small_graphs(n, connected_only=connected)
        else:
            graphs = nonisomorphic_graphs(n, connected_only=connected)
        for i, g in enumerate(graphs):
            items.append(CorpusItem(f"n{n}-{i}", g))
    return items


def random_corpus(count: int, n: int, p: float, seed: int,
                  connected: bool = False) -> list[CorpusItem]:
    items = []
    attempt = 0
    while len(items) < count:
        g = generate("erdos-renyi", n=n, p=p, seed=seed * 1_000_003 + attempt)
        attempt += 1
        if connected and not g.is_connected():
            if attempt > 100 * count:
                raise ContractViolation("could not draw enough connected graphs")
            continue
        items.append(CorpusItem(f"er{n}-{len(items)}", g))
    return items


# -- results ---------------------------------------------------------------


@dataclass
class SuiteResult:
    suite: str
    params: dict
    items: int = 0
    checks: int = 0
    skipped: int = 0
    violations: int = 0
    counterexample: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.violations == 0

    def record(self, item: CorpusItem, detail: dict):
        self.violations += 1
        if self.counterexample is None:
            self.counterexample = {"graph_id": item.ident,
                                   "graph": format_graph(item.graph).splitlines(),
                                   **_plain(detail)}

    def to_dict(self):
        out = {"suite": self.suite, "params": _plain(self.params), "holds": self.holds,
               "items": self.items, "checks": self.checks, "skipped": self.skipped,
               "violations": self.violations}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.notes:
            out["notes"] = self.notes
        return out


def x_sets(n: int, rng: random.Random, all_upto: int, samples: int):
    """All non-empty X when n <= all_upto, else ``samples`` random non-empty X."""
    if n <= all_upto:
        return list(range(1, 1 << n))
    return [rng.randrange(1, 1 << n) for _ in range(samples)]


def _forest_colouring(g: Graph):
    return centred_colouring_from_forest(treedepth_exact(g)[1], g)


def _colouring(g: Graph, r: int, kind: str):
    if kind == "forest":
        return _forest_colouring(g)
    if kind == "chi":
        return chi_r_exact(g, 2 * r + 2)[1]
    raise ContractViolation(f"unknown colouring kind {kind!r}")


def _realised_proper(g: Graph, c, max_len: int):
    """Proper signatures up to ``max_len`` with at least one sigma-path, and their end masks."""
    out = {}
    for sigma in signatures_upto(c.palette, max_len, proper_only=True):
        ends = [_sigma_paths_ends(g, c.colours, v, sigma) for v in range(g.n)]
        if any(ends):
            out[sigma] = ends
    return out


# -- suites ----------------------------------------------------------------
# Each runner takes (item, rng, params, result) and updates result in place.


def _suite_dichotomy(item, rng, params, result):
    g, r = item.graph, params["r"]
    c = _colouring(g, r, params["colouring"])
    for sigma, ends in _realised_proper(g, c, 2 * r + 1).items():
        result.checks += 1
        for u, v in itertools.combinations(range(g.n), 2):
            a, b = ends[u], ends[v]
            if a & b and a != b:
                result.record(item, {"colouring": c.colours, "sigma": sigma, "pair": (u, v)})
                break


def _suite_laminarity(item, rng, params, result):
    g, r = item.graph, params["r"]
    c = _colouring(g, r, params["colouring"])
    realised = _realised_proper(g, c, 2 * r + 1)
    sigmas = sorted(realised)
    pairs = list(itertools.combinations_with_replacement(sigmas, 2))
    if params.get("colour_union"):
        # the proof only uses that the two signatures jointly carry <= 2r+1 colours
        pairs = [(s1, s2) for s1, s2 in pairs if len(set(s1) | set(s2)) <= 2 * r + 1]
    for x_mask in x_sets(g.n, rng, params["x_all_n"], params["x_samples"]):
        for s1, s2 in pairs:
            result.checks += 1
            bad = laminar_violation(realised[s1], realised[s2], x_mask)
            if bad is not None:
                result.record(item, {"colouring": c.colours, "sigma1": s1, "sigma2": s2,
                                     "X": from_mask(x_mask), "classes": bad})


def _suite_chain(item, rng, params, result):
    g, r = item.graph, params["r"]
    c = _colouring(g, r, params["colouring"])
    for x_mask in x_sets(g.n, rng, params["x_all_n"], params["x_samples"]):
        result.checks += 1
        report = refinement_chain_check(g, c, from_mask(x_mask), r)
        if not report.holds:
            result.record(item, {"colouring": c.colours, "X": from_mask(x_mask),
                                 "report": report.to_dict()})


def _suite_reacher_count(item, rng, params, result):
    g, r = item.graph, params["r"]
    c = _colouring(g, r, params["colouring"])
    realised = _realised_proper(g, c, 2 * r + 1)
    sigmas = sorted(realised)
    if not sigmas:
        return
    families = [[s] for s in sigmas]
    families += [list(p) for p in itertools.combinations(sigmas, 2)]
    families.append(sigmas)
    for x_mask in x_sets(g.n, rng, params["x_all_n"], params["x_samples"]):
        size = x_mask.bit_count()
        for family in families:
            result.checks += 1
            _, classes = reacher_class_count(realised, family, x_mask)
            if classes > len(family) * size:
                result.record(item, {"colouring": c.colours, "family": family,
                                     "X": from_mask(x_mask), "classes": classes})


def _suite_hatted_count(item, rng, params, result):
    g, r = item.graph, params["r"]
    c = _colouring(g, r, params["colouring"])
    for x_mask in x_sets(g.n, rng, params["x_all_n"], params["x_samples"]):
        result.checks += 1
        verdict = hatted_class_count_check(g, c, from_mask(x_mask), r)
        if not verdict:
            result.record(item, {"colouring": c.colours, "X": from_mask(x_mask),
                                 **verdict.data})


def _suite_wcol_witness(item, rng, params, result):
    g, r = item.graph, params["r"]
    orders = [Ordering.random(g.n, rng) for _ in range(params["orders"])]
    xs = [rng.randrange(1, 1 << g.n) for _ in range(params["x_samples"])]
    for order in orders:
        for x_mask in xs:
            result.checks += 1
            verdict = check_witness_bundle(g, witness_bundle(g, order, from_mask(x_mask), r))
            if not verdict:
                result.record(item, {"order": order.to_line(), "X": from_mask(x_mask),
                                     "failure": verdict.to_dict()})


def _suite_centred_bound(item, rng, params, result):
    g, r = item.graph, params["r"]
    chi, _ = chi_r_exact(g, 2 * r + 2)
    bound = centred_colouring_bound(r, chi)
    for x_mask in x_sets(g.n, rng, params["x_all_n"], params["x_samples"]):
        result.checks += 1
        ratio = Fraction(count_traces(g, x_mask, r), x_mask.bit_count())
        if not bound.at_least(ratio):
            result.record(item, {"chi": chi, "X": from_mask(x_mask), "ratio": ratio})


def _suite_weak_bound(item, rng, params, result):
    g, r = item.graph, params["r"]
    w, _ = wcol_exact(g, 2 * r)
    bound = weak_colouring_bound(r, w)
    for x_mask in x_sets(g.n, rng, params["x_all_n"], params["x_samples"]):
        result.checks += 1
        count = count_traces(g, x_mask, r)
        if count > bound * x_mask.bit_count():
            result.record(item, {"wcol": w, "X": from_mask(x_mask), "classes": count,
                                 "bound_per_x": bound})


def _suite_min_degree(item, rng, params, result):
    g = item.graph
    if g.bipartition() is None:
        result.skipped += 1
        return
    result.checks += 1
    verdict = lemma13_check(g)
    if not verdict:
        result.record(item, verdict.data)


def _suite_grad0_sparsity(item, rng, params, result):
    result.checks += 1
    verdict = corollary14_check(item.graph)
    if not verdict:
        result.record(item, verdict.data)


def _suite_topgrad(item, rng, params, result):
    for depth in params["depths"]:
        result.checks += 1
        verdict = theorem15_check(item.graph, depth)
        if not verdict:
            result.record(item, verdict.data)


RUNNERS = {
    "lemma4": _suite_dichotomy,
    "lemma5": _suite_laminarity,
    "chain": _suite_chain,
    "lemma7": _suite_reacher_count,
    "lemma9": _suite_hatted_count,
    "wcol-witness": _suite_wcol_witness,
    "theorem2": _suite_centred_bound,
    "theorem3": _suite_weak_bound,
    "lemma13": _suite_min_degree,
    "corollary14": _suite_grad0_sparsity,
    "theorem15": _suite_topgrad,
}

DEFAULTS = {"r": 1, "colouring": "forest", "x_all_n": 5, "x_samples": 100, "orders": 20}


def _check_guards(suite: str, corpus, params):
    big = max((it.graph.n for it in corpus), default=0)
    if suite in ("theorem15",) and big > GRAD_GUARD_N:
        raise GuardExceeded(f"{suite} refused: corpus has n={big} > {GRAD_GUARD_N}",
                            estimate=2 ** big)
    if suite in ("lemma13", "corollary14", "theorem15"):
        for it in corpus:
            nu_exact_guard(it.graph)
    if suite == "theorem2" and big > 10:
        raise GuardExceeded(f"{suite} refused: corpus has n={big} > 10", estimate=big ** big)
    if suite == "theorem3" and big > 11:
        raise GuardExceeded(f"{suite} refused: corpus has n={big} > 11", estimate=2 ** big)


def nu_exact_guard(g: Graph):
    from .complexity import NU_GUARD_M, NU_GUARD_N

    if g.n > NU_GUARD_N or g.m > NU_GUARD_M:
        raise GuardExceeded(f"exact nu refused for n={g.n}, m={g.m} "
                            f"(guard n<={NU_GUARD_N}, m<={NU_GUARD_M})", estimate=2 ** (g.n + g.m))


def run_suite(suite: str, corpus, seed: int = 0, **params) -> SuiteResult:
    """Run a named property suite over ``corpus`` in corpus order.

    Randomness (X samples, orders) is drawn from a generator seeded by
    (seed, suite, item id), so each item is reproducible on its own.
    """
    if suite not in RUNNERS:
        raise ContractViolation(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    merged = dict(DEFAULTS)
    merged.update(params)
    if suite == "theorem15":
        merged["depths"] = [half_integer(d) for d in merged.get("depths", ["1/2", "1"])]
        merged.pop("r", None)
    corpus = list(corpus)
    _check_guards(suite, corpus, merged)
    result = SuiteResult(suite, {**merged, "seed": seed})
    runner = RUNNERS[suite]
    for item in corpus:
        rng = random.Random(f"{seed}:{suite}:{item.ident}")
        result.items += 1
        runner(item, rng, merged, result)
    return result


def colouring_is_centred(g: Graph, r: int, kind: str = "forest") -> bool:
    """Sanity check used by tests: suite colourings are (2r+2)-centred."""
    return is_r_centred(g, _colouring(g, r, kind), 2 * r + 2).is_centred


__all__ = ["SUITES", "CorpusItem", "SuiteResult", "exhaustive_corpus", "random_corpus",
           "run_suite", "x_sets", "colouring_is_centred", "grad0_exact"]
