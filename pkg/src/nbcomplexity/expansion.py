"""Top-grad at depth r, topological-minor embedding certificates, and the sparsity checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContractViolation, GuardExceeded
from .graph import Graph, iter_bits, to_mask
from .verdict import Verdict

GRAD_GUARD_N = 8
SKEWED_GUARD_A = 16
SPARSITY_CONSTANT = 5445


def half_integer(value) -> Fraction:
    """Parse an integer, Fraction or "k/2" string into a non-negative half-integer."""
    if isinstance(value, str):
        text = value.strip()
        try:
            val = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ContractViolation(f"not a half-integer: {value!r}") from None
    else:
        val = Fraction(value)
    if val < 0 or (2 * val).denominator != 1:
        raise ContractViolation(f"depth must be a non-negative half-integer, got {value!r}")
    return val


def twice(value) -> int:
    return int(2 * half_integer(value))


# -- certificates ----------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingCertificate:
    """Topological-minor embedding of ``pattern`` into a host graph.

    ``phi_v[a]`` is the host image of pattern vertex ``a``; ``phi_e`` maps each
    pattern edge ``(a, b)`` with ``a < b`` to a host path from ``phi_v[a]`` to
    ``phi_v[b]``.
    """

    pattern: Graph
    phi_v: tuple
    phi_e: dict
    depth: Fraction

    @property
    def density(self) -> Fraction:
        return Fraction(self.pattern.m, self.pattern.n)

    def to_lines(self) -> list[str]:
        lines = [f"pattern {self.pattern.n} {self.pattern.m}"]
        lines.extend(f"{a} {b}" for a, b in self.pattern.edges())
        lines.extend(f"phiV {a} -> {x}" for a, x in enumerate(self.phi_v))
        for (a, b), path in sorted(self.phi_e.items()):
            lines.append(f"phiE {a} {b} : " + " ".join(map(str, path)))
        lines.append(f"depth {self.depth}")
        return lines


def _depth_of(paths) -> Fraction:
    longest = max((len(p) - 1 for p in paths), default=1)
    return Fraction(max(longest, 1) - 1, 2)


def validate_embedding(g: Graph, cert: EmbeddingCertificate) -> Verdict:
    h = cert.pattern
    phi = cert.phi_v
    if len(phi) != h.n:
        return Verdict(False, None, "phi_v does not cover the pattern")
    if any(not 0 <= x < g.n for x in phi):
        return Verdict(False, None, "phi_v leaves the host graph")
    if len(set(phi)) != len(phi):
        return Verdict(False, None, "phi_v is not injective")
    if set(cert.phi_e) != set(h.edges()):
        return Verdict(False, None, "phi_e keys differ from the pattern edges")
    branch = set(phi)
    used_inner: dict[int, tuple] = {}
    for (a, b), path in sorted(cert.phi_e.items()):
        path = tuple(path)
        if len(path) < 2 or path[0] != phi[a] or path[-1] != phi[b]:
            return Verdict(False, (a, b), "path endpoints do not match phi_v")
        if len(set(path)) != len(path):
            return Verdict(False, (a, b), "path repeats a vertex")
        for x, y in zip(path, path[1:]):
            if not (0 <= x < g.n and 0 <= y < g.n and g.has_edge(x, y)):
                return Verdict(False, (a, b), f"({x}, {y}) is not a host edge")
        for x in path[1:-1]:
            if x in branch:
                return Verdict(False, (a, b), f"internal vertex {x} is a branch vertex")
            if x in used_inner:
                return Verdict(False, ((a, b), used_inner[x]),
                               f"paths share internal vertex {x}")
            used_inner[x] = (a, b)
    expected = _depth_of(cert.phi_e.values())
    if cert.depth != expected:
        return Verdict(False, None, f"declared depth {cert.depth}, paths give {expected}")
    return Verdict(True)


def _certificate(n_branch, branch, chosen) -> EmbeddingCertificate:
    """Build a certificate from host branch vertices and {(i, j): host path}."""
    pattern = Graph(n_branch, chosen.keys())
    return EmbeddingCertificate(pattern, tuple(branch), dict(chosen), _depth_of(chosen.values()))


@dataclass(frozen=True)
class GradReport:
    value: Fraction
    depth: Fraction
    mode: str
    witness: EmbeddingCertificate
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "value": str(self.value),
            "depth": str(self.depth),
            "mode": self.mode,
            "witness": self.witness.to_lines(),
        }


# -- depth 0: densest subgraph ---------------------------------------------


def _max_surplus(g: Graph, p: int, q: int) -> tuple[int, int]:
    """Max over vertex sets S of q*|E(S)| - p*|S|, with a maximising vertex mask."""
    import networkx as nx

    flow = nx.DiGraph()
    flow.add_node("s")
    flow.add_node("t")
    for v in range(g.n):
        flow.add_edge(("v", v), "t", capacity=p)
    for u, v in g.edges():
        flow.add_edge("s", ("e", u, v), capacity=q)
        flow.add_edge(("e", u, v), ("v", u))
        flow.add_edge(("e", u, v), ("v", v))
    cut, (source_side, _) = nx.minimum_cut(flow, "s", "t")
    mask = to_mask(node[1] for node in source_side if node != "s" and node[0] == "v")
    return q * g.m - cut, mask


def _densest(g: Graph) -> tuple[Fraction, int]:
    if g.m == 0:
        return Fraction(0), 1
    best_mask = g.vertex_mask
    density = Fraction(g.m, g.n)
    while True:
        surplus, mask = _max_surplus(g, density.numerator, density.denominator)
        if surplus <= 0 or not mask:
            return density, best_mask
        sub_m = sum(1 for u, v in g.edges() if mask >> u & 1 and mask >> v & 1)
        density, best_mask = Fraction(sub_m, mask.bit_count()), mask


def grad0_exact(g: Graph) -> GradReport:
    """Maximum subgraph density, found by iterated parametric min-cut.

    Each round asks for the vertex set maximising |E(S)| - d*|S| at the
    current density d; a positive surplus yields a strictly denser set.
    """
    density, mask = _densest(g)
    branch = list(iter_bits(mask))
    index = {v: i for i, v in enumerate(branch)}
    chosen = {(index[u], index[v]): (u, v) for u, v in g.edges()
              if u in index and v in index}
    cert = _certificate(len(branch), branch, chosen)
    assert cert.density == density
    return GradReport(density, Fraction(0), "exact", cert)


# -- depth r: brute force --------------------------------------------------


def _candidate_paths(masks, u, v, max_len, forbidden):
    """Minimal internal sets of u-v paths with 2..max_len edges avoiding ``forbidden``.

    Returns {internal mask: path tuple}; the direct edge is handled elsewhere.
    """
    found: dict[int, tuple] = {}
    path = [u]

    def extend(x, inner):
        length = len(path)  # edges once the next vertex is appended
        for y in iter_bits(masks[x]):
            if y == v:
                if length >= 2 and inner not in found:
                    found[inner] = tuple(path) + (v,)
            elif length < max_len and not (forbidden | inner) >> y & 1:
                path.append(y)
                extend(y, inner | 1 << y)
                path.pop()

    extend(u, 0)
    minimal: dict[int, tuple] = {}
    for mask in sorted(found, key=lambda k: (k.bit_count(), k)):
        if not any(m & mask == m for m in minimal):
            minimal[mask] = found[mask]
    return minimal


def gradr_bruteforce(g: Graph, r, max_n: int = GRAD_GUARD_N) -> GradReport:
    """Exact top-grad at half-integer depth ``r`` by branch-set enumeration.

    For every branch set B, pairs of B are joined by paths of at most 2r+1
    edges with interiors outside B; a backtracking search packs pairwise
    internally disjoint paths to maximise the realised edge count.
    """
    depth = half_integer(r)
    max_len = int(2 * depth) + 1
    if g.n > max_n:
        raise GuardExceeded(f"gradr_bruteforce refused for n={g.n} > {max_n}",
                            estimate=2 ** g.n * math.comb(g.n, 2))
    masks = g.masks
    base = grad0_exact(g)
    best_val, best_cert = base.value, base.witness
    if max_len == 1:
        return GradReport(best_val, depth, "exact", best_cert, {"branch_sets": 0})
    explored = 0
    for bmask in range(1, 1 << g.n):
        k = bmask.bit_count()
        if k < 2 or Fraction(k - 1, 2) <= best_val:
            continue
        explored += 1
        branch = list(iter_bits(bmask))
        direct = {}
        options = []
        for i, j in itertools.combinations(range(k), 2):
            u, v = branch[i], branch[j]
            if g.has_edge(u, v):
                direct[(i, j)] = (u, v)
            else:
                cands = _candidate_paths(masks, u, v, max_len, bmask)
                if cands:
                    options.append(((i, j), sorted(cands.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))))
        base_count = len(direct)
        if Fraction(base_count + len(options), k) <= best_val:
            continue
        options.sort(key=lambda o: len(o[1]))
        chosen: dict = {}
        local = {"count": -1, "paths": None}

        def pack(idx, used):
            count = base_count + len(chosen)
            if count > local["count"]:
                local["count"], local["paths"] = count, dict(chosen)
            if idx == len(options):
                return
            if count + len(options) - idx <= max(local["count"], best_val * k):
                return
            pair, cands = options[idx]
            for inner, path in cands:
                if not inner & used:
                    chosen[pair] = path
                    pack(idx + 1, used | inner)
                    del chosen[pair]
            pack(idx + 1, used)

        pack(0, 0)
        val = Fraction(local["count"], k)
        if val > best_val:
            paths = dict(direct)
            paths.update(local["paths"])
            best_val, best_cert = val, _certificate(k, branch, paths)
    assert best_cert.density == best_val
    return GradReport(best_val, depth, "exact", best_cert, {"branch_sets": explored})


# -- sparsity bounds --------------------------------------------------------


def ceil_log2(x: Fraction) -> int:
    """Smallest integer k with 2**k >= x, for x >= 1."""
    x = Fraction(x)
    if x < 1:
        raise ContractViolation("ceil_log2 needs x >= 1")
    k = 0
    while x.denominator << k < x.numerator:
        k += 1
    return k


def log2_lower(x: Fraction) -> Fraction:
    """A rational lower bound on log2(x) for x >= 1, exact on powers of two.

    Otherwise the float value is truncated to a multiple of 1e-12 and then
    lowered by one more step, so the result never exceeds the true log.
    """
    x = Fraction(x)
    if x < 1:
        raise ContractViolation("log2_lower needs x >= 1")
    if x.denominator == 1 and x.numerator & (x.numerator - 1) == 0:
        return Fraction(x.numerator.bit_length() - 1)
    scale = 10 ** 12
    return Fraction(math.floor(math.log2(x) * scale) - 1, scale)


def sparsity_term(nu1: Fraction) -> Fraction:
    """5445 * nu^4 * log2(nu)^2, rounded down."""
    lg = log2_lower(nu1)
    return SPARSITY_CONSTANT * Fraction(nu1) ** 4 * lg * lg


def min_degree_rhs(nu1: Fraction) -> Fraction:
    nu1 = Fraction(nu1)
    lg = ceil_log2(nu1)
    return 4 * nu1 * (2 * lg + 1) * (64 * nu1 ** 3 * lg + 16 * nu1 ** 2 + 1)


def _nu(g, r, nu_cache):
    from .complexity import nu_exact

    if nu_cache is not None and r in nu_cache:
        return nu_cache[r]
    val = nu_exact(g, r).value
    if nu_cache is not None:
        nu_cache[r] = val
    return val


def lemma13_check(g: Graph, nu1=None) -> Verdict:
    """Minimum degree of a bipartite graph against the nu_1 polynomial."""
    if g.bipartition() is None:
        raise ContractViolation("lemma13_check needs a bipartite graph")
    if nu1 is None:
        nu1 = _nu(g, 1, None)
    delta = min(len(a) for a in g.adj)
    rhs = min_degree_rhs(nu1)
    return Verdict(delta < rhs, None if delta < rhs else {"min_degree": delta},
                   data={"min_degree": delta, "nu1": nu1, "rhs": rhs})


def lemma12_oracle(g: Graph, a, b, r: int, s: int):
    """Exhaustively search A' of size s with B' = {x in B : deg_A'(x) >= r*s/|A|}, |B'| >= |B|/2.

    Returns the first pair (A', B') in lexicographic order of A', or None.
    """
    a, b = sorted(set(a)), sorted(set(b))
    if set(a) & set(b) or set(a) | set(b) != set(range(g.n)):
        raise ContractViolation("A and B must partition the vertex set")
    a_mask = to_mask(a)
    for u, v in g.edges():
        if (a_mask >> u & 1) == (a_mask >> v & 1):
            raise ContractViolation(f"edge ({u}, {v}) does not cross the bipartition")
    if not 1 <= r <= s <= len(a):
        raise ContractViolation("need 1 <= r <= s <= |A|")
    if len(a) > SKEWED_GUARD_A:
        raise GuardExceeded(f"lemma12_oracle refused for |A|={len(a)} > {SKEWED_GUARD_A}",
                            estimate=math.comb(len(a), s))
    if any((g.masks[x] & a_mask).bit_count() < r for x in b):
        raise ContractViolation("every vertex of B needs degree >= r")
    threshold = Fraction(r * s, len(a))
    for sub in itertools.combinations(a, s):
        sub_mask = to_mask(sub)
        b_prime = [x for x in b if (g.masks[x] & sub_mask).bit_count() >= threshold]
        if 2 * len(b_prime) >= len(b):
            return frozenset(sub), frozenset(b_prime)
    return None


def corollary14_check(g: Graph, nu_cache=None, grad0=None) -> Verdict:
    """Strict inequality grad_0 < 5445 * nu_1^4 * log2(nu_1)^2."""
    nu1 = _nu(g, 1, nu_cache)
    lhs = grad0 if grad0 is not None else grad0_exact(g).value
    rhs = sparsity_term(nu1)
    holds = lhs < rhs
    return Verdict(holds, None if holds else {"grad0": lhs, "nu1": nu1},
                   data={"grad0": lhs, "nu1": nu1, "rhs": rhs})


def theorem15_check(g: Graph, r, nu_cache=None, max_n: int = GRAD_GUARD_N,
                    max_m: int = 14) -> Verdict:
    """top-grad_r <= (2r+1) * max(5445 nu_1^4 log^2 nu_1, nu_2, ..., nu_ceil(r+1/2))."""
    depth = half_integer(r)
    if g.n > max_n or g.m > max_m:
        raise GuardExceeded(
            f"theorem15_check refused for n={g.n}, m={g.m} (guard n<={max_n}, m<={max_m})",
            estimate=2 ** g.n * 2 ** g.m)
    top = int(2 * depth + 2) // 2  # ceil(r + 1/2)
    nus = {i: _nu(g, i, nu_cache) for i in range(1, top + 1)}
    terms = [sparsity_term(nus[1])] + [nus[i] for i in range(2, top + 1)]
    rhs = (2 * depth + 1) * max(terms)
    lhs = gradr_bruteforce(g, depth, max_n=max_n).value
    holds = lhs <= rhs
    return Verdict(holds, None if holds else {"grad": lhs, "depth": depth},
                   data={"grad": lhs, "depth": depth, "rhs": rhs,
                         "nu": {str(i): v for i, v in nus.items()}})
