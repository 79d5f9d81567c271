"""Slow, independent reference implementations used to cross-check the package.

Everything here follows the textbook definitions directly (path enumeration,
subset enumeration, networkx BFS) and shares no code with the package beyond
the Graph container.
"""

import itertools
from fractions import Fraction

import networkx as nx


def nxg(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def ball(h, v, r):
    return frozenset(nx.single_source_shortest_path_length(h, v, cutoff=r))


def trace_count(g, x, r, h=None):
    """Distinct N^r[v] & X over v, one BFS per vertex."""
    if h is None:
        h = nxg(g)
    x = frozenset(x)
    return len({ball(h, v, r) & x for v in range(g.n)})


def simple_paths_from(g, v, max_len):
    """Every simple path starting at v with at most max_len edges, as tuples."""
    out = [(v,)]
    frontier = [(v,)]
    for _ in range(max_len):
        nxt = []
        for path in frontier:
            for w in g.adj[path[-1]]:
                if w not in path:
                    nxt.append(path + (w,))
        out.extend(nxt)
        frontier = nxt
    return out


def wreach_by_paths(g, rank, r):
    """u is weakly r-reachable from v iff some path of length <= r ends in u with u rank-minimal."""
    out = []
    for v in range(g.n):
        reach = set()
        for path in simple_paths_from(g, v, r):
            u = path[-1]
            if all(rank[u] <= rank[w] for w in path):
                reach.add(u)
        out.append(frozenset(reach))
    return out


def wreach_by_paths_upto(g, rank, max_r):
    """wreach_by_paths for every r <= max_r from one path enumeration."""
    out = [[set() for _ in range(g.n)] for _ in range(max_r + 1)]
    for v in range(g.n):
        for path in simple_paths_from(g, v, max_r):
            u = path[-1]
            if all(rank[u] <= rank[w] for w in path):
                for r in range(len(path) - 1, max_r + 1):
                    out[r][v].add(u)
    return [[frozenset(s) for s in per_r] for per_r in out]


def sigma_nbhd_by_sequences(g, colours, v, sigma):
    """Endpoints of simple paths from v whose colour trace is sigma, by brute force."""
    k = len(sigma)
    out = set()
    others = [w for w in range(g.n) if w != v]
    for rest in itertools.permutations(others, k - 1):
        path = (v,) + rest
        if any(colours[p] != s for p, s in zip(path, sigma)):
            continue
        if all(g.has_edge(a, b) for a, b in zip(path, path[1:])):
            out.add(path[-1])
    return frozenset(out)


def densest_by_subsets(g):
    best = Fraction(0)
    for k in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), k):
            ss = set(s)
            m = sum(1 for a, b in g.edges() if a in ss and b in ss)
            best = max(best, Fraction(m, k))
    return best


def nu_by_enumeration(g, r):
    """max over (vertex subset, edge subset, X) of distinct traces / |X|, fully labelled."""
    best = Fraction(0)
    for k in range(1, g.n + 1):
        for vs in itertools.combinations(range(g.n), k):
            inner = [e for e in g.edges() if e[0] in vs and e[1] in vs]
            for em in range(1 << len(inner)):
                h = nx.Graph()
                h.add_nodes_from(vs)
                h.add_edges_from(e for i, e in enumerate(inner) if em >> i & 1)
                balls = [ball(h, v, r) for v in vs]
                for xk in range(1, k + 1):
                    for x in itertools.combinations(vs, xk):
                        xs = frozenset(x)
                        val = Fraction(len({b & xs for b in balls}), xk)
                        best = max(best, val)
    return best


def is_centred_by_subsets(g, colours, r):
    h = nxg(g)
    for k in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), k):
            if not nx.is_connected(h.subgraph(s)):
                continue
            counts = {}
            for v in s:
                counts[colours[v]] = counts.get(colours[v], 0) + 1
            if len(counts) < r and 1 not in counts.values():
                return False
    return True


def chi_by_colourings(g, r):
    for k in range(1, g.n + 1):
        for colours in itertools.product(range(k), repeat=g.n):
            if is_centred_by_subsets(g, colours, r):
                return k
    raise AssertionError("unreachable")


def treedepth_by_definition(g):
    h = nxg(g)

    def td(vs):
        if not vs:
            return 0
        sub = h.subgraph(vs)
        comps = [frozenset(c) for c in nx.connected_components(sub)]
        if len(comps) > 1:
            return max(td(c) for c in comps)
        if len(vs) == 1:
            return 1
        return 1 + min(td(vs - {v}) for v in vs)

    return td(frozenset(range(g.n)))


def degeneracy_by_cores(g):
    if g.m == 0:
        return 0
    return max(nx.core_number(nxg(g)).values())


def wcol_by_permutations(g, r):
    best = None
    for order in itertools.permutations(range(g.n)):
        rank = {v: i for i, v in enumerate(order)}
        val = max(len(s) for s in wreach_by_paths(g, rank, r))
        best = val if best is None else min(best, val)
    return best


def top_grad_by_path_sets(g, max_len):
    """Densest pattern over sets of internally disjoint paths with <= max_len edges.

    Branch vertices are the path endpoints; interiors avoid branch vertices
    and each other; at most one path per endpoint pair.
    """
    paths = []
    for v in range(g.n):
        for p in simple_paths_from(g, v, max_len):
            if len(p) >= 2 and p[0] < p[-1]:
                paths.append(p)
    best = Fraction(0)

    def search(i, chosen, ends, inner, pairs):
        nonlocal best
        if chosen:
            best = max(best, Fraction(chosen, len(ends)))
        for j in range(i, len(paths)):
            p = paths[j]
            pair = (p[0], p[-1])
            mid = set(p[1:-1])
            if pair in pairs or mid & inner or mid & ends or {p[0], p[-1]} & inner:
                continue
            search(j + 1, chosen + 1, ends | {p[0], p[-1]}, inner | mid, pairs | {pair})

    search(0, 0, frozenset(), frozenset(), frozenset())
    return best


def chromatic_by_colourings(g):
    for k in range(1, g.n + 1):
        for colours in itertools.product(range(k), repeat=g.n):
            if all(colours[a] != colours[b] for a, b in g.edges()):
                return k
    raise AssertionError("unreachable")
