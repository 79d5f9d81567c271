"""Undirected simple graphs on dense integer vertex ids.

Vertex sets are handled in two forms: ``frozenset`` at the public surface and
plain ``int`` bitmasks internally (bit ``v`` set iff vertex ``v`` is a member).
Everything exhaustive in this package runs on graphs with at most a few dozen
vertices, where bitmask BFS is both simple and fast.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import ContractViolation, GraphParseError, GuardExceeded, VertexRangeError

INF = math.inf
ALL_PAIRS_LIMIT = 2048


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_mask(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


class Graph:
    """Immutable undirected simple graph with vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "masks", "m", "_cache")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise ContractViolation("graphs are non-empty: n must be >= 1")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ContractViolation(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ContractViolation(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)
        self.masks = tuple(to_mask(s) for s in nbrs)
        self.m = sum(len(s) for s in nbrs) // 2
        self._cache = {}

    @classmethod
    def from_masks(cls, masks) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(masks)
        if g.n < 1:
            raise ContractViolation("graphs are non-empty: n must be >= 1")
        g.masks = tuple(masks)
        g.adj = tuple(tuple(iter_bits(mk)) for mk in g.masks)
        g.m = sum(mk.bit_count() for mk in g.masks) // 2
        g._cache = {}
        return g

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def __eq__(self, other):
        return isinstance(other, Graph) and self.masks == other.masks

    def __hash__(self):
        return hash(self.masks)

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges()})"

    # -- distances -------------------------------------------------------

    def distances_from(self, source: int) -> list[float]:
        """BFS distances from ``source``; unreachable vertices get ``INF``."""
        table = self._cache.get("apsp")
        if table is not None:
            return table[source]
        return _bfs_distances(self.masks, source)

    def distance_table(self) -> list[list[float]]:
        """All-pairs distances, memoised (only for n <= ALL_PAIRS_LIMIT)."""
        table = self._cache.get("apsp")
        if table is None:
            if self.n > ALL_PAIRS_LIMIT:
                raise GuardExceeded(f"all-pairs table refused for n={self.n}")
            table = [_bfs_distances(self.masks, s) for s in range(self.n)]
            self._cache["apsp"] = table
        return table

    def ball_masks(self, r: int) -> tuple[int, ...]:
        """Closed r-balls of every vertex as bitmasks (memoised per r)."""
        key = ("balls", r)
        balls = self._cache.get(key)
        if balls is None:
            balls = tuple(ball_mask(self.masks, v, r) for v in range(self.n))
            self._cache[key] = balls
        return balls

    # -- structure ---------------------------------------------------------

    def components(self) -> list[int]:
        """Connected components as bitmasks, ordered by least vertex."""
        return component_masks(self.masks, self.vertex_mask)

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def bipartition(self) -> tuple[frozenset[int], frozenset[int]] | None:
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adj[u]:
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        stack.append(w)
                    elif side[w] == side[u]:
                        return None
        return (frozenset(v for v in range(self.n) if side[v] == 0),
                frozenset(v for v in range(self.n) if side[v] == 1))

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph relabelled to ``0..k-1`` in increasing id order."""
        keep = sorted(set(vertices))
        relabel = {v: i for i, v in enumerate(keep)}
        sub = Graph(len(keep), ((relabel[u], relabel[v]) for u, v in self.edges()
                                if u in relabel and v in relabel))
        return sub, relabel

    def without_edge(self, u: int, v: int) -> "Graph":
        masks = list(self.masks)
        masks[u] &= ~(1 << v)
        masks[v] &= ~(1 << u)
        return Graph.from_masks(masks)

    def without_vertex(self, v: int) -> "Graph":
        """Delete ``v``; vertices above ``v`` shift down by one."""
        low = (1 << v) - 1
        masks = []
        for u, mk in enumerate(self.masks):
            if u == v:
                continue
            masks.append((mk & low) | ((mk >> (v + 1)) << v))
        return Graph.from_masks(masks)

    def relabel(self, perm) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        masks = [0] * self.n
        for v, mk in enumerate(self.masks):
            masks[perm[v]] = to_mask(perm[w] for w in iter_bits(mk))
        return Graph.from_masks(masks)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g


def _bfs_distances(masks, source):
    dist = [INF] * len(masks)
    dist[source] = 0
    seen = frontier = 1 << source
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= masks[u]
        nxt &= ~seen
        for w in iter_bits(nxt):
            dist[w] = d
        seen |= nxt
        frontier = nxt
    return dist


def ball_mask(masks, v: int, r: int, allowed: int = -1) -> int:
    """Bitmask of vertices within distance ``r`` of ``v`` inside ``allowed``."""
    seen = frontier = 1 << v
    for _ in range(r):
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= masks[u]
        nxt &= allowed & ~seen
        if not nxt:
            break
        seen |= nxt
        frontier = nxt
    return seen


def component_masks(masks, within: int) -> list[int]:
    comps = []
    rest = within
    while rest:
        start = rest & -rest
        comp = frontier = start
        while frontier:
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= masks[u]
            nxt &= within & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        rest &= ~comp
    return comps


def closed_ball(g: Graph, v: int, r: int) -> frozenset[int]:
    if not 0 <= v < g.n or r < 0:
        raise ContractViolation("closed_ball needs 0 <= v < n and r >= 0")
    return from_mask(ball_mask(g.masks, v, r))


def exact_sphere(g: Graph, v: int, r: int) -> frozenset[int]:
    if not 0 <= v < g.n or r < 0:
        raise ContractViolation("exact_sphere needs 0 <= v < n and r >= 0")
    inner = ball_mask(g.masks, v, r - 1) if r > 0 else 0
    return from_mask(ball_mask(g.masks, v, r) & ~inner)


# -- subgraphs and products ------------------------------------------------


@dataclass(frozen=True)
class SubgraphSpec:
    """A (not necessarily induced) subgraph of a host graph."""

    vertices: frozenset
    edges: frozenset  # pairs (u, v) with u < v

    @classmethod
    def full(cls, g: Graph) -> "SubgraphSpec":
        return cls(frozenset(range(g.n)), frozenset(g.edges()))

    @classmethod
    def induced(cls, g: Graph, vertices) -> "SubgraphSpec":
        vs = frozenset(vertices)
        return cls(vs, frozenset(e for e in g.edges() if e[0] in vs and e[1] in vs))

    def validate(self, g: Graph) -> None:
        if not self.vertices:
            raise ContractViolation("subgraph must have at least one vertex")
        for v in self.vertices:
            if not 0 <= v < g.n:
                raise ContractViolation(f"vertex {v} not in host graph")
        for u, v in self.edges:
            if u >= v:
                raise ContractViolation(f"edge ({u}, {v}) not normalised as u < v")
            if u not in self.vertices or v not in self.vertices:
                raise ContractViolation(f"edge ({u}, {v}) leaves the vertex set")
            if not g.has_edge(u, v):
                raise ContractViolation(f"edge ({u}, {v}) not in host graph")

    def to_lines(self) -> list[str]:
        lines = ["vertices " + " ".join(map(str, sorted(self.vertices)))]
        lines.extend(f"edge {u} {v}" for u, v in sorted(self.edges))
        return lines


def realize_subgraph(g: Graph, spec: SubgraphSpec) -> tuple[Graph, dict[int, int]]:
    """Materialise ``spec`` as a standalone graph plus the host->new relabelling."""
    spec.validate(g)
    relabel = {v: i for i, v in enumerate(sorted(spec.vertices))}
    return Graph(len(relabel), ((relabel[u], relabel[v]) for u, v in spec.edges)), relabel


@dataclass(frozen=True)
class BlowupGraph:
    """Lexicographic product of ``base`` with an edgeless graph on ``copies`` vertices.

    Copy ``i`` (1-based) of base vertex ``v`` has id ``v * copies + (i - 1)``.
    """

    base: Graph
    copies: int
    graph: Graph

    def vertex(self, v: int, i: int) -> int:
        return v * self.copies + (i - 1)

    def name(self, x: int) -> tuple[int, int]:
        return x // self.copies, x % self.copies + 1

    def layer(self, vertices, i: int) -> frozenset[int]:
        return frozenset(self.vertex(v, i) for v in vertices)


def blowup(g: Graph, r: int) -> BlowupGraph:
    if r < 1:
        raise ContractViolation("blow-up needs r >= 1 copies")
    edges = [(u * r + i, v * r + j) for u, v in g.edges()
             for i in range(r) for j in range(r)]
    return BlowupGraph(g, r, Graph(g.n * r, edges))


# -- parsing ---------------------------------------------------------------


def parse_graph(text, fmt: str = "edge-list") -> Graph:
    """Parse an edge-list ("n m" then "u v" lines) or DIMACS graph."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if fmt == "edge-list":
        return _parse_edge_list(text)
    if fmt == "dimacs":
        return _parse_dimacs(text)
    raise ContractViolation(f"unknown graph format {fmt!r}")


def _tokens(text, comment):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(comment, 1)[0].strip() if comment else raw.strip()
        if line:
            yield lineno, line.split()


def _int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise GraphParseError(f"expected an integer, got {tok!r}", lineno) from None


def _build(n, edges, declared_m, last_line):
    if n < 1:
        raise GraphParseError("vertex count must be at least 1", 1)
    seen = set()
    for lineno, u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"vertex id out of range for n={n}", lineno)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        seen.add((min(u, v), max(u, v)))
    if declared_m is not None and len(edges) != declared_m:
        raise GraphParseError(f"header declares {declared_m} edges, found {len(edges)}", last_line)
    return Graph(n, seen)


def _parse_edge_list(text):
    lines = list(_tokens(text, "#"))
    if not lines:
        raise GraphParseError("empty input", 1)
    lineno, head = lines[0]
    if len(head) != 2:
        raise GraphParseError("header must be 'n m'", lineno)
    n, m = _int(head[0], lineno), _int(head[1], lineno)
    edges = []
    for lineno, toks in lines[1:]:
        if len(toks) != 2:
            raise GraphParseError("edge line must be 'u v'", lineno)
        edges.append((lineno, _int(toks[0], lineno), _int(toks[1], lineno)))
    return _build(n, edges, m, lines[-1][0])


def _parse_dimacs(text):
    n = m = None
    edges = []
    last = 1
    for lineno, toks in _tokens(text, None):
        last = lineno
        kind = toks[0]
        if kind == "c":
            continue
        if kind == "p":
            if len(toks) != 4 or n is not None:
                raise GraphParseError("malformed or repeated 'p edge n m' header", lineno)
            n, m = _int(toks[2], lineno), _int(toks[3], lineno)
        elif kind == "e":
            if n is None:
                raise GraphParseError("edge before 'p' header", lineno)
            if len(toks) != 3:
                raise GraphParseError("edge line must be 'e u v'", lineno)
            u, v = _int(toks[1], lineno), _int(toks[2], lineno)
            if u < 1 or v < 1:
                raise VertexRangeError("DIMACS vertex ids are 1-indexed", lineno)
            edges.append((lineno, u - 1, v - 1))
        else:
            raise GraphParseError(f"unknown line type {kind!r}", lineno)
    if n is None:
        raise GraphParseError("missing 'p edge n m' header", last)
    return _build(n, edges, m, last)


def format_graph(g: Graph, fmt: str = "edge-list") -> str:
    edges = g.edges()
    if fmt == "edge-list":
        return "".join([f"{g.n} {len(edges)}\n"] + [f"{u} {v}\n" for u, v in edges])
    if fmt == "dimacs":
        return "".join([f"p edge {g.n} {len(edges)}\n"] + [f"e {u + 1} {v + 1}\n" for u, v in edges])
    raise ContractViolation(f"unknown graph format {fmt!r}")


# -- generators ------------------------------------------------------------

FAMILIES = ("path", "cycle", "grid", "complete", "complete-bipartite",
            "random-bounded-degree", "erdos-renyi")


def generate(family: str, *, seed: int | None = None, **params) -> Graph:
    """Deterministic graph generators; random families require ``seed``."""

    def need(*names):
        missing = [k for k in names if k not in params]
        if missing:
            raise ContractViolation(f"{family} needs parameters {missing}")
        return [params[k] for k in names]

    if family == "path":
        (n,) = need("n")
        _check(n >= 1, "path needs n >= 1")
        return Graph(n, ((i, i + 1) for i in range(n - 1)))
    if family == "cycle":
        (n,) = need("n")
        _check(n >= 3, "cycle needs n >= 3")
        return Graph(n, ((i, (i + 1) % n) for i in range(n)))
    if family == "grid":
        rows, cols = need("rows", "cols")
        _check(rows >= 1 and cols >= 1, "grid needs rows, cols >= 1")
        edges = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
        edges += [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
        return Graph(rows * cols, edges)
    if family == "complete":
        (n,) = need("n")
        _check(n >= 1, "complete needs n >= 1")
        return Graph(n, itertools.combinations(range(n), 2))
    if family == "complete-bipartite":
        a, b = need("a", "b")
        _check(a >= 1 and b >= 0, "complete-bipartite needs a >= 1, b >= 0")
        return Graph(a + b, ((i, a + j) for i in range(a) for j in range(b)))
    if family == "random-bounded-degree":
        n, d = need("n", "d")
        _check(n >= 1 and d >= 0, "random-bounded-degree needs n >= 1, d >= 0")
        _check(seed is not None, "random families need a seed")
        rng = random.Random(seed)
        pairs = list(itertools.combinations(range(n), 2))
        rng.shuffle(pairs)
        deg = [0] * n
        edges = []
        for u, v in pairs:
            if deg[u] < d and deg[v] < d:
                edges.append((u, v))
                deg[u] += 1
                deg[v] += 1
        return Graph(n, edges)
    if family == "erdos-renyi":
        n, p = need("n", "p")
        _check(n >= 1 and 0 <= p <= 1, "erdos-renyi needs n >= 1, 0 <= p <= 1")
        _check(seed is not None, "random families need a seed")
        rng = random.Random(seed)
        return Graph(n, (e for e in itertools.combinations(range(n), 2) if rng.random() < p))
    raise ContractViolation(f"unknown family {family!r}; expected one of {FAMILIES}")


def _check(ok, message):
    if not ok:
        raise ContractViolation(message)


# -- exhaustive corpora ----------------------------------------------------

SMALL_GRAPH_LIMIT = 7
NONISO_LIMIT = 8


def enumerate_small_graphs(n: int, connected_only: bool = False,
                           dedupe: bool = False) -> Iterator[Graph]:
    """All labelled graphs on ``n`` vertices, in increasing edge-mask order.

    Bit ``k`` of the edge mask is the k-th pair of ``itertools.combinations``.
    With ``dedupe`` one canonical representative per isomorphism class is
    produced instead, ordered by canonical key.
    """
    if not 1 <= n <= SMALL_GRAPH_LIMIT:
        raise GuardExceeded(f"enumerate_small_graphs supports 1 <= n <= {SMALL_GRAPH_LIMIT}",
                            estimate=2 ** (n * (n - 1) // 2))
    if dedupe:
        yield from nonisomorphic_graphs(n, connected_only)
        return
    pairs = list(itertools.combinations(range(n), 2))
    bits = [((1 << v), (1 << u)) for u, v in pairs]
    for emask in range(1 << len(pairs)):
        masks = [0] * n
        for k, (u, v) in enumerate(pairs):
            if emask >> k & 1:
                masks[u] |= bits[k][0]
                masks[v] |= bits[k][1]
        if connected_only and len(component_masks(masks, (1 << n) - 1)) != 1:
            continue
        yield Graph.from_masks(masks)


def nonisomorphic_graphs(n: int, connected_only: bool = False) -> list[Graph]:
    """One canonically labelled graph per isomorphism class on ``n`` vertices."""
    if not 1 <= n <= NONISO_LIMIT:
        raise GuardExceeded(f"nonisomorphic_graphs supports 1 <= n <= {NONISO_LIMIT}")
    graphs = _noniso(n)
    if connected_only:
        graphs = tuple(g for g in graphs if g.is_connected())
    return list(graphs)


@lru_cache(maxsize=None)
def _noniso(n):
    if n == 1:
        return (Graph(1),)
    found = {}
    for g in _noniso(n - 1):
        for nb in range(1 << (n - 1)):
            masks = [mk | ((nb >> v & 1) << (n - 1)) for v, mk in enumerate(g.masks)]
            masks.append(nb)
            key, perm = canonical_form(Graph.from_masks(masks))
            if key not in found:
                found[key] = Graph.from_masks(masks).relabel(perm)
    return tuple(found[k] for k in sorted(found))


# -- canonical labelling -----------------------------------------------------


def _refine(masks, colours):
    """Colour refinement to a stable partition; colours are dense ranks."""
    n = len(masks)
    count = len(set(colours))
    while True:
        sigs = [(colours[v], tuple(sorted(colours[w] for w in iter_bits(masks[v]))))
                for v in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colours = [ranks[s] for s in sigs]
        if len(ranks) == count:
            return colours
        count = len(ranks)


def _edge_key(masks, perm):
    n = len(masks)
    key = 0
    for u in range(n):
        pu = perm[u]
        for v in iter_bits(masks[u]):
            if u < v:
                a, b = (pu, perm[v]) if pu < perm[v] else (perm[v], pu)
                key |= 1 << (a * n + b)
    return key


def canonical_form(g: Graph) -> tuple[tuple[int, int], list[int]]:
    """Canonical key and labelling: isomorphic graphs get equal keys.

    Individualisation-refinement without automorphism pruning, except that a
    cell made of mutual twins is branched on only once (swapping twins is an
    automorphism of the coloured graph). ``perm[v]`` is the canonical label
    of ``v``; ``g.relabel(perm)`` has the same key for every isomorphic input.
    """
    masks = g.masks
    n = g.n
    best = [None, None]

    def twins(cell):
        for a, b in itertools.combinations(cell, 2):
            if masks[a] & ~(1 << b) != masks[b] & ~(1 << a):
                return False
        return True

    def search(colours):
        colours = _refine(masks, colours)
        if len(set(colours)) == n:
            key = _edge_key(masks, colours)
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, colours
            return
        sizes = {}
        for c in colours:
            sizes[c] = sizes.get(c, 0) + 1
        target = min(c for c, s in sizes.items() if s > 1)
        cell = [v for v in range(n) if colours[v] == target]
        if twins(cell):
            cell = cell[:1]
        for v in cell:
            split = [2 * c + (1 if c == target and u != v else 0)
                     for u, c in enumerate(colours)]
            search(split)

    search([len(a) for a in g.adj])
    return (n, best[0]), best[1]


def canonical_key(g: Graph) -> tuple[int, int]:
    return canonical_form(g)[0]
