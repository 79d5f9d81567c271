"""Colour signatures, sigma-neighbourhoods and the trace-partition refinement chain.

A signature is a plain tuple of colour ids. A sigma-path from ``v`` is a
simple path starting at ``v`` whose vertex colours, read in order, spell the
signature; its length in vertices is ``len(sigma)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ContractViolation
from .graph import BlowupGraph, Graph, blowup, from_mask, iter_bits, to_mask
from .verdict import Verdict


@dataclass(frozen=True)
class Colouring:
    """Total map from vertices to colour ids ``0..palette-1``."""

    colours: tuple
    palette: int

    def __post_init__(self):
        if self.palette < 1:
            raise ContractViolation("palette must be non-empty")
        for c in self.colours:
            if not 0 <= c < self.palette:
                raise ContractViolation(f"colour {c} outside palette of size {self.palette}")

    @classmethod
    def of(cls, colours: Iterable[int], palette: int | None = None) -> "Colouring":
        colours = tuple(colours)
        if palette is None:
            palette = max(colours, default=0) + 1
        return cls(colours, palette)

    def __getitem__(self, v):
        return self.colours[v]

    def __len__(self):
        return len(self.colours)

    @property
    def used(self) -> int:
        return len(set(self.colours))

    def to_lines(self) -> list[str]:
        return [f"{v} {c}" for v, c in enumerate(self.colours)]


@dataclass(frozen=True)
class Partition:
    """Partition of ``ground`` with classes numbered by their least member."""

    ground: tuple
    labels: tuple

    @classmethod
    def from_keys(cls, ground: Iterable[int], key) -> "Partition":
        ground = tuple(sorted(ground))
        ids: dict = {}
        labels = []
        for v in ground:
            k = key(v)
            if k not in ids:
                ids[k] = len(ids)
            labels.append(ids[k])
        return cls(ground, tuple(labels))

    @property
    def count(self) -> int:
        return len(set(self.labels))

    def classes(self) -> list[frozenset]:
        out: list[set] = [set() for _ in range(self.count)]
        for v, lab in zip(self.ground, self.labels):
            out[lab].add(v)
        return [frozenset(s) for s in out]

    def label_map(self) -> dict:
        return dict(zip(self.ground, self.labels))

    def refines(self, coarser: "Partition"):
        """``None`` if every class of self lies inside a class of ``coarser``,
        else a pair of vertices equivalent here but separated there."""
        theirs = coarser.label_map()
        rep: dict = {}
        for v, lab in zip(self.ground, self.labels):
            if v not in theirs:
                return (v, v)
            if lab in rep:
                if theirs[rep[lab]] != theirs[v]:
                    return (rep[lab], v)
            else:
                rep[lab] = v
        return None


def is_proper(sigma: Sequence[int]) -> bool:
    return len(set(sigma)) == len(sigma)


def signatures_upto(palette: int, max_len: int, proper_only: bool = False):
    """All signatures of length 1..max_len over ``range(palette)``, shortest first,
    lexicographic within a length."""
    for length in range(1, max_len + 1):
        if proper_only:
            yield from itertools.permutations(range(palette), length)
        else:
            yield from itertools.product(range(palette), repeat=length)


def hat(sigma: Sequence[int], copies: int) -> tuple:
    """The proper signature ((sigma[i], i))_i, serialised like the blow-up colouring."""
    if len(sigma) > copies:
        raise ContractViolation("hatted signature longer than the number of copies")
    return tuple(col * copies + i for i, col in enumerate(sigma))


def _check_signature(sigma, c: Colouring):
    if len(sigma) < 1:
        raise ContractViolation("signatures have length >= 1")
    for col in sigma:
        if not 0 <= col < c.palette:
            raise ContractViolation(f"signature colour {col} outside palette")


def _sigma_paths_ends(g: Graph, colours, v: int, sigma) -> int:
    """Endpoints of simple sigma-paths from ``v``, as a bitmask."""
    if colours[v] != sigma[0]:
        return 0
    last = len(sigma) - 1
    ends = 0
    adj = g.adj
    stack = [(v, 0, 1 << v)]
    while stack:
        u, i, on = stack.pop()
        if i == last:
            ends |= 1 << u
            continue
        want = sigma[i + 1]
        for w in adj[u]:
            if colours[w] == want and not on >> w & 1:
                stack.append((w, i + 1, on | 1 << w))
    return ends


def _sigma_walk_ends(g: Graph, colours, v: int, sigma) -> int:
    if colours[v] != sigma[0]:
        return 0
    frontier = 1 << v
    masks = g.masks
    for col in sigma[1:]:
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= masks[u]
        frontier = 0
        for w in iter_bits(nxt):
            if colours[w] == col:
                frontier |= 1 << w
        if not frontier:
            break
    return frontier


def sigma_ends_mask(g: Graph, c: Colouring, v: int, sigma, mode: str = "paths") -> int:
    if mode == "paths":
        return _sigma_paths_ends(g, c.colours, v, sigma)
    if mode == "walk-dp":
        if not is_proper(sigma):
            raise ContractViolation("walk-dp is only sound for proper signatures")
        return _sigma_walk_ends(g, c.colours, v, sigma)
    raise ContractViolation(f"unknown mode {mode!r}")


def sigma_neighbourhood(g: Graph, c: Colouring, v: int, sigma, mode: str = "paths") -> frozenset:
    """Endpoints ``w`` of simple paths ``v..w`` whose colour trace is ``sigma``.

    ``mode="walk-dp"`` propagates colour-filtered frontiers instead of
    enumerating paths; it is exact only for proper signatures, where a walk
    cannot revisit a vertex without repeating a colour.
    """
    _check_signature(sigma, c)
    return from_mask(sigma_ends_mask(g, c, v, tuple(sigma), mode))


def sigma_in_neighbourhood(g: Graph, c: Colouring, v: int, sigma, mode: str = "paths") -> frozenset:
    """Start points ``w`` of sigma-paths ``w..v``; equals the reversed-signature
    neighbourhood of ``v`` since the graph is undirected."""
    return sigma_neighbourhood(g, c, v, tuple(reversed(sigma)), mode)


def _reaches_into(g, c, sigma, x_mask, mode="paths"):
    """Vertex mask of ``N^{-sigma}(X)``: vertices whose sigma-neighbourhood meets X."""
    out = 0
    for w in range(g.n):
        if sigma_ends_mask(g, c, w, sigma, mode) & x_mask:
            out |= 1 << w
    return out


def check_dichotomy(g: Graph, c: Colouring, sigma) -> Verdict:
    """Sigma-neighbourhoods of any two vertices are disjoint or equal."""
    sigma = tuple(sigma)
    _check_signature(sigma, c)
    if not is_proper(sigma):
        raise ContractViolation("the dichotomy is stated for proper signatures")
    nbhd = [_sigma_paths_ends(g, c.colours, v, sigma) for v in range(g.n)]
    for u, v in itertools.combinations(range(g.n), 2):
        a, b = nbhd[u], nbhd[v]
        if a & b and a != b:
            return Verdict(False, (u, v), f"N(u)={sorted(from_mask(a))} N(v)={sorted(from_mask(b))}")
    return Verdict(True)


def check_laminarity(g: Graph, c: Colouring, sigma1, sigma2, x) -> Verdict:
    """Classes of the two (X, sigma)-equivalences on Y are pairwise disjoint or nested."""
    sigma1, sigma2 = tuple(sigma1), tuple(sigma2)
    for s in (sigma1, sigma2):
        _check_signature(s, c)
        if not is_proper(s):
            raise ContractViolation("laminarity is stated for proper signatures")
    ends1 = [_sigma_paths_ends(g, c.colours, v, sigma1) for v in range(g.n)]
    ends2 = [_sigma_paths_ends(g, c.colours, v, sigma2) for v in range(g.n)]
    bad = laminar_violation(ends1, ends2, to_mask(x))
    if bad is None:
        return Verdict(True)
    return Verdict(False, bad, "classes overlap without nesting")


def laminar_violation(ends1, ends2, x_mask: int):
    """First pair of overlapping, non-nested classes, given per-vertex sigma-end masks."""
    t1 = [e & x_mask for e in ends1]
    t2 = [e & x_mask for e in ends2]
    y = [v for v in range(len(t1)) if t1[v] and t2[v]]
    if len(y) <= 1:
        return None
    classes1 = _group(y, t1)
    classes2 = _group(y, t2)
    for a in classes1:
        for b in classes2:
            both = a & b
            if both and both != a and both != b:
                return from_mask(a), from_mask(b)
    return None


def _group(ground, keys) -> list[int]:
    classes: dict = {}
    for v in ground:
        classes[keys[v]] = classes.get(keys[v], 0) | 1 << v
    return list(classes.values())


def trace_partition_sigma_family(g: Graph, c: Colouring, x, family, ground=None) -> Partition:
    """Partition ``ground`` by the tuple of traces ``N^sigma(v) & X`` over ``family``."""
    family = sorted(tuple(s) for s in family)
    for s in family:
        _check_signature(s, c)
    x_mask = to_mask(x)
    if ground is None:
        ground = range(g.n)
    return Partition.from_keys(
        ground, lambda v: tuple(_sigma_paths_ends(g, c.colours, v, s) & x_mask for s in family))


def hatted_colouring(g: Graph, c: Colouring, r: int) -> tuple[BlowupGraph, Colouring]:
    """Blow-up with ``r`` copies coloured ``(c(v), i) -> c(v) * r + (i - 1)``."""
    if len(c) != g.n:
        raise ContractViolation("colouring does not match the graph")
    big = blowup(g, r)
    colours = [0] * big.graph.n
    for v in range(g.n):
        for i in range(1, r + 1):
            colours[big.vertex(v, i)] = c[v] * r + (i - 1)
    return big, Colouring(tuple(colours), c.palette * r)


def _trace_keys(g: Graph, colours, v: int, max_len: int, x_mask: int, layered: int = 0):
    """Set of (trace, endpoint) over simple paths from ``v`` with at most
    ``max_len`` vertices ending in ``X``.

    With ``layered = r`` only paths whose i-th vertex has colour ``= i mod r``
    are followed: on a blow-up with the hatted colouring these are exactly
    the hatted-signature paths starting in the first copy.
    """
    out = set()
    adj = g.adj
    stack = [(v, (colours[v],), 1 << v)]
    while stack:
        u, trace, on = stack.pop()
        if x_mask >> u & 1:
            out.add((trace, u))
        depth = len(trace)
        if depth == max_len:
            continue
        for w in adj[u]:
            if on >> w & 1:
                continue
            if layered and colours[w] % layered != depth:
                continue
            stack.append((w, trace + (colours[w],), on | 1 << w))
    return frozenset(out)


def twin_partition(g: Graph, x, r: int) -> Partition:
    """(X, r)-twin classes of V(G): equal ``N^r[v] & X``."""
    x_mask = to_mask(x)
    balls = g.ball_masks(r)
    return Partition.from_keys(range(g.n), lambda v: balls[v] & x_mask)


def signature_partition(g: Graph, c: Colouring, x, r: int) -> Partition:
    """Equality of ``N^sigma(v) & X`` for every signature of length <= r."""
    x_mask = to_mask(x)
    return Partition.from_keys(range(g.n), lambda v: _trace_keys(g, c.colours, v, r, x_mask))


def hatted_partition(g: Graph, c: Colouring, x, r: int) -> Partition:
    """Equality of the hatted-signature traces of the first copies in the blow-up."""
    big, hc = hatted_colouring(g, c, r)
    x_big = 0
    for xv in x:
        for i in range(1, r + 1):
            x_big |= 1 << big.vertex(xv, i)
    return Partition.from_keys(
        range(g.n),
        lambda v: _trace_keys(big.graph, hc.colours, big.vertex(v, 1), r, x_big, layered=r))


@dataclass(frozen=True)
class ChainReport:
    twin: Partition
    signature: Partition
    hatted: Partition
    violation: tuple | None

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.twin.count, self.signature.count, self.hatted.count

    @property
    def holds(self) -> bool:
        return self.violation is None

    def to_dict(self):
        out = {"holds": self.holds,
               "class_counts": {"twin_r_minus_1": self.twin.count,
                                "signature": self.signature.count,
                                "hatted": self.hatted.count}}
        if self.violation:
            out["violation"] = [self.violation[0], list(self.violation[1])]
        return out


def refinement_chain_check(g: Graph, c: Colouring, x, r: int,
                           verify_centred: bool = False) -> ChainReport:
    """Build the three partitions and check hatted <= signature <= twin_{r-1}."""
    if r < 1:
        raise ContractViolation("the refinement chain needs r >= 1")
    if not x:
        raise ContractViolation("X must be non-empty")
    if verify_centred:
        from .centred import is_r_centred

        if not is_r_centred(g, c, 2 * r + 2).is_centred:
            raise ContractViolation(f"colouring is not {2 * r + 2}-centred")
    p1 = twin_partition(g, x, r - 1)
    p2 = signature_partition(g, c, x, r)
    p3 = hatted_partition(g, c, x, r)
    violation = None
    bad = p3.refines(p2)
    if bad is not None:
        violation = ("hatted-not-refining-signature", bad)
    else:
        bad = p2.refines(p1)
        if bad is not None:
            violation = ("signature-not-refining-twin", bad)
    return ChainReport(p1, p2, p3, violation)


def lemma7_count_check(g: Graph, c: Colouring, x, family) -> Verdict:
    """Classes of W (vertices reaching X along every signature of the family)
    under joint sigma-trace equality number at most |family| * |X|."""
    family = sorted({tuple(s) for s in family})
    if not family:
        raise ContractViolation("the signature family must be non-empty")
    if not x:
        raise ContractViolation("X must be non-empty")
    for s in family:
        _check_signature(s, c)
        if not is_proper(s):
            raise ContractViolation("the count bound is stated for proper signatures")
    ends = {s: [_sigma_paths_ends(g, c.colours, v, s) for v in range(g.n)] for s in family}
    w_size, classes = reacher_class_count(ends, family, to_mask(x))
    bound = len(family) * len(x)
    return Verdict(classes <= bound, None if classes <= bound else (classes, bound),
                   data={"W": w_size, "classes": classes, "bound": bound})


def reacher_class_count(ends, family, x_mask: int) -> tuple[int, int]:
    """(|W|, classes of W) where W reaches X along every signature of ``family``.

    ``ends[sigma][v]`` is the sigma-end mask of ``v``.
    """
    n = len(ends[family[0]])
    traces = [tuple(ends[s][v] & x_mask for s in family) for v in range(n)]
    w = [t for t in traces if all(t)]
    return len(w), len(set(w))


def hatted_class_bound(r: int, palette: int, x_size: int) -> int:
    return r * 2 ** (palette ** (r + 1)) * x_size


def hatted_class_count_check(g: Graph, c: Colouring, x, r: int) -> Verdict:
    """Hatted-relation class count is at most r * 2^(palette^(r+1)) * |X|."""
    count = hatted_partition(g, c, x, r).count
    bound = hatted_class_bound(r, c.palette, len(x))
    return Verdict(count <= bound, None if count <= bound else count,
                   data={"classes": count, "bound_exponent": c.palette ** (r + 1)})


def all_sigma_paths(g: Graph, c: Colouring, sigma):
    """Every sigma-path as a vertex tuple (exhaustive, for small instances)."""
    sigma = tuple(sigma)
    out = []
    for v in range(g.n):
        if c[v] != sigma[0]:
            continue
        stack = [(v,)]
        while stack:
            path = stack.pop()
            if len(path) == len(sigma):
                out.append(path)
                continue
            want = sigma[len(path)]
            for w in g.adj[path[-1]]:
                if c[w] == want and w not in path:
                    stack.append(path + (w,))
    return out


def shared_vertex_index_check(g: Graph, c: Colouring, sigma) -> Verdict:
    """Two sigma-paths from distinct starts share vertices only at equal
    indices, and a shared vertex's colour occurs once on their union."""
    sigma = tuple(sigma)
    if not is_proper(sigma):
        raise ContractViolation("stated for proper signatures")
    paths = all_sigma_paths(g, c, sigma)
    for p, q in itertools.combinations(paths, 2):
        if p[0] == q[0]:
            continue
        for i, z in enumerate(p):
            if z in q:
                if q.index(z) != i:
                    return Verdict(False, (p, q), f"vertex {z} at indices {i} and {q.index(z)}")
                union = set(p) | set(q)
                if sum(1 for u in union if c[u] == c[z]) != 1:
                    return Verdict(False, (p, q), f"colour of {z} repeated on the union")
    return Verdict(True)
