"""Neighbourhood complexity: (X, r)-trace tables, exact and heuristic nu_r, bound comparisons."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContractViolation, GuardExceeded
from .graph import Graph, SubgraphSpec, canonical_form, from_mask, iter_bits, to_mask
from .signatures import Partition

NU_GUARD_N = 9
NU_GUARD_M = 14


@dataclass(frozen=True)
class TraceTable:
    traces: tuple  # frozenset per vertex
    partition: Partition

    @property
    def count(self) -> int:
        return self.partition.count


def trace_table(g: Graph, x, r: int) -> TraceTable:
    x_mask = to_mask(x)
    if not x_mask:
        raise ContractViolation("X must be non-empty")
    if x_mask >> g.n:
        raise ContractViolation("X must be a subset of V(G)")
    balls = g.ball_masks(r)
    traces = tuple(from_mask(b & x_mask) for b in balls)
    return TraceTable(traces, Partition.from_keys(range(g.n), lambda v: traces[v]))


def count_traces(g: Graph, x_mask: int, r: int) -> int:
    return len({b & x_mask for b in g.ball_masks(r)})


def nu_fixed(g: Graph, x, r: int) -> Fraction:
    x = frozenset(x)
    return Fraction(trace_table(g, x, r).count, len(x))


@dataclass(frozen=True)
class NuReport:
    value: Fraction
    mode: str  # "exact", "lower-bound" or "fixed-instance"
    witness: SubgraphSpec
    x: frozenset
    radius: int
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "value": str(self.value),
            "mode": self.mode,
            "radius": self.radius,
            "witness": {"vertices": sorted(self.witness.vertices),
                        "edges": [list(e) for e in sorted(self.witness.edges)],
                        "X": sorted(self.x)},
            **({"meta": self.meta} if self.meta else {}),
        }


def evaluate_witness(g: Graph, spec: SubgraphSpec, x, r: int) -> Fraction:
    """nu_fixed of the subgraph ``spec`` with set ``X``, in host labels."""
    from .graph import realize_subgraph

    h, relabel = realize_subgraph(g, spec)
    if not set(x) <= spec.vertices:
        raise ContractViolation("X must lie inside the witness subgraph")
    return nu_fixed(h, (relabel[v] for v in x), r)


def _best_x(g: Graph, r: int):
    """max over non-empty X of distinct traces / |X|, with the first maximiser."""
    balls = g.ball_masks(r)
    best, best_x = Fraction(0), 0
    for x_mask in range(1, 1 << g.n):
        size = x_mask.bit_count()
        # at most n classes; skip X that cannot beat the incumbent
        if best * size >= g.n:
            continue
        val = Fraction(len({b & x_mask for b in balls}), size)
        if val > best:
            best, best_x = val, x_mask
    return best, best_x


# canonical key, r -> (value, vertex mask, edge list, X mask) in canonical labels
_NU_CACHE: dict = {}


def _nu_subgraphs(g: Graph, r: int):
    """Max over all subgraphs H of G of _best_x(H), memoised across isomorphic subgraphs.

    Returns (value, vertex mask, edges, X mask) in the labels of ``g``.
    """
    key, perm = canonical_form(g)
    hit = _NU_CACHE.get((key, r))
    if hit is None:
        canon = g.relabel(perm)
        hit = _nu_subgraphs_uncached(canon, r)
        _NU_CACHE[(key, r)] = hit
    value, vmask, edges, xmask = hit
    inv = [0] * g.n
    for v, p in enumerate(perm):
        inv[p] = v
    return (value,
            to_mask(inv[p] for p in iter_bits(vmask)),
            [tuple(sorted((inv[a], inv[b]))) for a, b in edges],
            to_mask(inv[p] for p in iter_bits(xmask)))


def _nu_subgraphs_uncached(g: Graph, r: int):
    value, xmask = _best_x(g, r)
    best = (value, g.vertex_mask, g.edges(), xmask)
    for u, v in g.edges():
        child = _nu_subgraphs(g.without_edge(u, v), r)
        if child[0] > best[0]:
            best = child
    if g.n > 1:
        for v in range(g.n):
            cval, cv, cedges, cx = _nu_subgraphs(g.without_vertex(v), r)
            if cval > best[0]:
                lift = lambda u: u if u < v else u + 1
                best = (cval, to_mask(lift(u) for u in iter_bits(cv)),
                        [(lift(a), lift(b)) for a, b in cedges],
                        to_mask(lift(u) for u in iter_bits(cx)))
    return best


def nu_exact(g: Graph, r: int, max_n: int = NU_GUARD_N, max_m: int = NU_GUARD_M,
             induced_only: bool = False) -> NuReport:
    """Exact r-neighbourhood complexity by exhaustive search over (H, X).

    Subgraphs are explored by single edge and vertex deletions, memoised on
    a canonical form so each isomorphism class of subgraph is scored once.
    ``induced_only`` restricts H to induced subgraphs, which only gives a
    lower bound on the true value.
    """
    if r < 0:
        raise ContractViolation("r must be >= 0")
    if g.n > max_n or g.m > max_m:
        raise GuardExceeded(
            f"nu_exact refused for n={g.n}, m={g.m} (guard n<={max_n}, m<={max_m}); "
            "use nu_lower_bound for larger graphs",
            estimate=2 ** (g.m + g.n) * 2 ** g.n)
    if induced_only:
        best = None
        for vmask in range(1, 1 << g.n):
            sub, relabel = g.induced(iter_bits(vmask))
            val, xm = _best_x(sub, r)
            if best is None or val > best[0]:
                back = {i: v for v, i in relabel.items()}
                best = (val, vmask, from_mask(to_mask(back[i] for i in iter_bits(xm))))
        val, vmask, x = best
        spec = SubgraphSpec.induced(g, iter_bits(vmask))
        return NuReport(val, "lower-bound", spec, x, r, {"induced_only": True})
    value, vmask, edges, xmask = _nu_subgraphs(g, r)
    spec = SubgraphSpec(from_mask(vmask), frozenset(edges))
    return NuReport(value, "exact", spec, from_mask(xmask), r)


def nu_lower_bound(g: Graph, r: int, seed: int = 0, budget: int = 2000,
                   restarts: int = 4) -> NuReport:
    """Hill-climbing witness search; the value is always attained by its witness.

    Moves toggle X membership, delete or restore an edge, or drop or add a
    vertex. Starts from the best single-vertex X on the whole graph.
    """
    rng = random.Random(seed)
    all_edges = g.edges()

    def score(vmask, edges, xmask):
        if not xmask or xmask & ~vmask:
            return Fraction(-1)
        masks = [0] * g.n
        for u, v in edges:
            if vmask >> u & 1 and vmask >> v & 1:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
        from .graph import ball_mask

        traces = {ball_mask(masks, v, r, vmask) & xmask for v in iter_bits(vmask)}
        return Fraction(len(traces), xmask.bit_count())

    balls = g.ball_masks(r)
    start_x = max(range(g.n), key=lambda v: (len({b >> v & 1 for b in balls}), -v))
    best = (score(g.vertex_mask, all_edges, 1 << start_x), g.vertex_mask, frozenset(all_edges),
            1 << start_x)
    per_restart = max(1, budget // max(1, restarts))
    for attempt in range(restarts):
        vmask, edges, xmask = best[1], set(best[2]), best[3]
        if attempt:
            vmask = g.vertex_mask
            edges = {e for e in all_edges if rng.random() < 0.7}
            xmask = 0
            while not xmask:
                xmask = to_mask(v for v in range(g.n) if rng.random() < 0.3)
        cur = score(vmask, edges, xmask)
        for _ in range(per_restart):
            move = rng.randrange(3)
            nv, ne, nx = vmask, set(edges), xmask
            if move == 0:
                nx ^= 1 << rng.randrange(g.n)
                nv |= nx
            elif move == 1 and all_edges:
                e = all_edges[rng.randrange(len(all_edges))]
                ne.symmetric_difference_update({e})
            else:
                v = rng.randrange(g.n)
                nv ^= 1 << v
                nx &= nv
            if not nv:
                continue
            val = score(nv, ne, nx)
            if val >= cur:
                vmask, edges, xmask, cur = nv, ne, nx, val
                if val > best[0]:
                    best = (val, vmask, frozenset(edges), xmask)
    value, vmask, edges, xmask = best
    spec = SubgraphSpec(from_mask(vmask),
                        frozenset(e for e in edges if vmask >> e[0] & 1 and vmask >> e[1] & 1))
    return NuReport(value, "lower-bound", spec, from_mask(xmask), r,
                    {"seed": seed, "budget": budget, "restarts": restarts})


# -- bound comparison ------------------------------------------------------

EXPONENT_CAP = 4096


@dataclass(frozen=True)
class PowerBound:
    """The integer ``factor * 2**exponent``, expanded only when small."""

    factor: int
    exponent: int

    @property
    def exact(self) -> int | None:
        return self.factor << self.exponent if self.exponent <= EXPONENT_CAP else None

    def at_least(self, value: Fraction) -> bool:
        if self.exponent <= EXPONENT_CAP:
            return value <= self.factor << self.exponent
        return value.numerator.bit_length() <= self.exponent  # value < 2**exponent

    def __str__(self):
        exact = self.exact
        return str(exact) if exact is not None else f"{self.factor}*2^{self.exponent}"


def centred_colouring_bound(r: int, chi: int) -> PowerBound:
    """(r+1) * 2^(chi^(r+2)) for chi = the (2r+2)-centred colouring number."""
    return PowerBound(r + 1, chi ** (r + 2))


def weak_colouring_bound(r: int, wcol: int) -> Fraction:
    """(1/2)(2r+2)^wcol * wcol + 1 for wcol = the weak 2r-colouring number."""
    return Fraction((2 * r + 2) ** wcol * wcol, 2) + 1


@dataclass(frozen=True)
class BoundsReport:
    radius: int
    nu: Fraction
    nu_mode: str
    chi: int | None
    chi_mode: str | None
    wcol: int | None
    wcol_mode: str | None
    centred_bound: PowerBound | None
    weak_bound: Fraction | None

    @property
    def informational(self) -> bool:
        return any(m not in (None, "exact") for m in (self.chi_mode, self.wcol_mode))

    @property
    def centred_holds(self):
        return None if self.centred_bound is None else self.centred_bound.at_least(self.nu)

    @property
    def weak_holds(self):
        return None if self.weak_bound is None else self.nu <= self.weak_bound

    def to_dict(self):
        return {
            "radius": self.radius,
            "nu": {"value": str(self.nu), "mode": self.nu_mode},
            "chi": None if self.chi is None else {"value": self.chi, "mode": self.chi_mode,
                                                  "index": 2 * self.radius + 2},
            "wcol": None if self.wcol is None else {"value": self.wcol, "mode": self.wcol_mode,
                                                    "index": 2 * self.radius},
            "centred_bound": None if self.centred_bound is None else {
                "value": str(self.centred_bound), "exponent": self.centred_bound.exponent,
                "holds": self.centred_holds},
            "weak_bound": None if self.weak_bound is None else {
                "value": str(self.weak_bound), "holds": self.weak_holds},
            "informational": self.informational,
        }


def theorem_bounds(g: Graph, r: int, chi=None, wcol=None, nu=None,
                   chi_mode="exact", wcol_mode="exact") -> BoundsReport:
    """Compare nu_r against both colouring-number bounds.

    ``chi`` and ``wcol`` may be integers, ``"compute"`` (exact search), or
    ``None`` to skip that bound. Non-exact parameter modes mark the report
    informational.
    """
    from .centred import chi_r_exact
    from .wcol import wcol_exact

    if chi == "compute":
        chi = chi_r_exact(g, 2 * r + 2)[0]
        chi_mode = "exact"
    if wcol == "compute":
        wcol = wcol_exact(g, 2 * r)[0]
        wcol_mode = "exact"
    if nu is None:
        nu_report = nu_exact(g, r)
        nu, nu_mode = nu_report.value, nu_report.mode
    elif isinstance(nu, NuReport):
        nu, nu_mode = nu.value, nu.mode
    else:
        nu, nu_mode = Fraction(nu), "supplied"
    return BoundsReport(
        r, nu, nu_mode,
        chi, chi_mode if chi is not None else None,
        wcol, wcol_mode if wcol is not None else None,
        centred_colouring_bound(r, chi) if chi is not None else None,
        weak_colouring_bound(r, wcol) if wcol is not None else None)
