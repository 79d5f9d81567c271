"""r-centred colourings: verification, exact minimum, and treedepth upper bounds."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolation, GuardExceeded
from .graph import Graph, component_masks, from_mask, iter_bits
from .signatures import Colouring

CENTRED_GUARD_N = 16
CHI_GUARD_N = 10
TREEDEPTH_GUARD_N = 20


@dataclass(frozen=True)
class CentredVerdict:
    is_centred: bool
    witness: frozenset | None = None

    def __bool__(self):
        return self.is_centred

    def to_dict(self):
        out = {"is_centred": self.is_centred}
        if self.witness is not None:
            out["witness"] = sorted(self.witness)
        return out


def connected_subsets(masks, anchor: int, allowed: int, prune=None):
    """Connected vertex sets containing ``anchor`` inside ``allowed``.

    Each set is produced once. ``prune(S)`` returning true skips the
    supersets grown from ``S`` (``S`` itself is still yielded first).
    """
    allowed &= ~(1 << anchor)
    stack = [(1 << anchor, masks[anchor] & allowed, 0)]
    while stack:
        s, ext, forb = stack.pop()
        yield s
        if prune is not None and prune(s):
            continue
        children = []
        while ext:
            w = ext & -ext
            ext ^= w
            wv = w.bit_length() - 1
            new_ext = (ext | masks[wv]) & allowed & ~s & ~w & ~forb
            children.append((s | w, new_ext, forb))
            forb |= w
        stack.extend(reversed(children))


def _violates(s: int, colours, r: int):
    """None if ``s`` has r colours or a centre; otherwise True."""
    counts: dict = {}
    for v in iter_bits(s):
        counts[colours[v]] = counts.get(colours[v], 0) + 1
    if len(counts) >= r or 1 in counts.values():
        return False
    return True


def is_r_centred(g: Graph, c: Colouring, r: int, max_n: int = CENTRED_GUARD_N) -> CentredVerdict:
    """Every connected vertex set has a uniquely coloured vertex or >= r colours.

    Induced connected sets suffice: a connected subgraph on vertex set S
    has the same colour multiset as G[S], and G[S] is connected too.
    """
    if len(c) != g.n:
        raise ContractViolation("colouring does not match the graph")
    if g.n > max_n:
        raise GuardExceeded(f"is_r_centred refused for n={g.n} > {max_n}", estimate=2 ** g.n)
    colours = c.colours
    full = g.vertex_mask

    def enough_colours(s):
        return len({colours[v] for v in iter_bits(s)}) >= r

    for anchor in range(g.n):
        higher = full & ~((1 << (anchor + 1)) - 1)
        for s in connected_subsets(g.masks, anchor, higher, enough_colours):
            if _violates(s, colours, r):
                return CentredVerdict(False, from_mask(s))
    return CentredVerdict(True)


def _violation_through(masks, v, coloured, colours, r):
    def enough(s):
        return len({colours[u] for u in iter_bits(s)}) >= r

    for s in connected_subsets(masks, v, coloured, enough):
        if _violates(s, colours, r):
            return True
    return False


def chi_r_exact(g: Graph, r: int, max_n: int = CHI_GUARD_N) -> tuple[int, Colouring]:
    """Minimum palette of an r-centred colouring, with a witness.

    Iterative deepening on the palette size; backtracking assigns colours in
    descending-degree order, checks only connected sets through the newly
    coloured vertex, and breaks symmetry by first-use colour order.
    """
    if g.n > max_n:
        raise GuardExceeded(f"chi_r_exact refused for n={g.n} > {max_n}", estimate=g.n ** g.n)
    if r < 1:
        raise ContractViolation("r must be >= 1")
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    masks = g.masks
    for k in range(1, g.n + 1):
        colours = [-1] * g.n

        def assign(i, coloured, used):
            if i == g.n:
                return True
            v = order[i]
            for col in range(min(used + 1, k)):
                colours[v] = col
                now = coloured | 1 << v
                if not _violation_through(masks, v, now, colours, r):
                    if assign(i + 1, now, max(used, col + 1)):
                        return True
            colours[v] = -1
            return False

        if assign(0, 0, 0):
            witness = Colouring(tuple(colours), k)
            assert is_r_centred(g, witness, r, max_n=max(max_n, CENTRED_GUARD_N))
            return k, witness
    raise AssertionError("an injective colouring is always centred")


@dataclass(frozen=True)
class EliminationForest:
    """Rooted forest on V(G); ``parent[v]`` is ``-1`` at roots, depths start at 1."""

    parent: tuple
    depth: tuple

    @property
    def roots(self) -> tuple:
        return tuple(v for v, p in enumerate(self.parent) if p < 0)

    @property
    def height(self) -> int:
        return max(self.depth)

    def ancestors(self, v: int) -> list[int]:
        out = []
        while self.parent[v] >= 0:
            v = self.parent[v]
            out.append(v)
        return out

    def validate(self, g: Graph) -> None:
        if len(self.parent) != g.n:
            raise ContractViolation("forest does not match the graph")
        for v in range(g.n):
            p = self.parent[v]
            expected = 1 if p < 0 else self.depth[p] + 1
            if self.depth[v] != expected:
                raise ContractViolation(f"inconsistent depth at vertex {v}")
        for u, v in g.edges():
            if u not in self.ancestors(v) and v not in self.ancestors(u):
                raise ContractViolation(f"edge ({u}, {v}) is not ancestor-descendant")

    def to_lines(self) -> list[str]:
        return [f"{v} {p} {d}" for v, (p, d) in enumerate(zip(self.parent, self.depth))]


def _forest_from_choices(n, build):
    parent = [-1] * n
    depth = [0] * n

    def place(mask, par, d):
        for comp in build(mask):
            root, rest = comp
            parent[root] = par
            depth[root] = d
            if rest:
                place(rest, root, d + 1)

    return parent, depth, place


def treedepth_exact(g: Graph, max_n: int = TREEDEPTH_GUARD_N,
                    heuristic_fallback: bool = False) -> tuple[int, EliminationForest]:
    """Exact treedepth by component splitting with a memo keyed on vertex bitmasks."""
    if g.n > max_n:
        if heuristic_fallback:
            return treedepth_heuristic(g)
        raise GuardExceeded(f"treedepth_exact refused for n={g.n} > {max_n}", estimate=2 ** g.n)
    masks = g.masks
    memo: dict[int, tuple[int, int]] = {}

    def td_connected(mask):
        hit = memo.get(mask)
        if hit is not None:
            return hit[0]
        if mask & (mask - 1) == 0:
            memo[mask] = (1, mask.bit_length() - 1)
            return 1
        best, best_v = None, -1
        for v in iter_bits(mask):
            rest = mask & ~(1 << v)
            worst = 0
            for comp in component_masks(masks, rest):
                worst = max(worst, td_connected(comp))
                if best is not None and worst + 1 >= best:
                    break
            if best is None or worst + 1 < best:
                best, best_v = worst + 1, v
        memo[mask] = (best, best_v)
        return best

    td = max(td_connected(comp) for comp in g.components())

    def build(mask):
        out = []
        for comp in component_masks(masks, mask):
            td_connected(comp)
            root = memo[comp][1]
            out.append((root, comp & ~(1 << root)))
        return out

    parent, depth, place = _forest_from_choices(g.n, build)
    place(g.vertex_mask, -1, 1)
    forest = EliminationForest(tuple(parent), tuple(depth))
    assert forest.height == td
    return td, forest


def treedepth_heuristic(g: Graph) -> tuple[int, EliminationForest]:
    """Upper bound: repeatedly root each component at a maximum-degree vertex."""
    masks = g.masks

    def build(mask):
        out = []
        for comp in component_masks(masks, mask):
            root = max(iter_bits(comp), key=lambda v: ((masks[v] & comp).bit_count(), -v))
            out.append((root, comp & ~(1 << root)))
        return out

    parent, depth, place = _forest_from_choices(g.n, build)
    place(g.vertex_mask, -1, 1)
    forest = EliminationForest(tuple(parent), tuple(depth))
    return forest.height, forest


def centred_colouring_from_forest(forest: EliminationForest, g: Graph | None = None) -> Colouring:
    """Colour each vertex by its forest depth (0-based); centred for every r.

    In a connected set, the shallowest vertex is unique: two shallowest
    vertices would be incomparable in the forest, yet the set connects them
    through edges that all join ancestor-descendant pairs.
    """
    if g is not None:
        forest.validate(g)
    return Colouring(tuple(d - 1 for d in forest.depth), forest.height)
