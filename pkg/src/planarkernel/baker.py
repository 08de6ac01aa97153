"""Approximation of Dominating Set and Vertex Cover by BFS-level splitting.

The input is layered by BFS from a dummy root joined to every component,
cut into bands of consecutive levels, and each band is solved exactly by a
dynamic program over a binary tree decomposition. Probing every band
offset and keeping the one with the smallest union gives a (1+eps) bound.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .graph import PlanarGraph, SpaceLedger, VertexStream, add_dummy_root
from .treedecomp import TreeDecomposition, tree_decomposition

INF = math.inf


class ParameterError(ValueError):
    """A numeric parameter is outside its admissible range."""


@dataclass(frozen=True)
class BfsLayering:
    root: int
    depth: int
    level_of: Mapping[int, int]

    def level(self, i: int) -> list[int]:
        return sorted(v for v, lv in self.level_of.items() if lv == i)


@dataclass(frozen=True)
class GraphSlice:
    index: int
    lo: int
    hi: int
    vertices: frozenset[int]

    def is_empty(self) -> bool:
        return self.lo > self.hi


def bfs_levels(Gp: PlanarGraph, ledger: SpaceLedger | None = None) -> BfsLayering:
    """BFS levels from the maximum-id vertex (the dummy root).

    The root itself is excluded from ``level_of``; its neighbours are level 1.
    """
    root = Gp.n - 1
    dist = {root: 0}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in Gp.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    if len(dist) != Gp.n:
        raise ValueError("bfs_levels needs a connected graph")
    if ledger is not None:
        # a planar BFS in the restricted model keeps O(sqrt n) words
        ledger.peak("approx.bfs", math.isqrt(max(Gp.n, 1)) + 1)
    del dist[root]
    return BfsLayering(root, max(dist.values(), default=0), dist)


def split_levels(G: PlanarGraph, layering: BfsLayering, j: int, d: int) -> list[GraphSlice]:
    """Bands G_1 = [1..j], G_i = [j+(i-2)d .. j+(i-1)d], G_{l+2} = [j+ld .. h].

    Consecutive bands share exactly one level.
    """
    h = layering.depth
    if not (1 <= j <= d < h):
        raise ParameterError(f"need 1 <= j <= d < h, got j={j}, d={d}, h={h}")
    l = (h - j) // d
    ranges = [(1, j)]
    ranges += [(j + (i - 2) * d, j + (i - 1) * d) for i in range(2, l + 2)]
    ranges.append((j + l * d, h))
    by_level: dict[int, list[int]] = {}
    for v, lv in layering.level_of.items():
        if v < G.n:
            by_level.setdefault(lv, []).append(v)
    out = []
    for i, (lo, hi) in enumerate(ranges, 1):
        verts = frozenset(v for lv in range(lo, hi + 1) for v in by_level.get(lv, ()))
        out.append(GraphSlice(i, lo, hi, verts))
    return out


def _masks(H: PlanarGraph):
    nb = [0] * H.n
    for v in H.vertices():
        for u in H.neighbors(v):
            nb[v] |= 1 << u
    closed = [nb[v] | (1 << v) for v in range(H.n)]
    return nb, closed


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def _submasks_ordered(m: int) -> list[int]:
    """All submasks of ``m`` by size, then lexicographically by vertex list."""
    bits = _bits(m)
    out = []
    for r in range(len(bits) + 1):
        for combo in combinations(bits, r):
            out.append(_mask(combo))
    return out


def _popcount(m: int) -> int:
    return bin(m).count("1")


class _Frame:
    """Per-node data of a decomposition relative to a chosen start node."""

    def __init__(self, td: TreeDecomposition, start: int):
        self.td = td
        self.bag = [_mask(b) for b in td.bags]
        self.intro: dict[int, int] = {}
        self.shared: dict[int, int] = {}
        stack = [(start, 0)]
        while stack:
            x, pbag = stack.pop()
            self.intro[x] = self.bag[x] & ~pbag
            self.shared[x] = self.bag[x] & pbag
            for c in td.children[x]:
                stack.append((c, self.bag[x]))
        self.subsets = {x: _submasks_ordered(m) for x, m in self.intro.items()}


def bdtw_dom_set(
    H: PlanarGraph,
    td: TreeDecomposition,
    v: int | None = None,
    D: Iterable[int] = (),
    emit: bool = False,
    targets: Iterable[int] | None = None,
    ledger: SpaceLedger | None = None,
) -> tuple[int, VertexStream | None]:
    """Minimum number of vertices of H_v dominating H_v - N[D].

    H_v is the subgraph induced by the bags below node ``v`` (default: the
    root). Each node picks a subset of the vertices its bag introduces; bag
    vertices left undominated are deferred to a child whose bag contains
    them, and leaves defer nothing. ``targets`` limits which vertices need
    domination. With ``emit`` the winning choices are replayed into a
    stream, children before the node itself.
    """
    start = td.root if v is None else v
    frame = _Frame(td, start)
    nb, closed = _masks(H)
    sub = _mask(td.subtree_vertices(start))
    need = sub if targets is None else sub & _mask(targets)
    for x in D:
        need &= ~closed[x]

    def nmask(m: int) -> int:
        out = 0
        for x in _bits(m):
            out |= closed[x]
        return out

    memo: dict[tuple[int, int, int], tuple[float, tuple]] = {}

    def solve(x: int, chosen_in: int, must: int) -> float:
        key = (x, chosen_in, must)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        kids = td.children[x]
        intro = frame.intro[x]
        best: float = INF
        arg: tuple = ()
        for pick in frame.subsets[x]:
            size = _popcount(pick)
            if size >= best:
                break
            chosen = chosen_in | pick
            dom_pick = nmask(pick)
            pending = (intro & need & ~nmask(chosen)) | (must & ~dom_pick)
            if not kids:
                if pending == 0 and size < best:
                    best, arg = size, (pick, ())
                continue
            cbags = [frame.bag[c] for c in kids]
            covered = 0
            for cb in cbags:
                covered |= cb
            if pending & ~covered:
                continue
            if len(kids) == 1:
                c = kids[0]
                cost = size + solve(c, chosen & cbags[0], pending)
                if cost < best:
                    best, arg = cost, (pick, (pending,))
                continue
            only_l = pending & cbags[0] & ~cbags[1]
            only_r = pending & cbags[1] & ~cbags[0]
            both = pending & cbags[0] & cbags[1]
            for to_left in _submasks_ordered(both):
                ml = only_l | to_left
                mr = only_r | (both & ~to_left)
                cost = size + solve(kids[0], chosen & cbags[0], ml)
                if cost >= best:
                    continue
                cost += solve(kids[1], chosen & cbags[1], mr)
                if cost < best:
                    best, arg = cost, (pick, (ml, mr))
        memo[key] = (best, arg)
        return best

    total = solve(start, 0, 0)
    if ledger is not None:
        width = max(_popcount(b) for b in frame.bag)
        ledger.peak("approx.dp", (td.depth + 1) * (width + 2))
    stream = None
    if emit and total < INF:
        stream = VertexStream()

        def replay(x: int, chosen_in: int, must: int) -> None:
            pick, musts = memo[(x, chosen_in, must)][1]
            chosen = chosen_in | pick
            for c, m in zip(td.children[x], musts):
                replay(c, chosen & frame.bag[c], m)
            stream.extend(_bits(pick))

        replay(start, 0, 0)
    return int(total) if total < INF else total, stream


def bdtw_vertex_cover(
    H: PlanarGraph,
    td: TreeDecomposition,
    v: int | None = None,
    C: Iterable[int] = (),
    emit: bool = False,
    ledger: SpaceLedger | None = None,
) -> tuple[int, VertexStream | None]:
    """Minimum number of vertices of H_v covering the edges of H_v not touching C.

    Every edge lies inside some bag, and every bag vertex is decided at the
    highest node containing it, so each node only checks its own bag.
    """
    start = td.root if v is None else v
    frame = _Frame(td, start)
    nb, _ = _masks(H)
    pre = _mask(C)
    memo: dict[tuple[int, int], tuple[float, int]] = {}

    def solve(x: int, chosen_in: int) -> float:
        key = (x, chosen_in)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        bag = frame.bag[x]
        best: float = INF
        arg = 0
        for pick in frame.subsets[x]:
            if pick & pre:
                continue
            size = _popcount(pick)
            if size >= best:
                break
            taken = chosen_in | pick | pre
            ok = True
            for a in _bits(bag & ~taken):
                if nb[a] & bag & ~taken:
                    ok = False
                    break
            if not ok:
                continue
            cost = size
            for c in td.children[x]:
                cost += solve(c, (chosen_in | pick) & frame.bag[c])
                if cost >= best:
                    break
            if cost < best:
                best, arg = cost, pick
        memo[key] = (best, arg)
        return best

    total = solve(start, 0)
    if ledger is not None:
        width = max(_popcount(b) for b in frame.bag)
        ledger.peak("approx.dp", (td.depth + 1) * (width + 2))
    stream = None
    if emit and total < INF:
        stream = VertexStream()

        def replay(x: int, chosen_in: int) -> None:
            pick = memo[(x, chosen_in)][1]
            for c in td.children[x]:
                replay(c, (chosen_in | pick) & frame.bag[c])
            stream.extend(_bits(pick))

        replay(start, 0)
    return int(total) if total < INF else total, stream


@dataclass
class BakerRun:
    """Outcome of one approximation run, kept for inspection and tests."""

    problem: str
    epsilon: Fraction
    d: int
    band: int
    depth: int
    j: int | None
    counts: dict[int, int]
    solution: VertexStream
    duplicates: int = 0
    duplicate_levels: set[int] = field(default_factory=set)
    shared_levels: set[int] = field(default_factory=set)
    decompositions: list[tuple[int, int, int, int]] = field(default_factory=list)
    # (slice size, width, depth, d used for the width budget)
    trees: list[tuple[PlanarGraph, TreeDecomposition, int]] | None = None
    # filled only when requested: (slice graph, decomposition, d used)


def _parse_eps(epsilon) -> Fraction:
    eps = Fraction(epsilon) if not isinstance(epsilon, float) else Fraction(epsilon).limit_denominator(10**6)
    if not 0 < eps <= 1:
        raise ParameterError(f"epsilon must lie in (0, 1], got {epsilon}")
    return eps


def _solve_band(problem, G, pool, owned, level_of, ledger, run):
    if not pool:
        return []
    H, old = G.induced(pool)
    new_of = {o: i for i, o in enumerate(old)}
    lv = {i: level_of[o] for i, o in enumerate(old)}
    span = max(lv.values()) - min(lv.values()) if lv else 0
    d_used = max(span, 1)
    td = tree_decomposition(H, d_used, levels=lv)
    run.decompositions.append((H.n, td.width, td.depth, d_used))
    if run.trees is not None:
        run.trees.append((H, td, d_used))
    if ledger is not None:
        ledger.peak("approx.td", td.width + 1)
    if problem == "ds":
        targets = [new_of[o] for o in owned]
        _, stream = bdtw_dom_set(H, td, emit=True, targets=targets, ledger=ledger)
    else:
        _, stream = bdtw_vertex_cover(H, td, emit=True, ledger=ledger)
    return [old[i] for i in stream]


def _bands(problem, layering, j, band, G):
    """(pool vertices, owned vertices, pool level range) per band for offset j."""
    h = layering.depth
    by_level: dict[int, list[int]] = {}
    for v, lv in layering.level_of.items():
        by_level.setdefault(lv, []).append(v)

    def levels(lo, hi):
        return [v for lv in range(max(lo, 1), min(hi, h) + 1) for v in by_level.get(lv, ())]

    if j is None:
        return [(levels(1, h), levels(1, h), (1, h))]
    out = []
    for s in split_levels(G, layering, j, band):
        if problem == "vc":
            out.append((sorted(s.vertices), [], (s.lo, s.hi)))
        else:
            own_lo = s.lo if s.index == 1 else s.lo + 1
            own_hi = s.hi
            out.append((levels(own_lo - 1, own_hi + 1), levels(own_lo, own_hi), (own_lo - 1, own_hi + 1)))
    return out


def _run_offset(problem, G, layering, j, band, ledger, run):
    union: list[int] = []
    pool_levels = []
    for pool, owned, rng in _bands(problem, layering, j, band, G):
        pool_levels.append(rng)
        union.extend(_solve_band(problem, G, pool, owned, layering.level_of, ledger, run))
    return union, pool_levels


def baker_approx(
    G: PlanarGraph, epsilon, problem: str, ledger: SpaceLedger | None = None, *, keep_trees: bool = False
) -> BakerRun:
    """Shared driver for :func:`approx_ds` and :func:`approx_vc`.

    Vertex cover uses bands of d = ceil(1/eps) levels exactly as split;
    every band edge is covered inside its band. Dominating set solves each
    band of width 2d for its own levels while allowing dominators one level
    outside, which is what makes the union dominate G.
    """
    eps = _parse_eps(epsilon)
    d = math.ceil(1 / eps)
    band = d if problem == "vc" else 2 * d
    if G.n == 0:
        return BakerRun(problem, eps, d, band, 0, None, {}, VertexStream())
    Gp = add_dummy_root(G, ledger)
    layering = bfs_levels(Gp, ledger)
    h = layering.depth
    run = BakerRun(problem, eps, d, band, h, None, {}, VertexStream(), trees=[] if keep_trees else None)
    if ledger is not None:
        ledger.peak("approx.counter", 2)
    offsets: list[int | None] = list(range(1, band + 1)) if band < h else [None]
    for j in offsets:
        union, _ = _run_offset(problem, G, layering, j, band, ledger, run)
        run.counts[j if j is not None else 0] = len(set(union))
    best = min(run.counts, key=lambda j: (run.counts[j], j))
    run.j = best if best != 0 else None
    union, pool_levels = _run_offset(problem, G, layering, run.j, band, ledger, run)
    seen: dict[int, int] = {}
    for v in union:
        seen[v] = seen.get(v, 0) + 1
    for v in G.vertices():
        if v in seen:
            run.solution.emit(v)
    run.duplicates = len(union) - len(seen)
    run.duplicate_levels = {layering.level_of[v] for v, c in seen.items() if c > 1}
    for (a1, b1), (a2, b2) in zip(pool_levels, pool_levels[1:]):
        run.shared_levels |= set(range(max(a1, a2), min(b1, b2) + 1))
    return run


def approx_ds(G: PlanarGraph, epsilon, ledger: SpaceLedger | None = None) -> VertexStream:
    """Dominating set of size at most (1+eps) times optimal, as a sorted stream."""
    return baker_approx(G, epsilon, "ds", ledger).solution


def approx_vc(G: PlanarGraph, epsilon, ledger: SpaceLedger | None = None) -> VertexStream:
    """Vertex cover of size at most (1+eps) times optimal, as a sorted stream."""
    return baker_approx(G, epsilon, "vc", ledger).solution
