"""Rooted binary tree decompositions of bounded width and logarithmic depth.

Construction: greedy elimination orderings (min-fill, min-degree and, when
BFS levels are known, level order), the narrowest one wins; exhaustive
treewidth for tiny graphs as a last resort. Deep trees are rebalanced by
recursive centroid splitting, which grows bags by at most the interface of
the split component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .graph import PlanarGraph

EXHAUSTIVE_LIMIT = 15


class TreeDecompositionError(RuntimeError):
    """No decomposition within the width budget could be produced."""


def width_bound(d: int) -> int:
    return 12 * d + 5


def depth_bound(size: int) -> float:
    return 4 * math.log2(max(size, 2)) + 4


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    children: tuple[tuple[int, ...], ...]
    root: int
    parent: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        parent = [-1] * len(self.bags)
        for x, ch in enumerate(self.children):
            for c in ch:
                parent[c] = x
        object.__setattr__(self, "parent", tuple(parent))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @property
    def depth(self) -> int:
        best = 0
        stack = [(self.root, 0)]
        while stack:
            x, dep = stack.pop()
            best = max(best, dep)
            stack.extend((c, dep + 1) for c in self.children[x])
        return best

    def __len__(self) -> int:
        return len(self.bags)

    def preorder(self) -> list[int]:
        out, stack = [], [self.root]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(reversed(self.children[x]))
        return out

    def subtree_vertices(self, x: int) -> frozenset[int]:
        out: set[int] = set()
        stack = [x]
        while stack:
            y = stack.pop()
            out |= self.bags[y]
            stack.extend(self.children[y])
        return frozenset(out)

    def verify(self, G: PlanarGraph, vertices: Iterable[int] | None = None) -> list[str]:
        """Failed tree-decomposition axioms (empty list when valid)."""
        failures = []
        verts = set(G.vertices() if vertices is None else vertices)
        nodes = self.preorder()
        if sorted(nodes) != list(range(len(self.bags))):
            failures.append("tree: nodes unreachable from root or repeated")
        if any(len(ch) > 2 for ch in self.children):
            failures.append("tree: some node has more than two children")
        seen = set().union(*self.bags) if self.bags else set()
        if not verts <= seen:
            failures.append(f"vertex coverage: {sorted(verts - seen)[:5]} in no bag")
        bag_of: dict[int, list[int]] = {}
        for x, bag in enumerate(self.bags):
            for v in bag:
                bag_of.setdefault(v, []).append(x)
        for u in verts:
            for w in G.neighbors(u):
                if w in verts and u < w and not any(w in self.bags[x] for x in bag_of.get(u, ())):
                    failures.append(f"edge coverage: {{{u},{w}}} in no bag")
                    break
        for v, xs in bag_of.items():
            # occurrences are connected iff exactly one of them has its parent outside
            tops = [x for x in xs if self.parent[x] < 0 or v not in self.bags[self.parent[x]]]
            if len(tops) != 1:
                failures.append(f"connectivity: occurrences of {v} split into {len(tops)} subtrees")
        return failures


def from_elimination_order(G: PlanarGraph, order: Sequence[int]):
    """Tree (as undirected adjacency) of the elimination ordering ``order``."""
    verts = list(order)
    rank = {v: i for i, v in enumerate(verts)}
    nbrs = {v: {u for u in G.neighbors(v) if u in rank} for v in verts}
    bags = []
    parent_vertex: list[int | None] = []
    for v in verts:
        higher = {u for u in nbrs[v] if rank[u] > rank[v]}
        bags.append(frozenset(higher | {v}))
        for a in higher:
            nbrs[a] |= higher - {a}
        parent_vertex.append(min(higher, key=rank.__getitem__) if higher else None)
    adj: list[list[int]] = [[] for _ in verts]
    roots = []
    for i, p in enumerate(parent_vertex):
        if p is None:
            roots.append(i)
        else:
            adj[i].append(rank[p])
            adj[rank[p]].append(i)
    for r in roots[1:]:
        adj[r].append(roots[0])
        adj[roots[0]].append(r)
    return bags, adj, (roots[0] if roots else None)


def _greedy_order(G: PlanarGraph, verts: Sequence[int], score: Callable) -> list[int]:
    nbrs = {v: {u for u in G.neighbors(v)} for v in verts}
    vs = set(verts)
    for v in verts:
        nbrs[v] &= vs
    order = []
    remaining = set(verts)
    while remaining:
        v = min(remaining, key=lambda x: (score(x, nbrs), x))
        order.append(v)
        nb = nbrs[v]
        for a in nb:
            nbrs[a] |= nb - {a}
            nbrs[a].discard(v)
        remaining.discard(v)
        del nbrs[v]
    return order


def _fill(v, nbrs):
    nb = list(nbrs[v])
    return sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in nbrs[a])


def _degree(v, nbrs):
    return len(nbrs[v])


def min_fill_order(G: PlanarGraph, verts: Sequence[int]) -> list[int]:
    return _greedy_order(G, verts, _fill)


def min_degree_order(G: PlanarGraph, verts: Sequence[int]) -> list[int]:
    return _greedy_order(G, verts, _degree)


def exact_treewidth_order(G: PlanarGraph, verts: Sequence[int]) -> tuple[int, list[int]]:
    """Optimal elimination ordering by dynamic programming over vertex subsets."""
    verts = list(verts)
    k = len(verts)
    if k == 0:
        return -1, []
    idx = {v: i for i, v in enumerate(verts)}
    adj = [0] * k
    for v in verts:
        for u in G.neighbors(v):
            if u in idx:
                adj[idx[v]] |= 1 << idx[u]
    full = (1 << k) - 1

    def q(S: int, v: int) -> int:
        # vertices outside S + v reachable from v through S
        seen = 1 << v
        frontier = 1 << v
        out = 0
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            x = low.bit_length() - 1
            new = adj[x] & ~seen
            seen |= new
            out |= new & ~S
            frontier |= new & S
        return bin(out).count("1")

    tw = {0: -1}
    choice = {}
    for size in range(1, k + 1):
        new = {}
        for S in _subsets_of_size(k, size):
            best, arg = k + 1, -1
            rest = S
            while rest:
                low = rest & -rest
                rest ^= low
                v = low.bit_length() - 1
                prev = tw[S ^ low]
                val = max(prev, q(S ^ low, v))
                if val < best:
                    best, arg = val, v
            new[S] = best
            choice[S] = arg
        tw.update(new)
    order = []
    S = full
    while S:
        v = choice[S]
        order.append(verts[v])
        S ^= 1 << v
    order.reverse()
    return tw[full], order


def _subsets_of_size(k: int, size: int):
    S = (1 << size) - 1
    limit = 1 << k
    while S < limit:
        yield S
        c = S & -S
        r = S + c
        S = (((r ^ S) >> 2) // c) | r


def _contract(bags, adj, root):
    """Merge every node whose bag is contained in a neighbour's bag."""
    bags = [set(b) for b in bags]
    adj = [set(a) for a in adj]
    alive = set(range(len(bags)))
    changed = True
    while changed:
        changed = False
        for x in sorted(alive):
            for y in sorted(adj[x]):
                if bags[x] <= bags[y]:
                    for z in adj[x] - {y}:
                        adj[z].discard(x)
                        adj[z].add(y)
                        adj[y].add(z)
                    adj[y].discard(x)
                    alive.discard(x)
                    if root == x:
                        root = y
                    changed = True
                    break
    ids = {x: i for i, x in enumerate(sorted(alive))}
    new_bags = [frozenset(bags[x]) for x in sorted(alive)]
    new_adj = [[ids[y] for y in sorted(adj[x])] for x in sorted(alive)]
    return new_bags, new_adj, ids[root]


def _root_tree(adj, root):
    children = [[] for _ in adj]
    seen = {root}
    stack = [root]
    order = []
    while stack:
        x = stack.pop()
        order.append(x)
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                children[x].append(y)
                stack.append(y)
    return children, order


def _binarize(bags: list, children: list, root: int) -> TreeDecomposition:
    """Split high-degree nodes into balanced chains of bag copies."""
    size = {}
    _, order = _root_tree([list(c) for c in children], root)
    for x in reversed(order):
        size[x] = 1 + sum(size[c] for c in children[x])
    out_bags: list[frozenset[int]] = []
    out_children: list[list[int]] = []

    def new(bag):
        out_bags.append(bag)
        out_children.append([])
        return len(out_bags) - 1

    def group(bag, items):
        # items: list of (weight, built node id); returns node id
        if len(items) <= 2:
            node = new(bag)
            out_children[node] = [i for _, i in items]
            return node
        items = sorted(items, key=lambda t: -t[0])
        left, right, wl, wr = [], [], 0, 0
        for w, i in items:
            if wl <= wr:
                left.append((w, i))
                wl += w
            else:
                right.append((w, i))
                wr += w
        node = new(bag)
        out_children[node] = [
            group(bag, left) if len(left) > 1 else left[0][1],
            group(bag, right) if len(right) > 1 else right[0][1],
        ]
        return node

    built = {}
    for x in reversed(order):
        items = [(size[c], built[c]) for c in children[x]]
        built[x] = group(bags[x], items)
    return TreeDecomposition(tuple(out_bags), tuple(tuple(c) for c in out_children), built[root])


def _rebalance(bags: list, adj: list) -> tuple[list, list, int]:
    """Recursive centroid rebuild of a tree decomposition.

    A component C of the old tree becomes a subtree whose root bag is the
    bag of a split node plus the vertices C shares with the rest of the
    tree. The split node balances sizes while C touches at most two outside
    nodes and balances those contacts otherwise.
    """
    out_bags: list[frozenset[int]] = []
    out_children: list[list[int]] = []

    def boundary(comp: set[int]) -> tuple[list[int], frozenset[int]]:
        touch = []
        shared: set[int] = set()
        for x in comp:
            outside = [y for y in adj[x] if y not in comp]
            if outside:
                touch.append(x)
                for y in outside:
                    shared |= bags[x] & bags[y]
        return sorted(touch), frozenset(shared)

    def split_parts(comp: set[int], c: int) -> list[set[int]]:
        parts = []
        seen = {c}
        for s in sorted(adj[c]):
            if s not in comp or s in seen:
                continue
            part = {s}
            seen.add(s)
            stack = [s]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in comp and y not in seen:
                        seen.add(y)
                        part.add(y)
                        stack.append(y)
            parts.append(part)
        return parts

    def build(comp: set[int]) -> int:
        touch, shared = boundary(comp)
        marked = set(touch)

        def cost(c):
            parts = split_parts(comp, c)
            big = max((len(p) for p in parts), default=0)
            if len(marked) <= 2:
                return (big, c)
            most = max((len(p & marked) for p in parts), default=0)
            return (most, big, c)

        c = min(comp, key=cost)
        node = len(out_bags)
        out_bags.append(frozenset(bags[c] | shared))
        out_children.append([])
        kids = [build(p) for p in split_parts(comp, c)]
        out_children[node] = kids
        return node

    root = build(set(range(len(bags))))
    return out_bags, out_children, root


def _assemble(G: PlanarGraph, verts: list[int], order: list[int], size: int) -> TreeDecomposition:
    bags, adj, root = from_elimination_order(G, order)
    bags, adj, root = _contract(bags, adj, root)
    children, _ = _root_tree(adj, root)
    td = _binarize(bags, children, root)
    if td.depth > depth_bound(size):
        rb, rc, rr = _rebalance(bags, adj)
        td = _binarize(rb, rc, rr)
    return td


def tree_decomposition(
    graph,
    d: int,
    levels: Mapping[int, int] | None = None,
    vertices: Iterable[int] | None = None,
) -> TreeDecomposition:
    """Binary tree decomposition of width <= 12d+5 and depth <= 4 log2(size) + 4.

    ``graph`` is a :class:`PlanarGraph` or anything with a ``graph``
    attribute (a slice). ``vertices`` restricts to an induced subgraph.
    Candidates are tried narrowest first; the first one passing all checks
    is returned.
    """
    G = getattr(graph, "graph", graph)
    if levels is None:
        levels = getattr(graph, "levels", None)
    verts = sorted(G.vertices() if vertices is None else set(vertices))
    if not verts:
        return TreeDecomposition((frozenset(),), ((),), 0)
    size = len(verts)
    orders = [min_fill_order(G, verts), min_degree_order(G, verts)]
    if levels is not None:
        orders.append(sorted(verts, key=lambda v: (levels.get(v, 0), v)))
    candidates = [_assemble(G, verts, o, size) for o in orders]
    candidates.sort(key=lambda td: (td.width, td.depth))
    budget = width_bound(d)
    for td in candidates:
        if td.width <= budget and td.depth <= depth_bound(size) and not td.verify(G, verts):
            return td
    if size <= EXHAUSTIVE_LIMIT:
        _, order = exact_treewidth_order(G, verts)
        td = _assemble(G, verts, order, size)
        if td.width <= budget and td.depth <= depth_bound(size) and not td.verify(G, verts):
            return td
    raise TreeDecompositionError(
        f"no decomposition of width <= {budget} and depth <= {depth_bound(size):.1f} "
        f"found for {size} vertices (best width {candidates[0].width})"
    )
