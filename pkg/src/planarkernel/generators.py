"""Instance generators: grids, stars, paths, random triangulations, and the
exhaustive corpus of small connected planar graphs.

Embeddings are taken from straight-line drawings where one is at hand and
from networkx's planarity test otherwise.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from scipy.spatial import Delaunay

from .graph import GraphInvariantError, PlanarGraph


def from_positions(pos: Sequence[tuple[float, float]], edges: Iterable[tuple[int, int]]) -> PlanarGraph:
    """Rotation system of a straight-line drawing (clockwise by angle)."""
    nbrs: list[set[int]] = [set() for _ in pos]
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    rot = []
    for v, s in enumerate(nbrs):
        x0, y0 = pos[v]
        rot.append(sorted(s, key=lambda u: (-math.atan2(pos[u][1] - y0, pos[u][0] - x0), u)))
    return PlanarGraph(rot)


def embed(n: int, edges: Iterable[tuple[int, int]]) -> PlanarGraph:
    """Planar embedding of an abstract graph; raises if it is not planar."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise GraphInvariantError("graph is not planar")
    return PlanarGraph([list(emb.neighbors_cw_order(v)) if g.degree(v) else [] for v in range(n)])


def grid(rows: int, cols: int) -> PlanarGraph:
    pos = [(c, -r) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return from_positions(pos, edges)


def path(n: int) -> PlanarGraph:
    return from_positions([(i, 0) for i in range(n)], [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> PlanarGraph:
    pos = [(math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)]
    return from_positions(pos, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> PlanarGraph:
    """K_{1,leaves} with centre 0."""
    pos = [(0.0, 0.0)] + [
        (math.cos(2 * math.pi * i / leaves), math.sin(2 * math.pi * i / leaves)) for i in range(leaves)
    ]
    return from_positions(pos, [(0, i) for i in range(1, leaves + 1)])


def empty(n: int) -> PlanarGraph:
    return PlanarGraph([[] for _ in range(n)])


def complete(n: int) -> PlanarGraph:
    return PlanarGraph.from_edges(n, itertools.combinations(range(n), 2))


def random_triangulation(n: int, seed: int) -> PlanarGraph:
    """Delaunay triangulation of ``n`` uniform random points."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    if n < 3:
        return from_positions([tuple(p) for p in pts], [(0, 1)] if n == 2 else [])
    edges = set()
    for simplex in Delaunay(pts).simplices:
        for a, b in itertools.combinations(sorted(int(x) for x in simplex), 2):
            edges.add((a, b))
    return from_positions([tuple(p) for p in pts], sorted(edges))


def random_planar(n: int, seed: int, keep: float = 0.6) -> PlanarGraph:
    """Random subgraph of a random triangulation, each edge kept with probability ``keep``."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    edges = set()
    if n >= 3:
        for simplex in Delaunay(pts).simplices:
            for a, b in itertools.combinations(sorted(int(x) for x in simplex), 2):
                edges.add((a, b))
    elif n == 2:
        edges.add((0, 1))
    chosen = [e for e in sorted(edges) if rng.random() < keep]
    return from_positions([tuple(p) for p in pts], chosen)


def random_connected_planar(n: int, seed: int, keep: float = 0.6) -> PlanarGraph:
    """Like :func:`random_planar` but always keeps a spanning tree."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    edges: set[tuple[int, int]] = set()
    if n >= 3:
        for simplex in Delaunay(pts).simplices:
            for a, b in itertools.combinations(sorted(int(x) for x in simplex), 2):
                edges.add((a, b))
    elif n == 2:
        edges.add((0, 1))
    order = sorted(edges)
    perm = rng.permutation(len(order))
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = set()
    for i in perm:
        a, b = order[i]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            chosen.add((a, b))
    for e in order:
        if e not in chosen and rng.random() < keep:
            chosen.add(e)
    return from_positions([tuple(p) for p in pts], sorted(chosen))


@lru_cache(maxsize=None)
def _connected_planar_edge_lists(max_n: int) -> tuple[tuple[int, tuple[tuple[int, int], ...]], ...]:
    out: list[tuple[int, tuple[tuple[int, int], ...]]] = []
    layer: list[nx.Graph] = []
    for g in nx.graph_atlas_g():
        k = g.number_of_nodes()
        if 1 <= k <= min(7, max_n) and nx.is_connected(g) and nx.check_planarity(g)[0]:
            out.append((k, tuple(sorted(tuple(sorted(e)) for e in g.edges()))))
            if k == 7:
                layer.append(g)
    if max_n >= 8:
        buckets: dict[str, list[nx.Graph]] = {}
        for g in layer:
            for r in range(1, 8):
                for nbrs in itertools.combinations(range(7), r):
                    h = g.copy()
                    h.add_edges_from((7, u) for u in nbrs)
                    if h.number_of_edges() > 18:
                        continue
                    key = nx.weisfeiler_lehman_graph_hash(h, iterations=3)
                    bucket = buckets.setdefault(key, [])
                    if any(nx.is_isomorphic(h, other) for other in bucket):
                        continue
                    if not nx.check_planarity(h)[0]:
                        continue
                    bucket.append(h)
        for key in sorted(buckets):
            for h in buckets[key]:
                out.append((8, tuple(sorted(tuple(sorted(e)) for e in h.edges()))))
    return tuple(out)


def connected_planar_graphs(max_n: int) -> list[PlanarGraph]:
    """All connected planar graphs on 1..max_n vertices up to isomorphism (max_n <= 8)."""
    if max_n > 8:
        raise ValueError("exhaustive corpus is limited to 8 vertices")
    return [embed(k, edges) for k, edges in _connected_planar_edge_lists(max_n)]
