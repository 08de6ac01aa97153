"""Region decompositions of an embedded planar graph.

A region is spanned by two walks between anchor vertices ``u`` and ``v``.
Which vertices lie strictly inside is decided combinatorially from the
rotation system: the two walks form a closed walk ``W = walk1 + reverse(walk2)``
and the region is the union of faces to the right of ``W`` that can be
reached without crossing an edge used an odd number of times by ``W``.
Because the embedding has no distinguished outer face, swapping the two
walks selects the other side of the same curve.

Regions are stored in compressed form (anchors plus rotation-index steps)
and expanded on demand by :func:`reconstruct_region`.
"""

from __future__ import annotations

import weakref
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .graph import GraphInvariantError, PlanarGraph, SpaceLedger, VertexStream, bfs_distances


class InvalidWalkError(ValueError):
    """A stored walk does not follow the rotation system of the graph."""


class DistancePropertyError(ValueError):
    """The anchor set does not satisfy the distance property."""


@dataclass(frozen=True)
class DistanceConstants:
    c_V: int
    c_E: int

    def __post_init__(self) -> None:
        if self.c_V < 0 or self.c_E < 0:
            raise ValueError("distance constants must be nonnegative")

    @property
    def walk_limit(self) -> int:
        """Maximum number of edges on each boundary walk."""
        return self.c_V + self.c_E + 1


DS_CONSTANTS = DistanceConstants(1, 1)
VC_CONSTANTS = DistanceConstants(1, 0)


@dataclass(frozen=True, order=True)
class CompressedRegion:
    """Anchors plus two walks, each stored as rotation indices.

    Step ``i`` of a walk moves from the current vertex ``x`` to
    ``G.neighbors(x)[i]``.
    """

    u: int
    v: int
    steps1: tuple[int, ...]
    steps2: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise ValueError("region anchors must be distinct")

    @classmethod
    def from_walks(cls, G: PlanarGraph, walk1: Sequence[int], walk2: Sequence[int]) -> "CompressedRegion":
        if not walk1 or not walk2 or walk1[0] != walk2[0] or walk1[-1] != walk2[-1]:
            raise InvalidWalkError("both walks must run between the same two anchors")
        return cls(walk1[0], walk1[-1], _encode(G, walk1), _encode(G, walk2))

    def walks(self, G: PlanarGraph) -> tuple[list[int], list[int]]:
        return self._decode(G, self.steps1), self._decode(G, self.steps2)

    def stored_words(self) -> int:
        return 2 + len(self.steps1) + len(self.steps2)

    def _decode(self, G: PlanarGraph, steps: Sequence[int]) -> list[int]:
        if not 0 <= self.u < G.n:
            raise InvalidWalkError(f"anchor {self.u} is not a vertex")
        x = self.u
        out = [x]
        for i in steps:
            nbrs = G.neighbors(x)
            if not 0 <= i < len(nbrs):
                raise InvalidWalkError(f"vertex {x} has no rotation index {i}")
            x = nbrs[i]
            out.append(x)
        if x != self.v:
            raise InvalidWalkError(f"walk from {self.u} ends at {x}, expected {self.v}")
        return out


def _encode(G: PlanarGraph, walk: Sequence[int]) -> tuple[int, ...]:
    try:
        return tuple(G.rotation_index(a, b) for a, b in zip(walk, walk[1:]))
    except GraphInvariantError as exc:
        raise InvalidWalkError(str(exc)) from None


@dataclass(frozen=True)
class RegionDecomposition:
    constants: DistanceConstants
    anchors: frozenset[int]
    regions: tuple[CompressedRegion, ...]

    def dump_lines(self, G: PlanarGraph) -> list[str]:
        out = []
        for r in self.regions:
            w1, w2 = r.walks(G)
            out.append(f"r {r.u} {r.v} | {' '.join(map(str, w1))} | {' '.join(map(str, w2))}")
        return out

    @classmethod
    def parse_dump(
        cls, G: PlanarGraph, lines: Iterable[str], anchors: Iterable[int], constants: DistanceConstants
    ) -> "RegionDecomposition":
        regions = []
        for line in lines:
            line = line.strip()
            if not line.startswith("r "):
                continue
            _, w1, w2 = line.split("|")
            regions.append(
                CompressedRegion.from_walks(G, [int(x) for x in w1.split()], [int(x) for x in w2.split()])
            )
        return cls(constants, frozenset(anchors), tuple(regions))


# ---------------------------------------------------------------------------
# faces of the rotation system


class _Faces:
    """Dart and face tables for a rotation system.

    Dart ``offset[x] + i`` runs from ``x`` to its ``i``-th neighbour. The face
    to the right of dart ``x -> y`` continues with ``y -> z`` where ``z``
    precedes ``x`` in the clockwise rotation of ``y``.
    """

    def __init__(self, G: PlanarGraph):
        offset = [0] * (G.n + 1)
        for x in range(G.n):
            offset[x + 1] = offset[x] + G.degree(x)
        total = offset[G.n]
        tail = [0] * total
        head = [0] * total
        for x in range(G.n):
            for i, y in enumerate(G.neighbors(x)):
                tail[offset[x] + i] = x
                head[offset[x] + i] = y
        face_of = [-1] * total
        faces: list[list[int]] = []
        for d0 in range(total):
            if face_of[d0] >= 0:
                continue
            fid = len(faces)
            darts = []
            d = d0
            while face_of[d] < 0:
                face_of[d] = fid
                darts.append(d)
                x, y = tail[d], head[d]
                j = (G.rotation_index(y, x) - 1) % G.degree(y)
                d = offset[y] + j
            faces.append(darts)
        self.offset = offset
        self.tail = tail
        self.head = head
        self.face_of = face_of
        self.faces = faces
        self._G = G

    def dart(self, x: int, y: int) -> int:
        return self.offset[x] + self._G.rotation_index(x, y)


_FACE_CACHE: "weakref.WeakKeyDictionary[PlanarGraph, _Faces]" = weakref.WeakKeyDictionary()


def _faces(G: PlanarGraph) -> _Faces:
    f = _FACE_CACHE.get(G)
    if f is None:
        f = _Faces(G)
        _FACE_CACHE[G] = f
    return f


class _TooFar(Exception):
    pass


def _region_sets(
    G: PlanarGraph,
    walk1: Sequence[int],
    walk2: Sequence[int],
    near: dict[int, int] | None = None,
) -> tuple[set[int], set[int]]:
    """Boundary and strict interior of the region spanned by two walks.

    With ``near`` given (vertices within the distance budget), raises
    :class:`_TooFar` as soon as a vertex outside it is found.
    """
    F = _faces(G)
    boundary = set(walk1) | set(walk2)
    closed = list(walk1) + list(reversed(walk2))[1:]
    parity: dict[tuple[int, int], int] = {}
    darts = []
    for a, b in zip(closed, closed[1:]):
        key = (a, b) if a < b else (b, a)
        parity[key] = parity.get(key, 0) ^ 1
        darts.append((a, b))
    cut = {e for e, p in parity.items() if p}
    start = []
    for a, b in darts:
        if ((a, b) if a < b else (b, a)) in cut:
            start.append(F.face_of[F.dart(a, b)])
    seen = set(start)
    queue = deque(start)
    interior: set[int] = set()
    while queue:
        fid = queue.popleft()
        for d in F.faces[fid]:
            a, b = F.tail[d], F.head[d]
            if a not in boundary and a not in interior:
                if near is not None and a not in near:
                    raise _TooFar
                interior.add(a)
            if ((a, b) if a < b else (b, a)) in cut:
                continue
            twin = F.face_of[F.dart(b, a)]
            if twin not in seen:
                seen.add(twin)
                queue.append(twin)
    return boundary, interior


def region_vertex_sets(G: PlanarGraph, r: CompressedRegion) -> tuple[frozenset[int], frozenset[int]]:
    """``(V(R), strict interior of R)`` for a compressed region."""
    w1, w2 = r.walks(G)
    boundary, interior = _region_sets(G, w1, w2)
    return frozenset(boundary | interior), frozenset(interior)


# ---------------------------------------------------------------------------
# reconstruction


def reconstruct_region(
    G: PlanarGraph, r: CompressedRegion, c: DistanceConstants, ledger: SpaceLedger | None = None
) -> VertexStream:
    """Stream ``V(R)``: boundary vertices in walk order, then interior vertices.

    Interior vertices are discovered by a search from the anchors that never
    follows paths longer than ``c.c_V``; membership of each discovered vertex
    is decided by the face test.
    """
    w1, w2 = r.walks(G)
    _, interior = _region_sets(G, w1, w2)
    out = VertexStream()
    emitted: set[int] = set()
    for x in w1 + w2:
        if x not in emitted:
            emitted.add(x)
            out.emit(x)
    # depth-limited search; a vertex is re-expanded if reached by a shorter path
    best: dict[int, int] = {}
    for root in (r.u, r.v):
        stack = [(root, 0)]
        while stack:
            x, depth = stack.pop()
            if best.get(x, c.c_V + 1) <= depth:
                continue
            best[x] = depth
            if x in interior and x not in emitted:
                emitted.add(x)
                out.emit(x)
            if depth < c.c_V:
                for y in reversed(G.neighbors(x)):
                    stack.append((y, depth + 1))
    if ledger is not None:
        ledger.peak("regions.reconstruct", r.stored_words() + 2 * (c.c_V + 1))
    return out


def region_contains(G: PlanarGraph, r: CompressedRegion, c: DistanceConstants, w: int) -> bool:
    return any(x == w for x in reconstruct_region(G, r, c))


# ---------------------------------------------------------------------------
# enumeration


def _walks(
    G: PlanarGraph, u: int, v: int, limit: int, forbidden: frozenset[int] = frozenset()
) -> list[list[int]]:
    """Non-backtracking walks from ``u`` to ``v`` with at most ``limit`` edges.

    Walks that immediately reverse an edge are skipped: the reversal cancels
    in the closed boundary walk, so they describe the same region as a shorter
    walk. For ``limit <= 3`` the result is exactly the simple paths.
    Internal vertices avoid ``forbidden``. Order is lexicographic by steps.
    """
    to_v = bfs_distances(G, [v], limit)
    out: list[list[int]] = []
    walk = [u]

    def extend(x: int, prev: int) -> None:
        if x == v:
            out.append(list(walk))
        remaining = limit - (len(walk) - 1)
        if remaining == 0:
            return
        for y in G.neighbors(x):
            if y == prev or to_v.get(y, limit + 1) > remaining - 1:
                continue
            if y != v and y in forbidden:
                continue
            walk.append(y)
            extend(y, x)
            walk.pop()

    if to_v.get(u, limit + 1) <= limit:
        extend(u, -1)
    return out


def _candidates(
    G: PlanarGraph, u: int, v: int, c: DistanceConstants, forbidden: frozenset[int] = frozenset()
) -> Iterator[tuple[CompressedRegion, frozenset[int], frozenset[int]]]:
    near = bfs_distances(G, [u, v], c.c_V)
    walks = _walks(G, u, v, c.walk_limit, forbidden)
    walks = [w for w in walks if all(x in near for x in w)]
    enc = [_encode(G, w) for w in walks]
    for i, w1 in enumerate(walks):
        for j, w2 in enumerate(walks):
            try:
                boundary, interior = _region_sets(G, w1, w2, near)
            except _TooFar:
                continue
            yield CompressedRegion(u, v, enc[i], enc[j]), frozenset(boundary | interior), frozenset(interior)


def enumerate_candidate_regions(G: PlanarGraph, u: int, v: int, c: DistanceConstants) -> list[CompressedRegion]:
    """Every ordered walk pair between ``u`` and ``v`` whose region meets the distance condition."""
    if u == v:
        raise ValueError("anchors must be distinct")
    return [r for r, _, _ in _candidates(G, u, v, c)]


# ---------------------------------------------------------------------------
# decomposition


def check_distance_property(G: PlanarGraph, S: Iterable[int], c: DistanceConstants) -> list[str]:
    S = list(S)
    dist = bfs_distances(G, S, max(c.c_V, c.c_E))
    problems = []
    for x in G.vertices():
        if dist.get(x, c.c_V + 1) > c.c_V:
            problems.append(f"vertex {x} is farther than {c.c_V} from the anchor set")
    for a, b in G.edges():
        if min(dist.get(a, c.c_E + 1), dist.get(b, c.c_E + 1)) > c.c_E:
            problems.append(f"edge {{{a},{b}}} is farther than {c.c_E} from the anchor set")
    return problems


def maximal_region_decomposition(
    G: PlanarGraph, S: Iterable[int], c: DistanceConstants, ledger: SpaceLedger | None = None
) -> RegionDecomposition:
    """Greedy maximal ``S``-region decomposition.

    Vertices are processed in id order. For each vertex ``x`` not yet inside
    an accepted region, every region with anchors in ``S`` that contains
    ``x``, has no other ``S``-vertex inside, and shares no strict-interior
    vertex with an accepted region (in either direction) is considered; the
    first one with the most vertices is accepted. A final pass merges pairs
    of regions with the same anchors where a single candidate suffices.
    """
    S = frozenset(S)
    problems = check_distance_property(G, S, c)
    if problems:
        raise DistancePropertyError(problems[0])
    L = c.walk_limit
    covered: set[int] = set()
    inner: set[int] = set()
    accepted: list[tuple[CompressedRegion, frozenset[int], frozenset[int]]] = []
    cache: dict[tuple[int, int], list[tuple[CompressedRegion, frozenset[int], frozenset[int]]]] = {}
    s_dist = {a: bfs_distances(G, [a], max(L, c.c_V)) for a in sorted(S)}

    def candidates(a: int, b: int):
        key = (a, b)
        if key not in cache:
            forbidden = S - {a, b}
            cache[key] = [
                item for item in _candidates(G, a, b, c, forbidden) if not (item[2] & forbidden)
            ]
        return cache[key]

    for x in G.vertices():
        if x in covered:
            continue
        best = None
        best_size = 0
        near_anchors = sorted(a for a in S if s_dist[a].get(x, c.c_V + 1) <= c.c_V)
        pairs = sorted(
            {(min(a, b), max(a, b)) for a in near_anchors for b in S if b != a and s_dist[a].get(b, L + 1) <= L}
        )
        for a, b in pairs:
            for r, verts, interior in candidates(a, b):
                if x not in verts:
                    continue
                size = len(verts)
                if size <= best_size or interior & covered or verts & inner:
                    continue
                best, best_size = (r, verts, interior), size
        if best is None:
            continue
        accepted.append(best)
        covered |= best[1]
        inner |= best[2]
    accepted = _merge_parallel(accepted, candidates)
    if ledger is not None:
        for r, _, _ in accepted:
            ledger.charge("regions.store", r.stored_words())
        ledger.peak("regions.search", 4 * (L + 1) + 4)
    return RegionDecomposition(c, S, tuple(r for r, _, _ in accepted))


def _merge_parallel(accepted: list, candidates) -> list:
    """Replace two regions with the same anchors by one candidate covering
    everything only they cover, while admissibility against the rest holds.

    Greedy selection alone can leave parallel regions that a single region
    would absorb, which breaks the region-count bound.
    """
    merged = True
    while merged:
        merged = False
        for i, j in combinations(range(len(accepted)), 2):
            (ri, vi, ii), (rj, vj, ij) = accepted[i], accepted[j]
            if (ri.u, ri.v) != (rj.u, rj.v):
                continue
            rest = [item for k, item in enumerate(accepted) if k not in (i, j)]
            rest_verts = set().union(*(item[1] for item in rest))
            rest_inner = set().union(*(item[2] for item in rest))
            needed = (vi | vj) - rest_verts
            best = None
            for item in candidates(ri.u, ri.v):
                _, verts, interior = item
                if not needed <= verts or interior & rest_verts or verts & rest_inner:
                    continue
                if best is None or len(verts) > len(best[1]):
                    best = item
            if best is not None:
                accepted = rest[:i] + [best] + rest[i:]
                merged = True
                break
    return accepted


# ---------------------------------------------------------------------------
# verification


@dataclass
class RegionReport:
    failures: dict[str, list[str]] = field(default_factory=dict)
    checked: tuple[str, ...] = ("walks", "walk_length", "distance", "anchors", "non_overlap", "count_bound")

    def fail(self, clause: str, message: str) -> None:
        self.failures.setdefault(clause, []).append(message)

    def passed(self, clause: str) -> bool:
        return clause not in self.failures

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = []
        for clause in self.checked:
            msgs = self.failures.get(clause, [])
            out.append(f"{clause}: {'pass' if not msgs else 'FAIL'}")
            out.extend(f"  {m}" for m in msgs[:5])
        return out


def verify_region_decomposition(G: PlanarGraph, rd: RegionDecomposition) -> RegionReport:
    c = rd.constants
    S = rd.anchors
    rep = RegionReport()
    interiors: list[tuple[int, frozenset[int]]] = []
    seen: dict[CompressedRegion, int] = {}
    for k, r in enumerate(rd.regions):
        try:
            w1, w2 = r.walks(G)
        except InvalidWalkError as exc:
            rep.fail("walks", f"region {k}: {exc}")
            continue
        for w in (w1, w2):
            if len(w) - 1 > c.walk_limit:
                rep.fail("walk_length", f"region {k}: walk of {len(w) - 1} edges exceeds {c.walk_limit}")
        boundary, interior = _region_sets(G, w1, w2)
        verts = boundary | interior
        near = bfs_distances(G, [r.u, r.v], c.c_V)
        far = sorted(x for x in verts if x not in near)
        if far:
            rep.fail("distance", f"region {k}: vertices {far[:5]} farther than {c.c_V} from both anchors")
        if r.u not in S or r.v not in S:
            rep.fail("anchors", f"region {k}: anchors {r.u},{r.v} not both in S")
        extra = sorted((verts & S) - {r.u, r.v})
        if extra:
            rep.fail("anchors", f"region {k}: contains anchor-set vertices {extra[:5]}")
        if r in seen:
            rep.fail("non_overlap", f"region {k} repeats region {seen[r]}")
        seen.setdefault(r, k)
        for j, other in interiors:
            shared = interior & other
            if shared:
                rep.fail("non_overlap", f"regions {j} and {k} share interior vertices {sorted(shared)[:5]}")
        interiors.append((k, frozenset(interior)))
    if len(S) >= 3:
        bound = c.c_V * (3 * len(S) - 6)
        if len(rd.regions) > bound:
            rep.fail("count_bound", f"{len(rd.regions)} regions exceed c_V(3|S|-6) = {bound}")
    return rep
