"""Embedded planar graphs, the instance file format, and space bookkeeping.

A :class:`PlanarGraph` is an immutable simple graph on vertices ``0..n-1``
carrying a rotation system: for every vertex the clockwise cyclic order of
its neighbours. All algorithms in the package treat it as read-only input.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Iterator, Sequence


class GraphFormatError(ValueError):
    """Malformed line in an instance file."""


class GraphInvariantError(ValueError):
    """The described graph violates a structural invariant."""


class PlanarGraph:
    """Immutable graph with a clockwise rotation system.

    ``rotation[v]`` lists the neighbours of ``v`` in clockwise order.
    With ``validate=False`` the Euler bound is skipped; rotation symmetry is
    always enforced because every other module relies on it.
    """

    __slots__ = ("n", "_rot", "_adj", "_pos", "_m", "_hash", "__weakref__")

    def __init__(self, rotation: Sequence[Sequence[int]], *, validate: bool = True):
        rot = tuple(tuple(int(u) for u in nbrs) for nbrs in rotation)
        n = len(rot)
        adj = []
        pos = []
        half_edges = 0
        for v, nbrs in enumerate(rot):
            s = set(nbrs)
            if len(s) != len(nbrs):
                raise GraphInvariantError(f"parallel edge at vertex {v}")
            if v in s:
                raise GraphInvariantError(f"loop at vertex {v}")
            for u in nbrs:
                if not 0 <= u < n:
                    raise GraphInvariantError(f"vertex {v} lists unknown neighbour {u}")
            adj.append(frozenset(s))
            pos.append({u: i for i, u in enumerate(nbrs)})
            half_edges += len(nbrs)
        for v in range(n):
            for u in rot[v]:
                if v not in adj[u]:
                    raise GraphInvariantError(
                        f"edge {{{v},{u}}} appears in the rotation of {v} but not of {u}"
                    )
        m = half_edges // 2
        if validate and n >= 3 and m > 3 * n - 6:
            raise GraphInvariantError(f"m={m} exceeds 3n-6={3 * n - 6}; not planar")
        self.n = n
        self._rot = rot
        self._adj = tuple(adj)
        self._pos = tuple(pos)
        self._m = m
        self._hash = None

    @property
    def m(self) -> int:
        return self._m

    @property
    def rotation(self) -> tuple[tuple[int, ...], ...]:
        return self._rot

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._rot[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def closed_neighborhood(self, v: int) -> frozenset[int]:
        return self._adj[v] | {v}

    def degree(self, v: int) -> int:
        return len(self._rot[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def rotation_index(self, v: int, u: int) -> int:
        """Position of ``u`` in the rotation of ``v``."""
        try:
            return self._pos[v][u]
        except KeyError:
            raise GraphInvariantError(f"{{{v},{u}}} is not an edge") from None

    def edges(self) -> list[tuple[int, int]]:
        return [(v, u) for v in range(self.n) for u in sorted(self._adj[v]) if v < u]

    def induced(self, keep: Iterable[int]) -> tuple["PlanarGraph", list[int]]:
        """Induced subgraph with contiguous ids; returns (graph, new->old map).

        Surviving neighbours keep their relative rotation order.
        """
        old = sorted(set(keep))
        new_of = {v: i for i, v in enumerate(old)}
        rot = [[new_of[u] for u in self._rot[v] if u in new_of] for v in old]
        return PlanarGraph(rot, validate=False), old

    def components(self) -> list[list[int]]:
        return _components(self)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, PlanarGraph) and self._rot == other._rot

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rot)
        return self._hash

    def __repr__(self) -> str:
        return f"PlanarGraph(n={self.n}, m={self.m})"

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], *, validate: bool = True) -> "PlanarGraph":
        """Graph whose rotations list neighbours in increasing id order.

        The rotation is arbitrary, hence generally not a planar embedding;
        use :func:`planarkernel.generators.embed` when one is needed.
        """
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphInvariantError(f"loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls([sorted(s) for s in nbrs], validate=validate)


def _components(G: PlanarGraph) -> list[list[int]]:
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in G.neighbors(x):
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def connected_components(G: PlanarGraph, ledger: "SpaceLedger | None" = None) -> dict[int, int]:
    """Map every vertex to the smallest vertex id of its component."""
    if ledger is not None:
        # a logspace connectivity routine keeps O(1) vertex ids
        ledger.peak("components", 3)
    out = {}
    for comp in _components(G):
        for v in comp:
            out[v] = comp[0]
    return out


def add_dummy_root(G: PlanarGraph, ledger: "SpaceLedger | None" = None) -> PlanarGraph:
    """Add vertex ``n`` adjacent to the minimum vertex of every component.

    New edges go to the end of each rotation. The result is only used for
    BFS layering, so the Euler bound is not re-checked.
    """
    comp = connected_components(G, ledger)
    reps = sorted(set(comp.values()))
    rot = [list(G.neighbors(v)) for v in G.vertices()]
    for r in reps:
        rot[r].append(G.n)
    rot.append(reps)
    return PlanarGraph(rot, validate=False)


class VertexStream:
    """Append-only output stream of vertex ids.

    The producer only appends; consumers iterate once production is done.
    """

    __slots__ = ("_items",)

    def __init__(self, items: Iterable[int] = ()):
        self._items: list[int] = list(items)

    def emit(self, v: int) -> None:
        self._items.append(v)

    def extend(self, vs: Iterable[int]) -> None:
        self._items.extend(vs)

    def __iter__(self) -> Iterator[int]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __repr__(self) -> str:
        return f"VertexStream({self._items!r})"


class SpaceLedger:
    """Counts theoretical words stored per pipeline stage.

    A word is one vertex id or counter, worth ``ceil(log2 n)`` bits. The
    numbers describe what the restricted-memory algorithm would keep, not
    what this process allocates.
    """

    def __init__(self, n: int):
        self.n = n
        self.word_bits = max(1, math.ceil(math.log2(n))) if n > 1 else 1
        self._words: dict[str, int] = {}

    def charge(self, category: str, words: int = 1) -> None:
        if words < 0:
            raise ValueError("ledger charges must be nonnegative")
        self._words[category] = self._words.get(category, 0) + words

    def peak(self, category: str, words: int) -> None:
        """Record a high-water mark (e.g. recursion stack contents)."""
        self._words[category] = max(self._words.get(category, 0), words)

    def words(self, category: str) -> int:
        return self._words.get(category, 0)

    def bits(self, category: str) -> int:
        return self.words(category) * self.word_bits

    def categories(self) -> list[str]:
        return list(self._words)

    @property
    def total_words(self) -> int:
        return sum(self._words.values())

    @property
    def total_bits(self) -> int:
        return self.total_words * self.word_bits

    def merge(self, other: "SpaceLedger", *, as_peak: bool = False) -> None:
        for cat, w in other._words.items():
            if as_peak:
                self.peak(cat, w)
            else:
                self.charge(cat, w)

    def lines(self) -> list[str]:
        out = [f"c ledger {cat} {w} {w * self.word_bits}" for cat, w in self._words.items()]
        out.append(f"c ledger total {self.total_words} {self.total_bits}")
        return out


def load_graph(text: str) -> PlanarGraph:
    """Parse the line-oriented instance format.

    ``p planar <n> <m>`` followed by one ``v <id> <k> <nbrs...>`` line per
    vertex, neighbours in clockwise order; ``c`` lines are comments.
    """
    header = None
    rot: dict[int, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        try:
            if parts[0] == "p":
                if header is not None or len(parts) != 4 or parts[1] != "planar":
                    raise GraphFormatError(f"line {lineno}: bad header {line!r}")
                header = (int(parts[2]), int(parts[3]))
            elif parts[0] == "v":
                if header is None:
                    raise GraphFormatError(f"line {lineno}: vertex line before header")
                v, k = int(parts[1]), int(parts[2])
                nbrs = [int(x) for x in parts[3:]]
                if len(nbrs) != k:
                    raise GraphFormatError(f"line {lineno}: expected {k} neighbours, got {len(nbrs)}")
                if v in rot:
                    raise GraphFormatError(f"line {lineno}: vertex {v} listed twice")
                if not 0 <= v < header[0]:
                    raise GraphFormatError(f"line {lineno}: vertex id {v} out of range")
                rot[v] = nbrs
            else:
                raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"line {lineno}: {exc}") from None
    if header is None:
        raise GraphFormatError("missing 'p planar' header")
    n, m = header
    if len(rot) != n:
        missing = sorted(set(range(n)) - set(rot))
        raise GraphFormatError(f"missing vertex lines for {missing[:5]}")
    G = PlanarGraph([rot[v] for v in range(n)])
    if G.m != m:
        raise GraphInvariantError(f"header declares m={m}, rotations describe {G.m} edges")
    return G


def serialize(G: PlanarGraph, comments: Iterable[str] = ()) -> str:
    lines = [f"p planar {G.n} {G.m}"]
    for c in comments:
        lines.append(c if c.startswith("c") else f"c {c}")
    for v in G.vertices():
        nbrs = G.neighbors(v)
        lines.append(" ".join(["v", str(v), str(len(nbrs)), *map(str, nbrs)]))
    return "\n".join(lines) + "\n"


def is_dominating(G: PlanarGraph, S: Iterable[int], targets: Iterable[int] | None = None) -> bool:
    S = set(S)
    todo = G.vertices() if targets is None else targets
    return all(v in S or not S.isdisjoint(G.neighbor_set(v)) for v in todo)


def is_vertex_cover(G: PlanarGraph, S: Iterable[int]) -> bool:
    S = set(S)
    return all(u in S or v in S for u, v in G.edges())


def bfs_distances(G: PlanarGraph, sources: Iterable[int], limit: int | None = None) -> dict[int, int]:
    dist = {}
    queue = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    while queue:
        x = queue.popleft()
        if limit is not None and dist[x] >= limit:
            continue
        for y in G.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist
