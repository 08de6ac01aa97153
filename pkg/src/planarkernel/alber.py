"""Linear kernel for Dominating Set via two neighbourhood reduction rules.

The input graph is never modified. Every successful rule application is
recorded as a :class:`Gadget` in an overlay list, and a :class:`VirtualGraph`
answers neighbourhood queries for the reduced graph by filtering deleted
vertices and adding gadget edges on the fly.

Rule I, at a vertex ``u`` with ``N3(u)`` nonempty: delete ``N2(u) ∪ N3(u)``
and attach a pendant ``u'`` to ``u``.

Rule II, at a pair ``(u, v)`` whose joint private neighbourhood ``N3(u, v)``
has at least two vertices and cannot be dominated by one vertex of
``N2(u, v) ∪ N3(u, v)``: delete part of the neighbourhood and add a gadget
that forces ``u`` and/or ``v`` into some optimal solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .graph import GraphInvariantError, PlanarGraph, SpaceLedger, VertexStream, bfs_distances
from .instance import KernelInstance

RULE_ONE = "RuleI"
CASE_11 = "Case1.1"
CASE_12 = "Case1.2"
CASE_13 = "Case1.3"
CASE_2 = "Case2"

# words per stored gadget: tag, up to two anchors, up to two new vertex ids
GADGET_WORDS = 5


class DeadVertexError(KeyError):
    """Query on a vertex that the overlay has deleted."""


@dataclass(frozen=True)
class Gadget:
    tag: str
    anchors: tuple[int, ...]
    new_vertices: tuple[int, ...]
    new_edges: tuple[tuple[int, int], ...]
    removed: frozenset[int]


class VirtualGraph:
    """Read-only view of ``base`` with an overlay of gadgets applied.

    ``base`` is a :class:`PlanarGraph` or another :class:`VirtualGraph`, so
    interfaces can be chained. Surviving base neighbours keep their rotation
    order; gadget edges follow them in creation order.
    """

    def __init__(self, base: Union[PlanarGraph, "VirtualGraph"], gadgets: Iterable[Gadget] = ()):
        self.base = base
        self.gadgets: list[Gadget] = []
        self._dead: set[int] = set()
        self._extra: dict[int, list[int]] = {}
        self._tag: dict[int, str] = {}
        self._next = base.next_id if isinstance(base, VirtualGraph) else base.n
        self._cache: dict[int, tuple[int, ...]] = {}
        for g in gadgets:
            self._push(g)

    # -- overlay maintenance -------------------------------------------------

    @property
    def next_id(self) -> int:
        return self._next

    def _push(self, g: Gadget) -> None:
        self.gadgets.append(g)
        self._dead |= g.removed
        for x in g.new_vertices:
            self._tag[x] = g.tag
            self._extra.setdefault(x, [])
            self._next = max(self._next, x + 1)
        for a, b in g.new_edges:
            self._extra.setdefault(a, []).append(b)
            self._extra.setdefault(b, []).append(a)
        self._cache.clear()

    # -- graph interface -----------------------------------------------------

    def _base_alive(self, x: int) -> bool:
        if isinstance(self.base, VirtualGraph):
            return self.base.alive(x)
        return 0 <= x < self.base.n

    def alive(self, x: int) -> bool:
        if x in self._dead:
            return False
        return x in self._tag or self._base_alive(x)

    def vertices(self) -> list[int]:
        if isinstance(self.base, VirtualGraph):
            base = self.base.vertices()
        else:
            base = list(range(self.base.n))
        own = sorted(self._tag)
        return [x for x in base if x not in self._dead] + [x for x in own if x not in self._dead]

    def neighbors(self, x: int) -> tuple[int, ...]:
        cached = self._cache.get(x)
        if cached is not None:
            return cached
        if not self.alive(x):
            raise DeadVertexError(x)
        out = []
        if x not in self._tag:
            out = [y for y in self.base.neighbors(x) if y not in self._dead]
        out += [y for y in self._extra.get(x, ()) if y not in self._dead]
        result = tuple(out)
        self._cache[x] = result
        return result

    def neighbor_set(self, x: int) -> frozenset[int]:
        return frozenset(self.neighbors(x))

    def origin(self, x: int) -> int | str:
        if x in self._tag:
            return self._tag[x]
        if isinstance(self.base, VirtualGraph):
            return self.base.origin(x)
        return x

    def all_gadgets(self) -> list[Gadget]:
        prior = self.base.all_gadgets() if isinstance(self.base, VirtualGraph) else []
        return prior + self.gadgets

    def size(self) -> tuple[int, int]:
        vs = self.vertices()
        return len(vs), sum(len(self.neighbors(x)) for x in vs) // 2


def _as_virtual(G: PlanarGraph | VirtualGraph) -> VirtualGraph:
    return G if isinstance(G, VirtualGraph) else VirtualGraph(G)


def _check_alive(Gv: VirtualGraph, *xs: int) -> None:
    for x in xs:
        if not Gv.alive(x):
            raise DeadVertexError(x)


# ---------------------------------------------------------------------------
# neighbourhood classes


def _classes(Gv: VirtualGraph, nbrs: tuple[int, ...], closed: set[int]) -> tuple[list[int], list[int], list[int]]:
    """Split ``nbrs`` into exit, guard and private vertices relative to ``closed``."""
    n1 = [w for w in nbrs if any(y not in closed for y in Gv.neighbors(w))]
    s1 = set(n1)
    n2 = [w for w in nbrs if w not in s1 and any(y in s1 for y in Gv.neighbors(w))]
    s2 = set(n2)
    n3 = [w for w in nbrs if w not in s1 and w not in s2]
    return n1, n2, n3


def n_sets(Gv: PlanarGraph | VirtualGraph, u: int) -> tuple[VertexStream, VertexStream, VertexStream]:
    """``N1(u), N2(u), N3(u)`` in rotation order."""
    Gv = _as_virtual(Gv)
    _check_alive(Gv, u)
    nbrs = Gv.neighbors(u)
    n1, n2, n3 = _classes(Gv, nbrs, set(nbrs) | {u})
    return VertexStream(n1), VertexStream(n2), VertexStream(n3)


def _pair_neighbourhood(Gv: VirtualGraph, u: int, v: int, exclude_anchors: bool) -> tuple[int, ...]:
    seen = set()
    out = []
    for x in Gv.neighbors(u) + Gv.neighbors(v):
        if x in seen or (exclude_anchors and x in (u, v)):
            continue
        seen.add(x)
        out.append(x)
    return tuple(out)


def n_sets_pair(
    Gv: PlanarGraph | VirtualGraph, u: int, v: int, *, exclude_anchors: bool = False
) -> tuple[VertexStream, VertexStream, VertexStream]:
    """``N1(u,v), N2(u,v), N3(u,v)`` with ``N(u,v) = N(u) ∪ N(v)``.

    The three classes partition ``N(u,v)``. With ``exclude_anchors`` the
    anchors themselves are dropped from ``N(u,v)``, which is the form the
    reduction rule uses.
    """
    Gv = _as_virtual(Gv)
    if u == v:
        raise ValueError("pair queries need two distinct vertices")
    _check_alive(Gv, u, v)
    nbrs = _pair_neighbourhood(Gv, u, v, exclude_anchors)
    closed = set(Gv.neighbors(u)) | set(Gv.neighbors(v)) | {u, v}
    n1, n2, n3 = _classes(Gv, nbrs, closed)
    return VertexStream(n1), VertexStream(n2), VertexStream(n3)


def is_reduction_candidate(Gv: PlanarGraph | VirtualGraph, u: int, v: int) -> str | None:
    """Case tag if ``(u, v)`` is a Rule II candidate, else ``None``.

    Only pairs at distance at most three qualify, matching the pair scan of
    :func:`apply_rule_two`; farther pairs have disjoint neighbourhoods whose
    private parts Rule I already handles.
    """
    Gv = _as_virtual(Gv)
    if u != v and Gv.alive(u) and v not in bfs_distances(Gv, [u], 3):
        return None
    found = _rule_two_plan(Gv, u, v)
    return None if found is None else found[0]


def _rule_two_plan(Gv: VirtualGraph, u: int, v: int) -> tuple[str, set[int]] | None:
    if u == v:
        raise ValueError("pair queries need two distinct vertices")
    _check_alive(Gv, u, v)
    n1, n2, n3 = (list(s) for s in n_sets_pair(Gv, u, v, exclude_anchors=True))
    if len(n3) < 2:
        return None
    target = set(n3)
    for w in n2 + n3:
        if target <= Gv.neighbor_set(w) | {w}:
            return None
    Nu, Nv = Gv.neighbor_set(u), Gv.neighbor_set(v)
    in_u, in_v = target <= Nu, target <= Nv
    if in_u and in_v:
        return CASE_11, target | {w for w in n2 if w in Nu and w in Nv}
    if in_u:
        return CASE_12, target | {w for w in n2 if w in Nu}
    if in_v:
        return CASE_13, target | {w for w in n2 if w in Nv}
    return CASE_2, target | set(n2)


# ---------------------------------------------------------------------------
# rule application


def _effective(Gv: VirtualGraph, removed: set[int], added_vertices: int, added_edges: int) -> bool:
    """Whether the application strictly shrinks ``(n, m)`` lexicographically.

    Without this test a rule could re-fire forever on its own gadget (a
    pendant is itself a private neighbour).
    """
    incident = 0
    for x in removed:
        incident += len(Gv.neighbors(x))
    inside = sum(1 for x in removed for y in Gv.neighbors(x) if y in removed) // 2
    dn = added_vertices - len(removed)
    dm = added_edges - (incident - inside)
    return dn < 0 or (dn == 0 and dm < 0)


def _rule_one_step(Gv: VirtualGraph) -> Gadget | None:
    for u in Gv.vertices():
        nbrs = Gv.neighbors(u)
        _, n2, n3 = _classes(Gv, nbrs, set(nbrs) | {u})
        if not n3:
            continue
        removed = set(n2) | set(n3)
        if not _effective(Gv, removed, 1, 1):
            continue
        p = Gv.next_id
        return Gadget(RULE_ONE, (u,), (p,), ((u, p),), frozenset(removed))
    return None


def _rule_two_step(Gv: VirtualGraph) -> Gadget | None:
    for u in Gv.vertices():
        near = bfs_distances(Gv, [u], 3)
        for v in sorted(x for x in near if x > u):
            plan = _rule_two_plan(Gv, u, v)
            if plan is None:
                continue
            tag, removed = plan
            p = Gv.next_id
            if tag == CASE_11:
                new, edges = (p, p + 1), ((u, p), (v, p), (u, p + 1), (v, p + 1))
            elif tag == CASE_12:
                new, edges = (p,), ((u, p),)
            elif tag == CASE_13:
                new, edges = (p,), ((v, p),)
            else:
                new, edges = (p, p + 1), ((u, p), (v, p + 1))
            if not _effective(Gv, removed, len(new), len(edges)):
                continue
            return Gadget(tag, (u, v), new, edges, frozenset(removed))
    return None


def _apply(Gv: PlanarGraph | VirtualGraph, step, category: str, ledger: SpaceLedger | None) -> VirtualGraph:
    out = VirtualGraph(_as_virtual(Gv))
    while True:
        g = step(out)
        if g is None:
            return out
        out._push(g)
        if ledger is not None:
            ledger.charge(category, GADGET_WORDS)


def apply_rule_one(Gv: PlanarGraph | VirtualGraph, ledger: SpaceLedger | None = None) -> VirtualGraph:
    """Apply Rule I exhaustively; a fresh scan in id order follows each success."""
    return _apply(Gv, _rule_one_step, "alber.rule1", ledger)


def apply_rule_two(Gv: PlanarGraph | VirtualGraph, ledger: SpaceLedger | None = None) -> VirtualGraph:
    """Apply Rule II exhaustively over pairs at distance at most three."""
    return _apply(Gv, _rule_two_step, "alber.rule2", ledger)


def materialize(Gv: VirtualGraph) -> tuple[PlanarGraph, tuple[int | str, ...]]:
    """Explicit graph with contiguous ids, plus the origin of each new id."""
    verts = Gv.vertices()
    new_of = {x: i for i, x in enumerate(verts)}
    rot = [[new_of[y] for y in Gv.neighbors(x)] for x in verts]
    try:
        G = PlanarGraph(rot)
    except GraphInvariantError:
        G = PlanarGraph(rot, validate=False)
    return G, tuple(Gv.origin(x) for x in verts)


def alber_kernelize(G: PlanarGraph, ledger: SpaceLedger | None = None) -> KernelInstance:
    """Alternate Rule I and Rule II until neither applies."""
    ledger = ledger if ledger is not None else SpaceLedger(G.n)
    Gv: PlanarGraph | VirtualGraph = G
    r1 = r2 = 0
    while True:
        g1 = apply_rule_one(Gv, ledger)
        if g1.gadgets:
            r1 += len(g1.gadgets)
            Gv = g1
        g2 = apply_rule_two(Gv, ledger)
        if not g2.gadgets:
            # Rule I was exhausted right before, so neither rule applies
            break
        r2 += len(g2.gadgets)
        Gv = g2
    # the search itself keeps O(1) vertex ids (current u, v, w and iterators)
    ledger.peak("alber.scan", 6)
    K, prov = materialize(_as_virtual(Gv))
    return KernelInstance(K, prov, ledger=ledger, stats={"r1": r1, "r2": r2})
