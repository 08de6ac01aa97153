"""Kernels built from an approximate solution and a region decomposition.

Pipeline for Dominating Set: approximate dominating set ``D`` (epsilon 1),
maximal ``D``-region decomposition with distance constants (1, 1), then
every region shrinks to its boundary plus a few interior witnesses.
Vertex Cover follows the same outline with constants (1, 0) and a final
cleanup of the vertices outside all regions.

The parameter ``k`` never influences the reduction; it only fixes the
declared size bound that the output is checked against.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .baker import approx_ds, approx_vc
from .graph import PlanarGraph, SpaceLedger
from .instance import BoundViolation, KernelInstance
from .regions import (
    DS_CONSTANTS,
    VC_CONSTANTS,
    CompressedRegion,
    RegionDecomposition,
    maximal_region_decomposition,
    region_vertex_sets,
)

DS_REGION_LIMIT = 134
VC_REGION_LIMIT = 7
DS_OUTSIDE_FACTOR = 170


def ds_bound(k: int) -> int:
    return 1146 * k


def vc_bound(k: int) -> int:
    return 46 * k


class OutsideBoundWarning(UserWarning):
    """More vertices outside the regions than the transferred bound allows."""


@dataclass(frozen=True)
class RegionView:
    """Expanded region: anchors, boundary ``B(R)`` and interior ``I(R)``."""

    u: int
    v: int
    boundary: frozenset[int]
    interior: frozenset[int]

    @property
    def vertices(self) -> frozenset[int]:
        return self.boundary | self.interior

    @classmethod
    def of(cls, G: PlanarGraph, r: CompressedRegion) -> "RegionView":
        verts, interior = region_vertex_sets(G, r)
        return cls(r.u, r.v, verts - interior, interior)


@dataclass(frozen=True)
class RegionPartition:
    decomposition: RegionDecomposition
    views: tuple[RegionView, ...]
    outside: frozenset[int]

    @classmethod
    def build(cls, G: PlanarGraph, rd: RegionDecomposition) -> "RegionPartition":
        views = tuple(RegionView.of(G, r) for r in rd.regions)
        inside: set[int] = set()
        for view in views:
            inside |= view.vertices
        return cls(rd, views, frozenset(x for x in G.vertices() if x not in inside))


@dataclass
class SchemeStats:
    solution_size: int = 0
    regions: int = 0
    outside: int = 0
    max_region: int = 0
    region_sizes: list[int] = field(default_factory=list)

    def as_dict(self) -> dict[str, int]:
        return {
            "approx": self.solution_size,
            "regions": self.regions,
            "outside": self.outside,
            "max_region": self.max_region,
        }


# ---------------------------------------------------------------------------
# Dominating Set


def dominated_within(G: PlanarGraph, R: RegionView, C: Iterable[int]) -> frozenset[int]:
    """Vertices of ``V(R)`` in the closed neighbourhood of ``C``."""
    C = set(C)
    if not C <= R.boundary:
        raise ValueError("C must be a subset of the region boundary")
    verts = R.vertices
    out = set()
    for c in C:
        out.add(c)
        out.update(x for x in G.neighbors(c) if x in verts)
    return frozenset(out & verts)


def _boundary_subsets(boundary: Iterable[int]) -> Iterable[tuple[int, ...]]:
    items = sorted(boundary)
    for size in range(len(items) + 1):
        yield from combinations(items, size)


def rule_dom_set_reg(G: PlanarGraph, R: RegionView, *, literal: bool = False) -> frozenset[int]:
    """Retained vertices ``T ∪ B(R)`` of a Dominating Set region.

    Some minimum dominating set meets every interior in at most one vertex,
    since two or more interior vertices can be traded for the anchors, which
    dominate the whole region. So the region is summarised by, for each
    ``C ⊆ B(R)`` taken into the solution and each set ``need`` of boundary
    vertices left for the interior to dominate, whether no interior vertex,
    one interior vertex, or neither suffices. ``T`` keeps

    * the smallest interior vertex not dominated by ``C`` (so "none needed"
      stays false when it was false),
    * the smallest interior vertex that alone finishes the job for
      ``(C, need)``, whenever one exists,
    * and, closed under iteration, for every kept ``q`` that fails to dominate
      the remaining interior, a remaining interior vertex it misses.

    With ``literal=True`` the classic witness-pair rule is used instead: for
    each ``C`` the first interior ``v`` dominating ``V(R) ∖ N_R[C]`` plus one
    neighbour of ``v`` in that set. That rule can lower the domination number
    (interior pendants that force boundary choices are discarded) and is kept
    only for comparison.
    """
    if literal:
        return _dom_set_reg_pairs(G, R)
    B = sorted(R.boundary)
    interior = sorted(R.interior)
    closed = {x: G.neighbor_set(x) | {x} for x in interior}
    missing: list[frozenset[int]] = []
    T: set[int] = set()
    for C in _boundary_subsets(B):
        near = set()
        for c in C:
            near |= G.neighbor_set(c) | {c}
        U = frozenset(x for x in interior if x not in near)
        missing.append(U)
        if U:
            T.add(min(U))
        open_boundary = [b for b in B if b not in near]
        for need in _boundary_subsets(open_boundary):
            for x in interior:
                if U <= closed[x] and closed[x].issuperset(need):
                    T.add(x)
                    break
    changed = True
    while changed:
        changed = False
        for U in missing:
            for q in sorted(T):
                if U <= closed[q]:
                    continue
                if all(x in closed[q] for x in U if x in T):
                    T.add(min(x for x in U if x not in closed[q]))
                    changed = True
    return frozenset(T) | R.boundary


def _dom_set_reg_pairs(G: PlanarGraph, R: RegionView) -> frozenset[int]:
    verts = R.vertices
    interior = sorted(R.interior)
    closed = {x: G.neighbor_set(x) | {x} for x in interior}
    T: set[int] = set()
    for C in _boundary_subsets(R.boundary):
        rest = verts - dominated_within(G, R, C)
        for x in interior:
            if rest <= closed[x]:
                ws = sorted(w for w in G.neighbor_set(x) if w in rest)
                if ws:
                    T.add(x)
                    T.add(ws[0])
                    break
    return frozenset(T) | R.boundary


def _finish(
    G: PlanarGraph,
    keep: set[int],
    k: int | None,
    bound: int | None,
    certified: bool,
    stats: SchemeStats,
    ledger: SpaceLedger,
) -> KernelInstance:
    K, old = G.induced(keep)
    try:
        K = PlanarGraph(K.rotation)
    except ValueError:
        pass
    inst = KernelInstance(K, tuple(old), k=k, bound=bound, ledger=ledger, stats=stats.as_dict())
    if certified and not inst.within_bound():
        raise BoundViolation(f"kernel has {K.n} vertices, declared bound {bound}")
    return inst


def kernelize_ds_scheme(G: PlanarGraph, k: int | None = None, ledger: SpaceLedger | None = None) -> KernelInstance:
    """Region-based Dominating Set kernel.

    Raises :class:`BoundViolation` when the approximate solution already
    certifies ``|D| <= 2k`` yet the output exceeds ``1146k`` vertices, which
    would mean a broken pipeline rather than a no-instance.
    """
    ledger = ledger if ledger is not None else SpaceLedger(G.n)
    D = sorted(set(approx_ds(G, 1, ledger)))
    rd = maximal_region_decomposition(G, D, DS_CONSTANTS, ledger)
    part = RegionPartition.build(G, rd)
    stats = SchemeStats(solution_size=len(D), regions=len(rd.regions), outside=len(part.outside))
    if len(part.outside) > DS_OUTSIDE_FACTOR * len(D):
        warnings.warn(
            f"{len(part.outside)} vertices outside regions exceed {DS_OUTSIDE_FACTOR}|D|",
            OutsideBoundWarning,
            stacklevel=2,
        )
    keep = set(part.outside) | set(D)
    for view in part.views:
        kept = rule_dom_set_reg(G, view)
        if len(kept) > DS_REGION_LIMIT:
            raise BoundViolation(f"region replacement has {len(kept)} > {DS_REGION_LIMIT} vertices")
        stats.region_sizes.append(len(kept))
        keep |= kept
    stats.max_region = max(stats.region_sizes, default=0)
    # one subset mask, one witness pair and the current region's anchors
    ledger.peak("scheme.reduce", 6)
    bound = ds_bound(k) if k is not None else None
    return _finish(G, keep, k, bound, k is not None and len(D) <= 2 * k, stats, ledger)


# ---------------------------------------------------------------------------
# Vertex Cover


def rule_vtx_cov_reg(G: PlanarGraph, R: RegionView) -> frozenset[int]:
    """Retained vertices of a Vertex Cover region.

    Keeps the smallest interior vertex adjacent to ``u``, the smallest adjacent
    to ``v`` and the smallest adjacent to both; one vertex may fill several
    roles.
    """
    T: set[int] = set()
    for test in (
        lambda x: G.has_edge(x, R.u),
        lambda x: G.has_edge(x, R.v),
        lambda x: G.has_edge(x, R.u) and G.has_edge(x, R.v),
    ):
        for x in sorted(R.interior):
            if test(x):
                T.add(x)
                break
    return frozenset(T) | R.boundary


def rule_vtx_cov_cleanup(G: PlanarGraph, C: Iterable[int], partition: RegionPartition) -> frozenset[int]:
    """Outside vertices kept: the cover vertices themselves and, for every
    cover vertex, its first outside non-cover neighbour in rotation order."""
    C = set(C)
    outside = partition.outside
    keep = {c for c in C if c in outside}
    for c in sorted(C):
        for x in G.neighbors(c):
            if x in outside and x not in C:
                keep.add(x)
                break
    return frozenset(keep)


def vc_anchor_set(G: PlanarGraph, cover: Iterable[int]) -> list[int]:
    """Cover plus isolated vertices, which otherwise violate the distance property."""
    return sorted(set(cover) | {x for x in G.vertices() if G.degree(x) == 0})


def kernelize_vc_scheme(G: PlanarGraph, k: int | None = None, ledger: SpaceLedger | None = None) -> KernelInstance:
    ledger = ledger if ledger is not None else SpaceLedger(G.n)
    C = sorted(set(approx_vc(G, 1, ledger)))
    S = vc_anchor_set(G, C)
    rd = maximal_region_decomposition(G, S, VC_CONSTANTS, ledger)
    part = RegionPartition.build(G, rd)
    stats = SchemeStats(solution_size=len(C), regions=len(rd.regions), outside=len(part.outside))
    keep: set[int] = set()
    for view in part.views:
        kept = rule_vtx_cov_reg(G, view)
        if len(kept) > VC_REGION_LIMIT:
            raise BoundViolation(f"region replacement has {len(kept)} > {VC_REGION_LIMIT} vertices")
        stats.region_sizes.append(len(kept))
        keep |= kept
    keep |= rule_vtx_cov_cleanup(G, C, part)
    stats.max_region = max(stats.region_sizes, default=0)
    ledger.peak("scheme.reduce", 6)
    bound = vc_bound(k) if k is not None else None
    return _finish(G, keep, k, bound, k is not None and len(C) <= 2 * k, stats, ledger)
