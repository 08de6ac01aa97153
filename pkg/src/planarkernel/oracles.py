"""Exact brute-force solvers used as ground truth on small instances."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import PlanarGraph, is_dominating, is_vertex_cover

MAX_ORACLE_N = 24


class OracleCapError(ValueError):
    """Instance exceeds the brute-force size cap."""


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: frozenset[int]
    explored: int


def _check_cap(G: PlanarGraph) -> None:
    if G.n > MAX_ORACLE_N:
        raise OracleCapError(f"n={G.n} exceeds oracle cap {MAX_ORACLE_N}")


def brute_force_ds(G: PlanarGraph) -> OracleResult:
    """Domination number by cardinality-ascending search.

    For each budget ``k = 0, 1, ...`` the search branches on the closed
    neighbourhood of the smallest undominated vertex, which enumerates every
    dominating set of size <= k that matters; the first budget that succeeds
    is optimal.
    """
    _check_cap(G)
    n = G.n
    closed = [1 << v for v in range(n)]
    for v in range(n):
        for u in G.neighbors(v):
            closed[v] |= 1 << u
    full = (1 << n) - 1
    explored = 0

    def search(dominated: int, chosen: int, budget: int) -> int | None:
        nonlocal explored
        explored += 1
        if dominated == full:
            return chosen
        if budget == 0:
            return None
        rest = ~dominated & full
        v = (rest & -rest).bit_length() - 1
        cand = closed[v]
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            found = search(dominated | closed[w], chosen | low, budget - 1)
            if found is not None:
                return found
        return None

    for k in range(n + 1):
        found = search(0, 0, k)
        if found is not None:
            witness = frozenset(v for v in range(n) if found >> v & 1)
            assert is_dominating(G, witness)
            return OracleResult(k, witness, explored)
    raise AssertionError("unreachable: V(G) dominates G")


def brute_force_vc(G: PlanarGraph) -> OracleResult:
    """Vertex cover number by cardinality-ascending search.

    Branches on the two endpoints of the first uncovered edge.
    """
    _check_cap(G)
    edges = G.edges()
    explored = 0

    def search(chosen: frozenset[int], budget: int) -> frozenset[int] | None:
        nonlocal explored
        explored += 1
        for u, v in edges:
            if u not in chosen and v not in chosen:
                break
        else:
            return chosen
        if budget == 0:
            return None
        for w in (u, v):
            found = search(chosen | {w}, budget - 1)
            if found is not None:
                return found
        return None

    for k in range(G.n + 1):
        found = search(frozenset(), k)
        if found is not None:
            assert is_vertex_cover(G, found)
            return OracleResult(k, found, explored)
    raise AssertionError("unreachable: V(G) covers G")


def solve(G: PlanarGraph, problem: str) -> OracleResult:
    if problem == "ds":
        return brute_force_ds(G)
    if problem == "vc":
        return brute_force_vc(G)
    raise ValueError(f"unknown problem {problem!r}")


def check_kernel_equivalence(G: PlanarGraph, kernel: PlanarGraph, problem: str) -> bool:
    """True iff both graphs have the same optimum for ``problem`` ('ds' or 'vc')."""
    return solve(G, problem).optimum == solve(kernel, problem).optimum
