import itertools

import networkx as nx
import numpy as np
import pytest

from corpus import exhaustive_corpus, random_corpus
from planarkernel.baker import approx_ds
from planarkernel.generators import from_positions, grid, random_triangulation, star
from planarkernel.graph import PlanarGraph, SpaceLedger
from planarkernel.regions import (
    DS_CONSTANTS,
    VC_CONSTANTS,
    CompressedRegion,
    DistanceConstants,
    DistancePropertyError,
    InvalidWalkError,
    RegionDecomposition,
    check_distance_property,
    enumerate_candidate_regions,
    maximal_region_decomposition,
    reconstruct_region,
    region_contains,
    region_vertex_sets,
    verify_region_decomposition,
)

U, V, W, X, Y = range(5)


def gadget():
    """Square u-w-v-x around an interior vertex y hanging off u."""
    pos = [(0, 0), (2, 0), (1, 1), (1, -1), (0.5, 0)]
    return from_positions(pos, [(U, W), (W, V), (V, X), (X, U), (U, Y)])


def single_edge():
    return PlanarGraph([[1], [0]])


def two_squares():
    # u=0, v=1; inner square through a=2, b=3; outer square through x=4, y=5
    pos = [(0, 0), (4, 0), (2, 1), (2, -1), (2, 2), (2, -2)]
    edges = [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1), (0, 5), (5, 1)]
    return from_positions(pos, edges)


def test_single_edge_region():
    G = single_edge()
    r = CompressedRegion.from_walks(G, [0, 1], [0, 1])
    assert sorted(reconstruct_region(G, r, DS_CONSTANTS)) == [0, 1]


def test_gadget_interior_vertex():
    G = gadget()
    r = CompressedRegion.from_walks(G, [U, W, V], [U, X, V])
    assert sorted(reconstruct_region(G, r, DS_CONSTANTS)) == [U, V, W, X, Y]
    assert region_contains(G, r, DS_CONSTANTS, Y)
    assert region_contains(G, r, DS_CONSTANTS, U)
    # swapping the walks selects the other side of the curve
    other = CompressedRegion.from_walks(G, [U, X, V], [U, W, V])
    assert not region_contains(G, other, DS_CONSTANTS, Y)


def test_identical_walks_have_no_interior():
    G = gadget()
    r = CompressedRegion.from_walks(G, [U, W, V], [U, W, V])
    assert sorted(reconstruct_region(G, r, DS_CONSTANTS)) == [U, V, W]


def test_vertex_in_other_component_is_not_contained():
    G = PlanarGraph([[1], [0], []])
    r = CompressedRegion.from_walks(G, [0, 1], [0, 1])
    assert not region_contains(G, r, DS_CONSTANTS, 2)


def test_invalid_walks():
    G = gadget()
    with pytest.raises(InvalidWalkError):
        CompressedRegion.from_walks(G, [U, V], [U, W, V])
    with pytest.raises(InvalidWalkError):
        CompressedRegion(U, V, (7,), (0,)).walks(G)
    with pytest.raises(InvalidWalkError):
        CompressedRegion(U, V, (0,), (0,)).walks(G)
    with pytest.raises(ValueError):
        CompressedRegion(U, U, (), ())


def test_reconstruction_is_deterministic_and_duplicate_free():
    G = random_triangulation(40, 7)
    for u, v in [(0, 1), (3, 9), (5, 6)]:
        for r in enumerate_candidate_regions(G, u, v, DS_CONSTANTS)[:20]:
            first = list(reconstruct_region(G, r, DS_CONSTANTS))
            assert first == list(reconstruct_region(G, r, DS_CONSTANTS))
            assert len(first) == len(set(first))
            assert set(first) == region_vertex_sets(G, r)[0]


def test_enumeration_examples():
    P = PlanarGraph([[1], [0, 2], [1, 3], [2, 4], [3, 5], [4, 6], [5, 7], [6, 8], [7]])
    assert enumerate_candidate_regions(P, 0, 8, DS_CONSTANTS) == []
    E = single_edge()
    assert CompressedRegion(0, 1, (0,), (0,)) in enumerate_candidate_regions(E, 0, 1, DS_CONSTANTS)
    square = from_positions([(0, 0), (1, 1), (2, 0), (1, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    regions = enumerate_candidate_regions(square, 0, 2, DS_CONSTANTS)
    full = CompressedRegion.from_walks(square, [0, 1, 2], [0, 3, 2])
    assert full in regions
    assert region_vertex_sets(square, full)[0] == {0, 1, 2, 3}


def _inside(poly, p):
    """Even-odd ray casting."""
    x, y = p
    inside = False
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        if (y1 > y) != (y2 > y) and x < x1 + (y - y1) * (x2 - x1) / (y2 - y1):
            inside = not inside
    return inside


def _signed_area(poly):
    return sum(x1 * y2 - x2 * y1 for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1])) / 2


@pytest.mark.parametrize("seed", range(6))
def test_interior_matches_geometry(seed):
    n = 30
    pts = np.random.default_rng(seed).random((n, 2))
    G = random_triangulation(n, seed)
    nxg = nx.Graph(G.edges())
    checked = 0
    for u, v in itertools.combinations(range(0, n, 3), 2):
        paths = list(nx.all_simple_paths(nxg, u, v, cutoff=3))
        for p1, p2 in itertools.combinations(paths, 2):
            if set(p1[1:-1]) & set(p2[1:-1]):
                continue
            cyc = p1 + p2[::-1][1:-1]
            poly = [tuple(pts[x]) for x in cyc]
            _, interior = region_vertex_sets(G, CompressedRegion.from_walks(G, p1, p2))
            clockwise = _signed_area(poly) < 0
            expected = {x for x in range(n) if x not in cyc and _inside(poly, tuple(pts[x])) == clockwise}
            assert interior == expected
            checked += 1
    assert checked > 50


def test_decomposition_examples():
    E = single_edge()
    rd = maximal_region_decomposition(E, {0, 1}, DS_CONSTANTS)
    assert len(rd.regions) == 1 and region_vertex_sets(E, rd.regions[0])[0] == {0, 1}
    assert maximal_region_decomposition(star(4), {0}, DS_CONSTANTS).regions == ()
    T = two_squares()
    rd = maximal_region_decomposition(T, {0, 1}, DS_CONSTANTS)
    covered = set().union(*(region_vertex_sets(T, r)[0] for r in rd.regions))
    assert covered == set(range(6))
    report = verify_region_decomposition(T, rd)
    assert report.ok and report.passed("count_bound")


def test_distance_property_is_checked():
    P = PlanarGraph([[1], [0, 2], [1, 3], [2]])
    assert check_distance_property(P, [0], DS_CONSTANTS)
    with pytest.raises(DistancePropertyError):
        maximal_region_decomposition(P, [0], DS_CONSTANTS)
    assert check_distance_property(P, [1, 2], VC_CONSTANTS) == []


def test_verifier_flags_repeats_and_long_walks():
    G = gadget()
    r = CompressedRegion.from_walks(G, [U, W, V], [U, X, V])
    twice = RegionDecomposition(DS_CONSTANTS, frozenset({U, V}), (r, r))
    report = verify_region_decomposition(G, twice)
    assert not report.passed("non_overlap") and report.passed("walk_length")
    ring = from_positions(
        [(0, 0), (1, 1), (2, 1), (3, 1), (4, 0), (2, -1)], [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]
    )
    long = CompressedRegion.from_walks(ring, [0, 1, 2, 3, 4], [0, 5, 4])
    report = verify_region_decomposition(ring, RegionDecomposition(DistanceConstants(1, 1), frozenset({0, 4}), (long,)))
    assert not report.passed("walk_length")
    assert any("limit" not in line for line in report.lines())


def test_verifier_flags_foreign_anchor_inside():
    G = gadget()
    r = CompressedRegion.from_walks(G, [U, W, V], [U, X, V])
    report = verify_region_decomposition(G, RegionDecomposition(DS_CONSTANTS, frozenset({U, V, Y}), (r,)))
    assert not report.passed("anchors")


def test_dump_round_trip():
    G = grid(4, 4)
    S = list(approx_ds(G, 1))
    rd = maximal_region_decomposition(G, S, DS_CONSTANTS)
    again = RegionDecomposition.parse_dump(G, rd.dump_lines(G), S, DS_CONSTANTS)
    assert again == rd


def test_decompositions_over_corpus():
    for G in exhaustive_corpus(7)[::5] + random_corpus()[::5]:
        S = sorted(approx_ds(G, 1))
        led = SpaceLedger(G.n)
        rd = maximal_region_decomposition(G, S, DS_CONSTANTS, led)
        assert verify_region_decomposition(G, rd).ok
        if len(S) >= 3:
            assert len(rd.regions) <= 3 * len(S) - 6
        limit = 2 * DS_CONSTANTS.walk_limit + 2
        assert all(r.stored_words() <= limit for r in rd.regions)
        assert led.words("regions.store") <= limit * len(rd.regions)
