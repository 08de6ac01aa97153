from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_corpus
from planarkernel.alber import alber_kernelize
from planarkernel.generators import cycle, empty, path, random_planar, star
from planarkernel.graph import PlanarGraph, is_dominating, is_vertex_cover
from planarkernel.oracles import (
    MAX_ORACLE_N,
    OracleCapError,
    brute_force_ds,
    brute_force_vc,
    check_kernel_equivalence,
    solve,
)

EDGE = PlanarGraph([[1], [0]])


def naive_optimum(G, feasible):
    """Smallest k such that some k-subset is feasible (plain enumeration)."""
    for k in range(G.n + 1):
        if any(feasible(G, set(c)) for c in combinations(range(G.n), k)):
            return k


@pytest.mark.parametrize("G, expected", [(cycle(3), 1), (path(5), 2), (empty(4), 4)])
def test_domination_numbers(G, expected):
    res = brute_force_ds(G)
    assert res.optimum == expected
    assert len(res.witness) == expected and is_dominating(G, res.witness)


@pytest.mark.parametrize("G, expected", [(EDGE, 1), (cycle(3), 2), (star(7), 1)])
def test_vertex_cover_numbers(G, expected):
    res = brute_force_vc(G)
    assert res.optimum == expected
    assert is_vertex_cover(G, res.witness)


def test_against_plain_enumeration():
    for G in random_corpus()[:60]:
        if G.n > 12:
            continue
        assert brute_force_ds(G).optimum == naive_optimum(G, is_dominating)
        assert brute_force_vc(G).optimum == naive_optimum(G, is_vertex_cover)


@given(st.integers(2, 12), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_adding_an_edge_is_monotone(n, seed):
    G = random_planar(n, seed, 0.5)
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if not G.has_edge(u, v)]
    if not missing:
        return
    u, v = missing[seed % len(missing)]
    H = PlanarGraph.from_edges(n, G.edges() + [(u, v)], validate=False)
    assert brute_force_ds(H).optimum <= brute_force_ds(G).optimum
    assert brute_force_vc(H).optimum >= brute_force_vc(G).optimum


def test_cap():
    with pytest.raises(OracleCapError):
        brute_force_ds(empty(MAX_ORACLE_N + 1))
    with pytest.raises(ValueError):
        solve(EDGE, "tsp")


def test_kernel_equivalence():
    K3 = cycle(3)
    assert check_kernel_equivalence(K3, alber_kernelize(K3).graph, "ds")
    G = random_planar(10, 3)
    assert check_kernel_equivalence(G, G, "vc")
    assert not check_kernel_equivalence(EDGE, empty(2), "vc")
