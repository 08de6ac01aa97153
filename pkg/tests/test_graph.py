import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planarkernel.generators import complete, cycle, empty, grid, random_planar
from planarkernel.graph import (
    GraphFormatError,
    GraphInvariantError,
    PlanarGraph,
    SpaceLedger,
    VertexStream,
    add_dummy_root,
    bfs_distances,
    connected_components,
    is_dominating,
    is_vertex_cover,
    load_graph,
    serialize,
)

TRIANGLE = """p planar 3 3
c a comment
v 0 2 1 2
v 1 2 2 0
v 2 2 0 1
"""


def two_edges():
    return PlanarGraph([[1], [0], [3], [2]])


def test_load_triangle():
    G = load_graph(TRIANGLE)
    assert (G.n, G.m) == (3, 3)
    assert G.neighbors(1) == (2, 0)


def test_edge_in_one_rotation_only_is_rejected():
    text = "p planar 3 1\nv 0 1 1\nv 1 0\nv 2 0\n"
    with pytest.raises(GraphInvariantError):
        load_graph(text)


def test_k5_violates_euler_bound():
    lines = ["p planar 5 10"]
    for v in range(5):
        nbrs = [u for u in range(5) if u != v]
        lines.append(f"v {v} 4 " + " ".join(map(str, nbrs)))
    with pytest.raises(GraphInvariantError, match="3n-6"):
        load_graph("\n".join(lines))


@pytest.mark.parametrize(
    "text",
    [
        "v 0 0\n",
        "p planar 2 0\nv 0 0\n",
        "p planar 1 0\nv 0 1\n",
        "p planar 1 0\nv 0 0\nv 0 0\n",
        "p planar 1 0\nq\n",
        "p planar x 0\n",
        "p planar 1 0\nv 3 0\n",
    ],
)
def test_malformed_files(text):
    with pytest.raises(GraphFormatError):
        load_graph(text)


def test_header_edge_count_must_match():
    with pytest.raises(GraphInvariantError):
        load_graph("p planar 2 0\nv 0 1 1\nv 1 1 0\n")


def test_loops_and_parallel_edges_rejected():
    with pytest.raises(GraphInvariantError):
        PlanarGraph([[0]])
    with pytest.raises(GraphInvariantError):
        PlanarGraph([[1, 1], [0, 0]])


def test_components():
    assert connected_components(cycle(3)) == {0: 0, 1: 0, 2: 0}
    assert connected_components(two_edges()) == {0: 0, 1: 0, 2: 2, 3: 2}
    assert connected_components(empty(4)) == {0: 0, 1: 1, 2: 2, 3: 3}


def test_dummy_root_two_edges():
    Gp = add_dummy_root(two_edges())
    assert Gp.n == 5
    assert set(Gp.neighbors(4)) == {0, 2}
    assert set(connected_components(Gp).values()) == {0}


def test_dummy_root_on_connected_and_empty():
    Gp = add_dummy_root(cycle(3))
    assert Gp.m == 4 and Gp.has_edge(3, 0)
    assert Gp.neighbors(0)[-1] == 3
    S = add_dummy_root(empty(2))
    assert S.neighbors(2) == (0, 1)


@given(st.integers(1, 30), st.integers(0, 10**6), st.floats(0.1, 1.0))
@settings(max_examples=40, deadline=None)
def test_round_trip_and_dummy_root(n, seed, keep):
    G = random_planar(n, seed, keep)
    assert load_graph(serialize(G)) == G
    assert len(set(connected_components(add_dummy_root(G)).values())) == 1


def test_induced_keeps_rotation_order():
    G = grid(3, 3)
    H, old = G.induced([1, 3, 4, 5, 7])
    centre = old.index(4)
    assert [old[u] for u in H.neighbors(centre)] == list(G.neighbors(4))


def test_ledger_bits_and_lines():
    led = SpaceLedger(1000)
    assert led.word_bits == 10
    led.charge("a", 3)
    led.charge("a", 2)
    led.peak("b", 4)
    led.peak("b", 2)
    assert led.words("a") == 5 and led.words("b") == 4
    assert led.bits("a") == 50
    assert led.total_bits == 90
    assert led.lines()[-1] == "c ledger total 9 90"
    with pytest.raises(ValueError):
        led.charge("a", -1)


def test_ledger_totals_monotone_during_a_run():
    from planarkernel.baker import approx_ds

    seen = []

    class Watch(SpaceLedger):
        def charge(self, category, words=1):
            super().charge(category, words)
            seen.append(self.total_words)

        def peak(self, category, words):
            super().peak(category, words)
            seen.append(self.total_words)

    led = Watch(64)
    approx_ds(grid(8, 8), 1, led)
    assert seen == sorted(seen)


def test_vertex_stream():
    s = VertexStream([3])
    s.emit(1)
    s.extend([2, 2])
    assert list(s) == [3, 1, 2, 2] and len(s) == 4


def test_predicates_and_bfs():
    P = PlanarGraph([[1], [0, 2], [1, 3], [2]])
    assert is_dominating(P, {1, 2}) and not is_dominating(P, {0})
    assert is_dominating(P, {0}, targets=[0, 1])
    assert is_vertex_cover(P, {1, 2}) and not is_vertex_cover(P, {1})
    assert bfs_distances(P, [0]) == {0: 0, 1: 1, 2: 2, 3: 3}
    assert bfs_distances(P, [0], limit=1) == {0: 0, 1: 1}


def test_from_edges_is_not_validated_as_embedding():
    # complete graphs only pass the Euler check up to n = 4
    assert complete(4).m == 6
    with pytest.raises(GraphInvariantError):
        complete(5)
