import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathprobe.errors import InvalidInputError, SizeLimitError
from pathprobe.gw import sample_uniform_labeled_tree
from pathprobe.pathfind import Path
from pathprobe.structure import (
    SimpleGraph,
    brute_force_path_cover,
    connected_components,
    forest_max_path_count,
    forest_max_path_cover,
    is_forest,
    longest_path_in_component,
    split_path,
    two_core,
)


def graph(n, edges):
    return SimpleGraph.from_edges(n, edges)


def random_graph(n, p, rng):
    return graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def random_tree(t, seed):
    tree = sample_uniform_labeled_tree(t, False, seed)
    return graph(t, tree.undirected_edges())


# -- components -------------------------------------------------------------


def test_components_triangle_plus_isolated():
    cs = connected_components(graph(4, [(0, 1), (1, 2), (0, 2)]))
    assert [len(c) for c in cs.components] == [3, 1]
    assert cs.largest == [0, 1, 2]
    assert cs.second_largest_size == 1


def test_components_empty_graph():
    cs = connected_components(graph(5, []))
    assert [len(c) for c in cs.components] == [1] * 5


def test_components_path():
    cs = connected_components(graph(6, [(i, i + 1) for i in range(5)]))
    assert len(cs.components) == 1 and len(cs.largest) == 6
    assert cs.second_largest_size == 0


def test_components_partition_vertices():
    rng = random.Random(0)
    g = random_graph(30, 0.05, rng)
    cs = connected_components(g)
    flat = sorted(v for c in cs.components for v in c)
    assert flat == list(range(30))
    sizes = [len(c) for c in cs.components]
    assert sizes == sorted(sizes, reverse=True)


# -- two_core ---------------------------------------------------------------


def test_two_core_of_tree_is_empty():
    assert two_core(random_tree(9, 4)).core_vertices == set()


def test_two_core_of_cycle_is_cycle():
    c5 = graph(5, [(i, (i + 1) % 5) for i in range(5)])
    res = two_core(c5)
    assert res.core_vertices == set(range(5))
    assert len(res.core_edges) == 5


def test_two_core_triangle_with_pendant_path():
    g = graph(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)])
    res = two_core(g)
    assert res.core_vertices == {0, 1, 2}
    assert res.core_edges == [(0, 1), (0, 2), (1, 2)]


def _brute_two_core(g):
    """Union of all vertex sets inducing minimum degree >= 2."""
    best = set()
    for r in range(g.n + 1):
        for sub in itertools.combinations(range(g.n), r):
            s = set(sub)
            if all(sum(w in s for w in g.adj[v]) >= 2 for v in s):
                best |= s
    return best


@pytest.mark.parametrize("seed", range(12))
def test_two_core_matches_bruteforce(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randrange(1, 9), rng.choice([0.2, 0.35, 0.5]), rng)
    assert two_core(g).core_vertices == _brute_two_core(g)


def test_two_core_idempotent():
    rng = random.Random(3)
    g = random_graph(12, 0.25, rng)
    res = two_core(g)
    core_graph = graph(g.n, res.core_edges)
    again = two_core(core_graph)
    assert again.core_vertices == res.core_vertices
    assert again.core_edges == res.core_edges
    for v in res.core_vertices:
        assert sum(w in res.core_vertices for w in g.adj[v]) >= 2


# -- longest path -----------------------------------------------------------


def test_longest_path_of_path_graph():
    g = graph(5, [(i, i + 1) for i in range(4)])
    assert longest_path_in_component(g, range(5)) == (4, True)


def test_longest_path_triangle():
    g = graph(3, [(0, 1), (1, 2), (0, 2)])
    assert longest_path_in_component(g, range(3)) == (2, True)


def test_longest_path_c4_with_pendant():
    g = graph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
    assert longest_path_in_component(g, range(5)) == (4, True)


def test_longest_path_requires_connected_component():
    g = graph(4, [(0, 1), (2, 3)])
    with pytest.raises(InvalidInputError):
        longest_path_in_component(g, range(4))


def _brute_longest_path(g, comp):
    best = 0
    comp = list(comp)
    for s in comp:
        stack = [(s, {s}, 0)]
        while stack:
            v, used, ln = stack.pop()
            best = max(best, ln)
            for w in g.adj[v]:
                if w not in used:
                    stack.append((w, used | {w}, ln + 1))
    return best


@pytest.mark.parametrize("seed", range(10))
def test_longest_path_matches_bruteforce_on_sparse_graphs(seed):
    rng = random.Random(100 + seed)
    n = rng.randrange(4, 11)
    g = random_graph(n, 2.5 / n, rng)
    for comp in connected_components(g).components:
        got, exact = longest_path_in_component(g, comp)
        assert exact
        assert got == _brute_longest_path(g, comp)


def test_longest_path_cap_gives_lower_bound():
    g = graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
    full, exact = longest_path_in_component(g, range(6), spanning_tree_cap=4096)
    assert exact
    capped, capped_exact = longest_path_in_component(g, range(6), spanning_tree_cap=1)
    assert not capped_exact
    assert capped <= full


# -- forest packing ---------------------------------------------------------


def test_cover_path10():
    g = graph(10, [(i, i + 1) for i in range(9)])
    res = forest_max_path_cover(g, 3)
    assert res.covered_vertices == 10
    assert res.objective == "max-coverage"


def test_cover_star_is_zero():
    g = graph(6, [(0, i) for i in range(1, 6)])
    assert forest_max_path_cover(g, 3).covered_vertices == 0
    assert forest_max_path_count(g, 3).paths == []


def test_cover_spider():
    legs = [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 6), (0, 7), (7, 8), (8, 9)]
    g = graph(10, legs)
    res = forest_max_path_cover(g, 3)
    assert res.covered_vertices == 7
    assert len(res.paths) == 1
    assert forest_max_path_count(g, 3).paths[0].length >= 3


def test_count_path10():
    g = graph(10, [(i, i + 1) for i in range(9)])
    assert len(forest_max_path_count(g, 3).paths) == 2


def test_packing_rejects_cycles():
    tri = graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(InvalidInputError):
        forest_max_path_cover(tri, 2)
    assert not is_forest(tri)


def test_cover_non_increasing_in_length_floor():
    g = random_tree(40, 99)
    values = [forest_max_path_cover(g, L).covered_vertices for L in range(1, 8)]
    assert values == sorted(values, reverse=True)


def test_cover_on_single_path_at_length_one():
    g = graph(7, [(i, i + 1) for i in range(6)])
    assert forest_max_path_cover(g, 1).covered_vertices == 7


def _check_witness(g, res, L):
    seen = set()
    edge_set = set(g.edges())
    for p in res.paths:
        assert p.length >= L
        assert not (set(p.vertices) & seen)
        seen |= set(p.vertices)
        for e in p.edges():
            assert e in edge_set
    assert res.covered_vertices == sum(p.size for p in res.paths)


@pytest.mark.parametrize("seed", range(40))
def test_packing_matches_bruteforce_on_random_trees(seed):
    rng = random.Random(seed)
    t = rng.randrange(1, 13)
    g = random_tree(t, seed * 31 + 1)
    for L in (1, 2, 3, 5):
        cov = forest_max_path_cover(g, L)
        cnt = forest_max_path_count(g, L)
        _check_witness(g, cov, L)
        _check_witness(g, cnt, L)
        assert cov.covered_vertices == brute_force_path_cover(g, L).covered_vertices
        assert len(cnt.paths) == len(brute_force_path_cover(g, L, "max-count").paths)


def test_packing_on_multi_tree_forest():
    g = graph(9, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6), (7, 8)])
    res = forest_max_path_cover(g, 2)
    assert res.covered_vertices == 3 + 4


# -- split_path -------------------------------------------------------------


def test_split_no_bad_edges_returns_whole_path():
    p = Path(tuple(range(8)))
    out = split_path(p, [], 0.25)
    assert len(out) == 1 and out[0] == p


def test_split_length9_middle_edge():
    p = Path(tuple(range(10)))
    out = split_path(p, [(4, 5)], 1 / 9)
    assert [q.length for q in out] == [4, 4]
    assert sum(q.size for q in out) == 10


def test_split_validates_inputs():
    p = Path(tuple(range(10)))
    with pytest.raises(InvalidInputError):
        split_path(p, [(0, 2)], 0.5)  # not a path edge
    with pytest.raises(InvalidInputError):
        split_path(p, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)], 0.5)  # |B| > alpha l
    with pytest.raises(InvalidInputError):
        split_path(p, [], 0.01)  # alpha < 1/length


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_split_contract_random(data):
    length = data.draw(st.integers(2, 60))
    p = Path(tuple(range(length + 1)))
    edges = p.edges()
    alpha = data.draw(st.fractions(min_value=0, max_value=1).filter(lambda a: a >= 1 / length and a <= 1))
    max_bad = int(alpha * length)
    bad = data.draw(st.lists(st.sampled_from(edges), max_size=max_bad, unique=True)) if max_bad else []
    out = split_path(p, bad, alpha)
    threshold = 1 / (3 * alpha)
    seen = set()
    for q in out:
        assert q.length >= threshold
        assert not (set(q.vertices) & seen)
        seen |= set(q.vertices)
    assert sum(q.size for q in out) >= (1 / 3 - alpha) * length


# -- brute force ------------------------------------------------------------


def test_bruteforce_triangle():
    tri = graph(3, [(0, 1), (1, 2), (0, 2)])
    assert brute_force_path_cover(tri, 2).covered_vertices == 3


def test_bruteforce_rejects_large_instances():
    g = graph(15, [])
    with pytest.raises(SizeLimitError):
        brute_force_path_cover(g, 1)


def test_bruteforce_count_objective():
    g = graph(10, [(i, i + 1) for i in range(9)])
    assert len(brute_force_path_cover(g, 3, "max-count").paths) == 2


# -- edge-list fixture format -------------------------------------------------


def test_edge_list_roundtrip(tmp_path):
    from pathprobe.structure import read_edge_list, write_edge_list

    g = random_tree(9, 77)
    path = tmp_path / "fixture.edges"
    write_edge_list(path, g)
    back = read_edge_list(path)
    assert back.n == g.n and back.edges() == g.edges()
    # fixture graphs feed the brute-force cross-checks directly
    assert brute_force_path_cover(back, 2).covered_vertices == \
        forest_max_path_cover(g, 2).covered_vertices


def test_edge_list_parsing(tmp_path):
    from pathprobe.structure import read_edge_list

    path = tmp_path / "g.edges"
    path.write_text("# comment\n0 1\n\n1 2   # trailing\n")
    g = read_edge_list(path)
    assert g.n == 3 and g.edges() == [(0, 1), (1, 2)]
    path.write_text("0 1 2\n")
    with pytest.raises(InvalidInputError):
        read_edge_list(path)


def test_two_core_independent_of_peeling_order():
    rng = random.Random(5151)
    for _ in range(25):
        n = rng.randrange(2, 50)
        g = random_graph(n, 2.5 / n, rng)
        expected = two_core(g).core_vertices
        # independent peeler: remove one random low-degree vertex at a time
        deg = [len(a) for a in g.adj]
        alive = set(range(n))
        while True:
            weak = [v for v in alive if deg[v] <= 1]
            if not weak:
                break
            v = rng.choice(weak)
            alive.remove(v)
            for w in g.adj[v]:
                if w in alive:
                    deg[w] -= 1
        assert alive == expected


@pytest.mark.parametrize("seed", range(12))
def test_packing_matches_bruteforce_on_random_forests(seed):
    # multi-tree forests: a few disjoint trees packed into one vertex range
    rng = random.Random(900 + seed)
    sizes = [rng.randrange(1, 6) for _ in range(rng.randrange(2, 4))]
    edges = []
    base = 0
    for k, t in enumerate(sizes):
        tree = sample_uniform_labeled_tree(t, False, seed * 97 + k)
        edges.extend((base + u, base + v) for u, v in tree.undirected_edges())
        base += t
    g = graph(base, edges)
    for L in (1, 2, 3):
        assert forest_max_path_cover(g, L).covered_vertices == \
            brute_force_path_cover(g, L).covered_vertices
        assert len(forest_max_path_count(g, L).paths) == \
            len(brute_force_path_cover(g, L, "max-count").paths)
