import random

import pytest

from invmon.graphs import (LabeledDigraph, ball, export_dot, fold,
                           induced_subgraph, is_connected, parse_graph_file,
                           parse_subset_file, rooted_isomorphic,
                           undirected_distance, write_graph_file)


def path_graph(n, label="a", root=0):
    g = LabeledDigraph(n, root=root)
    for i in range(n - 1):
        g.add_edge(i, label, i + 1)
    return g


def test_fold_forced_merge():
    g = LabeledDigraph(3, root=0)
    g.add_edge(0, "a", 1)
    g.add_edge(0, "a", 2)
    folded, merge = fold(g)
    assert folded.n == 2
    assert merge[1] == merge[2]
    assert merge[0] != merge[1]


def test_fold_identity_on_deterministic_graph():
    g = path_graph(3)
    g.add_edge(2, "b", 0)
    folded, merge = fold(g)
    assert folded.n == 3
    assert merge == [0, 1, 2]
    assert sorted(folded.edges()) == sorted(g.edges())


def test_fold_aa_inverse_line():
    # trace of a a': 0 -a-> 1, 2 -a-> 1; co-determinism merges 0 and 2
    g = LabeledDigraph(3, root=0)
    g.add_edge(0, "a", 1)
    g.add_edge(2, "a", 1)
    folded, merge = fold(g)
    assert folded.n == 2
    assert merge[0] == merge[2] == folded.root


def test_fold_confluence_under_relabeling():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 8)
        g = LabeledDigraph(n, root=0)
        for i in range(1, n):  # keep the root's component total
            g.add_edge(rng.randrange(i), rng.choice("ab"), i)
        for _ in range(rng.randint(0, 12)):
            g.add_edge(rng.randrange(n), rng.choice("ab"), rng.randrange(n))
        perm = list(range(n))
        rng.shuffle(perm)
        h = LabeledDigraph(n, root=perm[0])
        shuffled = [(perm[s], l, perm[d]) for s, l, d in g.edges()]
        rng.shuffle(shuffled)
        for s, l, d in shuffled:
            h.add_edge(s, l, d)
        fg, _ = fold(g)
        fh, _ = fold(h)
        assert rooted_isomorphic(fg, fh)


def test_fold_soundness_walks_survive():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 7)
        g = LabeledDigraph(n, root=0)
        for _ in range(rng.randint(0, 10)):
            g.add_edge(rng.randrange(n), rng.choice("ab"), rng.randrange(n))
        folded, merge = fold(g)
        # random readable walk from the root
        v = 0
        letters = []
        for _ in range(rng.randint(0, 6)):
            options = list(g.undirected_neighbors(v))
            if not options:
                break
            v, base, inv = rng.choice(options)
            letters.append((base, inv))
        assert folded.walk(folded.root, letters) == merge[v]


def test_undirected_distance():
    g = path_graph(3)
    assert undirected_distance(g, 0, 0) == 0
    assert undirected_distance(g, 0, 1) == 1
    assert undirected_distance(g, 0, 2) == 2
    assert undirected_distance(g, 2, 0) == 2


def test_undirected_distance_unreachable():
    g = LabeledDigraph(2)
    assert undirected_distance(g, 0, 1) is None


def test_distance_triangle_inequality():
    rng = random.Random(1)
    g = LabeledDigraph(9)
    for _ in range(14):
        g.add_edge(rng.randrange(9), "a", rng.randrange(9))
    for _ in range(60):
        x, y, z = (rng.randrange(9) for _ in range(3))
        dxy = undirected_distance(g, x, y)
        dyz = undirected_distance(g, y, z)
        dxz = undirected_distance(g, x, z)
        if dxy is not None and dyz is not None:
            assert dxz is not None and dxz <= dxy + dyz


def test_ball():
    g = path_graph(5)
    assert ball(g, 2, 0).members == {2}
    assert ball(g, 2, 1).members == {1, 2, 3}
    assert ball(g, 0, 10).members == set(range(5))


def test_induced_subgraph():
    g = path_graph(4)
    h, old_ids = induced_subgraph(g, {0, 1, 3})
    assert old_ids == [0, 1, 3]
    assert h.n == 3
    # only the 0-1 edge survives; 1-2 and 2-3 both touch the removed vertex
    assert list(h.edges()) == [(0, "a", 1)]


def test_is_connected():
    g = path_graph(3)
    assert is_connected(g)
    assert is_connected(g, {0, 1})
    assert not is_connected(g, {0, 2})
    assert is_connected(g, set())


def test_rooted_isomorphic():
    g = path_graph(3)
    assert rooted_isomorphic(g, g.copy())
    assert not rooted_isomorphic(g, path_graph(4))
    h = path_graph(3)
    h.remove_edge(1, "a", 2)
    h.add_edge(1, "b", 2)
    assert not rooted_isomorphic(g, h)


def test_rooted_isomorphic_same_shape_different_root():
    g = LabeledDigraph(2, root=0)
    g.add_edge(0, "a", 1)
    h = g.copy()
    h.root = 1
    assert not rooted_isomorphic(g, h)


def test_rooted_isomorphic_requires_roots():
    with pytest.raises(ValueError):
        rooted_isomorphic(LabeledDigraph(1), LabeledDigraph(1, root=0))


def test_export_dot():
    assert export_dot(LabeledDigraph(0)) == "digraph G {\n}\n"
    g = LabeledDigraph(2, root=0)
    g.add_edge(0, "a", 1)
    dot = export_dot(g)
    assert '0 -> 1 [label="a"]' in dot
    assert "doublecircle" in dot.splitlines()[1]


def test_graph_file_round_trip():
    g = path_graph(3)
    g.add_edge(2, "b", 0)
    text = write_graph_file(g)
    h = parse_graph_file(text)
    assert h.n == g.n and h.root == g.root
    assert sorted(h.edges()) == sorted(g.edges())


def test_graph_file_errors():
    with pytest.raises(ValueError):
        parse_graph_file("0 a 1\n")
    with pytest.raises(ValueError):
        parse_graph_file("")


def test_subset_file():
    assert parse_subset_file("2\n0 # root\n\n5\n") == [2, 0, 5]
