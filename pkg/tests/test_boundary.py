import random

import pytest

from _models import (bicyclic_ray_model, free_product_ball,
                     free_product_model, z2xz4_model)
from invmon.boundary import (QiParams, RClassModel, ball_cover,
                             boundary_width, check_cover_bounds,
                             cover_analysis, lk_generates_pi1,
                             model_from_ball, parse_model_file, qi_check,
                             qi_r1_check, replay_boundary_path,
                             write_model_file)
from invmon.graphs import LabeledDigraph
from invmon.presentations import parse_presentation


def path_graph(n):
    g = LabeledDigraph(n)
    for i in range(n - 1):
        g.add_edge(i, "a", i + 1)
    return g


def k3():
    g = LabeledDigraph(3)
    g.add_edge(0, "a", 1)
    g.add_edge(1, "a", 2)
    g.add_edge(2, "a", 0)
    return g


def test_width_complete_graph():
    rep = boundary_width(k3(), {0, 1, 2})
    assert rep.width == 1
    assert rep.excursion_width == 0
    assert not rep.no_pairs
    assert all(len(path) == 2 for _, _, path in rep.pairs)


def test_width_path_endpoints():
    rep = boundary_width(path_graph(3), {0, 2})
    assert rep.width == 2
    assert rep.excursion_width == 2
    assert any(x == 0 and y == 2 and path == (0, 1, 2)
               for x, y, path in rep.pairs)


def test_width_empty_and_isolated():
    rep = boundary_width(path_graph(3), set())
    assert rep.no_pairs and rep.width == 0
    rep = boundary_width(LabeledDigraph(2), {0})
    assert rep.no_pairs and rep.width == 0


def test_width_rejects_foreign_vertices():
    with pytest.raises(ValueError):
        boundary_width(path_graph(2), {5})


def test_width_free_product_factor():
    g, subgroup, _ = free_product_ball(4)
    rep = boundary_width(g, subgroup)
    assert rep.excursion_width == 0
    assert rep.width == 1  # the single a-edge inside the factor
    assert all(len(path) == 2 or path[0] == path[-1]
               for _, _, path in rep.pairs)


def test_boundary_paths_replay():
    for g, subset in ((k3(), {0, 1, 2}),
                      (path_graph(5), {0, 3}),
                      (free_product_ball(3)[0], free_product_ball(3)[1])):
        rep = boundary_width(g, subset)
        for pair in rep.pairs:
            assert replay_boundary_path(g, rep, pair)
        if rep.pairs:
            x, y, path = rep.pairs[0]
            assert not replay_boundary_path(g, rep, (x, y, path + path[-1:]))


def test_ball_cover():
    g = path_graph(5)
    assert ball_cover(g, {2}, 0) == {2}
    assert ball_cover(g, {0}, 10) == set(range(5))
    previous = frozenset({1})
    for r in range(4):
        cover = ball_cover(g, {1}, r)
        assert previous <= cover
        previous = cover
    with pytest.raises(ValueError):
        ball_cover(g, {0}, -1)


def test_cover_bounds_r0():
    g = path_graph(4)
    rep = check_cover_bounds(g, {0, 2}, 0)
    assert rep.cover == {0, 2}
    assert rep.cover_width == rep.base_width
    assert rep.ball_ok and rep.ok


def test_cover_bounds_small_cases():
    g = path_graph(6)
    for r in (0, 1, 2):
        assert check_cover_bounds(g, {0, 4}, r).ball_ok
        assert check_cover_bounds(k3(), {0}, r).ball_ok


def test_cover_bounds_random_campaign():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(2, 12)
        g = LabeledDigraph(n)
        for i in range(1, n):
            g.add_edge(rng.randrange(i), "a", i)
        for _ in range(rng.randint(0, n)):
            g.add_edge(rng.randrange(n), rng.choice("ab"), rng.randrange(n))
        subset = {v for v in range(n) if rng.random() < 0.4} or {0}
        for r in (0, 1, 2):
            rep = check_cover_bounds(g, subset, r)
            assert rep.ball_ok, (n, sorted(subset), r)


def test_cover_bounds_with_model():
    m = z2xz4_model()
    rep = check_cover_bounds(m.graph, m.part(1), 1, model=m)
    assert rep.ball_ok
    assert rep.coset_connected
    assert rep.coset_ok and rep.ok


def test_cover_bounds_model_mismatch():
    with pytest.raises(ValueError):
        check_cover_bounds(path_graph(3), {0}, 1, model=z2xz4_model())


def test_cover_analysis_whole_graph():
    m = z2xz4_model()
    rep = cover_analysis(m, [1, 2, 3, 4])
    assert rep.connected
    assert rep.subset == frozenset(range(8))
    assert rep.width.width <= 1
    assert rep.enlarged == (1, 2, 3, 4)


def test_cover_analysis_isolated_subgroup():
    g = LabeledDigraph(2)
    g.add_edge(1, "a", 1)
    m = RClassModel(g, {0: 1, 1: 2}, 0)
    rep = cover_analysis(m, [1])
    assert rep.connected
    assert rep.width.no_pairs and rep.width.width == 0


def test_cover_analysis_free_product_factor():
    rep = cover_analysis(free_product_model(4), [1])
    assert rep.connected
    assert rep.width.excursion_width == 0


def test_cover_analysis_enlargement():
    m = bicyclic_ray_model()
    rep = cover_analysis(m, [1, 3])
    assert not rep.connected
    assert rep.enlarged_connected
    joined = frozenset(v for v in range(m.graph.n)
                       if m.cosets[v] in rep.enlarged)
    from invmon.graphs import is_connected
    assert is_connected(m.graph, joined)


def test_cover_analysis_errors():
    m = z2xz4_model()
    with pytest.raises(ValueError):
        cover_analysis(m, [1, 9])
    with pytest.raises(ValueError):
        cover_analysis(m, [2])


def test_model_validation():
    g = path_graph(2)
    with pytest.raises(ValueError):
        RClassModel(g, {0: 1}, 0)
    with pytest.raises(ValueError):
        RClassModel(g, {0: 0, 1: 1}, 0)
    with pytest.raises(ValueError):
        RClassModel(g, {0: 2, 1: 1}, 0)
    with pytest.raises(ValueError):
        RClassModel(g, {0: 1, 1: 2}, 0, action={(9, "a"): 1})


def test_model_file_round_trip():
    for m in (z2xz4_model(), bicyclic_ray_model()):
        parsed = parse_model_file(write_model_file(m))
        assert parsed.cosets == m.cosets
        assert parsed.idempotent == m.idempotent
        assert parsed.action == m.action
        assert parsed.graph.n == m.graph.n
        assert sorted(parsed.graph.edges()) == sorted(m.graph.edges())


def test_model_file_requires_idempotent():
    with pytest.raises(ValueError):
        parse_model_file("vertices 1\ncoset 0 1\n")


def test_lk_on_tree():
    for k in (1, 3, 6):
        assert lk_generates_pi1(path_graph(5), 0, k)


def test_lk_on_cycle():
    g = k3()
    assert not lk_generates_pi1(g, 0, 2)
    assert lk_generates_pi1(g, 0, 3)
    c4 = LabeledDigraph(4)
    for i in range(4):
        c4.add_edge(i, "a", (i + 1) % 4)
    assert not lk_generates_pi1(c4, 0, 3)
    assert lk_generates_pi1(c4, 0, 4)


def test_lk_two_short_cycles():
    # triangles hanging off both ends of an edge; loops of length 3 suffice
    g = LabeledDigraph(6)
    for i, j in ((0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 3)):
        g.add_edge(i, "a", j)
    assert lk_generates_pi1(g, 0, 3)
    assert not lk_generates_pi1(g, 0, 2)


def test_lk_monotone():
    c4 = LabeledDigraph(4)
    for i in range(4):
        c4.add_edge(i, "a", (i + 1) % 4)
    results = [lk_generates_pi1(c4, 0, k) for k in range(1, 7)]
    for earlier, later in zip(results, results[1:]):
        assert later or not earlier


def test_lk_errors():
    with pytest.raises(ValueError):
        lk_generates_pi1(LabeledDigraph(2), 0, 3)
    with pytest.raises(ValueError):
        lk_generates_pi1(path_graph(2), 7, 3)


def test_qi_check_identity():
    g = path_graph(4)
    rep = qi_check(g, g, {v: v for v in range(4)}, QiParams(1, 0, 0))
    assert rep.ok
    assert rep.density_worst == 0


def test_qi_check_collapse_fails():
    g = path_graph(4)
    rep = qi_check(g, g, {v: 0 for v in range(4)}, QiParams(1, 0, 0))
    assert not rep.ok
    assert any(f.kind == "lower" for f in rep.failures)
    assert any(f.kind == "density" for f in rep.failures)


def test_qi_params_validation():
    with pytest.raises(ValueError):
        QiParams(0.5, 0, 0)
    with pytest.raises(ValueError):
        QiParams(1, -1, 0)


def test_qi_r1_z2_exact():
    p = parse_presentation("@kind special_inverse\n@gens a\n@rel a a = 1\n")
    rep = qi_r1_check(p)
    assert rep.ok
    assert rep.lam == 2
    assert rep.exact and rep.stabilized
    assert rep.gamma_vertices == 2 and rep.delta_vertices == 2
    assert rep.failures == ()


def test_qi_r1_mst_interior():
    from invmon.constructions import build_mst
    from invmon.zone_graphs import q6_input
    rep = qi_r1_check(build_mst(q6_input()), rounds=4, radius=3,
                      vertex_cap=60000, max_pairs=200)
    assert rep.ok
    assert not rep.exact
    assert rep.interior and rep.pairs_checked > 0


def test_model_from_ball_group_case():
    p = parse_presentation("@kind special_inverse\n@gens a\n@rel a a = 1\n")
    am = model_from_ball(p, radius=1)
    assert not am.exact
    assert am.model.graph.n == 2
    assert set(am.model.cosets.values()) == {1}
    assert am.model.act(1, "a") == 1
    assert am.conflicts == ()


def test_model_from_ball_separates_idempotents():
    p = parse_presentation("@kind special_inverse\n@gens a b\n@rel a b = 1\n")
    am = model_from_ball(p, radius=2, rounds=3, h_rounds=3)
    # a^k classes all differ, so every depth gets its own part
    assert sorted(set(am.model.cosets.values())) == [1, 2, 3]
    assert am.model.act(2, "a'") == 1
    assert am.model.cosets[am.model.graph.root] == 1
