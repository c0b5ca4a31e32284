"""Tests for limit-graph zone balls, type classification, and edge surgery."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from invmon.constructions import build_mst
from invmon.zone_graphs import (
    Q6Prime,
    SOracle,
    _q6_append,
    _q6_type,
    _q6_words_up_to,
    build_q6_ball,
    build_q_cayley_ball,
    check_gamma_prime,
    check_omega,
    classify_types,
    gamma_prime,
    omega_ball,
    q6_canonical,
    q6_gamma_interior_report,
    q6_input,
    q6_oracle,
    z2_input,
    z2_oracle,
)

Q6_LETTERS = ("a^0", "a^1", "p0", "p1", "q0", "q1")


# ---------------------------------------------------------------------------
# submonoid oracles


def test_free_monoid_oracle():
    orc = SOracle.free_monoid(("a", "b"), ("b",))
    s = orc.mul_word(orc.identity(), ("a", "b"))
    assert s == ("a", "b")
    assert orc.div(s, "b") == ("a",)
    assert orc.div(s, "a") is None
    assert orc.in_t(("b", "b"))
    assert not orc.in_t(s)
    with pytest.raises(ValueError, match="unknown letter"):
        orc.mul((), "z")


def test_free_monoid_oracle_bad_submonoid_letter():
    with pytest.raises(ValueError, match="outside alphabet"):
        SOracle.free_monoid(("a",), ("c",))


def test_finite_table_oracle_z3():
    table = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
    orc = SOracle.finite_table(table, 0, {"a": 1}, ("a",))
    assert orc.mul(2, "a") == 0
    assert orc.div(0, "a") == 2
    # the submonoid generated by a is all of Z/3
    assert all(orc.in_t(s) for s in orc.sample_elements())


def test_finite_table_oracle_validation():
    good = [[0, 1], [1, 0]]
    with pytest.raises(ValueError, match="must be square"):
        SOracle.finite_table([[0, 1]], 0, {"a": 1}, ())
    with pytest.raises(ValueError, match="identity index out of range"):
        SOracle.finite_table(good, 2, {"a": 1}, ())
    with pytest.raises(ValueError, match="fails to be neutral"):
        SOracle.finite_table([[1, 0], [0, 1]], 0, {"a": 1}, ())
    with pytest.raises(ValueError, match="not right cancellative"):
        SOracle.finite_table([[0, 1], [1, 1]], 0, {"a": 1}, ())
    with pytest.raises(ValueError, match="maps outside the table"):
        SOracle.finite_table(good, 0, {"a": 5}, ())
    with pytest.raises(ValueError, match="has no table entry"):
        SOracle.finite_table(good, 0, {"a": 1}, ("c",))


def test_oracle_must_satisfy_the_input_relations():
    # a free monoid on one letter does not satisfy aa = 1
    free = SOracle.free_monoid(("a",), ("a",))
    with pytest.raises(ValueError, match="oracle inconsistency"):
        omega_ball(z2_input(), free, 2)


# ---------------------------------------------------------------------------
# zone balls of the limit graph


def test_omega_root_out_edges():
    ball = omega_ball(q6_input(), q6_oracle(), 1)
    assert sorted(ball.graph.out_labels(ball.root)) == ["p0", "p1", "z"]


def test_omega_d_loop_at_central_zone_root():
    ball = omega_ball(q6_input(), q6_oracle(), 2)
    g = ball.graph
    zr = g.step(ball.root, "z")
    assert g.has_edge(zr, "d", zr)


def test_omega_coincident_suffix_walks_share_a_d_loop():
    # in the one-letter instance both suffix words reach the same vertex,
    # so its d-edge is a loop
    ball = omega_ball(q6_input(), q6_oracle(), 2)
    g = ball.graph
    u1 = g.walk(ball.root, (("p1", False), ("a", False)))
    assert u1 is not None
    assert g.has_edge(u1, "d", u1)


def test_omega_z_edges_enter_at_submonoid_vertices():
    # with the whole group as submonoid, the non-identity central vertex
    # has an incoming z-edge; with an empty submonoid it does not
    zb = omega_ball(z2_input(), z2_oracle(), 3)
    s1 = zb.graph.walk(zb.root, (("z", False), ("a", False)))
    assert zb.graph.step(s1, "z", inv=True) is not None

    qb = omega_ball(q6_input(), q6_oracle(), 3)
    v = qb.graph.walk(qb.root, (("z", False), ("a", False)))
    assert qb.graph.step(v, "z", inv=True) is None


def test_omega_radius_and_budget_errors():
    with pytest.raises(ValueError, match="radius must be nonnegative"):
        omega_ball(q6_input(), q6_oracle(), -1)
    with pytest.raises(ValueError, match="vertex budget"):
        omega_ball(q6_input(), q6_oracle(), 4, max_vertices=50)


def test_check_omega_passes_on_clean_balls():
    for inp, orc in ((q6_input(), q6_oracle()), (z2_input(), z2_oracle())):
        rep = check_omega(omega_ball(inp, orc, 4))
        assert rep.passed
        assert rep.relators_checked > 0
        assert rep.bidet_failures == ()
        assert rep.zone_failures == ()


def test_check_omega_flags_duplicate_out_edge():
    ball = omega_ball(q6_input(), q6_oracle(), 4)
    g = ball.graph
    other = g.step(ball.root, "p0")
    g.add_edge(ball.root, "z", other)
    rep = check_omega(ball)
    assert not rep.passed
    assert any(v == ball.root and side == "out" and lab == "z"
               for v, side, lab, _ in rep.bidet_failures)


def test_check_omega_flags_missing_d_loop():
    ball = omega_ball(q6_input(), q6_oracle(), 4)
    g = ball.graph
    y = g.step(ball.root, "p0")
    g.remove_edge(y, "d", y)
    rep = check_omega(ball)
    assert not rep.passed
    assert rep.relator_failures


def test_check_omega_flags_second_p_letter_into_a_p_zone():
    ball = omega_ball(q6_input(), q6_oracle(), 3)
    g = ball.graph
    y = g.step(ball.root, "p0")
    src = g.step(ball.root, "p1")
    g.add_edge(src, "p1", y)
    rep = check_omega(ball)
    assert not rep.passed
    assert any("non-z zone" in msg for _, msg in rep.zone_failures)


# ---------------------------------------------------------------------------
# graded Cayley balls and vertex types


def test_q6_ball_is_graded_by_word_length():
    ball = build_q6_ball(3)
    assert all(ball.depth[i] == len(w) for i, w in enumerate(ball.words))
    assert ball.words[ball.index[()]] == ()


def test_q6_ball_budget_error():
    with pytest.raises(ValueError, match="vertex budget"):
        build_q_cayley_ball(q6_input(), q6_canonical, 4, max_vertices=100)


def test_classify_types_examples():
    ball = build_q6_ball(3)
    types = classify_types(ball)
    assert types[ball.index[("q0", "p0")]] == "z"
    assert types[ball.index[("p0",)]] == "p0"
    assert types[ball.index[("p1",)]] == "p1"
    assert types[ball.index[()]] is None
    assert types[ball.index[("a^0", "p0")]] == "p0"


def test_classify_types_agrees_with_word_arithmetic():
    ball = build_q6_ball(4)
    types = classify_types(ball)
    for w in ball.words:
        assert types[ball.index[w]] == _q6_type(w)


def test_classify_types_ambiguity_is_a_hard_error():
    ball = build_q6_ball(2)
    g = ball.graph
    g.add_edge(ball.index[()], "p0", ball.index[("p1",)])
    with pytest.raises(ValueError, match="ambiguous classification"):
        classify_types(ball)


def test_classify_types_incomplete_two_sided_vertex_is_a_hard_error():
    ball = build_q6_ball(2)
    g = ball.graph
    g.remove_edge(ball.index[("q1",)], "p1", ball.index[("q0", "p0")])
    with pytest.raises(ValueError, match="two-sided but lacks"):
        classify_types(ball)


def test_classify_types_rejects_cyclic_chains():
    ball = build_q6_ball(2)
    g = ball.graph
    g.add_edge(ball.index[()], "a^0", ball.index[()])
    with pytest.raises(ValueError, match="cycle in an indexed-letter chain"):
        classify_types(ball)


# ---------------------------------------------------------------------------
# edge surgery


def _surgery(radius):
    ball = build_q6_ball(radius)
    types = classify_types(ball)
    return ball, types, gamma_prime(ball, types)


def test_gamma_prime_z_edges_and_d_loops():
    ball, types, gp = _surgery(4)
    g = gp.graph
    v = ball.index[("q0", "p0")]
    t = g.step(v, "z")
    assert ball.words[t] == ("q0", "p0", "q0", "p0")
    assert g.has_edge(v, "d", v)
    assert g.has_edge(ball.index[("p0",)], "d", ball.index[("p0",)])
    # every complete vertex carries exactly one outgoing z-edge, into its
    # block-appended companion
    for i, w in enumerate(ball.words):
        if i in gp.incomplete:
            continue
        assert ball.words[g.step(i, "z")] == _q6_append(_q6_append(w, "q0"),
                                                        "p0")


def test_gamma_prime_matches_the_lazy_navigator():
    ball, types, gp = _surgery(5)
    nav = Q6Prime(5)
    out_of = {}
    in_of = {}
    for s, lab, t in gp.graph.edges():
        out_of.setdefault(ball.words[s], {}).setdefault(lab, set()).add(
            ball.words[t])
        in_of.setdefault(ball.words[t], {}).setdefault(lab, set()).add(
            ball.words[s])
    compared = 0
    for w in _q6_words_up_to(3):
        if ball.index[w] in gp.incomplete:
            continue
        assert out_of.get(w, {}) == dict(nav.out_edges(w))
        compared += 1
        # the explicit graph may see extra in-edges from deeper sources
        for lab, sources in nav.in_edges(w).items():
            assert set(sources) <= in_of.get(w, {}).get(lab, set())
    assert compared > 100


def test_check_gamma_prime_passes_on_the_interior():
    ball, types, gp = _surgery(5)
    mst = build_mst(q6_input())
    interior = [ball.index[w] for w in ball.words
                if len(w) <= 2 and ball.index[w] not in gp.incomplete]
    rep = check_gamma_prime(gp, mst, interior)
    assert rep.passed
    assert rep.relators_checked == len(interior) * len(mst.relators())
    assert rep.relator_unresolved == ()


def test_check_gamma_prime_flags_duplicate_d_edge():
    ball, types, gp = _surgery(3)
    gp.graph.add_edge(ball.index[("q0", "p0")], "d", ball.index[("p0",)])
    mst = build_mst(q6_input())
    interior = [ball.index[w] for w in ball.words
                if len(w) <= 1 and ball.index[w] not in gp.incomplete]
    rep = check_gamma_prime(gp, mst, interior)
    assert not rep.passed
    assert rep.bidet_failures


# ---------------------------------------------------------------------------
# lazy navigator and canonical-word arithmetic


def test_navigator_steps():
    nav = Q6Prime(6)
    assert nav.step((), "z") == ("q0", "p0")
    assert nav.step(("q0", "p0"), "z", inv=True) == ()
    assert nav.step(("q0", "p0"), "a") == ("q0", "a^0", "p0")
    assert nav.step(("q0", "a^0", "p0"), "a", inv=True) == ("q0", "p0")
    assert nav.step(("q0", "p0"), "d") == ("q0", "p0")
    assert nav.step(("q0",), "d") is None
    assert nav.walk((), (("z", False), ("z", False))) == ("q0", "p0", "q0",
                                                          "p0")
    assert nav.walk(("q0", "p0"), (("z", True),)) == ()


def test_navigator_respects_its_radius():
    assert Q6Prime(2).step(("q0", "p0"), "z") is None


def test_append_flips_closing_blocks():
    assert _q6_append(("q1",), "p1") == ("q0", "p0")
    assert _q6_append(("q1", "a^1"), "p1") == ("q0", "a^0", "p0")
    assert _q6_append((), "a^0") == ("a^0",)
    assert q6_canonical(("q1", "a^1", "p1", "q1")) == ("q0", "a^0", "p0",
                                                       "q1")


def test_word_type_requires_canonical_input():
    with pytest.raises(ValueError, match="not canonical"):
        _q6_type(("q1", "p1"))


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(Q6_LETTERS), max_size=9))
def test_incremental_append_matches_batch_canonical(raw):
    w = ()
    for c in raw:
        w = _q6_append(w, c)
    assert w == q6_canonical(tuple(raw))


def test_words_up_to_enumerates_canonical_words():
    ws = _q6_words_up_to(1)
    assert sorted(ws) == [(), ("a^0",), ("a^1",), ("p0",), ("p1",), ("q0",),
                          ("q1",)]
    # every enumerated word is its own canonical form, with no duplicates
    ws3 = list(_q6_words_up_to(3))
    assert len(set(ws3)) == len(ws3)
    assert all(q6_canonical(w) == w for w in ws3)


def test_interior_report_small_radius():
    rep = q6_gamma_interior_report(radius=5, margin=4)
    assert rep.passed
    assert rep.relators_checked == 35
    assert rep.relator_unresolved == ()
