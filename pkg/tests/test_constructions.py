import pytest

from invmon import rc, stephen
from invmon.constructions import (MstInput, QTruncation, build_mqw, build_mst,
                                  build_q, build_rqw, decode_cert,
                                  mst_provenance, psi_substitute,
                                  ru_generators, tietze_check_rqw)
from invmon.presentations import Presentation, parse_presentation
from invmon.words import (InvolutiveAlphabet, Word, word_from_text,
                          word_to_text)
from invmon.zone_graphs import q6_input


def free_a_input(b=()):
    alpha = InvolutiveAlphabet(("a",))
    a = Word((("a", False),), alpha)
    return MstInput(Presentation("rc_monoid", alpha, ((a, a),)), b_subset=b)


def rel_texts(p):
    return [(word_to_text(l), word_to_text(r)) for l, r in p.relations]


def test_mst_input_validation():
    with pytest.raises(ValueError):
        free_a_input(b=("c",))
    alpha = InvolutiveAlphabet(("a",))
    with pytest.raises(ValueError):
        MstInput(Presentation("rc_monoid", alpha, ()))
    with pytest.raises(ValueError):
        MstInput(parse_presentation("@kind monoid\n@gens a\n@rel a a = a\n"))


def test_mst_input_new_t_generators():
    alpha = InvolutiveAlphabet(("x", "y"))
    s = Presentation("rc_monoid", alpha, ((word_from_text("x y", alpha),
                                           word_from_text("y x", alpha)),))
    inp = MstInput.with_new_t_generators(s, [("b", word_from_text("x y",
                                                                  alpha))])
    assert inp.b_subset == ("b",)
    assert inp.s_pres.alphabet.base_letters == ("x", "y", "b")
    assert rel_texts(inp.s_pres)[-1] == ("b", "x y")
    with pytest.raises(ValueError):
        MstInput.with_new_t_generators(s, [("x", word_from_text("y", alpha))])


def test_build_mst_generators_and_relators():
    mst = build_mst(free_a_input())
    assert mst.kind == "special_inverse"
    assert mst.alphabet.base_letters == ("a", "p0", "p1", "z", "d")
    assert [l for l, _ in rel_texts(mst)] == [
        "p0 a p0' p0 a' p0'",
        "p1 a p1' p1 a' p1'",
        "p1 a d' a' p1'",
        "p0 d p0'",
        "z p0' p0 p1' p1 z'",
    ]


def test_build_mst_b_subset_relator():
    mst = build_mst(free_a_input(b=("a",)))
    assert "z a z' z a' z'" in [l for l, _ in rel_texts(mst)]
    assert mst_provenance(mst) == (("a",), ("a",), 1)


def test_build_mst_letter_collision():
    alpha = InvolutiveAlphabet(("z",))
    z = Word((("z", False),), alpha)
    with pytest.raises(ValueError):
        build_mst(MstInput(Presentation("rc_monoid", alpha, ((z, z),))))


def test_build_q_l0():
    q = build_q(free_a_input(), QTruncation(0))
    assert q.kind == "rc_monoid"
    assert rel_texts(q) == [("q1 p1", "q0 p0")]


def test_build_q_l2():
    q = build_q(free_a_input(), QTruncation(2))
    assert rel_texts(q) == [
        ("q1 p1", "q0 p0"),
        ("q1 a^1 p1", "q0 a^0 p0"),
        ("q1 a^1 a^1 p1", "q0 a^0 a^0 p0"),
    ]


def test_build_q_b_shift_family():
    q = build_q(free_a_input(b=("a",)), QTruncation(0))
    texts = rel_texts(q)
    assert ("q0 a^0", "a^z q0") in texts
    assert ("q1 a^1", "a^z q1") in texts


def test_build_q_certified_s_equalities():
    # S = <a | aa = 1> makes the empty word equal to aa, nothing else short
    alpha = InvolutiveAlphabet(("a",))
    aa = word_from_text("a a", alpha)
    one = word_from_text("1", alpha)
    inp = MstInput(Presentation("rc_monoid", alpha, ((aa, one),)))
    q = build_q(inp, QTruncation(2))
    texts = rel_texts(q)
    assert ("q0", "q0 a^0 a^0") in texts
    assert ("q1", "q1 a^1 a^1") in texts
    # each certified relation stores a replayable chain certificate
    certs = [v for k, v in q.trunc.items() if k.startswith("cert")]
    assert certs and all(decode_cert(c) for c in certs)


def test_build_q_monotone_in_bound():
    inp = free_a_input()
    rels = [build_q(inp, QTruncation(L)).relations for L in (0, 1, 2)]
    for small, large in zip(rels, rels[1:]):
        assert large[:len(small)] == small


def test_ru_generators():
    mst = build_mst(free_a_input())
    texts = [word_to_text(w) for w in ru_generators(mst)]
    assert texts == ["p0", "p1", "z p0'", "z p1'", "p0 a p0'", "p1 a p1'"]

    with_b = build_mst(free_a_input(b=("a",)))
    texts_b = [word_to_text(w) for w in ru_generators(with_b)]
    assert texts_b == texts + ["z a z'"]
    assert len(texts_b) == 2 + 2 + 2 * 1 + 1


def test_ru_generators_needs_provenance():
    with pytest.raises(ValueError):
        ru_generators(parse_presentation(
            "@kind special_inverse\n@gens a\n@rel a a = 1\n"))


def test_psi_substitute():
    mst = build_mst(free_a_input(b=("a",)))
    q = build_q(free_a_input(b=("a",)), QTruncation(1))

    def psi(text):
        return word_to_text(psi_substitute(word_from_text(text, q.alphabet),
                                           mst))

    assert psi("q0") == "z p0'"
    assert psi("a^1") == "p1 a p1'"
    assert psi("1") == "1"
    assert psi("p1") == "p1"
    assert psi("a^z") == "z a z'"
    assert psi("q0'") == "p0 z'"
    with pytest.raises(ValueError):
        psi_substitute(word_from_text("z", mst.alphabet), mst)


def test_psi_on_longer_words_lands_in_same_class():
    # letterwise substitution duplicates the p-frame; the result is a
    # different word that still represents p1 a a p1'
    mst = build_mst(free_a_input())
    q = build_q(free_a_input(), QTruncation(2))
    image = psi_substitute(word_from_text("a^1 a^1", q.alphabet), mst)
    assert word_to_text(image) == "p1 a p1' p1 a p1'"
    framed = word_from_text("p1 a a p1'", mst.alphabet)
    assert stephen.equal_right_units(mst, image, framed, rounds=3,
                                     vertex_cap=50000)


def test_psi_sends_q_relations_to_equalities():
    inp = q6_input()
    mst = build_mst(inp)
    q = build_q(inp, QTruncation(1))
    for lhs, rhs in q.relations:
        d = stephen.equal_right_units(mst, psi_substitute(lhs, mst),
                                      psi_substitute(rhs, mst),
                                      rounds=3, vertex_cap=60000)
        assert d.verdict == "yes"


def test_conjugation_separates_t_elements():
    # with B = {a} the z-conjugates of distinct powers of a stay distinct
    mst = build_mst(free_a_input(b=("a",)))
    for un in range(3):
        for vn in range(3):
            u = word_from_text("z " + "a " * un + "z'", mst.alphabet)
            v = word_from_text("z " + "a " * vn + "z'", mst.alphabet)
            d = stephen.equal_right_units(mst, u, v, rounds=2,
                                          vertex_cap=100000)
            assert (d.verdict == "yes") == (un == vn)


def test_generators_are_not_units():
    mst = build_mst(free_a_input())
    for text in ("p0", "p1", "z", "p0 a p0'", "p1 a p1'"):
        w = word_from_text(text, mst.alphabet)
        assert stephen.is_unit(mst, w, rounds=3,
                               vertex_cap=50000).verdict == "unknown"


Z2_GROUP = parse_presentation("@kind group\n@gens a\n@rel a a = 1\n")


def a_word(text):
    return word_from_text(text, Z2_GROUP.alphabet)


def test_build_mqw():
    primary, alternate = build_mqw(Z2_GROUP, [a_word("a")])
    assert primary.alphabet.base_letters == ("a", "t")
    assert len(primary.relations) == 1
    assert word_to_text(primary.relators()[0]) == \
        "a a' t a t' t a' t' a' a a a"
    alt = [word_to_text(r) for r in alternate.relators()]
    assert alt == ["a a", "a a'", "a' a", "t a t' t a' t'"]


def test_build_mqw_multiple_relators():
    group = parse_presentation(
        "@kind group\n@gens a b\n@rel a a = 1\n@rel b b b = 1\n")
    primary, _ = build_mqw(group, [])
    assert len(primary.relations) == 2
    assert word_to_text(primary.relators()[1]) == "b b b"


def test_build_mqw_errors():
    with pytest.raises(ValueError):
        build_mqw(parse_presentation("@kind group\n@gens a\n"), [])
    with pytest.raises(ValueError):
        build_mqw(parse_presentation(
            "@kind special_inverse\n@gens a\n@rel a a = 1\n"), [])
    with pytest.raises(ValueError):
        build_mqw(parse_presentation(
            "@kind group\n@gens t\n@rel t t = 1\n"), [])


def test_build_rqw():
    p = build_rqw(Z2_GROUP, [a_word("a")])
    assert p.alphabet.base_letters == ("a", "a^I", "b1", "t")
    assert rel_texts(p) == [
        ("a a^I", "1"),
        ("a^I a", "1"),
        ("a a", "1"),
        ("t a", "b1 t"),
    ]


def test_build_rqw_inverse_letters_positivized():
    group = parse_presentation("@kind group\n@gens a\n@rel a a = 1\n")
    p = build_rqw(group, [word_from_text("a'", group.alphabet)])
    assert rel_texts(p)[-1] == ("t a^I", "b1 t")


def test_build_rqw_name_clash():
    group = parse_presentation("@kind group\n@gens b1\n@rel b1 b1 = 1\n")
    with pytest.raises(ValueError):
        build_rqw(group, [word_from_text("b1", group.alphabet)])


def test_tietze_check():
    p = build_rqw(Z2_GROUP, [a_word("a")])
    assert tietze_check_rqw(p)

    corrupted = Presentation(
        p.kind, p.alphabet,
        p.relations[:-1] + ((p.relations[-1][0],
                             p.relations[-1][1][:1]),),
        name=p.name, trunc=dict(p.trunc))
    assert not tietze_check_rqw(corrupted)


def test_tietze_check_needs_provenance():
    with pytest.raises(ValueError):
        tietze_check_rqw(parse_presentation(
            "@kind rc_monoid\n@gens a\n@rel a a = a\n"))
