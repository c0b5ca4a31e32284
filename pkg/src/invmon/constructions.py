"""Builders for the encoding presentations.

From an RC-presented monoid S = Mon_RC⟨A | u_i = v_i⟩ and a submonoid T
generated by B ⊆ A, build_mst produces a special inverse monoid over
A ∪ {p_0..p_k, z, d} whose right units are presented (as a right
cancellative monoid, truncated here) by build_q over the symbols
p_i, q_i, a^(i), b^(z).  psi_substitute maps the latter back onto words
over the former.  build_mqw / build_rqw realize the companion
construction that starts from a group presentation and a finite word set,
and tietze_check_rqw confirms its group image splits off a free factor.
"""

from dataclasses import dataclass

from .presentations import Presentation
from .rc import Step, search_chain
from .words import InvolutiveAlphabet, Word, free_reduce, invert_word


def _w(names_and_signs, alphabet):
    return Word(tuple(names_and_signs), alphabet)


def _pos(names, alphabet):
    return Word(tuple((n, False) for n in names), alphabet)


@dataclass(frozen=True)
class MstInput:
    """An RC-presented monoid S with a chosen letter subset B generating T."""

    s_pres: Presentation
    b_subset: tuple = ()

    def __post_init__(self):
        if self.s_pres.kind != "rc_monoid":
            raise ValueError("S must be RC-presented")
        if len(self.s_pres.relations) < 1:
            raise ValueError("need at least one defining relation for S")
        for b in self.b_subset:
            if b not in self.s_pres.alphabet:
                raise ValueError(f"submonoid generator {b!r} not a letter of A")

    @property
    def k(self):
        return len(self.s_pres.relations)

    @classmethod
    def with_new_t_generators(cls, s_pres, named_words):
        """Adjoin fresh letters b with relations b = w_b, then set B.

        Use when T's generators are words rather than letters; the added
        relations keep S unchanged while making B a subset of the alphabet.
        """
        names = [n for n, _ in named_words]
        for n in names:
            if n in s_pres.alphabet:
                raise ValueError(f"letter {n!r} already present")
        alpha = InvolutiveAlphabet(s_pres.alphabet.base_letters + tuple(names))
        lift = lambda w: _pos([b for b, _ in w.letters], alpha)
        relations = [(lift(l), lift(r)) for l, r in s_pres.relations]
        for n, w in named_words:
            if not w.is_positive():
                raise ValueError("defining word w_b must be positive")
            relations.append((_pos([n], alpha), lift(w)))
        new_pres = Presentation("rc_monoid", alpha, tuple(relations),
                                name=s_pres.name, trunc=dict(s_pres.trunc))
        return cls(new_pres, tuple(names))


def _mst_names(inp):
    a_names = inp.s_pres.alphabet.base_letters
    k = inp.k
    p_names = tuple(f"p{i}" for i in range(k + 1))
    for special in p_names + ("z", "d"):
        if special in a_names:
            raise ValueError(f"letter {special!r} collides with A")
    return a_names, p_names


def build_mst(inp):
    """The special inverse monoid over A ∪ {p_0..p_k, z, d}.

    Five relator families, in definition order: commuting conjugates
    p_i a p_i' p_i a' p_i', the S-relations p_i u_i d' v_i' p_i', the
    d-collapse p_0 d p_0', the z-conjugates z b z' z b' z' for b in B,
    and the closing relator z (p_0'p_0 ... p_k'p_k) z'.
    """
    a_names, p_names = _mst_names(inp)
    k = inp.k
    alpha = InvolutiveAlphabet(a_names + p_names + ("z", "d"))
    rels = []
    empty = Word((), alpha)
    for i in range(k + 1):
        p = p_names[i]
        for a in a_names:
            rels.append(_w([(p, False), (a, False), (p, True),
                            (p, False), (a, True), (p, True)], alpha))
    for i in range(1, k + 1):
        u, v = inp.s_pres.relations[i - 1]
        p = p_names[i]
        letters = [(p, False)]
        letters += [(x, False) for x, _ in u.letters]
        letters.append(("d", True))
        letters += [(x, True) for x, _ in reversed(v.letters)]
        letters.append((p, True))
        rels.append(_w(letters, alpha))
    rels.append(_w([(p_names[0], False), ("d", False), (p_names[0], True)],
                   alpha))
    for b in inp.b_subset:
        rels.append(_w([("z", False), (b, False), ("z", True),
                        ("z", False), (b, True), ("z", True)], alpha))
    closing = [("z", False)]
    for i in range(k + 1):
        closing += [(p_names[i], True), (p_names[i], False)]
    closing.append(("z", True))
    rels.append(_w(closing, alpha))
    trunc = {
        "mst_A": ",".join(a_names),
        "mst_B": ",".join(inp.b_subset),
        "mst_k": str(k),
    }
    return Presentation("special_inverse", alpha,
                        tuple((r, empty) for r in rels),
                        name="MST", trunc=trunc)


def mst_provenance(p):
    """Recover (A, B, k) recorded by build_mst."""
    try:
        a_names = tuple(x for x in p.trunc["mst_A"].split(",") if x)
        b_names = tuple(x for x in p.trunc["mst_B"].split(",") if x)
        k = int(p.trunc["mst_k"])
    except (KeyError, ValueError):
        raise ValueError("presentation was not produced by build_mst")
    return a_names, b_names, k


def ru_generators(p):
    """Words generating the right units: p_i, z p_i', p_i a p_i', z b z'."""
    a_names, b_names, k = mst_provenance(p)
    alpha = p.alphabet
    out = []
    for i in range(k + 1):
        out.append(_w([(f"p{i}", False)], alpha))
    for i in range(k + 1):
        out.append(_w([("z", False), (f"p{i}", True)], alpha))
    for i in range(k + 1):
        for a in a_names:
            out.append(_w([(f"p{i}", False), (a, False), (f"p{i}", True)],
                          alpha))
    for b in b_names:
        out.append(_w([("z", False), (b, False), ("z", True)], alpha))
    return out


@dataclass(frozen=True)
class QTruncation:
    """Bounds for the infinite relation families of the right-unit monoid."""

    L: int
    s_max_len: int = 12
    s_max_steps: int = 20000

    def __post_init__(self):
        if self.L < 0:
            raise ValueError("word length bound must be nonnegative")


def _q_alphabet(inp):
    a_names, _ = _mst_names(inp)
    k = inp.k
    names = [f"p{i}" for i in range(k + 1)]
    names += [f"q{i}" for i in range(k + 1)]
    names += [f"{a}^{i}" for a in a_names for i in range(k + 1)]
    names += [f"{b}^z" for b in inp.b_subset]
    return InvolutiveAlphabet(names)


def _a_words_of_length(a_names, length):
    words = [()]
    for _ in range(length):
        words = [w + (a,) for w in words for a in a_names]
    return words


def _encode_cert(chain):
    parts = []
    for s in chain.steps:
        if s.kind == "r_step":
            parts.append(f"r,{s.pos},{s.rel},{'+' if s.forward else '-'}")
        else:
            parts.append(f"{s.kind[0]},{s.pos},{s.letter}")
    return ";".join(parts) if parts else "id"


def decode_cert(text):
    steps = []
    if text == "id":
        return tuple(steps)
    for part in text.split(";"):
        bits = part.split(",")
        if bits[0] == "r":
            steps.append(Step("r_step", int(bits[1]), rel=int(bits[2]),
                              forward=bits[3] == "+"))
        elif bits[0] == "i":
            steps.append(Step("insertion", int(bits[1]), letter=bits[2]))
        elif bits[0] == "d":
            steps.append(Step("deletion", int(bits[1]), letter=bits[2]))
        else:
            raise ValueError(f"bad certificate item {part!r}")
    return tuple(steps)


def build_q(inp, trunc):
    """Truncated presentation of the right units over p_i, q_i, a^(i), b^(z).

    Relations, in emission order: the B-shift family q_i b^(i) = b^(z) q_i,
    then per word length 0..L the family q_i w^(i) p_i = q_0 w^(0) p_0
    followed by certified S-equalities q_i u^(i) = q_i v^(i).  Extending L
    only appends relations.  Certified pairs carry their chain certificate
    in the metadata; unconfirmed pairs are omitted.
    """
    a_names, _ = _mst_names(inp)
    k = inp.k
    alpha = _q_alphabet(inp)
    meta = {"L": str(trunc.L), "s_max_len": str(trunc.s_max_len),
            "s_max_steps": str(trunc.s_max_steps)}
    rels = []

    def dec(names, i):
        return [(f"{x}^{i}", False) for x in names]

    for b in inp.b_subset:
        for i in range(k + 1):
            lhs = _w([(f"q{i}", False)] + dec([b], i), alpha)
            rhs = _w([(f"{b}^z", False), (f"q{i}", False)], alpha)
            rels.append((lhs, rhs))

    s_alpha = inp.s_pres.alphabet
    shorter = []
    for length in range(trunc.L + 1):
        block = _a_words_of_length(a_names, length)
        for w in block:
            for i in range(1, k + 1):
                lhs = _w([(f"q{i}", False)] + dec(w, i) + [(f"p{i}", False)],
                         alpha)
                rhs = _w([("q0", False)] + dec(w, 0) + [("p0", False)], alpha)
                rels.append((lhs, rhs))
        for v in block:
            v_word = _pos(v, s_alpha)
            for u in shorter + [x for x in block if x < v]:
                chain = search_chain(inp.s_pres, _pos(u, s_alpha), v_word,
                                     trunc.s_max_len, trunc.s_max_steps)
                if not chain:
                    continue
                cert = _encode_cert(chain)
                for i in range(k + 1):
                    lhs = _w([(f"q{i}", False)] + dec(u, i), alpha)
                    rhs = _w([(f"q{i}", False)] + dec(v, i), alpha)
                    meta[f"cert{len(rels)}"] = cert
                    rels.append((lhs, rhs))
        shorter.extend(block)

    meta.update({"mst_A": ",".join(a_names),
                 "mst_B": ",".join(inp.b_subset), "mst_k": str(k)})
    return Presentation("rc_monoid", alpha, tuple(rels), name="Q", trunc=meta)


def psi_substitute(w, mst):
    """Letterwise image of a right-unit word inside the big monoid."""
    a_names, b_names, k = mst_provenance(mst)
    table = {}
    for i in range(k + 1):
        table[f"p{i}"] = [(f"p{i}", False)]
        table[f"q{i}"] = [("z", False), (f"p{i}", True)]
        for a in a_names:
            table[f"{a}^{i}"] = [(f"p{i}", False), (a, False), (f"p{i}", True)]
    for b in b_names:
        table[f"{b}^z"] = [("z", False), (b, False), ("z", True)]
    out = []
    for base, inv in w.letters:
        if base not in table:
            raise ValueError(f"letter {base!r} is not a right-unit symbol")
        image = table[base]
        if inv:
            out += [(x, not s) for x, s in reversed(image)]
        else:
            out += image
    return _w(out, mst.alphabet)


def _group_relators(group):
    if group.kind != "group":
        raise ValueError(f"need a group presentation, got {group.kind}")
    if not group.relations:
        raise ValueError("empty relator set")
    return group.relators()


def build_mqw(group, wlist):
    """The one-extra-generator special inverse monoid over A ∪ {t}.

    Primary form: f r_1 = 1 and r_i = 1 (i ≥ 2), where f strings together
    u u' for u running over the letters, the conjugates t w_j t', and the
    inverted letters.  The alternate form lists r_i = 1, the letter
    invertibility relators, and t w_j t' t w_j' t' = 1.
    """
    relators = _group_relators(group)
    a_names = group.alphabet.base_letters
    if "t" in group.alphabet:
        raise ValueError("the stable letter t collides with a group letter")
    alpha = InvolutiveAlphabet(a_names + ("t",))
    lift = lambda u: _w(list(u.letters), alpha)
    empty = Word((), alpha)

    args = [_w([(a, False)], alpha) for a in a_names]
    args += [_w([("t", False)], alpha) * lift(w) * _w([("t", True)], alpha)
             for w in wlist]
    args += [_w([(a, True)], alpha) for a in a_names]
    f = Word((), alpha)
    for u in args:
        f = f * u * invert_word(u)

    primary_rels = [(f * lift(relators[0]), empty)]
    primary_rels += [(lift(r), empty) for r in relators[1:]]
    primary = Presentation("special_inverse", alpha, tuple(primary_rels),
                           name="MQW")

    alt_rels = [(lift(r), empty) for r in relators]
    for a in a_names:
        alt_rels.append((_w([(a, False), (a, True)], alpha), empty))
        alt_rels.append((_w([(a, True), (a, False)], alpha), empty))
    for w in wlist:
        tw = _w([("t", False)], alpha) * lift(w) * _w([("t", True)], alpha)
        twi = (_w([("t", False)], alpha) * invert_word(lift(w))
               * _w([("t", True)], alpha))
        alt_rels.append((tw * twi, empty))
    alternate = Presentation("special_inverse", alpha, tuple(alt_rels),
                             name="MQW-alt")
    return primary, alternate


INV_SUFFIX = "^I"


def _positivize(u, alpha):
    """Rewrite a doubled-alphabet word over split letters a / a^I."""
    return _pos([base + (INV_SUFFIX if inv else "") for base, inv in u.letters],
                alpha)


def build_rqw(group, wlist):
    """The RC presentation over split letters, fresh b_j, and t.

    Relations: a a^I = a^I a = 1 per letter, the group relators, and the
    shifts t w_j = b_j t.
    """
    relators = _group_relators(group)
    a_names = group.alphabet.base_letters
    b_names = tuple(f"b{j}" for j in range(1, len(wlist) + 1))
    taken = set(a_names) | {a + INV_SUFFIX for a in a_names} | {"t"}
    for b in b_names:
        if b in taken:
            raise ValueError(f"fresh letter {b!r} collides with a generator")
    if "t" in group.alphabet:
        raise ValueError("the stable letter t collides with a group letter")
    names = a_names + tuple(a + INV_SUFFIX for a in a_names) + b_names + ("t",)
    alpha = InvolutiveAlphabet(names)
    empty = Word((), alpha)
    rels = []
    for a in a_names:
        rels.append((_pos([a, a + INV_SUFFIX], alpha), empty))
        rels.append((_pos([a + INV_SUFFIX, a], alpha), empty))
    for r in relators:
        rels.append((_positivize(r, alpha), empty))
    for j, w in enumerate(wlist):
        lhs = _pos(["t"], alpha) * _positivize(w, alpha)
        rhs = _pos([b_names[j], "t"], alpha)
        rels.append((lhs, rhs))
    meta = {"rqw_A": ",".join(a_names), "rqw_B": ",".join(b_names)}
    return Presentation("rc_monoid", alpha, tuple(rels), name="RQW",
                        trunc=meta)


def tietze_check_rqw(p):
    """Eliminate every b_j and confirm only group relators remain.

    Each b_j is replaced by t w_j t' read off its own shift relation; a
    relation passes when invert(lhs)·rhs freely reduces to the empty word
    or to a word over the group letters alone (no t, no b).  The latter
    residue is exactly a defining relator of the group factor, so passing
    confirms the group image splits as that group times a free letter.
    """
    try:
        a_names = tuple(x for x in p.trunc["rqw_A"].split(",") if x)
        b_names = set(x for x in p.trunc["rqw_B"].split(",") if x)
    except KeyError:
        raise ValueError("presentation was not produced by build_rqw")
    group_alpha = InvolutiveAlphabet(a_names + ("t",))

    def to_involutive(word):
        letters = []
        for base, inv in word.letters:
            if base.endswith(INV_SUFFIX):
                letters.append((base[:-len(INV_SUFFIX)], not inv))
            else:
                letters.append((base, inv))
        return letters

    substitution = {}
    for lhs, rhs in p.relations:
        if (len(rhs.letters) == 2 and rhs.letters[0][0] in b_names
                and rhs.letters[1][0] == "t" and len(lhs) >= 1
                and lhs.letters[0][0] == "t"):
            b = rhs.letters[0][0]
            w = to_involutive(lhs[1:])
            substitution[b] = ([("t", False)] + w + [("t", True)])

    def substitute(word):
        out = []
        for base, inv in to_involutive(word):
            if base in b_names:
                image = substitution.get(base)
                if image is None:
                    return None
                out += ([(x, not s) for x, s in reversed(image)] if inv
                        else list(image))
            else:
                out.append((base, inv))
        return Word(tuple(out), group_alpha)

    for lhs, rhs in p.relations:
        left = substitute(lhs)
        right = substitute(rhs)
        if left is None or right is None:
            return False
        residue = free_reduce(invert_word(left) * right)
        if any(base == "t" for base, _ in residue.letters):
            return False
    return True
