"""Bounded balls of the limit graph built from zones over a base monoid,
plus Cayley-ball vertex typing and the edge surgery that rebuilds the
limit ball from the right-unit monoid side.

Everything here works with partial data: balls are cut off at a radius,
so each check distinguishes real violations from effects of the horizon.
"""

from collections import deque
from dataclasses import dataclass

from .constructions import MstInput, build_mst, _mst_names, _q_alphabet
from .graphs import LabeledDigraph
from .presentations import Presentation
from .rc import mr_canonical
from .words import InvolutiveAlphabet, Word


# ---------------------------------------------------------------------------
# base-monoid oracles


class SOracle:
    """Decidable interface to the base monoid S and its submonoid T.

    Supplies identity, right multiplication by generator letters, the
    (unique, by right cancellativity) left quotient under a letter, and
    membership in the submonoid generated by the chosen letters.
    """

    def __init__(self, kind, identity, mul, div, in_t, samples, label):
        self.kind = kind
        self._identity = identity
        self._mul = mul
        self._div = div
        self._in_t = in_t
        self._samples = samples
        self._label = label

    def identity(self):
        return self._identity

    def mul(self, s, name):
        return self._mul(s, name)

    def div(self, s, name):
        """The unique t with t·name = s, or None."""
        return self._div(s, name)

    def in_t(self, s):
        return self._in_t(s)

    def mul_word(self, s, names):
        for x in names:
            s = self._mul(s, x)
        return s

    def sample_elements(self):
        return self._samples()

    def label(self, s):
        return self._label(s)

    @classmethod
    def free_monoid(cls, a_names, b_names):
        a_names = tuple(a_names)
        b_names = tuple(b_names)
        for b in b_names:
            if b not in a_names:
                raise ValueError(f"submonoid letter {b!r} outside alphabet")

        def mul(s, x):
            if x not in a_names:
                raise ValueError(f"unknown letter {x!r}")
            return s + (x,)

        def div(s, x):
            return s[:-1] if s and s[-1] == x else None

        def samples():
            out, frontier = [()], [()]
            for _ in range(3):
                frontier = [s + (x,) for s in frontier for x in a_names]
                out += frontier
            return out

        return cls("free_monoid", (), mul, div,
                   lambda s: all(x in b_names for x in s),
                   samples, lambda s: "".join(s) or "1")

    @classmethod
    def finite_table(cls, table, identity, gens, b_names):
        """Full multiplication table; checked to define a right-cancellative
        monoid, so every generator column is a bijection."""
        n = len(table)
        elems = range(n)
        if any(len(row) != n for row in table):
            raise ValueError("multiplication table must be square")
        if not 0 <= identity < n:
            raise ValueError("identity index out of range")
        for s in elems:
            if table[identity][s] != s or table[s][identity] != s:
                raise ValueError("identity element fails to be neutral")
        for x in elems:
            for y in elems:
                for t in elems:
                    if table[table[x][y]][t] != table[x][table[y][t]]:
                        raise ValueError("multiplication is not associative")
        for y in elems:
            col = {table[x][y] for x in elems}
            if len(col) != n:
                raise ValueError("monoid is not right cancellative")
        gens = dict(gens)
        for name, e in gens.items():
            if not 0 <= e < n:
                raise ValueError(f"generator {name!r} maps outside the table")
        for b in b_names:
            if b not in gens:
                raise ValueError(f"submonoid letter {b!r} has no table entry")
        div_of = {name: {table[x][e]: x for x in elems}
                  for name, e in gens.items()}
        t_set = {identity}
        frontier = [identity]
        while frontier:
            s = frontier.pop()
            for b in b_names:
                t = table[s][gens[b]]
                if t not in t_set:
                    t_set.add(t)
                    frontier.append(t)

        def mul(s, name):
            return table[s][gens[name]]

        return cls("finite_table", identity, mul,
                   lambda s, name: div_of[name].get(s),
                   lambda s: s in t_set,
                   lambda: list(elems), lambda s: f"s{s}")

    @classmethod
    def word_acceptor(cls, identity, mul, div, in_t, samples=None,
                      label=repr):
        samples = samples or (lambda: [identity])
        return cls("word_acceptor", identity, mul, div, in_t, samples, label)


def _check_oracle(inp, oracle):
    rels = [(tuple(x for x, _ in u.letters), tuple(x for x, _ in v.letters))
            for u, v in inp.s_pres.relations]
    for s in oracle.sample_elements():
        for u, v in rels:
            if oracle.mul_word(s, u) != oracle.mul_word(s, v):
                raise ValueError(
                    f"oracle inconsistency: relation {' '.join(u) or '1'} = "
                    f"{' '.join(v) or '1'} fails at {oracle.label(s)}")


# ---------------------------------------------------------------------------
# zone balls


@dataclass(frozen=True)
class ZoneVertex:
    """Placement of a ball vertex: which zone it lies in and where."""

    kind: str           # "root" | "p" | "z" | "inv"
    zone: tuple         # (parent vertex, attachment role); () for the root
    index: int = -1     # zone index for kind "p"
    letter: str = ""    # inverse-zone letter for kind "inv"
    coord: object = ()  # a-word for "p", base element for "z"


class OmegaBall:
    """A radius-bounded piece of the limit graph, grown from its root."""

    def __init__(self, graph, root, radius, info, depth, expanded, inp,
                 oracle):
        self.graph = graph
        self.root = root
        self.radius = radius
        self.info = info          # vertex -> ZoneVertex
        self.depth = depth        # vertex -> undirected distance from root
        self.expanded = expanded  # vertices with a complete edge set
        self.inp = inp
        self.oracle = oracle

    def __repr__(self):
        return (f"OmegaBall(radius={self.radius}, n={self.graph.n}, "
                f"edges={self.graph.edge_count()})")


class _OmegaBuilder:

    def __init__(self, inp, oracle):
        self.inp = inp
        self.oracle = oracle
        self.a_names, self.p_names = _mst_names(inp)
        self.x_letters = ("z",) + self.p_names
        self.rel_sides = [
            (tuple(x for x, _ in u.letters), tuple(x for x, _ in v.letters))
            for u, v in inp.s_pres.relations]
        self.g = LabeledDigraph()
        self.ids = {}
        self.keys = []
        self.info = {}
        self.zones = {}

    def vertex(self, key, kind, zone, **extra):
        vid = self.ids.get(key)
        if vid is None:
            vid = self.g.add_vertex()
            self.ids[key] = vid
            self.keys.append(key)
            self.info[vid] = ZoneVertex(kind, zone, **extra)
        return vid

    def zone_root_key(self, parent_vid, role):
        """Key of the vertex a fresh zone hangs on, creating zone metadata."""
        x = role[1]
        zone = (parent_vid, role)
        if role[0] == "in":
            self.zones[zone] = ("inv", x)
            return ("zone", zone, ())
        if x == "z":
            self.zones[zone] = ("z",)
            return ("zone", zone, self.oracle.identity())
        self.zones[zone] = ("p", self.p_names.index(x))
        return ("zone", zone, ())

    def materialize(self, key):
        if key[0] == "root":
            return self.vertex(key, "root", ())
        _, zone, coord = key
        kind = self.zones[zone]
        if kind[0] == "inv":
            return self.vertex(key, "inv", zone, letter=kind[1])
        if kind[0] == "z":
            return self.vertex(key, "z", zone, coord=coord)
        return self.vertex(key, "p", zone, index=kind[1], coord=coord)

    def incident(self, vid):
        """Every edge at vid as (label, other key, outgoing)."""
        v = self.info[vid]
        out = []
        if v.kind == "root":
            for x in self.x_letters:
                out.append((x, self.zone_root_key(vid, ("out", x)), True))
            return out
        if v.kind == "inv":
            attach_vid = v.zone[0]
            out.append((v.letter, self.keys[attach_vid], True))
            for y in self.x_letters:
                if y != v.letter:
                    out.append((y, self.zone_root_key(vid, ("out", y)), True))
            return out
        for x in self.x_letters:
            out.append((x, self.zone_root_key(vid, ("out", x)), True))
        if v.kind == "p":
            w = v.coord
            p = self.p_names[v.index]
            for a in self.a_names:
                out.append((a, ("zone", v.zone, w + (a,)), True))
            if w:
                out.append((w[-1], ("zone", v.zone, w[:-1]), False))
                out.append((p, self.zone_root_key(vid, ("in", p)), False))
            if v.index == 0:
                out.append(("d", self.keys[vid], True))
            else:
                u_i, v_i = self.rel_sides[v.index - 1]
                if w[len(w) - len(v_i):] == v_i:
                    tgt = w[:len(w) - len(v_i)] + u_i
                    out.append(("d", ("zone", v.zone, tgt), True))
                if w[len(w) - len(u_i):] == u_i:
                    src = w[:len(w) - len(u_i)] + v_i
                    out.append(("d", ("zone", v.zone, src), False))
            return out
        s = v.coord
        for a in self.a_names:
            out.append((a, ("zone", v.zone, self.oracle.mul(s, a)), True))
        for a in self.a_names:
            t = self.oracle.div(s, a)
            if t is not None:
                out.append((a, ("zone", v.zone, t), False))
        for p in self.p_names:
            out.append((p, self.zone_root_key(vid, ("in", p)), False))
        if self.oracle.in_t(s) and s != self.oracle.identity():
            out.append(("z", self.zone_root_key(vid, ("in", "z")), False))
        out.append(("d", self.keys[vid], True))
        return out

    def build(self, radius, max_vertices):
        root = self.materialize(("root",))
        depth = {root: 0}
        queue = deque([root])
        expanded = set()
        while queue:
            vid = queue.popleft()
            horizon = depth[vid] >= radius
            for label, other_key, outgoing in self.incident(vid):
                if horizon:
                    other = self.ids.get(other_key)
                    if other is None:
                        continue
                else:
                    other = self.materialize(other_key)
                    if other not in depth:
                        depth[other] = depth[vid] + 1
                        queue.append(other)
                        if len(depth) > max_vertices:
                            raise ValueError(
                                "ball exceeds the vertex budget; lower the "
                                "radius or raise max_vertices")
                src, dst = (vid, other) if outgoing else (other, vid)
                if not self.g.has_edge(src, label, dst):
                    self.g.add_edge(src, label, dst)
            if not horizon:
                expanded.add(vid)
        self.g.root = root
        return OmegaBall(self.g, root, radius, self.info, depth,
                         frozenset(expanded), self.inp, self.oracle)


def omega_ball(inp, oracle, radius, max_vertices=250000):
    """Grow the limit-graph ball of the given radius around the root.

    Fresh zones are attached wherever the rules call for one, so the
    result is a tree of zones; the oracle is spot-checked against the
    defining relations of S first.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    _check_oracle(inp, oracle)
    return _OmegaBuilder(inp, oracle).build(radius, max_vertices)


# ---------------------------------------------------------------------------
# ball checks


def _bidet_failures(g, exclude=frozenset()):
    seen = {}
    for src, label, dst in g.edges():
        seen.setdefault((src, "out", label), []).append(dst)
        seen.setdefault((dst, "in", label), []).append(src)
    return tuple((v, d, label, tuple(sorted(others)))
                 for (v, d, label), others in sorted(seen.items())
                 if v not in exclude and len(others) > 1)


def _relator_walk(g, v, letters, complete):
    """Replay one relator from v.  Returns "ok", "fail" or "unknown"."""
    cur = v
    for base, inv in letters:
        try:
            nxt = g.step(cur, base, inv)
        except ValueError:
            return "fail"
        if nxt is None:
            return "fail" if complete is None or cur in complete else "unknown"
        cur = nxt
    return "ok" if cur == v else "fail"


def _relator_walk_failures(g, mst, starts, depth, radius, complete):
    failures, unresolved, checked = [], [], 0
    rels = [r.letters for r, _ in mst.relations]
    for v in starts:
        for idx, letters in enumerate(rels):
            if depth is not None and depth[v] + len(letters) > radius:
                continue
            checked += 1
            res = _relator_walk(g, v, letters, complete)
            if res == "fail":
                failures.append((v, idx))
            elif res == "unknown":
                unresolved.append((v, idx))
    return tuple(failures), tuple(unresolved), checked


@dataclass(frozen=True)
class OmegaReport:
    vertices: int
    edges: int
    bidet_failures: tuple = ()
    relator_failures: tuple = ()
    relator_unresolved: tuple = ()
    relators_checked: int = 0
    zone_failures: tuple = ()

    @property
    def passed(self):
        return not (self.bidet_failures or self.relator_failures
                    or self.zone_failures)


def check_omega(ball, checks=("bidet", "relator_loops", "zone_partition")):
    """Structural checks on a zone ball.

    Relator loops are replayed from every vertex far enough from the
    horizon to keep the whole loop inside the ball; a step that dies at
    an unexpanded vertex counts as unresolved, not as a failure.
    """
    g = ball.graph
    bidet = relf = relu = zonef = ()
    checked = 0
    if "bidet" in checks:
        bidet = _bidet_failures(g)
    if "relator_loops" in checks:
        mst = build_mst(ball.inp)
        relf, relu, checked = _relator_walk_failures(
            g, mst, range(g.n), ball.depth, ball.radius, ball.expanded)
    if "zone_partition" in checks:
        failures = []
        p_names = set(_mst_names(ball.inp)[1])
        for v in range(g.n):
            kind = ball.info[v].kind
            if (kind == "root") != (v == ball.root):
                failures.append((v, "root placement"))
            if kind not in ("root", "p", "z", "inv"):
                failures.append((v, f"unknown kind {kind!r}"))
            p_in = {x for x in g.in_labels(v) if x in p_names}
            if len(p_in) > 1 and kind != "z":
                failures.append((v, "multiple p-letters enter a non-z zone"))
        zonef = tuple(failures)
    return OmegaReport(g.n, g.edge_count(), bidet, relf, relu, checked,
                       zonef)


# ---------------------------------------------------------------------------
# Cayley balls of the right-unit monoid


class QBall:
    """Radius ball of the right-unit Cayley graph, vertices as canonical
    words.  The defining relations preserve length, so depth equals word
    length and every in-edge of a ball vertex is present."""

    def __init__(self, graph, words, depth, radius, inp):
        self.graph = graph
        self.words = words
        self.depth = depth
        self.radius = radius
        self.inp = inp
        self.index = {w: i for i, w in enumerate(words)}

    def __repr__(self):
        return (f"QBall(radius={self.radius}, n={self.graph.n}, "
                f"edges={self.graph.edge_count()})")


def build_q_cayley_ball(inp, canon, radius, max_vertices=400000):
    """Breadth-first Cayley ball from the identity, one vertex per
    canonical form produced by `canon` (tuple of letter names in, tuple
    out)."""
    letters = _q_alphabet(inp).base_letters
    g = LabeledDigraph(1, root=0)
    words = [()]
    index = {(): 0}
    depth = [0]
    frontier = deque([0])
    while frontier:
        v = frontier.popleft()
        if depth[v] >= radius:
            continue
        for x in letters:
            t = canon(words[v] + (x,))
            tid = index.get(t)
            if tid is None:
                if len(words) >= max_vertices:
                    raise ValueError("Cayley ball exceeds the vertex budget")
                tid = g.add_vertex()
                index[t] = tid
                words.append(t)
                depth.append(depth[v] + 1)
                frontier.append(tid)
            if not g.has_edge(v, x, tid):
                g.add_edge(v, x, tid)
    return QBall(g, tuple(words), tuple(depth), radius, inp)


_Q6_TO_MR = {"p0": "p0", "p1": "p1", "q0": "q0", "q1": "q1",
             "a^0": "a0", "a^1": "a1"}
_MR_TO_Q6 = {v: k for k, v in _Q6_TO_MR.items()}
_MR_ALPHA = InvolutiveAlphabet(tuple(sorted(_Q6_TO_MR.values())))


def q6_input():
    """The one-letter base monoid with its single trivial relation."""
    alpha = InvolutiveAlphabet(("a",))
    a = Word((("a", False),), alpha)
    return MstInput(Presentation("rc_monoid", alpha, ((a, a),), name="S6"))


def q6_oracle():
    return SOracle.free_monoid(("a",), ())


def z2_input():
    alpha = InvolutiveAlphabet(("a",))
    aa = Word((("a", False), ("a", False)), alpha)
    one = Word((), alpha)
    return MstInput(Presentation("rc_monoid", alpha, ((aa, one),),
                                 name="Z2"), b_subset=("a",))


def z2_oracle():
    return SOracle.finite_table([[0, 1], [1, 0]], 0, {"a": 1}, ("a",))


def q6_canonical(names):
    """Exact canonical form for the two-relation-family instance, via the
    untruncated block-flip normal form."""
    w = Word(tuple((_Q6_TO_MR[x], False) for x in names), _MR_ALPHA)
    return tuple(_MR_TO_Q6[x] for x, _ in mr_canonical(None, w).letters)


def build_q6_ball(radius, max_vertices=400000):
    return build_q_cayley_ball(q6_input(), q6_canonical, radius,
                               max_vertices)


# ---------------------------------------------------------------------------
# vertex types


def _back_chain_type(ball, src, i):
    """Type witnessed by one incoming p_i edge: walk the unique chain of
    incoming indexed-a edges back from src; meeting an incoming q_i
    anywhere certifies the two-sided type, exhausting the chain without
    one certifies the one-sided type."""
    g = ball.graph
    a_names = ball.inp.s_pres.alphabet.base_letters
    a_labels = [f"{a}^{i}" for a in a_names]
    q_label = f"q{i}"
    seen = set()
    cur = src
    while True:
        if cur in seen:
            raise ValueError("cycle in an indexed-letter chain; "
                             "classification is not decidable here")
        seen.add(cur)
        if g.step(cur, q_label, inv=True) is not None:
            return "z"
        prev = None
        for lab in a_labels:
            t = g.step(cur, lab, inv=True)
            if t is not None:
                if prev is not None:
                    raise ValueError("ambiguous indexed-letter chain")
                prev = t
        if prev is None:
            return f"p{i}"
        cur = prev


def classify_types(ball):
    """Assign each ball vertex its type, or None for untyped vertices.

    Both definitions are evaluated: the incoming-letter pattern and the
    witness walk.  Any disagreement, including a vertex typed by two
    different one-sided classes, is a hard error since the limit graph
    admits no such vertex.
    """
    g = ball.graph
    k = ball.inp.k
    p_all = {f"p{i}" for i in range(k + 1)}
    types = {}
    for v in range(g.n):
        p_in = {x for x in g.in_labels(v) if x in p_all}
        if not p_in:
            types[v] = None
            continue
        witnessed = {_back_chain_type(ball, g.step(v, x, inv=True), int(x[1:]))
                     for x in sorted(p_in)}
        if witnessed == {"z"}:
            if p_in != p_all:
                raise ValueError(
                    f"vertex {v} is two-sided but lacks incoming edges "
                    f"for {sorted(p_all - p_in)}")
            types[v] = "z"
        elif len(witnessed) == 1 and len(p_in) == 1:
            types[v] = witnessed.pop()
        else:
            raise ValueError(
                f"ambiguous classification at vertex {v}: {sorted(witnessed)}")
    return types


# ---------------------------------------------------------------------------
# edge surgery


@dataclass(frozen=True)
class GammaPrime:
    graph: LabeledDigraph
    types: dict
    incomplete: frozenset


def gamma_prime(ball, types):
    """Rebuild the limit-ball edge set from a typed Cayley ball.

    Steps, in order: shortcut the index-0 block pairs into z-edges, push
    indexed a-edges (and z-conjugated b-edges) through their companion
    edges, drop the consumed labels, then lay down the d-edges dictated
    by the types.  Vertices whose companions fall outside the ball are
    reported as incomplete rather than guessed at.
    """
    g = ball.graph
    inp = ball.inp
    k = inp.k
    a_names = inp.s_pres.alphabet.base_letters
    a_of = {f"{a}^{i}": (a, i) for a in a_names for i in range(k + 1)}
    b_of = {f"{b}^z": b for b in inp.b_subset}
    out = LabeledDigraph(g.n, root=g.root)
    incomplete = set()

    def put(src, label, dst):
        if not out.has_edge(src, label, dst):
            out.add_edge(src, label, dst)

    z_target = {}
    for u1 in range(g.n):
        u2 = g.step(u1, "q0")
        u3 = g.step(u2, "p0") if u2 is not None else None
        if u3 is None:
            incomplete.add(u1)
        else:
            z_target[u1] = u3
            put(u1, "z", u3)

    for u1, label, u2 in sorted(g.edges()):
        hit = a_of.get(label)
        if hit is None:
            continue
        a, i = hit
        v1 = g.step(u1, f"p{i}")
        v2 = g.step(u2, f"p{i}")
        if v1 is None:
            continue
        if v2 is None:
            incomplete.add(v1)
        else:
            put(v1, a, v2)

    for u1, label, u2 in sorted(g.edges()):
        b = b_of.get(label)
        if b is None:
            continue
        v1 = z_target.get(u1)
        v2 = z_target.get(u2)
        if v1 is None:
            continue
        if v2 is None:
            incomplete.add(v1)
        else:
            put(v1, b, v2)

    for u1, label, u2 in g.edges():
        if label.startswith("p") and label[1:].isdigit():
            put(u1, label, u2)

    for v in range(g.n):
        if types.get(v) in ("z", "p0"):
            put(v, "d", v)
    for i in range(1, k + 1):
        u_i, v_i = inp.s_pres.relations[i - 1]
        u_path = [(x, False) for x, _ in u_i.letters]
        v_path = [(x, False) for x, _ in v_i.letters]
        tname = f"p{i}"
        for w in range(g.n):
            if types.get(w) != tname:
                continue
            tu = out.walk(w, u_path)
            tv = out.walk(w, v_path)
            if tu is None or tv is None:
                incomplete.update(x for x in (w, tu, tv) if x is not None)
                continue
            if types.get(tu) == tname and types.get(tv) == tname:
                put(tv, "d", tu)
    return GammaPrime(out, dict(types), frozenset(incomplete))


@dataclass(frozen=True)
class GammaPrimeReport:
    relator_failures: tuple
    relator_unresolved: tuple
    relators_checked: int
    bidet_failures: tuple
    bidet_checked: int

    @property
    def passed(self):
        return not (self.relator_failures or self.bidet_failures)


def check_gamma_prime(gp, mst, interior, exclude=None):
    """Replay every defining relator from each interior vertex of the
    surgered graph, and verify label-uniqueness everywhere else it can
    be trusted (`exclude` defaults to the incomplete set)."""
    if exclude is None:
        exclude = gp.incomplete
    relf, relu, checked = _relator_walk_failures(
        gp.graph, mst, sorted(interior), None, None, None)
    bidet = _bidet_failures(gp.graph, frozenset(exclude))
    return GammaPrimeReport(relf, relu, checked, bidet,
                            gp.graph.n - len(exclude))


# ---------------------------------------------------------------------------
# the large-radius instance, derived per vertex

_P0, _P1, _Q0, _Q1, _A0, _A1 = "p0", "p1", "q0", "q1", "a^0", "a^1"


def _q6_append(w, c):
    """Append one letter to a canonical word, restoring canonical form.
    Only closing an index-1 block can break it."""
    if c == _P1:
        j = len(w)
        while j and w[j - 1] == _A1:
            j -= 1
        if j and w[j - 1] == _Q1:
            m = len(w) - j
            return w[:j - 1] + (_Q0,) + (_A0,) * m + (_P0,)
    return w + (c,)


def _q6_type(w):
    """Type from the canonical suffix: a completed index-0 block means
    two-sided, a trailing indexed run into p_i means one-sided."""
    if not w or w[-1] not in (_P0, _P1):
        return None
    a = _A0 if w[-1] == _P0 else _A1
    j = len(w) - 1
    while j and w[j - 1] == a:
        j -= 1
    if w[-1] == _P0 and j and w[j - 1] == _Q0:
        return "z"
    if w[-1] == _P1 and j and w[j - 1] == _Q1:
        raise ValueError("word is not canonical")
    return "p0" if w[-1] == _P0 else "p1"


def _q6_p_sources(w, i):
    """All u with u·p_i = w, each as (source word, appended letter)."""
    out = []
    p = (_P0, _P1)[i]
    if w and w[-1] == p:
        out.append(w[:-1])
    if i == 1 and _q6_type(w) == "z":
        j = len(w) - 1
        while w[j - 1] == _A0:
            j -= 1
        m = len(w) - 1 - j
        out.append(w[:j - 1] + (_Q1,) + (_A1,) * m)
    return out


class Q6Prime:
    """Surgered-graph navigator for the large instance: every edge is
    derived from canonical-word arithmetic instead of materialized, so
    radius is limited by word length only."""

    def __init__(self, radius):
        self.radius = radius
        self.inp = q6_input()

    def _a_targets(self, w):
        tgts = set()
        for i in (0, 1):
            for u in _q6_p_sources(w, i):
                a = (_A0, _A1)[i]
                p = (_P0, _P1)[i]
                tgts.add(_q6_append(_q6_append(u, a), p))
        return tgts

    def _a_sources(self, w):
        srcs = set()
        for i in (0, 1):
            a = (_A0, _A1)[i]
            p = (_P0, _P1)[i]
            for u2 in _q6_p_sources(w, i):
                if u2 and u2[-1] == a:
                    srcs.add(_q6_append(u2[:-1], p))
        return srcs

    def _d_loop(self, w):
        t = _q6_type(w)
        if t in ("z", "p0"):
            return True
        if t == "p1":
            src = self._a_sources(w)
            return any(_q6_type(s) == "p1" for s in src)
        return False

    def out_edges(self, w):
        """Label -> set of targets (a singleton everywhere the theory
        holds; kept as a set so uniqueness stays checkable)."""
        edges = {
            _P0: {_q6_append(w, _P0)},
            _P1: {_q6_append(w, _P1)},
            "z": {w + (_Q0, _P0)},
        }
        a_t = self._a_targets(w)
        if a_t:
            edges["a"] = a_t
        if self._d_loop(w):
            edges["d"] = {w}
        return edges

    def in_edges(self, w):
        edges = {}
        for i in (0, 1):
            src = _q6_p_sources(w, i)
            if src:
                edges[(_P0, _P1)[i]] = set(src)
        if len(w) >= 2 and w[-2:] == (_Q0, _P0):
            edges["z"] = {w[:-2]}
        a_s = self._a_sources(w)
        if a_s:
            edges["a"] = a_s
        if self._d_loop(w):
            edges["d"] = {w}
        return edges

    def step(self, w, base, inv=False):
        table = self.in_edges(w) if inv else self.out_edges(w)
        cands = table.get(base, ())
        if len(cands) != 1:
            return None
        (t,) = cands
        return t if len(t) <= self.radius else None

    def walk(self, w, letters):
        for base, inv in letters:
            w = self.step(w, base, inv)
            if w is None:
                return None
        return w


def _q6_words_up_to(length):
    words = [()]
    frontier = [()]
    letters = (_P0, _P1, _Q0, _Q1, _A0, _A1)
    for _ in range(length):
        nxt = []
        for w in frontier:
            for c in letters:
                t = w + (c,)
                if _q6_append(w, c) == t:
                    nxt.append(t)
        words += nxt
        frontier = nxt
    return words


def q6_gamma_interior_report(radius=8, margin=6):
    """Run both surgered-graph checks on the interior of the given ball
    of the large instance."""
    nav = Q6Prime(radius)
    mst = build_mst(nav.inp)
    interior = _q6_words_up_to(radius - margin)
    rel_failures = []
    checked = 0
    for w in interior:
        for idx, (r, _) in enumerate(mst.relations):
            checked += 1
            if nav.walk(w, r.letters) != w:
                rel_failures.append((" ".join(w) or "1", idx))
    bidet_failures = []
    for w in interior:
        for direction, table in (("out", nav.out_edges(w)),
                                 ("in", nav.in_edges(w))):
            for label, targets in sorted(table.items()):
                if len(targets) > 1:
                    bidet_failures.append((" ".join(w) or "1", direction,
                                           label))
    return GammaPrimeReport(tuple(rel_failures), (), checked,
                            tuple(bidet_failures), len(interior))
