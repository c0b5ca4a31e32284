"""Coset machinery over a finite component model.

Builds coset representatives, the shared boundary-word table, the finite
generating alphabet for the designated subgroup, and the rewriting map
into it, then checks the defining identities by replaying paths on the
model.  Everything is deterministic given the model and the seed.
"""

import random
from collections import deque
from dataclasses import dataclass, replace

from .boundary import H_PART, boundary_width, parse_model_file, \
    write_model_file
from .graphs import is_connected
from .words import InvolutiveAlphabet, Word, invert_word


def _letter_text(letter):
    base, inv = letter
    return base + "'" if inv else base


def _graph_alphabet(g):
    labels = sorted({label for _, label, _ in g.edges()})
    if not labels:
        raise ValueError("model graph has no edges")
    return InvolutiveAlphabet(tuple(labels))


def _edge_letter(g, u, v):
    """Deterministic signed label of one edge between adjacent vertices."""
    cands = []
    for label in sorted(g.out_labels(u)):
        if g.has_edge(u, label, v):
            cands.append((label, False))
    for label in sorted(g.out_labels(v)):
        if g.has_edge(v, label, u):
            cands.append((label, True))
    if not cands:
        raise ValueError(f"vertices {u},{v} are not adjacent")
    return min(cands)


def _path_word(g, path, alpha):
    letters = tuple(_edge_letter(g, path[i], path[i + 1])
                    for i in range(len(path) - 1))
    return Word(letters, alpha)


def _bfs_tree(g, root):
    """Deterministic BFS giving discovery order and access letters."""
    parent = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for other, base, inv in sorted(g.undirected_neighbors(v)):
            if other not in parent:
                parent[other] = (v, (base, inv))
                order.append(other)
                queue.append(other)
    return order, parent


def _tree_word(parent, v, alpha):
    letters = []
    while parent[v] is not None:
        u, letter = parent[v]
        letters.append(letter)
        v = u
    return Word(tuple(reversed(letters)), alpha)


def _shortest_word(g, src, dst, alpha):
    if src == dst:
        return Word((), alpha)
    parent = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for other, base, inv in sorted(g.undirected_neighbors(v)):
            if other not in parent:
                parent[other] = (v, (base, inv))
                if other == dst:
                    return _tree_word(parent, dst, alpha)
                queue.append(other)
    raise ValueError(f"no path from {src} to {dst} in the model")


@dataclass(frozen=True, eq=False)
class CosetSystem:
    """Representatives, boundary words and orders for a chosen cover.

    ``anchors[j]`` is the vertex reached from the idempotent by the
    representative word ``representatives[j]``; ``boundary`` maps every
    ordered boundary pair of the cover to its word, sharing one word per
    (source coset, translated target) class; ``groups`` records those
    classes for replay.  ``e_word`` stands in for the subgroup identity
    and acts trivially at every point it is read from, so the empty
    default is exact for path replay.
    """

    model: object
    j_set: tuple
    alphabet: InvolutiveAlphabet
    anchors: dict
    representatives: dict
    order_pos: dict
    boundary: dict
    beta: dict
    groups: dict
    width: int
    e_word: Word

    @property
    def cover(self):
        return frozenset(v for v in range(self.model.graph.n)
                         if self.model.cosets[v] in self.j_set)

    def boundary_word(self, x, y):
        w = self.boundary.get((x, y))
        if w is None:
            raise ValueError(f"({x},{y}) is not a stored boundary pair")
        return w

    def act_word(self, j, word):
        """Coset index after the word, tracked letter by letter.

        Raises on an unknown action entry; returns 0 once the action
        leaves the component (and 0 is absorbing).
        """
        cur = j
        for letter in word.letters:
            if cur == 0:
                return 0
            nxt = self.model.act(cur, _letter_text(letter))
            if nxt is None:
                raise ValueError(
                    f"action of {_letter_text(letter)!r} at coset {cur} "
                    "is outside the model's table")
            cur = nxt
        return cur

    def with_boundary_word(self, x, y, word):
        """Copy with one table entry replaced (for fault injection)."""
        table = dict(self.boundary)
        if (x, y) not in table:
            raise ValueError(f"({x},{y}) is not a stored boundary pair")
        table[(x, y)] = word
        return replace(self, boundary=table)


def build_coset_system(m, j_set=None, e_word=None):
    """Choose representatives and boundary words for the cover.

    Representatives come from a breadth-first tree at the idempotent.
    For x below y in the cover's linear order the pair (x, y) takes the
    stored shortest word from anchor(coset x) to the translated target,
    so equal translation classes share one word by construction; the
    reverse pair takes the inverse.  Both the definitional replay (the
    word really runs x to y) and the shared-class replay are performed
    here, and any violation raises.
    """
    if m.action is None:
        raise ValueError("the model needs an action table")
    indices = m.indices()
    j_set = tuple(sorted(indices if j_set is None else j_set))
    if H_PART not in j_set:
        raise ValueError("the subgroup part must be part of the cover")
    if not set(j_set) <= set(indices):
        raise ValueError("cover indices must exist in the model")
    g = m.graph
    alpha = _graph_alphabet(g)
    e_word = e_word if e_word is not None else Word((), alpha)
    cover = frozenset(v for v in range(g.n) if m.cosets[v] in j_set)
    if not is_connected(g, cover):
        raise ValueError("the chosen cover is not connected")

    order, parent = _bfs_tree(g, m.idempotent)
    if len(order) != g.n:
        raise ValueError("model graph is not connected")
    anchors = {}
    for v in order:
        j = m.cosets[v]
        if j in j_set and j not in anchors:
            anchors[j] = v
    if set(anchors) != set(j_set):
        raise ValueError("some cover coset is unreachable")
    representatives = {j: _tree_word(parent, v, alpha)
                       for j, v in anchors.items()}
    discovery = {v: i for i, v in enumerate(order)}
    order_pos = {v: (j_set.index(m.cosets[v]), discovery[v])
                 for v in cover}

    report = boundary_width(g, cover)
    boundary = {}
    beta = {}
    groups = {}

    def translate(x, path):
        j = m.cosets[x]
        word = _path_word(g, path, alpha)
        t = g.walk(anchors[j], word.letters)
        if t is None:
            raise ValueError(
                "translating a boundary witness to the coset anchor "
                "leaves the model; a larger model is needed")
        if m.cosets[t] != m.cosets[path[-1]]:
            raise ValueError("translated witness lands in the wrong coset")
        return j, t

    for x, y, path in report.pairs:
        if x == y:
            j, t = translate(x, path)
            if t != anchors[j]:
                raise ValueError(
                    f"loop witness at {x} does not fix the anchor of "
                    f"coset {j}; the model is not coset-homogeneous")
            boundary.setdefault((x, x), Word((), alpha))
            groups.setdefault((j, t), set()).add((x, x))
            continue
        lo, hi = sorted((x, y), key=order_pos.__getitem__)
        fwd = path if path[0] == lo else tuple(reversed(path))
        j, t = translate(lo, fwd)
        if (j, t) not in beta:
            beta[(j, t)] = _shortest_word(g, anchors[j], t, alpha)
        boundary.setdefault((lo, hi), beta[(j, t)])
        boundary.setdefault((hi, lo), invert_word(beta[(j, t)]))
        groups.setdefault((j, t), set()).add((lo, hi))
        jr, tr = translate(hi, tuple(reversed(fwd)))
        groups.setdefault((jr, tr), set()).add((hi, lo))

    groups = {key: tuple(sorted(val)) for key, val in groups.items()}
    cs = CosetSystem(m, j_set, alpha, anchors, representatives, order_pos,
                     boundary, beta, groups, report.width, e_word)
    _replay_boundary_table(cs)
    _replay_representatives(cs)
    return cs


def _replay_boundary_table(cs):
    """Definitional and shared-class replays; raises on any mismatch."""
    g = cs.model.graph
    for (x, y), w in sorted(cs.boundary.items()):
        if len(w.letters) > cs.width:
            raise ValueError(f"boundary word for ({x},{y}) exceeds the "
                             f"width {cs.width}")
        if g.walk(x, w.letters) != y:
            raise ValueError(f"boundary word for ({x},{y}) does not run "
                             "between its endpoints")
    for (j, t), pairs in sorted(cs.groups.items()):
        src = cs.anchors[j]
        for x, y in pairs:
            end = g.walk(src, cs.boundary[(x, y)].letters)
            if end != t:
                raise ValueError(
                    f"shared boundary word for ({x},{y}) replays to {end} "
                    f"instead of {t} from the anchor of coset {j}")


def _replay_representatives(cs):
    g = cs.model.graph
    for j in cs.j_set:
        word = cs.representatives[j].letters + \
            invert_word(cs.representatives[j]).letters
        checked = 0
        for h in sorted(cs.model.part(H_PART)):
            end = g.walk(h, word)
            if end is None:
                continue
            checked += 1
            if end != h:
                raise ValueError(
                    f"representative of coset {j} does not return to {h}")
        if checked == 0:
            raise ValueError(f"representative of coset {j} cannot be "
                             "replayed from any subgroup vertex")


def write_system_file(cs):
    """Model plus cover line; everything else is rebuilt on parse."""
    return write_model_file(cs.model) + \
        "cover " + " ".join(str(j) for j in cs.j_set) + "\n"


def parse_system_file(text):
    cover = None
    kept = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line.startswith("cover "):
            if cover is not None:
                raise ValueError("duplicate cover line")
            cover = tuple(int(tok) for tok in line.split()[1:])
        else:
            kept.append(raw)
    if cover is None:
        raise ValueError("system file lacks a cover line")
    return build_coset_system(parse_model_file("\n".join(kept)), cover)


# ---------------------------------------------------------------------------
# the generating alphabet and the rewriting map


def generator_set_Y(cs):
    """All symbols (j, w) with both ends in the cover, with their images.

    The image of (j, w) is the word  e r_j w r'_{j·w}.  Symbols whose
    action crosses a table gap are dropped rather than guessed.
    """
    words = {}
    for w in cs.boundary.values():
        words.setdefault(w.letters, w)
    out = []
    for j in cs.j_set:
        for letters in sorted(words):
            w = words[letters]
            try:
                k = cs.act_word(j, w)
            except ValueError:
                continue
            if k in cs.j_set:
                out.append(((j, letters), psi_word(cs, (j, letters))))
    return tuple(out)


def psi_word(cs, symbol):
    j, letters = symbol
    w = Word(letters, cs.alphabet)
    k = cs.act_word(j, w)
    if k not in cs.j_set:
        raise ValueError(f"symbol {symbol} leads outside the cover")
    return (cs.e_word * cs.representatives[j] * w
            * invert_word(cs.representatives[k]))


def psi_of(cs, symbols):
    out = Word((), cs.alphabet)
    for s in symbols:
        out = out * psi_word(cs, s)
    return out


def rewrite_phi(cs, j, u):
    """Decompose u at every return to the cover, one symbol per piece.

    Each piece u' is the shortest nonempty prefix of the remaining word
    whose action lands back in the cover; the emitted symbol carries the
    stored boundary word of the pair (anchor, anchor·u').
    """
    if j not in cs.j_set:
        raise ValueError(f"coset {j} is not in the cover")
    g = cs.model.graph
    symbols = []
    rest = u.letters
    while rest:
        cur = j
        cut = None
        for pos, letter in enumerate(rest):
            if cur == 0:
                raise ValueError("the action leaves the component before "
                                 "returning to the cover")
            cur = cs.model.act(cur, _letter_text(letter))
            if cur is None:
                raise ValueError("the action crosses a gap in the table")
            if cur in cs.j_set:
                cut = pos + 1
                break
        if cut is None:
            raise ValueError("the word never returns to the cover")
        t = g.walk(cs.anchors[j], rest[:cut])
        if t is None:
            raise ValueError("the prefix cannot be replayed from the "
                             "coset anchor inside the model")
        if cs.model.cosets[t] != cur:
            raise ValueError("action table and graph disagree on a prefix")
        symbols.append((j, cs.boundary_word(cs.anchors[j], t).letters))
        j = cur
        rest = rest[cut:]
    return tuple(symbols)


# ---------------------------------------------------------------------------
# sampled identity checks


@dataclass(frozen=True)
class ClaimsReport:
    samples: int
    seed: int
    counts: dict      # check name -> (passed, failed, unknown)
    failures: tuple   # (check name, detail)

    @property
    def ok(self):
        return not self.failures


def _random_vertex_walk(rng, g, start, max_len):
    letters = []
    v = start
    for _ in range(rng.randrange(max_len + 1)):
        nbrs = sorted(g.undirected_neighbors(v))
        if not nbrs:
            break
        other, base, inv = rng.choice(nbrs)
        letters.append((base, inv))
        v = other
    return tuple(letters), v


def _cover_avoiding_loop(rng, cs, j, max_len):
    """A loop at the anchor whose interior stays outside the cover."""
    g = cs.model.graph
    anchor = cs.anchors[j]
    cover = cs.cover
    exits = [n for n in sorted(g.undirected_neighbors(anchor))
             if n[0] not in cover]
    if not exits:
        return None
    other, base, inv = rng.choice(exits)
    letters = [(base, inv)]
    v = other
    for _ in range(max_len - 2):
        nbrs = sorted(g.undirected_neighbors(v))
        closing = [n for n in nbrs if n[0] == anchor]
        if closing and rng.random() < 0.5:
            break
        onward = [n for n in nbrs if n[0] not in cover]
        if not onward:
            break
        other, base, inv = rng.choice(onward)
        letters.append((base, inv))
        v = other
    closing = [n for n in sorted(g.undirected_neighbors(v))
               if n[0] == anchor]
    if not closing:
        return None
    other, base, inv = rng.choice(closing)
    letters.append((base, inv))
    return tuple(letters)


def verify_claims(cs, samples=50, seed=0, max_len=10, equal_in_m=None):
    """Sampled replay of the three defining identities.

    claim2: the rewriting of a word and of its inverse cancel; claim1:
    a cover-avoiding loop at an anchor rewrites to the identity; the
    retraction: rewriting then representing a subgroup word returns to
    the same endpoint.  Samples whose replay leaves the model are
    reported unknown (or passed to ``equal_in_m`` when given).
    """
    rng = random.Random(seed)
    g = cs.model.graph
    e_vertex = cs.model.idempotent
    counts = {"claim1": [0, 0, 0], "claim2": [0, 0, 0],
              "retraction": [0, 0, 0]}
    failures = []

    def settle(name, lhs_word, target, detail):
        end = g.walk(e_vertex, lhs_word.letters)
        if end is None:
            if equal_in_m is not None:
                verdict = equal_in_m(lhs_word, target)
                if verdict is True:
                    counts[name][0] += 1
                elif verdict is False:
                    counts[name][1] += 1
                    failures.append((name, detail))
                else:
                    counts[name][2] += 1
            else:
                counts[name][2] += 1
        elif end == g.walk(e_vertex, target.letters):
            counts[name][0] += 1
        else:
            counts[name][1] += 1
            failures.append((name, detail))

    for _ in range(samples):
        # claim2 on a random cover-to-cover word
        for _ in range(40):
            j = rng.choice(cs.j_set)
            letters, end = _random_vertex_walk(rng, g, cs.anchors[j],
                                               max_len)
            if cs.model.cosets[end] in cs.j_set:
                break
        else:
            counts["claim2"][2] += 1
            letters = None
        if letters is not None:
            alpha_w = Word(letters, cs.alphabet)
            try:
                k = cs.act_word(j, alpha_w)
                syms = rewrite_phi(cs, j, alpha_w) + \
                    rewrite_phi(cs, k, invert_word(alpha_w))
                settle("claim2", psi_of(cs, syms), cs.e_word,
                       (j, alpha_w.letters))
            except ValueError:
                counts["claim2"][2] += 1

        # claim1 on a cover-avoiding loop at an anchor
        letters = None
        for _ in range(40):
            j = rng.choice(cs.j_set)
            letters = _cover_avoiding_loop(rng, cs, j, max_len)
            if letters is not None:
                break
        if letters is None:
            counts["claim1"][2] += 1
        else:
            try:
                syms = rewrite_phi(cs, j, Word(letters, cs.alphabet))
                settle("claim1", psi_of(cs, syms), cs.e_word,
                       (j, letters))
            except ValueError:
                counts["claim1"][2] += 1

        # retraction on a word returning to the subgroup part
        for _ in range(40):
            letters, end = _random_vertex_walk(rng, g, e_vertex, max_len)
            if cs.model.cosets[end] == H_PART:
                break
        else:
            counts["retraction"][2] += 1
            letters = None
        if letters is not None:
            gamma = Word(letters, cs.alphabet)
            try:
                syms = rewrite_phi(cs, H_PART, gamma)
                settle("retraction", psi_of(cs, syms), gamma,
                       tuple(letters))
            except ValueError:
                counts["retraction"][2] += 1

    counts = {k: tuple(v) for k, v in counts.items()}
    return ClaimsReport(samples, seed, counts, tuple(failures))


# ---------------------------------------------------------------------------
# bounded relation families


def _short_words(alpha, max_len):
    out = [()]
    frontier = [()]
    letters = [(b, i) for b in alpha.base_letters for i in (False, True)]
    for _ in range(max_len):
        frontier = [w + (l,) for w in frontier for l in letters]
        out += frontier
    return out


def emit_crrt_relations(cs, relations=(), max_support_len=1, cap=60):
    """Bounded samples of the five defining relation families.

    Returns (family, lhs symbols, rhs symbols, note) tuples, at most
    ``cap`` per family; each family ranges over support words up to the
    given length, skipping instances whose action leaves the table.
    This is an inspection aid, not a completed presentation.
    """

    def phi1(word):
        return rewrite_phi(cs, H_PART, word)

    out = []
    ysyms = generator_set_Y(cs)
    for (sym, image) in ysyms[:cap]:
        try:
            out.append(("1", (sym,), phi1(image), "b = phi(psi(b))"))
        except ValueError:
            continue
    out.append(("1", (), phi1(cs.e_word), "phi(e) = 1"))

    support = [Word(l, cs.alphabet) for l in _short_words(cs.alphabet,
                                                          max_support_len)]
    emitted = 0
    for u, v in relations:
        for w1 in support:
            for w2 in support:
                if emitted >= cap:
                    break
                try:
                    lhs, rhs = w1 * u * w2, w1 * v * w2
                    if cs.act_word(H_PART, lhs) == H_PART \
                            and cs.act_word(H_PART, rhs) == H_PART:
                        out.append(("2", phi1(lhs), phi1(rhs),
                                    "defining relation conjugates"))
                        emitted += 1
                except ValueError:
                    continue

    emitted = 0
    for alpha_w in support:
        if emitted >= cap or not alpha_w.letters:
            continue
        try:
            lhs = alpha_w * invert_word(alpha_w) * alpha_w
            if cs.act_word(H_PART, lhs) == H_PART:
                out.append(("3", phi1(lhs), phi1(alpha_w),
                            "idempotent absorption"))
                emitted += 1
        except ValueError:
            continue

    emitted = 0
    for aw in support:
        for bw in support:
            if emitted >= cap:
                break
            try:
                lhs = aw * invert_word(aw) * bw * invert_word(bw)
                rhs = bw * invert_word(bw) * aw * invert_word(aw)
                if cs.act_word(H_PART, lhs) == H_PART:
                    out.append(("4", phi1(lhs), phi1(rhs),
                                "idempotents commute"))
                    emitted += 1
            except ValueError:
                continue

    emitted = 0
    g = cs.model.graph
    loops = [w for w in support
             if g.walk(cs.model.idempotent, w.letters) is not None
             and cs.model.cosets[g.walk(cs.model.idempotent, w.letters)]
             == H_PART]
    for w1 in loops:
        for w2 in loops:
            if emitted >= cap:
                break
            try:
                out.append(("5", phi1(w1 * w2), phi1(w1) + phi1(w2),
                            "rewriting splits at subgroup words"))
                emitted += 1
            except ValueError:
                continue
    return tuple(out)
