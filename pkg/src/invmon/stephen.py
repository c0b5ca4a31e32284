"""Budgeted iterative closure of relator loops over a folded base graph.

Each round sews, at every vertex present when the round started, one closed
walk per defining relator (reusing existing edges where the walk is already
readable), then folds.  The sequence of graphs maps into the limit graph,
so every verdict derived from a walk is sound; absence of a walk proves
nothing and is reported as unknown.  Negative answers are never produced.
"""

from dataclasses import dataclass

from .graphs import LabeledDigraph, fold, rooted_isomorphic
from .words import invert_letter, munn_tree

SCHEDULE = "synchronous"


@dataclass(frozen=True)
class SchutzenbergerApprox:
    graph: LabeledDigraph
    presentation: object
    rounds_done: int
    vertex_cap: int
    stabilized: bool
    settled: frozenset    # vertices predating the last completed round
    schedule: str = SCHEDULE


@dataclass(frozen=True)
class SemiDecision:
    verdict: str                  # "yes" | "unknown"
    witness: tuple = None         # root-based walk (vertex ids) for yes
    rounds_done: int = 0
    vertices: int = 0
    stabilized: bool = False

    def __bool__(self):
        return self.verdict == "yes"


def _try_step(g, v, letter):
    try:
        return g.step(v, letter[0], letter[1])
    except ValueError:
        return None


def _add_reading(g, a, letter, b):
    base, inv = letter
    if inv:
        g.add_edge(b, base, a)
    else:
        g.add_edge(a, base, b)


def _has_reading(g, a, letter, b):
    base, inv = letter
    return g.has_edge(b, base, a) if inv else g.has_edge(a, base, b)


def _sew_loop(g, v, letters):
    """Make letters readable as a closed walk at v, adding few vertices.

    Traces the longest readable prefix and suffix, bridging the gap with
    fresh vertices; the final fold merges whatever this duplicates.
    """
    n = len(letters)
    if n == 0:
        return
    trail = [v]
    cur = v
    i = 0
    while i < n:
        nxt = _try_step(g, cur, letters[i])
        if nxt is None:
            break
        cur = nxt
        i += 1
        trail.append(cur)
    if i == n:
        if cur != v and not _has_reading(g, trail[n - 1], letters[-1], v):
            # fully readable but not closed; a parallel last edge makes
            # folding identify the two endpoints
            _add_reading(g, trail[n - 1], letters[-1], v)
        return
    end = v
    j = n
    while j > i + 1:
        prv = _try_step(g, end, invert_letter(letters[j - 1]))
        if prv is None:
            break
        end = prv
        j -= 1
    node = cur
    for t in range(i, j - 1):
        fresh = g.add_vertex()
        _add_reading(g, node, letters[t], fresh)
        node = fresh
    if not _has_reading(g, node, letters[j - 1], end):
        _add_reading(g, node, letters[j - 1], end)


def _base_graph(base):
    tree = munn_tree(base)
    g = LabeledDigraph(tree.n_vertices, root=tree.end)
    for src, label, dst in tree.edges:
        g.add_edge(src, label, dst)
    return g


def approximate(p, base, rounds, vertex_cap):
    """Run up to `rounds` synchronous expansion rounds from the base word.

    The empty base approximates the graph of the identity's class.  The
    root is the image of the base word's endpoint.  Exceeding vertex_cap
    mid-round discards that round and returns the last completed one.
    """
    if p.kind != "special_inverse":
        raise ValueError(f"need a special_inverse presentation, got {p.kind}")
    if base.alphabet != p.alphabet:
        raise ValueError("base word over a foreign alphabet")
    relators = [lhs.letters for lhs in p.relators() if len(lhs) > 0]

    current = _base_graph(base)
    settled = frozenset()
    stabilized = False
    rounds_done = 0
    for _ in range(rounds):
        working = current.copy()
        start_n = working.n
        capped = False
        for v in range(start_n):
            for letters in relators:
                _sew_loop(working, v, letters)
                if working.n > vertex_cap:
                    capped = True
                    break
            if capped:
                break
        if capped:
            break
        candidate, merge_map = fold(working)
        settled = frozenset(merge_map[i] for i in range(start_n))
        rounds_done += 1
        if rooted_isomorphic(candidate, current):
            current = candidate
            stabilized = True
            break
        current = candidate
    return SchutzenbergerApprox(current, p, rounds_done, vertex_cap,
                                stabilized, settled)


def member(approx, w):
    """Does w label a walk from the root of the approximation?"""
    g = approx.graph
    path = [g.root]
    cur = g.root
    for letter in w.letters:
        cur = _try_step(g, cur, letter)
        if cur is None:
            return SemiDecision("unknown", None, approx.rounds_done, g.n,
                                approx.stabilized)
        path.append(cur)
    return SemiDecision("yes", tuple(path), approx.rounds_done, g.n,
                        approx.stabilized)


def equal_in(approx, u, v):
    """Do u and v label root-based walks with a common endpoint?"""
    mu = member(approx, u)
    mv = member(approx, v)
    if mu.verdict == "yes" and mv.verdict == "yes" \
            and mu.witness[-1] == mv.witness[-1]:
        return SemiDecision("yes", mu.witness + mv.witness,
                            approx.rounds_done, approx.graph.n,
                            approx.stabilized)
    return SemiDecision("unknown", None, approx.rounds_done, approx.graph.n,
                        approx.stabilized)


def _empty_word(p):
    from .words import Word
    return Word((), p.alphabet)


def is_right_unit(p, w, rounds=6, vertex_cap=100000):
    """Semi-decide whether w has a right inverse."""
    approx = approximate(p, _empty_word(p), rounds, vertex_cap)
    return member(approx, w)


def equal_right_units(p, u, v, rounds=6, vertex_cap=100000):
    approx = approximate(p, _empty_word(p), rounds, vertex_cap)
    return equal_in(approx, u, v)


def is_unit(p, w, rounds=6, vertex_cap=100000):
    """Semi-decide two-sided invertibility: w and its inverse both walk."""
    from .words import invert_word
    approx = approximate(p, _empty_word(p), rounds, vertex_cap)
    mw = member(approx, w)
    mi = member(approx, invert_word(w))
    if mw.verdict == "yes" and mi.verdict == "yes":
        return SemiDecision("yes", mw.witness, approx.rounds_done,
                            approx.graph.n, approx.stabilized)
    return SemiDecision("unknown", None, approx.rounds_done, approx.graph.n,
                        approx.stabilized)


def check_relator_closure(approx):
    """Vertices in `settled` missing some relator loop (should be none)."""
    g = approx.graph
    bad = []
    for v in sorted(approx.settled):
        for idx, lhs in enumerate(approx.presentation.relators()):
            cur = v
            for letter in lhs.letters:
                cur = _try_step(g, cur, letter)
                if cur is None:
                    break
            if cur != v:
                bad.append((v, idx))
    return bad
