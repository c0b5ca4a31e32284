"""Boundary width, coset covers, loop generation, and metric comparisons.

Everything works on finite labeled digraphs through their underlying
undirected metric.  A width computed on a ball taken out of an infinite
graph is a certified lower bound only (``exact=False``); no finiteness
claim is ever derived from a ball.
"""

import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .graphs import (LabeledDigraph, fold, induced_subgraph, is_connected,
                     parse_graph_file, undirected_distance, write_graph_file)
from .presentations import prefix_generators
from .stephen import approximate, equal_in
from .words import Word, invert_word

H_PART = 1


@dataclass(frozen=True)
class BoundaryReport:
    """Boundary pairs of a vertex subset with replayable witness paths.

    Each pair (x, y, path) records a walk that starts at x in the subset,
    ends at y in the subset, and whose edges all start outside the subset
    except the first.  A single edge inside the subset qualifies (the
    interior condition is vacuous), so ``width`` is the largest full-graph
    distance between the endpoints of any pair, 0 when there are none
    (``no_pairs``).  ``excursion_width`` restricts the maximum to pairs
    whose witness actually passes through the complement.
    """

    subset: frozenset
    pairs: tuple
    width: int
    excursion_width: int
    exact: bool
    no_pairs: bool


def _multi_source_distances(g, sources):
    dist = [-1] * g.n
    q = deque()
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            q.append(s)
    while q:
        v = q.popleft()
        for w, _, _ in g.undirected_neighbors(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def boundary_width(g, subset, exact=True):
    """All boundary pairs of the subset, exact on a finite graph.

    From each member x the single-edge re-entries are collected, then a
    BFS that only expands vertices outside the subset finds every re-entry
    point reachable through the complement.  One shortest witness per
    unordered pair is kept.
    """
    members = frozenset(subset)
    for v in members:
        if not 0 <= v < g.n:
            raise ValueError(f"subset vertex {v} not in graph")
    found = {}
    for x in sorted(members):
        seeds = []
        for w, _, _ in g.undirected_neighbors(x):
            if w in members:
                key = (min(x, w), max(x, w), "edge")
                if key not in found:
                    found[key] = (x, w, (x, w))
            elif w not in seeds:
                seeds.append(w)
        parent = {s: None for s in seeds}
        q = deque(seeds)
        while q:
            v = q.popleft()
            for w, _, _ in g.undirected_neighbors(v):
                if w in members:
                    key = (min(x, w), max(x, w), "excursion")
                    if key not in found:
                        path = [w, v]
                        u = v
                        while parent[u] is not None:
                            u = parent[u]
                            path.append(u)
                        path.append(x)
                        found[key] = (x, w, tuple(reversed(path)))
                elif w not in parent:
                    parent[w] = v
                    q.append(w)
    pairs = tuple(found[key] for key in sorted(found))
    width = 0
    excursion = 0
    for x, y, path in pairs:
        d = undirected_distance(g, x, y)
        width = max(width, d)
        if len(path) > 2:
            excursion = max(excursion, d)
    return BoundaryReport(members, pairs, width, excursion, exact, not pairs)


def replay_boundary_path(g, report, pair):
    """Check one witness against the definition; True when it replays."""
    x, y, path = pair
    if path[0] != x or path[-1] != y:
        return False
    if x not in report.subset or y not in report.subset:
        return False
    for v in path[1:-1]:
        if v in report.subset:
            return False
    for a, b in zip(path, path[1:]):
        if not any(w == b for w, _, _ in g.undirected_neighbors(a)):
            return False
    return True


def ball_cover(g, delta, r):
    """Union of the radius-r balls around the given vertices."""
    if r < 0:
        raise ValueError("negative radius")
    dist = _multi_source_distances(g, delta)
    return frozenset(v for v in range(g.n) if 0 <= dist[v] <= r)


@dataclass(frozen=True)
class CoverBoundsReport:
    base_width: int
    radius: int
    cover: frozenset
    cover_width: int
    ball_bound: int
    ball_ok: bool
    coset_subset: frozenset = None
    coset_connected: bool = None
    reach: int = None
    coset_width: int = None
    coset_bound: int = None
    coset_ok: bool = None

    @property
    def ok(self):
        return self.ball_ok and self.coset_ok is not False


def check_cover_bounds(g, delta, r, model=None):
    """Width of the r-ball cover against 2r + K, K the base width.

    With a model supplied (its graph must be g), the union of all cosets
    met by the cover is formed; when that union is connected its width is
    checked against K + 2K' where K' bounds the distance back to the base
    subset.  A disconnected union leaves the coset check unevaluated.
    """
    delta = frozenset(delta)
    base = boundary_width(g, delta)
    cover = ball_cover(g, delta, r)
    cover_rep = boundary_width(g, cover)
    bound = 2 * r + base.width
    ball_ok = cover_rep.width <= bound
    if model is None:
        return CoverBoundsReport(base.width, r, cover, cover_rep.width,
                                 bound, ball_ok)
    if model.graph.n != g.n:
        raise ValueError("model graph does not match the input graph")
    met = {model.cosets[v] for v in cover}
    union = frozenset(v for v in range(g.n) if model.cosets[v] in met)
    connected = is_connected(g, union)
    if not connected:
        return CoverBoundsReport(base.width, r, cover, cover_rep.width,
                                 bound, ball_ok, coset_subset=union,
                                 coset_connected=False)
    dist = _multi_source_distances(g, delta)
    reach = max(dist[v] for v in union) if union else 0
    coset_bound = base.width + 2 * reach
    coset_width = boundary_width(g, union).width
    return CoverBoundsReport(base.width, r, cover, cover_rep.width, bound,
                             ball_ok, coset_subset=union,
                             coset_connected=True, reach=reach,
                             coset_width=coset_width,
                             coset_bound=coset_bound,
                             coset_ok=coset_width <= coset_bound)


@dataclass(frozen=True)
class RClassModel:
    """A finite stand-in for one strongly connected Cayley component.

    Vertices are partitioned into cosets of the designated subgroup,
    which is part ``H_PART`` and contains the idempotent vertex.  The
    optional action table maps (coset index, letter text) to a coset
    index; the value 0 records that the action leaves the component, and
    a missing key means nothing is known.
    """

    graph: LabeledDigraph
    cosets: dict
    idempotent: int
    action: dict = None

    def __post_init__(self):
        if set(self.cosets) != set(range(self.graph.n)):
            raise ValueError("coset partition must cover every vertex")
        for v, j in self.cosets.items():
            if j < 1:
                raise ValueError(f"coset index {j} at vertex {v} (need >= 1)")
        if self.cosets.get(self.idempotent) != H_PART:
            raise ValueError("idempotent vertex must lie in the subgroup part")
        if self.action is not None:
            indices = set(self.cosets.values())
            for (j, letter), target in self.action.items():
                if j not in indices or (target != 0 and
                                        target not in indices):
                    raise ValueError(f"action entry ({j},{letter})->{target} "
                                     f"uses an unknown coset index")

    def indices(self):
        return sorted(set(self.cosets.values()))

    def part(self, j):
        return frozenset(v for v, i in self.cosets.items() if i == j)

    def act(self, j, letter):
        """Coset index reached, 0 when the action dies, None when unknown."""
        if self.action is None:
            return None
        return self.action.get((j, letter))


def write_model_file(m):
    lines = [write_graph_file(m.graph).rstrip("\n")]
    for v in sorted(m.cosets):
        lines.append(f"coset {v} {m.cosets[v]}")
    lines.append(f"idempotent {m.idempotent}")
    if m.action is not None:
        for (j, letter), target in sorted(m.action.items()):
            lines.append(f"action {j} {letter} {target}")
    return "\n".join(lines) + "\n"


def parse_model_file(text):
    graph_lines = []
    cosets = {}
    idempotent = None
    action = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "coset":
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'coset V J'")
            cosets[int(parts[1])] = int(parts[2])
        elif parts[0] == "idempotent":
            if len(parts) != 2 or idempotent is not None:
                raise ValueError(f"line {lineno}: bad idempotent line")
            idempotent = int(parts[1])
        elif parts[0] == "action":
            if len(parts) != 4:
                raise ValueError(f"line {lineno}: expected 'action J L J'")
            if action is None:
                action = {}
            action[(int(parts[1]), parts[2])] = int(parts[3])
        else:
            graph_lines.append(raw)
    g = parse_graph_file("\n".join(graph_lines))
    if idempotent is None:
        raise ValueError("model file lacks an idempotent line")
    return RClassModel(g, cosets, idempotent, action)


@dataclass(frozen=True)
class CoverReport:
    subset: frozenset
    connected: bool
    width: BoundaryReport
    enlarged: tuple = None
    enlarged_connected: bool = None


def cover_analysis(m, j_set):
    """Connectivity and width of a union of cosets, with enlargement.

    When the model has an action table the enlargement procedure is run:
    the union grows by every coset met by its width-radius ball cover,
    the radius increasing until the union is connected or stops growing.
    """
    J = set(j_set)
    indices = set(m.cosets.values())
    if not J <= indices:
        raise ValueError(f"unknown coset indices {sorted(J - indices)}")
    if H_PART not in J:
        raise ValueError("the subgroup part must be in the index set")
    subset = frozenset(v for v in range(m.graph.n) if m.cosets[v] in J)
    connected = is_connected(m.graph, subset)
    report = boundary_width(m.graph, subset)
    if m.action is None:
        return CoverReport(subset, connected, report)
    if connected:
        return CoverReport(subset, connected, report,
                           enlarged=tuple(sorted(J)), enlarged_connected=True)
    radius = report.width
    previous_cover = None
    while True:
        cover = ball_cover(m.graph, subset, radius)
        enlarged = J | {m.cosets[v] for v in cover}
        union = frozenset(v for v in range(m.graph.n)
                          if m.cosets[v] in enlarged)
        if is_connected(m.graph, union):
            return CoverReport(subset, connected, report,
                               enlarged=tuple(sorted(enlarged)),
                               enlarged_connected=True)
        if cover == previous_cover:
            return CoverReport(subset, connected, report,
                               enlarged=tuple(sorted(enlarged)),
                               enlarged_connected=False)
        previous_cover = cover
        radius += 1


def _undirected_adjacency(g):
    adj = [[] for _ in range(g.n)]
    for edge in sorted(set(g.edges())):
        src, label, dst = edge
        adj[src].append((dst, edge, False))
        adj[dst].append((src, edge, True))
    return adj


def lk_generates_pi1(g, base, k):
    """Do conjugated short loops generate the whole loop group?

    A spanning tree from the base vertex frees the loop group on the
    chord edges.  Loops of length at most k based anywhere, conjugated
    back along tree geodesics, give chord words; the folded graph of
    those words must be the full one-vertex rose.
    """
    if not 0 <= base < g.n:
        raise ValueError(f"base vertex {base} not in graph")
    adj = _undirected_adjacency(g)
    tree = set()
    seen = {base}
    q = deque([base])
    while q:
        v = q.popleft()
        for w, edge, _ in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(edge)
                q.append(w)
    if len(seen) < g.n:
        raise ValueError("graph is not connected")
    chords = sorted(set(g.edges()) - tree)
    if not chords:
        return True
    chord_id = {edge: i for i, edge in enumerate(chords)}

    words = set()
    for v0 in range(g.n):
        stack = [(v0, (), None, 0)]
        while stack:
            v, word, last, length = stack.pop()
            if length == k:
                continue
            for w, edge, backward in adj[v]:
                if last is not None and last == (edge, not backward):
                    continue
                if edge in chord_id:
                    new_word = word + ((chord_id[edge], backward),)
                else:
                    new_word = word
                if w == v0 and new_word:
                    words.add(new_word)
                stack.append((w, new_word, (edge, backward), length + 1))

    rose = LabeledDigraph(1, root=0)
    for word in sorted(words):
        cur = 0
        for idx, (cid, backward) in enumerate(word):
            nxt = 0 if idx == len(word) - 1 else rose.add_vertex()
            if backward:
                rose.add_edge(nxt, f"c{cid}", cur)
            else:
                rose.add_edge(cur, f"c{cid}", nxt)
            cur = nxt
    folded, _ = fold(rose)
    while True:
        degree = [0] * folded.n
        for src, _, dst in folded.edges():
            degree[src] += 1
            degree[dst] += 1
        keep = [v for v in range(folded.n)
                if v == folded.root or degree[v] >= 2]
        if len(keep) == folded.n:
            break
        folded, _ = induced_subgraph(folded, keep)
    return folded.n == 1 and folded.edge_count() == len(chords)


@dataclass(frozen=True)
class QiParams:
    lam: float
    eps: float
    mu: float

    def __post_init__(self):
        if self.lam < 1 or self.eps < 0 or self.mu < 0:
            raise ValueError("need lam >= 1, eps >= 0, mu >= 0")


@dataclass(frozen=True)
class QiFailure:
    kind: str
    x: int
    y: int
    d_source: int
    d_image: int


@dataclass(frozen=True)
class QiReport:
    params: QiParams
    pairs_checked: int
    failures: tuple
    density_worst: int
    ok: bool


def qi_check(source, target, vmap, params, pairs=None, density_targets=None):
    """Two-sided distance comparison for a sampled vertex map.

    Checks d/lam - eps <= d' <= lam*d + eps on every pair and that every
    density target lies within mu of the image.  Pairs default to all
    unordered pairs of the map's domain, density targets to the whole
    target graph.
    """
    if pairs is None:
        pairs = list(combinations(sorted(vmap), 2))
    failures = []
    for x, y in pairs:
        d = undirected_distance(source, x, y)
        d2 = undirected_distance(target, vmap[x], vmap[y])
        if d is None or d2 is None:
            raise ValueError(f"sampled pair ({x},{y}) at infinite distance")
        if d2 < d / params.lam - params.eps:
            failures.append(QiFailure("lower", x, y, d, d2))
        elif d2 > params.lam * d + params.eps:
            failures.append(QiFailure("upper", x, y, d, d2))
    image = sorted(set(vmap.values()))
    dist = _multi_source_distances(target, image)
    worst = 0
    if density_targets is None:
        density_targets = range(target.n)
    for v in density_targets:
        if dist[v] < 0:
            failures.append(QiFailure("density", v, v, -1, -1))
        else:
            worst = max(worst, dist[v])
    if worst > params.mu:
        failures.append(QiFailure("density", -1, -1, worst, worst))
    return QiReport(params, len(pairs), tuple(failures), worst,
                    not failures)


@dataclass(frozen=True)
class QiR1Report:
    lam: int
    radius: int
    rounds_done: int
    stabilized: bool
    gamma_vertices: int
    delta_vertices: int
    interior: tuple
    pairs_checked: int
    failures: tuple
    unresolved: int
    exact: bool
    ok: bool


def qi_r1_check(p, rounds=6, radius=4, vertex_cap=100000, max_pairs=600,
                seed=0):
    """Compare the identity-component metric with the prefix-step metric.

    The component approximation carries the edge metric; on the same
    vertices a second graph is grown from the root by right multiplication
    with relator prefixes.  On interior pairs the first distance must be
    at most lam times the second (lam the longest relator) and the second
    at most twice the first.  Vertices whose prefix steps leave the
    approximation are unresolved and drop out of the interior.
    """
    if p.kind != "special_inverse":
        raise ValueError(f"need a special_inverse presentation, got {p.kind}")
    lam = max((len(lhs) for lhs, _ in p.relations), default=1)
    approx = approximate(p, Word((), p.alphabet), rounds, vertex_cap)
    g = approx.graph
    prefix_words = prefix_generators(p).words

    dist_delta = {g.root: 0}
    adjacency = {g.root: set()}
    incomplete = set()
    frontier = [g.root]
    for depth in range(radius):
        nxt = []
        for v in frontier:
            for pw in prefix_words:
                w = g.walk(v, pw.letters)
                if w is None:
                    incomplete.add(v)
                    continue
                adjacency.setdefault(v, set()).add(w)
                adjacency.setdefault(w, set()).add(v)
                if w not in dist_delta:
                    dist_delta[w] = depth + 1
                    nxt.append(w)
        frontier = nxt

    if approx.stabilized:
        interior = sorted(dist_delta)
        exact = True
    else:
        margin = radius // 2
        interior = sorted(v for v, d in dist_delta.items()
                          if d <= margin and v not in incomplete)
        exact = False

    pairs = list(combinations(interior, 2))
    if len(pairs) > max_pairs:
        pairs = random.Random(seed).sample(pairs, max_pairs)
        pairs.sort()

    def delta_distance(x, y):
        if x == y:
            return 0
        dist = {x: 0}
        q = deque([x])
        while q:
            v = q.popleft()
            for w in adjacency.get(v, ()):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    if w == y:
                        return dist[w]
                    q.append(w)
        return None

    failures = []
    for x, y in pairs:
        dg = undirected_distance(g, x, y)
        dd = delta_distance(x, y)
        if dg is None or dd is None:
            failures.append((x, y, dg, dd, "unreachable"))
        elif dg > lam * dd:
            failures.append((x, y, dg, dd, "edge_metric"))
        elif dd > 2 * dg:
            failures.append((x, y, dg, dd, "prefix_metric"))
    return QiR1Report(lam, radius, approx.rounds_done, approx.stabilized,
                      g.n, len(dist_delta), tuple(interior), len(pairs),
                      tuple(failures), len(incomplete), exact,
                      not failures)


@dataclass(frozen=True)
class ApproxModel:
    model: RClassModel
    exact: bool
    radius: int
    tests: int
    unresolved: int
    conflicts: tuple


def model_from_ball(p, radius, rounds=6, vertex_cap=100000, h_rounds=4,
                    h_cap=20000, max_tests=500):
    """Approximate coset model from a ball of the identity component.

    Ball vertices are grouped by certified equality of the idempotents
    w'w of their access words, tested through loop readability in
    approximations based at each idempotent.  Pairs the budget cannot
    certify stay in separate parts; action entries are emitted only when
    every member of a part agrees and none steps out of the ball.
    """
    if p.kind != "special_inverse":
        raise ValueError(f"need a special_inverse presentation, got {p.kind}")
    approx = approximate(p, Word((), p.alphabet), rounds, vertex_cap)
    g = approx.graph
    access = {g.root: ()}
    order = [g.root]
    q = deque([(g.root, 0)])
    depth = {g.root: 0}
    while q:
        v, d = q.popleft()
        if d == radius:
            continue
        for w, label, inv in sorted(g.undirected_neighbors(v)):
            if w not in access:
                access[w] = access[v] + ((label, inv),)
                depth[w] = d + 1
                order.append(w)
                q.append((w, d + 1))

    empty = Word((), p.alphabet)
    base_cache = {}

    def certifies(base_word, probe):
        key = base_word.letters
        if key not in base_cache:
            base_cache[key] = approximate(p, base_word, h_rounds, h_cap)
        return bool(equal_in(base_cache[key], probe, empty))

    reps = []
    coset_of = {}
    tests = 0
    unresolved = 0
    for v in order:
        # the idempotent w'w must stay unreduced: cancelling it would
        # collapse every class to the identity
        w_v = Word(access[v], p.alphabet)
        e_v = invert_word(w_v) * w_v
        assigned = None
        for idx, e_u in enumerate(reps):
            if e_u.letters == e_v.letters:
                assigned = idx + 1
                break
            if tests >= max_tests:
                unresolved += 1
                continue
            tests += 1
            if certifies(e_u, e_v) and certifies(e_v, e_u):
                assigned = idx + 1
                break
            unresolved += 1
        if assigned is None:
            reps.append(e_v)
            assigned = len(reps)
        coset_of[v] = assigned

    members = sorted(access)
    h, old_ids = induced_subgraph(g, members)
    cosets = {new: coset_of[old] for new, old in enumerate(old_ids)}
    parts = {}
    for v, j in cosets.items():
        parts.setdefault(j, []).append(v)

    action = {}
    conflicts = []
    for j in sorted(parts):
        for base in p.alphabet.base_letters:
            for inv in (False, True):
                letter = base + ("'" if inv else "")
                targets = set()
                left_ball = False
                for v in parts[j]:
                    w = h.step(v, base, inv)
                    if w is None:
                        left_ball = True
                    else:
                        targets.add(cosets[w])
                if len(targets) > 1:
                    conflicts.append((j, letter, tuple(sorted(targets))))
                elif len(targets) == 1 and not left_ball:
                    action[(j, letter)] = next(iter(targets))
    model = RClassModel(h, cosets, h.root, action)
    return ApproxModel(model, False, radius, tests, unresolved,
                       tuple(conflicts))
