"""Edge-labeled digraphs with folding, metrics and rooted isomorphism.

Edges are stored once per direction with a positive (base) label; reading
a letter (x, True) means walking an x-edge backwards.  After fold() a
graph is deterministic and co-deterministic in every label, so walks are
unambiguous.  Vertex ids are dense integers in insertion order; fold()
renumbers by BFS from the root when one is present, which keeps outputs
byte-stable.
"""

from collections import deque
from dataclasses import dataclass


class LabeledDigraph:

    def __init__(self, n=0, root=None):
        self.n = 0
        self.root = root
        self._out = []  # vertex -> {label: [dst, ...]}
        self._in = []   # vertex -> {label: [src, ...]}
        for _ in range(n):
            self.add_vertex()

    def add_vertex(self):
        self._out.append({})
        self._in.append({})
        self.n += 1
        return self.n - 1

    def add_edge(self, src, label, dst):
        if not (0 <= src < self.n and 0 <= dst < self.n):
            raise ValueError(f"edge ({src},{label},{dst}) uses unknown vertex")
        self._out[src].setdefault(label, []).append(dst)
        self._in[dst].setdefault(label, []).append(src)

    def has_edge(self, src, label, dst):
        return dst in self._out[src].get(label, ())

    def remove_edge(self, src, label, dst):
        self._out[src][label].remove(dst)
        if not self._out[src][label]:
            del self._out[src][label]
        self._in[dst][label].remove(src)
        if not self._in[dst][label]:
            del self._in[dst][label]

    def edges(self):
        for src in range(self.n):
            for label, dsts in self._out[src].items():
                for dst in dsts:
                    yield (src, label, dst)

    def edge_count(self):
        return sum(len(d) for out in self._out for d in out.values())

    def out_labels(self, v):
        return self._out[v].keys()

    def in_labels(self, v):
        return self._in[v].keys()

    def step(self, v, base, inv=False):
        """Follow one signed letter from v; None if absent.

        Raises on an ambiguous step, which can only happen before folding.
        """
        cands = (self._in[v] if inv else self._out[v]).get(base)
        if not cands:
            return None
        if len(cands) > 1:
            raise ValueError(f"ambiguous step {base!r} at vertex {v}")
        return cands[0]

    def walk(self, v, word):
        """Follow a word of (base, inv) letters from v; None if it leaves."""
        for base, inv in word:
            v = self.step(v, base, inv)
            if v is None:
                return None
        return v

    def undirected_neighbors(self, v):
        """All (neighbor, base, inv) incident to v, both directions."""
        for label, dsts in self._out[v].items():
            for dst in dsts:
                yield dst, label, False
        for label, srcs in self._in[v].items():
            for src in srcs:
                yield src, label, True

    def copy(self):
        g = LabeledDigraph(self.n, root=self.root)
        for src, label, dst in self.edges():
            g.add_edge(src, label, dst)
        return g

    def __repr__(self):
        return (f"LabeledDigraph(n={self.n}, edges={self.edge_count()}, "
                f"root={self.root})")


def fold(g):
    """Identify vertices until the graph is bi-deterministic.

    Two out-edges at a vertex with equal label force their targets to
    merge, and dually for in-edges.  The result does not depend on the
    order merges are performed.  Returns (folded graph, merge map) where
    merge_map[old_vertex] = new vertex id.  The folded graph is
    renumbered by BFS from the root's image when the input has a root,
    otherwise by least original id per merged class.
    """
    n = g.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = [{} for _ in range(n)]  # label -> set of dst
    inn = [{} for _ in range(n)]
    for src, label, dst in g.edges():
        out[src].setdefault(label, set()).add(dst)
        inn[dst].setdefault(label, set()).add(src)

    work = deque(range(n))
    queued = [True] * n

    def union(a, b):
        if a == b:
            return a
        # merge b's adjacency into a's (small-to-large by total entries)
        if sum(map(len, out[a].values())) + sum(map(len, inn[a].values())) < \
           sum(map(len, out[b].values())) + sum(map(len, inn[b].values())):
            a, b = b, a
        parent[b] = a
        for label, s in out[b].items():
            out[a].setdefault(label, set()).update(s)
        for label, s in inn[b].items():
            inn[a].setdefault(label, set()).update(s)
        out[b] = {}
        inn[b] = {}
        return a

    def requeue(x):
        x = find(x)
        if not queued[x]:
            work.append(x)
            queued[x] = True

    while work:
        v = work.popleft()
        queued[v] = False
        if find(v) != v:
            continue  # merged away; its adjacency lives at the representative
        merged = False
        for adj in (out[v], inn[v]):
            for label, targets in adj.items():
                reps = {find(x) for x in targets}
                adj[label] = reps
                if len(reps) > 1:
                    # union may mutate reps itself (self-loop case), so
                    # iterate over a snapshot
                    pending = tuple(reps)
                    a = pending[0]
                    for b in pending[1:]:
                        a = union(find(a), find(b))
                    merged = True
                    requeue(a)
                    break
            if merged:
                break
        if merged:
            requeue(v)

    # normalize adjacency to representatives
    classes = {}
    for v in range(n):
        classes.setdefault(find(v), []).append(v)
    reps = sorted(classes.keys(), key=lambda r: min(classes[r]))

    # collect folded edge set on representatives
    edge_set = set()
    for r in reps:
        for label, dsts in out[r].items():
            for d in dsts:
                edge_set.add((r, label, find(d)))

    # renumber
    order = _renumber_order(reps, edge_set, find(g.root) if g.root is not None else None, classes)
    newid = {r: i for i, r in enumerate(order)}
    folded = LabeledDigraph(len(order))
    if g.root is not None:
        folded.root = newid[find(g.root)]
    for src, label, dst in sorted((newid[s], l, newid[d]) for s, l, d in edge_set):
        folded.add_edge(src, label, dst)
    merge_map = [newid[find(v)] for v in range(n)]
    return folded, merge_map


def _renumber_order(reps, edge_set, root_rep, classes):
    if root_rep is None:
        return reps
    adj = {r: [] for r in reps}
    for s, l, d in sorted(edge_set):
        adj[s].append((l, False, d))
        adj[d].append((l, True, s))
    for r in reps:
        adj[r].sort()
    order = []
    seen = {root_rep}
    q = deque([root_rep])
    while q:
        v = q.popleft()
        order.append(v)
        for _, _, w in adj[v]:
            if w not in seen:
                seen.add(w)
                q.append(w)
    # unreachable classes keep insertion order after the reachable part
    order.extend(r for r in reps if r not in seen)
    return order


def distances_from(g, x):
    """Undirected BFS distances from x; -1 marks unreachable vertices."""
    dist = [-1] * g.n
    dist[x] = 0
    q = deque([x])
    while q:
        v = q.popleft()
        for w, _, _ in g.undirected_neighbors(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def undirected_distance(g, x, y):
    """Length of a shortest undirected path, or None if unreachable."""
    if x == y:
        return 0
    dist = [-1] * g.n
    dist[x] = 0
    q = deque([x])
    while q:
        v = q.popleft()
        for w, _, _ in g.undirected_neighbors(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                if w == y:
                    return dist[w]
                q.append(w)
    return None


@dataclass(frozen=True)
class Ball:
    center: int
    radius: int
    members: frozenset


def ball(g, center, r):
    dist = [-1] * g.n
    dist[center] = 0
    q = deque([center])
    members = {center}
    while q:
        v = q.popleft()
        if dist[v] == r:
            continue
        for w, _, _ in g.undirected_neighbors(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                members.add(w)
                q.append(w)
    return Ball(center, r, frozenset(members))


def induced_subgraph(g, vertex_set):
    """Subgraph on vertex_set, keeping exactly the edges inside it.

    Vertices are renumbered in sorted order; returns (graph, old_ids)
    where old_ids[new] = original id.
    """
    old_ids = sorted(vertex_set)
    newid = {v: i for i, v in enumerate(old_ids)}
    h = LabeledDigraph(len(old_ids))
    if g.root is not None and g.root in newid:
        h.root = newid[g.root]
    for src, label, dst in g.edges():
        if src in newid and dst in newid:
            h.add_edge(newid[src], label, newid[dst])
    return h, old_ids


def is_connected(g, vertex_set=None):
    """Connectivity of the undirected subgraph induced on vertex_set.

    The empty set counts as connected.  With vertex_set omitted the whole
    graph is tested.
    """
    if vertex_set is None:
        vertex_set = range(g.n)
    members = set(vertex_set)
    if not members:
        return True
    start = next(iter(members))
    seen = {start}
    q = deque([start])
    while q:
        v = q.popleft()
        for w, _, _ in g.undirected_neighbors(v):
            if w in members and w not in seen:
                seen.add(w)
                q.append(w)
    return len(seen) == len(members)


def rooted_isomorphic(g1, g2):
    """Label-preserving isomorphism matching roots.

    Both graphs must be bi-deterministic and rooted, so the candidate
    bijection is forced by a synchronized traversal.  Components not
    reachable from the root are compared by strict structural equality,
    which is only exercised by degenerate inputs.
    """
    if g1.root is None or g2.root is None:
        raise ValueError("rooted_isomorphic requires rooted graphs")
    if g1.n != g2.n or g1.edge_count() != g2.edge_count():
        return False
    match = {g1.root: g2.root}
    image = {g2.root}
    q = deque([g1.root])
    while q:
        u = q.popleft()
        v = match[u]
        for adj1, adj2 in ((g1._out[u], g2._out[v]), (g1._in[u], g2._in[v])):
            if adj1.keys() != adj2.keys():
                return False
            for label in adj1:
                c1, c2 = adj1[label], adj2[label]
                if len(c1) != 1 or len(c2) != 1:
                    return False
                a, b = c1[0], c2[0]
                if a in match:
                    if match[a] != b:
                        return False
                else:
                    if b in image:
                        return False
                    match[a] = b
                    image.add(b)
                    q.append(a)
    if len(match) == g1.n:
        return True
    rest1 = sorted(set(range(g1.n)) - set(match))
    rest2 = sorted(set(range(g2.n)) - set(match.values()))
    e1 = sorted((s, l, d) for s, l, d in g1.edges() if s in set(rest1))
    e2 = sorted((s, l, d) for s, l, d in g2.edges() if s in set(rest2))
    return rest1 == rest2 and e1 == e2


def export_dot(g, name="G"):
    """Deterministic DOT text; the root gets a distinct shape."""
    lines = [f"digraph {name} {{"]
    for v in range(g.n):
        attrs = ' [shape=doublecircle]' if v == g.root else ''
        lines.append(f"  {v}{attrs};")
    for src, label, dst in sorted(g.edges()):
        lines.append(f'  {src} -> {dst} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_graph_file(g):
    head = f"vertices {g.n}"
    if g.root is not None:
        head += f" root {g.root}"
    lines = [head]
    for src, label, dst in sorted(g.edges()):
        lines.append(f"{src} {label} {dst}")
    return "\n".join(lines) + "\n"


def parse_graph_file(text):
    """Inverse of write_graph_file; `#` starts a comment."""
    g = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertices":
            if g is not None:
                raise ValueError(f"line {lineno}: duplicate header")
            n = int(parts[1])
            root = None
            if len(parts) > 2:
                if parts[2] != "root" or len(parts) != 4:
                    raise ValueError(f"line {lineno}: bad header")
                root = int(parts[3])
            g = LabeledDigraph(n, root=root)
        else:
            if g is None:
                raise ValueError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'src label dst'")
            g.add_edge(int(parts[0]), parts[1], int(parts[2]))
    if g is None:
        raise ValueError("empty graph file")
    return g


def parse_subset_file(text):
    """One vertex id per line; `#` comments allowed."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(int(line))
    return out
