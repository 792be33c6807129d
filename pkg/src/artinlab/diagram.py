"""Edge-labeled Coxeter diagrams: parsing, shape predicates, domination,
family classification.

A diagram is a finite simple graph whose edges carry integer labels >= 3.
A missing edge means the two generators commute (label 2); explicit label-2
edges are rejected so every diagram has exactly one representation.
Edge label infinity is out of scope.
"""

from __future__ import annotations

import json
import itertools
from dataclasses import dataclass, field


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class CoxeterDiagram:
    """Immutable edge-labeled simple graph.

    vertices: identifiers in user order; all "least/first" tie-breaks in the
    package use this order.
    edges: mapping frozenset({a, b}) -> label (int >= 3).
    """

    vertices: tuple
    edges: dict = field(hash=False)

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise DiagramError("duplicate vertex %r" % (v,))
            seen.add(v)
        for pair, m in self.edges.items():
            if len(pair) != 2:
                raise DiagramError("loop or malformed edge %r" % (pair,))
            if not pair <= seen:
                raise DiagramError("edge %r uses unknown vertex" % (sorted(pair),))
            if not isinstance(m, int) or m < 3:
                raise DiagramError("edge label %r < 3 (commuting pairs are non-edges)" % (m,))

    # -- basic accessors -------------------------------------------------

    def index(self, v):
        return self.vertices.index(v)

    def label(self, a, b):
        """Coxeter exponent of the pair: edge label, or 2 for a non-edge."""
        if a == b:
            raise DiagramError("label of a vertex with itself is undefined")
        return self.edges.get(frozenset((a, b)), 2)

    def adjacent(self, a, b):
        return frozenset((a, b)) in self.edges

    def neighbors(self, v):
        return [u for u in self.vertices if u != v and self.adjacent(u, v)]

    def valence(self, v):
        return len(self.neighbors(v))

    @property
    def edge_list(self):
        """Edges as (a, b, label) with a before b in vertex order, sorted."""
        order = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for pair, m in self.edges.items():
            a, b = sorted(pair, key=order.__getitem__)
            out.append((a, b, m))
        out.sort(key=lambda t: (order[t[0]], order[t[1]]))
        return out

    def __len__(self):
        return len(self.vertices)


def make_diagram(vertices, edges):
    """Build a diagram from an iterable of (a, b, label) triples."""
    emap = {}
    for a, b, m in edges:
        if a == b:
            raise DiagramError("loop at %r" % (a,))
        key = frozenset((a, b))
        if key in emap:
            raise DiagramError("duplicate edge %r" % (sorted((a, b)),))
        emap[key] = m
    return CoxeterDiagram(tuple(vertices), emap)


def linear_diagram(labels, names=None):
    """Path diagram with the given consecutive edge labels."""
    n = len(labels) + 1
    vs = list(names) if names is not None else ["s%d" % i for i in range(1, n + 1)]
    if len(vs) != n:
        raise DiagramError("need %d vertex names, got %d" % (n, len(vs)))
    return make_diagram(vs, [(vs[i], vs[i + 1], labels[i]) for i in range(n - 1)])


def parse_diagram(text):
    """Parse the JSON diagram format {"vertices": [...], "edges": [[a,b,m]...]}."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError("not valid JSON: %s" % exc) from exc
    if not isinstance(obj, dict) or "vertices" not in obj or "edges" not in obj:
        raise DiagramError('expected an object with "vertices" and "edges"')
    vs = obj["vertices"]
    if not isinstance(vs, list) or not all(isinstance(v, str) for v in vs):
        raise DiagramError("vertices must be a list of strings")
    edges = []
    for e in obj["edges"]:
        if not (isinstance(e, list) and len(e) == 3):
            raise DiagramError("edge entries must be [a, b, label]")
        a, b, m = e
        if not isinstance(m, int):
            raise DiagramError("edge label must be an integer")
        if m == 2:
            raise DiagramError("explicit label 2: omit the edge instead")
        edges.append((a, b, m))
    return make_diagram(vs, edges)


def serialize_diagram(d):
    """Inverse of parse_diagram (parse(serialize(d)) == d)."""
    return json.dumps(
        {"vertices": list(d.vertices), "edges": [list(e) for e in d.edge_list]},
        sort_keys=True,
    )


def induced_subdiagram(d, vs):
    keep = list(vs)
    known = set(d.vertices)
    for v in keep:
        if v not in known:
            raise DiagramError("unknown vertex %r" % (v,))
    kept = set(keep)
    order = [v for v in d.vertices if v in kept]
    edges = {pair: m for pair, m in d.edges.items() if pair <= kept}
    return CoxeterDiagram(tuple(order), edges)


# -- shape ---------------------------------------------------------------


def _components(d, removed=()):
    out = []
    removed = set(removed)
    left = [v for v in d.vertices if v not in removed]
    seen = set()
    for start in left:
        if start in seen:
            continue
        comp = {start}
        queue = [start]
        while queue:
            v = queue.pop()
            for u in d.neighbors(v):
                if u not in removed and u not in comp:
                    comp.add(u)
                    queue.append(u)
        seen |= comp
        out.append(comp)
    return out


@dataclass(frozen=True)
class Shape:
    is_connected: bool
    is_tree: bool
    is_linear: bool
    is_tripod: bool
    valence: dict = field(hash=False)
    leaves: tuple = ()


def shape(d):
    """Classify the underlying graph.

    linear: a tree with exactly two leaves, or at most one vertex.
    tripod: a tree with exactly one valence-3 vertex and no valence above 3.
    """
    val = {v: d.valence(v) for v in d.vertices}
    comps = _components(d)
    connected = len(comps) <= 1
    tree = connected and len(d.edges) == len(d.vertices) - 1 if d.vertices else True
    leaves = tuple(v for v in d.vertices if val[v] == 1)
    linear = tree and (len(d.vertices) <= 1 or len(leaves) == 2)
    tripod = (
        tree
        and sum(1 for x in val.values() if x == 3) == 1
        and all(x <= 3 for x in val.values())
    )
    return Shape(connected, tree, linear, tripod, val, leaves)


def path_order(d):
    """Vertices of a linear diagram in path order; the orientation whose
    vertex sequence is least in diagram vertex order is returned."""
    sh = shape(d)
    if not sh.is_linear:
        raise DiagramError("diagram is not linear")
    if len(d.vertices) <= 1:
        return list(d.vertices)
    pos = {v: i for i, v in enumerate(d.vertices)}
    start = min(sh.leaves, key=pos.__getitem__)
    seq = [start]
    prev = None
    while True:
        nxt = [u for u in d.neighbors(seq[-1]) if u != prev]
        if not nxt:
            break
        prev = seq[-1]
        seq.append(nxt[0])
    return seq


def tree_distance(d, a, b):
    """Edge-count distance between two vertices (BFS; any connected graph)."""
    if a == b:
        return 0
    dist = {a: 0}
    queue = [a]
    while queue:
        nxt = []
        for v in queue:
            for u in d.neighbors(v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    if u == b:
                        return dist[u]
                    nxt.append(u)
        queue = nxt
    raise DiagramError("vertices %r, %r not connected" % (a, b))


def tree_path(d, a, b):
    """The unique path between two vertices of a tree, endpoints included."""
    parent = {a: None}
    queue = [a]
    while queue and b not in parent:
        nxt = []
        for v in queue:
            for u in d.neighbors(v):
                if u not in parent:
                    parent[u] = v
                    nxt.append(u)
        queue = nxt
    if b not in parent:
        raise DiagramError("vertices %r, %r not connected" % (a, b))
    out = [b]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    out.reverse()
    return out


# -- domination ----------------------------------------------------------


def dominates(d, d2):
    """Least label-dominating isomorphism d -> d2, or None.

    A dominating isomorphism is a bijection f of vertex sets that is an
    isomorphism of the underlying graphs with label(e) >= label(f(e)) for
    every edge e of d. "Least" is lexicographic in the image sequence under
    the two diagrams' vertex orders.
    """
    if len(d.vertices) != len(d2.vertices) or len(d.edges) != len(d2.edges):
        return None
    if sorted(d.valence(v) for v in d.vertices) != sorted(
        d2.valence(v) for v in d2.vertices
    ):
        return None

    n = len(d.vertices)

    def extend(mapping, used):
        i = len(mapping)
        if i == n:
            return dict(zip(d.vertices, mapping))
        v = d.vertices[i]
        for w in d2.vertices:
            if w in used:
                continue
            ok = True
            for j in range(i):
                u = d.vertices[j]
                lu = d.label(u, v)
                lw = d2.label(mapping[j], w)
                adj_u = lu >= 3
                adj_w = lw >= 3
                if adj_u != adj_w or (adj_u and lu < lw):
                    ok = False
                    break
            if not ok:
                continue
            got = extend(mapping + [w], used | {w})
            if got is not None:
                return got
        return None

    # candidate images are tried in d2's vertex order, so the first complete
    # mapping found is the lexicographically least one
    return extend([], set())


# -- classification ------------------------------------------------------


@dataclass(frozen=True)
class FamilyTag:
    """kind: most specific recognized name category; params: its parameters;
    names: every applicable name, most specific first."""

    kind: str
    params: tuple
    names: tuple

    def __str__(self):
        return self.names[0] if self.names else self.kind


def _fmt(kind, *params):
    if kind in ("A", "B", "D"):
        return "%s%d" % (kind, params[0])
    if kind == "I2":
        return "I2(%d)" % params[0]
    if kind in ("C~", "B~", "D~"):
        return "%s%d" % (kind, params[0])
    if kind in ("F", "H"):
        return "%s(%d,%d)" % (kind, params[0], params[1])
    if kind == "E":
        return "E(%d,%d,%d)" % params
    return kind


def _linear_names(labels):
    """Names of a path diagram given its edge-label sequence (one direction).

    Returns a list of (kind, params, name) in decreasing specificity."""
    n = len(labels) + 1
    rev = list(reversed(labels))
    canon = min(labels, rev)
    out = []
    if n == 1:
        return [("A", (1,), "A1")]
    if all(m == 3 for m in canon):
        return [("A", (n,), "A%d" % n)]
    if n == 2:
        m = labels[0]
        if m == 4:
            return [("B", (2,), "B2"), ("I2", (4,), "I2(4)")]
        return [("I2", (m,), "I2(%d)" % m)]
    fours = [i for i, m in enumerate(canon) if m == 4]
    fives = [i for i, m in enumerate(canon) if m == 5]
    rest3 = all(m == 3 for i, m in enumerate(canon) if i not in fours + fives)
    if len(fours) == 1 and not fives and rest3:
        i = fours[0]
        r, s = sorted((i, len(canon) - 1 - i))
        if min(r, s) == 0:
            out.append(("B", (n,), "B%d" % n))
        else:
            fam = ("F", (r, s), _fmt("F", r, s))
            if (r, s) == (1, 1):
                out = [("F4", (), "F4"), fam]
            elif (r, s) == (1, 2):
                out = [fam, ("F~", (4,), "F~4")]
            else:
                out = [fam]
    elif len(fives) == 1 and not fours and rest3:
        i = fives[0]
        r, s = sorted((i, len(canon) - 1 - i), reverse=True)
        fam = ("H", (r, s), _fmt("H", r, s))
        if (r, s) == (1, 0):
            out = [("H3", (), "H3"), fam]
        elif (r, s) == (2, 0):
            out = [("H4", (), "H4"), fam]
        else:
            out = [fam]
    elif len(fours) == 2 and not fives and rest3 and fours == [0, len(canon) - 1]:
        out = [("C~", (n - 1,), "C~%d" % (n - 1))]
    return out


def _tripod_names(arms, all3):
    """arms: sorted-descending arm edge counts of a tripod."""
    out = []
    if not all3:
        return out
    r, s, t = arms
    fam = ("E", (r, s, t), _fmt("E", r, s, t))
    if (s, t) == (1, 1):
        # single long arm: classical D
        n = r + 3
        out = [("D", (n,), "D%d" % n), fam]
    elif (r, s, t) == (2, 2, 1):
        out = [("E6", (), "E6"), fam]
    elif (r, s, t) == (3, 2, 1):
        out = [("E7", (), "E7"), fam]
    elif (r, s, t) == (4, 2, 1):
        out = [("E8", (), "E8"), fam]
    else:
        out = [fam]
        if (r, s, t) == (2, 2, 2):
            out.append(("E~", (6,), "E~6"))
        elif (r, s, t) == (3, 3, 1):
            out.append(("E~", (7,), "E~7"))
        elif (r, s, t) == (5, 2, 1):
            out.append(("E~", (8,), "E~8"))
    return out


def classify_family(d):
    """Recognize classical/affine shapes and the three one-heavy-edge or
    all-3-tripod families. Unrecognized diagrams get kind "other"."""
    if not d.vertices:
        return FamilyTag("other", (), ("other",))
    sh = shape(d)
    if not sh.is_connected or not sh.is_tree:
        return FamilyTag("other", (), ("other",))
    if sh.is_linear:
        labels = []
        seq = path_order(d)
        for i in range(len(seq) - 1):
            labels.append(d.label(seq[i], seq[i + 1]))
        names = _linear_names(labels)
        if names:
            kind, params, _ = names[0]
            return FamilyTag(kind, params, tuple(nm for _, _, nm in names))
        return FamilyTag("other", (), ("other",))
    if sh.is_tripod:
        all3 = all(m == 3 for m in d.edges.values())
        names = _tripod_names(tuple(_tripod_arms(d, sh)), all3)
        if not names and _is_btilde(d, sh):
            n = len(d.vertices) - 1
            names = [("B~", (n,), "B~%d" % n)]
        if names:
            kind, params, _ = names[0]
            return FamilyTag(kind, params, tuple(nm for _, _, nm in names))
        return FamilyTag("other", (), ("other",))
    # remaining trees: only the affine double-fork shape is named
    if all(m == 3 for m in d.edges.values()):
        tag = _double_fork_tag(d, sh)
        if tag is not None:
            return tag
    return FamilyTag("other", (), ("other",))


def _tripod_arms(d, sh):
    """Arm edge counts of a tripod, sorted descending."""
    center = next(v for v in d.vertices if sh.valence[v] == 3)
    arms = []
    for u in d.neighbors(center):
        prev, cur, cnt = center, u, 1
        while d.valence(cur) == 2:
            nxt = [w for w in d.neighbors(cur) if w != prev][0]
            prev, cur, cnt = cur, nxt, cnt + 1
        arms.append(cnt)
    arms.sort(reverse=True)
    return arms


def _double_fork_tag(d, sh):
    """Affine D shapes: either the 4-leaf star (5 vertices) or a path with a
    two-leaf fork at each end, all labels 3 (checked by the caller)."""
    if len(d.vertices) == 5 and len(sh.leaves) == 4:
        if sum(1 for v in d.vertices if sh.valence[v] == 4) == 1:
            return FamilyTag("D~", (4,), ("D~4",))
    branch = [v for v in d.vertices if sh.valence[v] == 3]
    if len(branch) != 2 or len(sh.leaves) != 4:
        return None
    if any(sh.valence[v] > 3 for v in d.vertices):
        return None
    a, b = branch
    mid = tree_path(d, a, b)
    if any(sh.valence[v] != 2 for v in mid[1:-1]):
        return None
    for x in (a, b):
        if sum(1 for u in d.neighbors(x) if sh.valence[u] == 1) != 2:
            return None
    n = len(d.vertices) - 1
    return FamilyTag("D~", (n,), ("D~%d" % n,))


def _is_btilde(d, sh):
    """B~n: a fork of two 3-labeled leaf edges, then an all-3 path whose far
    terminal edge is labeled exactly 4."""
    c = next(v for v in d.vertices if sh.valence[v] == 3)
    fork = [u for u in d.neighbors(c) if sh.valence[u] == 1 and d.label(u, c) == 3]
    tail = [u for u in d.neighbors(c) if u not in fork[:2]]
    if len(fork) < 2 or len(tail) != 1:
        return False
    seq = [c, tail[0]]
    while sh.valence[seq[-1]] == 2:
        nxt = [w for w in d.neighbors(seq[-1]) if w != seq[-2]][0]
        seq.append(nxt)
    inner = [d.label(seq[i], seq[i + 1]) for i in range(len(seq) - 2)]
    return all(m == 3 for m in inner) and d.label(seq[-2], seq[-1]) == 4


def tree_certificate(d):
    """Canonical string for a labeled tree: two trees get equal certificates
    iff some label-preserving bijection identifies them."""
    sh = shape(d)
    if not (sh.is_connected and sh.is_tree):
        raise DiagramError("certificate is defined for trees only")
    if not d.vertices:
        return "()"
    alive = set(d.vertices)
    deg = {v: d.valence(v) for v in d.vertices}
    while len(alive) > 2:
        drop = [v for v in alive if deg[v] <= 1]
        for v in drop:
            alive.discard(v)
            for u in d.neighbors(v):
                if u in alive:
                    deg[u] -= 1

    def rooted(v, parent):
        kids = sorted(
            "%d:%s" % (d.label(v, u), rooted(u, v))
            for u in d.neighbors(v)
            if u != parent
        )
        return "(" + ",".join(kids) + ")"

    return min(rooted(c, None) for c in sorted(alive, key=d.index))


_NON_ABI_KINDS = {"D", "E6", "E7", "E8", "F4", "H3", "H4"}
_SPHERICAL_KINDS = {"A", "B", "D", "I2", "E6", "E7", "E8", "F4", "H3", "H4"}


def is_spherical(d):
    """True iff every connected component is a classical finite shape."""
    return all(
        classify_family(induced_subdiagram(d, comp)).kind in _SPHERICAL_KINDS
        for comp in _components(d)
    )


def is_ABI(d):
    """True iff every induced connected spherical subdiagram is of type A, B
    or a single heavy edge. Returns (flag, witness) with witness = the
    smallest, lexicographically least violating vertex set (or None)."""
    pos = {v: i for i, v in enumerate(d.vertices)}
    n = len(d.vertices)
    for size in range(1, n + 1):
        for combo in itertools.combinations(d.vertices, size):
            sub = induced_subdiagram(d, combo)
            if len(_components(sub)) != 1:
                continue
            kind = classify_family(sub).kind
            if kind in _NON_ABI_KINDS:
                return False, tuple(sorted(combo, key=pos.__getitem__))
    return True, None
