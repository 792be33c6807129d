"""Finite typed simplicial complexes: Coxeter complexes, relative complexes,
links, vertex orders, edge subdivisions, patterned cycles, thickenings, and
the hypothesis battery gating the normal-form machinery.

A complex of type S has one vertex of each type in every maximal simplex
(chamber), so all chambers share the dimension |S| - 1.  Everything here is
chamber data: adjacency, links, and subcomplexes are derived from it, and
construction insists the data is flag (maximal cliques of the 1-skeleton are
exactly the chambers).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from . import bihelly, coxeter, diagram, graphs, poset

# flag validation enumerates maximal cliques; above this chamber count the
# check is skipped unless explicitly requested, and the instance says so
FLAG_CHECK_LIMIT = 2000


class ComplexError(ValueError):
    pass


class TypedComplex:
    """Uniform-dimension simplicial complex with one vertex per type per
    chamber.  Vertices are (id, type) pairs; ids are arbitrary hashables.

    provenance records what is known about the underlying space, for the
    simple-connectivity field of the hypothesis report: "sphere" (a full
    Coxeter complex of its rank), "chamber-box" (a simply connected
    tessellation fragment), or "assumed".
    """

    def __init__(self, types, vertices, chambers, provenance="assumed", check_flag=None):
        self.types = tuple(types)
        if not self.types:
            raise ComplexError("need at least one type")
        if len(set(self.types)) != len(self.types):
            raise ComplexError("duplicate types")
        tindex = {t: i for i, t in enumerate(self.types)}
        self.vtype = {}
        ids = []
        for v, t in vertices:
            if v in self.vtype:
                raise ComplexError("duplicate vertex id %r" % (v,))
            if t not in tindex:
                raise ComplexError("vertex %r has unknown type %r" % (v, t))
            self.vtype[v] = t
            ids.append(v)
        self.vertices = tuple(ids)
        self._vindex = {v: i for i, v in enumerate(ids)}
        self.provenance = provenance

        chs = []
        seen = set()
        for ch in chambers:
            ch = list(ch)
            if len(ch) != len(self.types):
                raise ComplexError(
                    "chamber %r has %d vertices, need one per type (%d)"
                    % (ch, len(ch), len(self.types))
                )
            by_type = {}
            for v in ch:
                if v not in self.vtype:
                    raise ComplexError("chamber uses unknown vertex %r" % (v,))
                t = self.vtype[v]
                if t in by_type:
                    raise ComplexError("chamber %r repeats type %r" % (ch, t))
                by_type[t] = v
            canon = tuple(by_type[t] for t in self.types)
            if canon not in seen:
                seen.add(canon)
                chs.append(canon)
        self.chambers = tuple(chs)

        in_chamber = {v for ch in self.chambers for v in ch}
        for v in self.vertices:
            if v not in in_chamber:
                raise ComplexError(
                    "vertex %r lies in no chamber (maximal simplices must share a dimension)"
                    % (v,)
                )

        n = len(self.vertices)
        edges = set()
        for ch in self.chambers:
            idx = [self._vindex[v] for v in ch]
            for i, j in itertools.combinations(idx, 2):
                edges.add((min(i, j), max(i, j)))
        self._adj = graphs.adjacency_masks(n, sorted(edges))

        if check_flag is None:
            check_flag = len(self.chambers) <= FLAG_CHECK_LIMIT
        self.flag_checked = bool(check_flag)
        if check_flag:
            self._validate_flag()

    def _validate_flag(self):
        want = {frozenset(ch) for ch in self.chambers}
        try:
            cliques = graphs.maximal_cliques(self._adj, cap=len(self.chambers))
        except graphs.CliqueCapError:
            raise ComplexError("1-skeleton has more maximal cliques than chambers")
        got = {frozenset(self.vertices[i] for i in graphs.bit_indices(m)) for m in cliques}
        if got != want:
            bad = sorted(got - want, key=lambda s: sorted(map(self._vindex.get, s)))
            if bad:
                raise ComplexError(
                    "pairwise-adjacent set %r spans no chamber" % (sorted(bad[0], key=self._vindex.get),)
                )
            raise ComplexError("some chamber is not a maximal clique of the 1-skeleton")

    # -- accessors ---------------------------------------------------------

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.vtype

    def index(self, v):
        if v not in self._vindex:
            raise ComplexError("unknown vertex %r" % (v,))
        return self._vindex[v]

    def type_of(self, v):
        if v not in self.vtype:
            raise ComplexError("unknown vertex %r" % (v,))
        return self.vtype[v]

    def vertices_of_type(self, t):
        if t not in self.types:
            raise ComplexError("unknown type %r" % (t,))
        return tuple(v for v in self.vertices if self.vtype[v] == t)

    def adjacent(self, u, v):
        return bool(self._adj[self.index(u)] & (1 << self.index(v)))

    def neighbors(self, v):
        return tuple(self.vertices[i] for i in graphs.bit_indices(self._adj[self.index(v)]))

    def chambers_at(self, v):
        self.index(v)
        return tuple(ch for ch in self.chambers if v in ch)

    def distances_from(self, v):
        """BFS distances in the 1-skeleton, aligned with the vertex list.

        Unreachable vertices get -1.
        """
        return graphs.bfs_distances(self._adj, self.index(v))

    def to_json(self):
        def plain(x):
            return list(x) if isinstance(x, tuple) else x

        return json.dumps(
            {
                "types": [plain(t) for t in self.types],
                "vertices": [{"id": plain(v), "type": plain(self.vtype[v])} for v in self.vertices],
                "chambers": [[plain(v) for v in ch] for ch in self.chambers],
            },
            sort_keys=True,
        )


def complexes_isomorphic(c1, c2, type_map=None):
    """Type-preserving isomorphism test by backtracking on vertices.

    type_map sends c1 types to c2 types (identity by default).  Both inputs
    are flag on their data, so matching typed adjacency matches chambers.
    """
    if type_map is None:
        if set(c1.types) != set(c2.types):
            return False
        type_map = {t: t for t in c1.types}
    else:
        if set(type_map) != set(c1.types) or set(type_map.values()) != set(c2.types):
            return False
    if len(c1) != len(c2) or len(c1.chambers) != len(c2.chambers):
        return False
    for t in c1.types:
        if len(c1.vertices_of_type(t)) != len(c2.vertices_of_type(type_map[t])):
            return False

    deg1 = {v: len(c1.neighbors(v)) for v in c1.vertices}
    deg2 = {v: len(c2.neighbors(v)) for v in c2.vertices}
    order = sorted(c1.vertices, key=lambda v: (len(c1.vertices_of_type(c1.vtype[v])), c1.index(v)))
    mapping = {}
    used = set()

    def extend(k):
        if k == len(order):
            return True
        v = order[k]
        want_t = type_map[c1.vtype[v]]
        for w in c2.vertices_of_type(want_t):
            if w in used or deg1[v] != deg2[w]:
                continue
            ok = True
            for u, x in mapping.items():
                if c1.adjacent(v, u) != c2.adjacent(w, x):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used.add(w)
                if extend(k + 1):
                    return True
                del mapping[v]
                used.remove(w)
        return False

    return extend(0)


# -- construction ------------------------------------------------------------


def build_coxeter_complex(g):
    """Chamber complex of a finished group table.

    One vertex per coset of each maximal standard parabolic (type = the
    omitted generator); one chamber per group element, collecting the cosets
    through it.  Vertex ids are "generator:representative-index" strings.
    """
    gens = g.diagram.vertices
    if len(gens) < 1:
        raise ComplexError("group has no generators")
    reps = {}
    verts = []
    for s in gens:
        T = tuple(t for t in gens if t != s)
        for c in coxeter.cosets(g, T):
            verts.append(("%s:%d" % (s, c.representative), s))
        reps[s] = T
    chambers = []
    for w in range(g.size):
        ch = []
        for s in gens:
            r = coxeter.min_coset_rep(g, w, reps[s])
            ch.append("%s:%d" % (s, r))
        chambers.append(ch)
    return TypedComplex(gens, verts, chambers, provenance="sphere")


def relative_complex(c, keep):
    """Induced subcomplex on a subset of types; chambers become the traces
    of the original chambers (deduplicated)."""
    keep = set(keep)
    if not keep:
        raise ComplexError("need at least one type")
    for t in keep:
        if t not in c.types:
            raise ComplexError("unknown type %r" % (t,))
    types = tuple(t for t in c.types if t in keep)
    verts = [(v, c.vtype[v]) for v in c.vertices if c.vtype[v] in keep]
    chambers = [[v for v in ch if c.vtype[v] in keep] for ch in c.chambers]
    return TypedComplex(types, verts, chambers)


def vertex_link(c, v):
    """The link of a vertex, typed over the remaining types."""
    t0 = c.type_of(v)
    types = tuple(t for t in c.types if t != t0)
    if not types:
        raise ComplexError("link of a vertex in a rank-1 complex is empty")
    nbr = set(c.neighbors(v))
    verts = [(u, c.vtype[u]) for u in c.vertices if u in nbr]
    chambers = [[u for u in ch if u != v] for ch in c.chambers if v in ch]
    return TypedComplex(types, verts, chambers)


# -- vertex orders -----------------------------------------------------------


class OrderedComplex:
    """A typed complex with a total order on its types and the induced
    vertex relation: x < y iff x, y adjacent and the type of x comes first.

    is_partial_order reports whether that relation is already transitive
    (antisymmetry cannot fail: chains ascend strictly through the types).
    """

    def __init__(self, base, order, sufficient_condition=None):
        self.base = base
        self.order = tuple(order)
        self.sufficient_condition = sufficient_condition
        pos = {t: i for i, t in enumerate(self.order)}
        n = len(base.vertices)
        up = [0] * n
        for i, v in enumerate(base.vertices):
            mask = base._adj[i]
            for j in graphs.bit_indices(mask):
                w = base.vertices[j]
                if pos[base.vtype[v]] < pos[base.vtype[w]]:
                    up[i] |= 1 << j
        self._up = up
        transitive = True
        for i in range(n):
            probe = up[i]
            while probe and transitive:
                j = (probe & -probe).bit_length() - 1
                probe &= probe - 1
                if up[j] & ~up[i]:
                    transitive = False
            if not transitive:
                break
        self.is_partial_order = transitive
        # cycles would need a strictly ascending return through the types
        closure = list(up)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = closure[i]
                probe = acc
                while probe:
                    j = (probe & -probe).bit_length() - 1
                    probe &= probe - 1
                    acc |= closure[j]
                if acc != closure[i]:
                    closure[i] = acc
                    changed = True
        self.closure_antisymmetric = all(
            not (closure[i] & (1 << j) and closure[j] & (1 << i))
            for i in range(n)
            for j in graphs.bit_indices(closure[i])
            if i != j
        )
        self._poset = None

    def less(self, u, w):
        return bool(self._up[self.base.index(u)] & (1 << self.base.index(w)))

    def leq(self, u, w):
        return u == w or self.less(u, w)

    @property
    def relation_pairs(self):
        vs = self.base.vertices
        return tuple(
            (vs[i], vs[j])
            for i in range(len(vs))
            for j in graphs.bit_indices(self._up[i])
        )

    def extremal_types(self):
        return (self.order[0], self.order[-1])

    def is_extremal(self, v):
        return self.base.vtype[v] in self.extremal_types()

    def to_poset(self):
        """The vertex relation as a ranked poset (rank = type position)."""
        if not self.is_partial_order:
            raise ComplexError("vertex relation is not transitive")
        if self._poset is None:
            pos = {t: i + 1 for i, t in enumerate(self.order)}
            self._poset = poset.RankedPoset(
                self.base.vertices,
                [pos[self.base.vtype[v]] for v in self.base.vertices],
                self.relation_pairs,
            )
        return self._poset


def order_relation(c, order, ambient=None):
    """Order the types of c and derive the vertex relation.

    With ambient (the diagram the types came from), also evaluates the
    sufficient condition for transitivity: the types span an admissible
    linear subdiagram traversed in path order.
    """
    order = tuple(order)
    if sorted(map(str, order)) != sorted(map(str, c.types)) or set(order) != set(c.types):
        raise ComplexError("order must list exactly the types of the complex")
    hint = None
    if ambient is not None:
        from . import taxonomy

        sub = diagram.induced_subdiagram(ambient, c.types)
        sh = diagram.shape(sub)
        hint = False
        if sh.is_linear:
            seq = diagram.path_order(sub)
            if list(order) in (seq, seq[::-1]):
                hint = bool(taxonomy.is_admissible(ambient, c.types))
    return OrderedComplex(c, order, sufficient_condition=hint)


def complete_4cycle(c, x1, x2, x3, x4):
    """Least vertex of the last corner's type meeting the other three
    corners (adjacent or equal), or None.

    Consecutive corners, cyclically, must be adjacent or equal.
    """
    cyc = (x1, x2, x3, x4)
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        if a != b and not c.adjacent(a, b):
            raise ComplexError("%r and %r are neither adjacent nor equal" % (a, b))
    want = c.type_of(x4)
    for y in c.vertices_of_type(want):
        if all(y == x or c.adjacent(y, x) for x in (x1, x2, x3)):
            return y
    return None


# -- subdivisions ------------------------------------------------------------


class SubdividedComplex:
    """An edge subdivision of a typed complex, retyped by its level map.

    complex is the subdivided TypedComplex whose types are the integer
    levels; fake maps each midpoint id to the edge it subdivides; tau_base
    maps original types to levels.
    """

    def __init__(self, base, scheme, cx, fake, tau_base):
        self.base = base
        self.scheme = scheme
        self.complex = cx
        self.fake = fake
        self.tau_base = tau_base

    def tau(self, v):
        return self.complex.type_of(v)

    def to_json(self):
        def plain(x):
            return list(x) if isinstance(x, tuple) else x

        obj = json.loads(self.complex.to_json())
        obj["fake"] = [
            {"id": plain(v), "edge": [plain(a) for a in edge], "tau": self.complex.vtype[v]}
            for v, edge in sorted(self.fake.items(), key=lambda kv: self.complex.index(kv[0]))
        ]
        return json.dumps(obj, sort_keys=True)


def subdivide_B(c, b1, b2):
    """Insert a level-2 midpoint on every (b1, b2)-edge and cut each chamber
    in two through it.

    The two named types become level 1; the remaining types, in universe
    order, become levels 3, 4, ....
    """
    if b1 not in c.types or b2 not in c.types:
        raise ComplexError("types %r, %r must be in the complex" % (b1, b2))
    if b1 == b2:
        raise ComplexError("the two subdivided types must differ")
    rest = [t for t in c.types if t not in (b1, b2)]
    tau_base = {b1: 1, b2: 1}
    for k, t in enumerate(rest):
        tau_base[t] = k + 3
    levels = tuple(range(1, len(c.types) + 1))

    verts = [(v, tau_base[c.vtype[v]]) for v in c.vertices]
    fake = {}
    chambers = []
    for ch in c.chambers:
        u = next(v for v in ch if c.vtype[v] == b1)
        w = next(v for v in ch if c.vtype[v] == b2)
        mid = ("m", u, w)
        if mid not in fake:
            fake[mid] = (u, w)
            verts.append((mid, 2))
        others = [v for v in ch if v not in (u, w)]
        chambers.append([u, mid] + others)
        chambers.append([w, mid] + others)
    cx = TypedComplex(levels, verts, chambers, provenance=c.provenance)
    return SubdividedComplex(c, ("B", (b1, b2)), cx, fake, tau_base)


def subdivide_D(c, a1, a2, c1, c2):
    """Insert midpoints on (a1, a2)- and (c1, c2)-edges and cut each chamber
    into four.

    Levels: the a-pair 1, a-midpoints 2, remaining types 3..n+2 in universe
    order, c-midpoints n+3, the c-pair n+4.
    """
    named = (a1, a2, c1, c2)
    if len(set(named)) != 4:
        raise ComplexError("the four fork types must be distinct")
    for t in named:
        if t not in c.types:
            raise ComplexError("type %r is not in the complex" % (t,))
    rest = [t for t in c.types if t not in named]
    if not rest:
        raise ComplexError("need at least one type between the two forks")
    n = len(rest)
    tau_base = {a1: 1, a2: 1, c1: n + 4, c2: n + 4}
    for k, t in enumerate(rest):
        tau_base[t] = k + 3
    levels = tuple(range(1, n + 5))

    verts = [(v, tau_base[c.vtype[v]]) for v in c.vertices]
    fake = {}
    chambers = []
    for ch in c.chambers:
        ua = next(v for v in ch if c.vtype[v] == a1)
        wa = next(v for v in ch if c.vtype[v] == a2)
        uc = next(v for v in ch if c.vtype[v] == c1)
        wc = next(v for v in ch if c.vtype[v] == c2)
        mid_a = ("a", ua, wa)
        mid_c = ("c", uc, wc)
        if mid_a not in fake:
            fake[mid_a] = (ua, wa)
            verts.append((mid_a, 2))
        if mid_c not in fake:
            fake[mid_c] = (uc, wc)
            verts.append((mid_c, n + 3))
        others = [v for v in ch if v not in (ua, wa, uc, wc)]
        for va in (ua, wa):
            for vc in (uc, wc):
                chambers.append([va, mid_a, mid_c, vc] + others)
    cx = TypedComplex(levels, verts, chambers, provenance=c.provenance)
    return SubdividedComplex(c, ("D", named), cx, fake, tau_base)


# -- labeled 4-cycles --------------------------------------------------------


def _check_tree_types(d, types):
    for t in types:
        if t not in d.vertices:
            raise ComplexError("type %r is not a diagram vertex" % (t,))
    sub = diagram.induced_subdiagram(d, types)
    if not diagram.shape(sub).is_tree:
        raise ComplexError("the types must span a tree subdiagram")
    return sub


def _induced_4cycles(c):
    """Induced 4-cycles (x1, x2, x3, x4), canonicalized: x1 least overall,
    diagonals {x1,x3}, {x2,x4} non-adjacent, x2 < x4."""
    vs = c.vertices
    n = len(vs)
    out = []
    for i in range(n):
        for k in range(i + 1, n):
            if c._adj[i] & (1 << k):
                continue
            common = c._adj[i] & c._adj[k]
            cand = [j for j in graphs.bit_indices(common) if j > i]
            for a, b in itertools.combinations(cand, 2):
                if c._adj[a] & (1 << b):
                    continue
                out.append((vs[i], vs[a], vs[k], vs[b]))
    return out


def _smallest_subtree(sub, types):
    span = set()
    ts = sorted(set(types), key=sub.vertices.index)
    for a in ts:
        span.update(diagram.tree_path(sub, ts[0], a))
    # widen to the union of all pairwise paths (tree: same set, kept cheap)
    for a, b in itertools.combinations(ts, 2):
        span.update(diagram.tree_path(sub, a, b))
    return span


@dataclass(frozen=True)
class LabeledFourCycleReport:
    """Direct induced-4-cycle centering versus the per-line poset route."""

    direct_holds: bool
    failing_cycles: tuple
    cycles_checked: int
    line_route_holds: bool
    lines: tuple
    agreement: bool

    def __bool__(self):
        return self.direct_holds and self.line_route_holds


def labeled_4cycle_check(c, ambient, witness_cap=8):
    """Check that induced 4-cycles close up over the spanning subtree.

    Direct route: every induced 4-cycle has a vertex adjacent to all four
    corners whose type lies in the smallest subtree containing the corner
    types.  Second route: for every maximal linear subdiagram of the type
    tree, the path-ordered relative complex is a bowtie-free poset.  The two
    verdicts are reported together with their agreement.
    """
    sub = _check_tree_types(ambient, c.types)
    failing = []
    cycles = _induced_4cycles(c)
    for cyc in cycles:
        span = _smallest_subtree(sub, [c.vtype[x] for x in cyc])
        found = None
        for y in c.vertices:
            if c.vtype[y] in span and all(c.adjacent(y, x) for x in cyc):
                found = y
                break
        if found is None and len(failing) < witness_cap:
            failing.append(cyc)
    direct = not failing

    lines = []
    route = True
    sh = diagram.shape(sub)
    if len(sub.vertices) == 1:
        leaf_pairs = [(sub.vertices[0], sub.vertices[0])]
    else:
        leaf_pairs = list(itertools.combinations(sh.leaves, 2))
    for a, b in leaf_pairs:
        line = tuple(diagram.tree_path(sub, a, b))
        rc = relative_complex(c, line)
        oc = order_relation(rc, line)
        if not oc.is_partial_order:
            lines.append((line, None))
            route = False
            continue
        verdict = poset.check(oc.to_poset(), "bowtie_free")
        lines.append((line, bool(verdict)))
        route = route and bool(verdict)

    return LabeledFourCycleReport(
        direct_holds=direct,
        failing_cycles=tuple(failing),
        cycles_checked=len(cycles),
        line_route_holds=route,
        lines=tuple(lines),
        agreement=direct == route,
    )


# -- patterned cycles --------------------------------------------------------


@dataclass(frozen=True)
class SpecialCycleItem:
    """One patterned cycle with its centering status.

    center: for the 4-cycle kinds, a vertex meeting all corners; for the
    6-cycle kind, a vertex adjacent to the three base-type corners.
    qualified: whether a base/leaf subdiagram ruling applies to the types
    (6-cycles); patterned 4-cycles are unconditionally qualified.
    chord: tripod pattern only, the two corners of repeated type are the
    pair checked for adjacency, and chord records the x1 x3 shortcut.
    """

    kind: str
    cycle: tuple
    cycle_types: tuple
    qualified: bool
    qualifications: tuple
    center: object
    chord: bool
    allowed_center_types: tuple


def _base_leaf_rulings(d):
    """All (family, vertices, base, leaves) readings of induced subdiagrams
    where a base vertex and non-base leaves are distinguished.

    Linear subdiagrams with a heavy terminal edge: base opposite that edge
    (either vertex on two vertices).  All-label-3 fork subdiagrams: base the
    far leaf (any leaf when the three arms tie; the interior vertex on three
    vertices, where the shape is a bare path).
    """
    out = []
    vs = list(d.vertices)
    for r in range(2, len(vs) + 1):
        for combo in itertools.combinations(vs, r):
            sub = diagram.induced_subdiagram(d, combo)
            sh = diagram.shape(sub)
            if not sh.is_tree:
                continue
            if sh.is_linear and len(combo) >= 2:
                seq = diagram.path_order(sub)
                first_heavy = sub.label(seq[0], seq[1]) >= 4
                last_heavy = sub.label(seq[-2], seq[-1]) >= 4
                if len(combo) == 2:
                    if first_heavy:
                        out.append(("B", tuple(seq), seq[0], (seq[1],)))
                        out.append(("B", tuple(seq), seq[1], (seq[0],)))
                else:
                    if last_heavy:
                        out.append(("B", tuple(seq), seq[0], (seq[-1],)))
                    if first_heavy:
                        out.append(("B", tuple(seq[::-1]), seq[-1], (seq[0],)))
            if all(m == 3 for _, _, m in sub.edge_list):
                if sh.is_linear and len(combo) == 3:
                    seq = diagram.path_order(sub)
                    out.append(("D", tuple(seq), seq[1], (seq[0], seq[2])))
                elif sh.is_tripod:
                    hub = next(v for v in sub.vertices if sh.valence[v] == 3)
                    arms = sorted(
                        sh.leaves, key=lambda l: diagram.tree_distance(sub, hub, l)
                    )
                    far = diagram.tree_distance(sub, hub, arms[-1])
                    near = diagram.tree_distance(sub, hub, arms[0])
                    if near == far == 1:
                        for base in sh.leaves:
                            rest = tuple(l for l in sh.leaves if l != base)
                            out.append(("D", tuple(sub.vertices), base, rest))
                    elif sum(1 for l in sh.leaves if diagram.tree_distance(sub, hub, l) == 1) == 2:
                        base = arms[-1]
                        rest = tuple(l for l in sh.leaves if l != base)
                        out.append(("D", tuple(sub.vertices), base, rest))
    return out


def _common_neighbors(c, xs):
    mask = (1 << len(c.vertices)) - 1
    for x in xs:
        mask &= c._adj[c.index(x)]
    return [c.vertices[i] for i in graphs.bit_indices(mask)]


def special_cycles(c, ambient, kind):
    """Patterned embedded cycles with their center searches.

    special4: alternating two-type 4-cycles, center adjacent to all four.
    special6: 6-cycles alternating one base type with three others; the
    quasi-center only has to meet the three base-type corners, and each item
    says whether a base/leaf subdiagram ruling qualifies its types.
    tripod4: 4-cycles whose types are the three leaves of a fork subdiagram
    with the repeated type opposite itself; centers are constrained to the
    hub-to-repeated-leaf segment.
    """
    for t in c.types:
        if t not in ambient.vertices:
            raise ComplexError("type %r is not a diagram vertex" % (t,))
    items = []
    if kind == "special4":
        for s, t in itertools.combinations(c.types, 2):
            ss = c.vertices_of_type(s)
            for x1, x3 in itertools.combinations(ss, 2):
                both = [y for y in _common_neighbors(c, (x1, x3)) if c.vtype[y] == t]
                for x2, x4 in itertools.combinations(both, 2):
                    cyc = (x1, x2, x3, x4)
                    found = None
                    for y in _common_neighbors(c, cyc):
                        found = y
                        break
                    items.append(
                        SpecialCycleItem(
                            kind, cyc, (s, t, s, t), True, (), found, False, ()
                        )
                    )
        return tuple(items)

    if kind == "special6":
        rulings = _base_leaf_rulings(ambient)
        for s in c.types:
            ss = c.vertices_of_type(s)
            for y1, y2, y3 in itertools.combinations(ss, 3):
                n12 = _common_neighbors(c, (y1, y2))
                n23 = _common_neighbors(c, (y2, y3))
                n31 = _common_neighbors(c, (y3, y1))
                for x2 in n12:
                    for x4 in n23:
                        if x4 == x2:
                            continue
                        for x6 in n31:
                            if x6 in (x2, x4):
                                continue
                            cyc = (y1, x2, y2, x4, y3, x6)
                            ts = tuple(c.vtype[v] for v in cyc)
                            quals = tuple(
                                (fam, span, base, leaves)
                                for fam, span, base, leaves in rulings
                                if base == s and {ts[1], ts[3], ts[5]} <= set(leaves)
                            )
                            found = None
                            for y in _common_neighbors(c, (y1, y2, y3)):
                                found = y
                                break
                            items.append(
                                SpecialCycleItem(
                                    kind, cyc, ts, bool(quals), quals, found, False, ()
                                )
                            )
        return tuple(items)

    if kind == "tripod4":
        sub = _check_tree_types(ambient, c.types)
        sh = diagram.shape(sub)
        forks = []
        for combo in itertools.combinations(c.types, 3):
            span = _smallest_subtree(sub, combo)
            spansub = diagram.induced_subdiagram(sub, sorted(span, key=sub.vertices.index))
            spsh = diagram.shape(spansub)
            if spsh.is_tripod and set(spsh.leaves) == set(combo):
                hub = next(v for v in spansub.vertices if spsh.valence[v] == 3)
                forks.append((combo, spansub, hub))
        for combo, spansub, hub in forks:
            for a2 in combo:
                a1, a3 = (t for t in combo if t != a2)
                allowed = tuple(diagram.tree_path(spansub, hub, a2))
                for x2, x4 in itertools.combinations(c.vertices_of_type(a2), 2):
                    both = _common_neighbors(c, (x2, x4))
                    for x1 in (y for y in both if c.vtype[y] == a1):
                        for x3 in (y for y in both if c.vtype[y] == a3):
                            cyc = (x1, x2, x3, x4)
                            chord = c.adjacent(x1, x3)
                            found = None
                            for y in c.vertices:
                                if c.vtype[y] in allowed and all(
                                    y == x or c.adjacent(y, x) for x in cyc
                                ):
                                    found = y
                                    break
                            items.append(
                                SpecialCycleItem(
                                    kind,
                                    cyc,
                                    (a1, a2, a3, a2),
                                    True,
                                    (),
                                    found,
                                    chord,
                                    allowed,
                                )
                            )
        return tuple(items)

    raise ComplexError("unknown cycle kind %r" % (kind,))


# -- thickening and extremal subgraph ---------------------------------------


@dataclass(frozen=True)
class ThickeningGraph:
    """Same vertices as the complex; edges join vertices sharing a minimal-
    type lower bound and a maximal-type upper bound."""

    vertices: tuple
    edges: tuple

    def adjacent(self, u, v):
        return (u, v) in self._edge_set or (v, u) in self._edge_set

    @property
    def _edge_set(self):
        return set(self.edges)


def thickening(oc):
    if not oc.is_partial_order:
        raise ComplexError("vertex relation is not a partial order")
    p = oc.to_poset()
    base = oc.base
    lo, hi = oc.extremal_types()
    lo_mask = 0
    hi_mask = 0
    for i, v in enumerate(base.vertices):
        if base.vtype[v] == lo:
            lo_mask |= 1 << i
        elif base.vtype[v] == hi:
            hi_mask |= 1 << i
    below = []
    above = []
    for v in base.vertices:
        i = p.index[v]
        below.append(p.down[i] & lo_mask)
        above.append(p.up[i] & hi_mask)
    edges = []
    n = len(base.vertices)
    for i in range(n):
        for j in range(i + 1, n):
            if below[i] & below[j] and above[i] & above[j]:
                edges.append((base.vertices[i], base.vertices[j]))
    return ThickeningGraph(tuple(base.vertices), tuple(edges))


def extremal_subgraph(oc):
    """The induced 1-skeleton on the two extremal types, as a bipartite
    graph ready for the half-ball machinery."""
    if not oc.is_partial_order:
        raise ComplexError("vertex relation is not a partial order")
    base = oc.base
    lo, hi = oc.extremal_types()
    keep = [v for v in base.vertices if base.vtype[v] in (lo, hi)]
    edges = [
        (u, w)
        for u, w in itertools.combinations(keep, 2)
        if base.adjacent(u, w)
    ]
    return bihelly.BipartiteGraph(keep, edges)


# -- hypothesis battery ------------------------------------------------------


@dataclass(frozen=True)
class CtildeReport:
    """Outcome of the contractibility-criterion hypothesis battery.

    simply_connected is True/False when the provenance decides it and the
    string "assumed" otherwise; no checker is attempted.  ctilde_like means
    the three order hypotheses hold and simple connectivity is not known to
    fail.  normal_form_ready additionally requires locally_determined.
    """

    partial_order: bool
    upper_sets_ok: object
    lower_sets_ok: object
    upper_failures: tuple
    lower_failures: tuple
    locally_determined: object
    locally_determined_failures: tuple
    global_bowtie_free: object
    global_flag: object
    simply_connected: object
    ctilde_like: bool
    normal_form_ready: bool


def _provenance_sc(base):
    if base.provenance == "sphere":
        return len(base.types) >= 3
    if base.provenance == "chamber-box":
        return True
    return "assumed"


def ctilde_hypotheses(oc, witness_cap=8):
    base = oc.base
    sc = _provenance_sc(base)
    if not oc.is_partial_order:
        return CtildeReport(
            partial_order=False,
            upper_sets_ok=None,
            lower_sets_ok=None,
            upper_failures=(),
            lower_failures=(),
            locally_determined=None,
            locally_determined_failures=(),
            global_bowtie_free=None,
            global_flag=None,
            simply_connected=sc,
            ctilde_like=False,
            normal_form_ready=False,
        )
    p = oc.to_poset()
    upper_failures = []
    lower_failures = []
    for v in base.vertices:
        up = p.restrict(p.upset(v))
        for prop in ("bowtie_free", "upward_flag"):
            if not poset.check(up, prop):
                if len(upper_failures) < witness_cap:
                    upper_failures.append((v, prop))
        down = p.restrict(p.downset(v))
        for prop in ("bowtie_free", "downward_flag"):
            if not poset.check(down, prop):
                if len(lower_failures) < witness_cap:
                    lower_failures.append((v, prop))
    upper_ok = not upper_failures
    lower_ok = not lower_failures

    extremal = set(oc.extremal_types())
    ext = [v for v in base.vertices if base.vtype[v] in extremal]
    ld_failures = []
    for x, y in oc.relation_pairs:
        ok_up = any(
            oc.less(x, y2) and not (p.leq(y2, y) or p.leq(y, y2)) for y2 in ext
        )
        ok_down = ok_up and any(
            oc.less(x2, y) and not (p.leq(x2, x) or p.leq(x, x2)) for x2 in ext
        )
        if not ok_down:
            if len(ld_failures) < witness_cap:
                ld_failures.append((x, y))
    locally_determined = not ld_failures

    gb = bool(poset.check(p, "bowtie_free"))
    gf = bool(poset.check(p, "upward_flag")) and bool(poset.check(p, "downward_flag"))

    ctilde = upper_ok and lower_ok and sc is not False
    return CtildeReport(
        partial_order=True,
        upper_sets_ok=upper_ok,
        lower_sets_ok=lower_ok,
        upper_failures=tuple(upper_failures),
        lower_failures=tuple(lower_failures),
        locally_determined=locally_determined,
        locally_determined_failures=tuple(ld_failures),
        global_bowtie_free=gb,
        global_flag=gf,
        simply_connected=sc,
        ctilde_like=ctilde,
        normal_form_ready=bool(ctilde and locally_determined),
    )


# -- explicit tessellation fragments -----------------------------------------


def chamber_box(k1, k2):
    """A k1 x k2 block of unit squares, each cut along one diagonal, typed
    by coordinate parity.

    Squares alternate which diagonal is cut (checkerboard by corner parity),
    which makes every triangle carry one vertex of each parity class:
    both-even ("t1"), mixed ("t2"), both-odd ("t3").  The fragment is simply
    connected by construction, and the natural order is t1 < t2 < t3.
    """
    if k1 < 1 or k2 < 1:
        raise ComplexError("box needs at least one square per side")

    def tname(x, y):
        if x % 2 == 0 and y % 2 == 0:
            return "t1"
        if x % 2 == 1 and y % 2 == 1:
            return "t3"
        return "t2"

    verts = [((x, y), tname(x, y)) for x in range(k1 + 1) for y in range(k2 + 1)]
    chambers = []
    for x in range(k1):
        for y in range(k2):
            a = (x, y)
            b = (x + 1, y)
            cc = (x + 1, y + 1)
            dd = (x, y + 1)
            if (x + y) % 2 == 0:
                chambers.append([a, b, cc])
                chambers.append([a, dd, cc])
            else:
                chambers.append([a, b, dd])
                chambers.append([b, cc, dd])
    return TypedComplex(("t1", "t2", "t3"), verts, chambers, provenance="chamber-box")
