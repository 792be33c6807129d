"""Up-down paths on ordered complexes that pass the hypothesis battery:
classification predicates, canonical paths via the directed-geodesic
translation, distance profiles, strip comparison, local convexity, and
triple-intersection experiments.

Every operation except star_subcomplex and triple_intersection_experiment
refuses instances whose battery report is negative; results on such
instances would assert nothing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import bihelly, complexes, poset


class NormalFormError(ValueError):
    pass


class GateError(NormalFormError):
    pass


# Battery reports and extremal subgraphs are cached per complex instance;
# the instance itself is kept in the value so ids are never recycled.
_GATE_CACHE = {}
_GRAPH_CACHE = {}


def gate_report(oc):
    """The cached hypothesis-battery report for an ordered complex."""
    hit = _GATE_CACHE.get(id(oc))
    if hit is not None and hit[0] is oc:
        return hit[1]
    report = complexes.ctilde_hypotheses(oc)
    _GATE_CACHE[id(oc)] = (oc, report)
    return report


def _gated(oc):
    report = gate_report(oc)
    if not report.ctilde_like:
        reasons = []
        if not report.partial_order:
            reasons.append("vertex relation is not a partial order")
        if report.upper_sets_ok is False:
            reasons.append("an upper set fails its battery checks")
        if report.lower_sets_ok is False:
            reasons.append("a lower set fails its battery checks")
        if report.simply_connected is False:
            reasons.append("not simply connected")
        raise GateError("hypothesis gate failed: %s" % "; ".join(reasons))
    return report


def _extremal_graph(oc):
    hit = _GRAPH_CACHE.get(id(oc))
    if hit is not None and hit[0] is oc:
        return hit[1]
    g = complexes.extremal_subgraph(oc)
    _GRAPH_CACHE[id(oc)] = (oc, g)
    return g


@dataclass(frozen=True)
class UpDownPath:
    """An alternating edge path; directions[i] is "+" for a rising step."""

    vertices: tuple
    directions: tuple

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]


def updown_path(oc, vertices):
    """Validate a vertex list as an up-down path and wrap it."""
    vs = tuple(vertices)
    if not vs:
        raise NormalFormError("a path needs at least one vertex")
    for v in vs:
        oc.base.index(v)
    dirs = []
    for a, b in zip(vs, vs[1:]):
        if not oc.base.adjacent(a, b):
            raise NormalFormError("%r and %r are not adjacent" % (a, b))
        dirs.append("+" if oc.less(a, b) else "-")
    for i in range(1, len(dirs)):
        if dirs[i] == dirs[i - 1]:
            raise NormalFormError("comparability fails to alternate at %r" % (vs[i],))
    return UpDownPath(vs, tuple(dirs))


def _as_vertices(oc, path):
    vs = tuple(path.vertices if isinstance(path, UpDownPath) else path)
    if not vs:
        raise NormalFormError("a path needs at least one vertex")
    c = oc.base
    for v in vs:
        c.index(v)
    for a, b in zip(vs, vs[1:]):
        if not c.adjacent(a, b):
            raise NormalFormError("%r and %r are not adjacent" % (a, b))
    return vs


@dataclass(frozen=True)
class PathReport:
    """Predicate flags for one path, read toward its last vertex."""

    up_down: bool
    tight: bool
    local_normal: bool
    normal: bool
    geodesic: bool
    witness: tuple | None


def _zigzag_blocked(p, iprev, icur, inext, rising):
    """True when no four-term detour exists through the relevant link.

    rising means the path enters icur from below (a peak); the search then
    runs in the lower link, dually for a valley.
    """
    bit = 1 << icur
    if rising:
        side = p.down[icur] & ~bit
        cand = side & p.up[iprev]
        for a2 in _bits(cand):
            if p.down[a2] & p.down[inext] & side:
                return False
    else:
        side = p.up[icur] & ~bit
        cand = side & p.down[iprev]
        for a2 in _bits(cand):
            if p.up[a2] & p.up[inext] & side:
                return False
    return True


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def path_classify(oc, path):
    """Evaluate the up-down, tight, locally normal and normal predicates."""
    _gated(oc)
    vs = _as_vertices(oc, path)
    c = oc.base
    p = oc.to_poset()
    n = len(vs)

    row = c.distances_from(vs[-1])
    geodesic = row[c.index(vs[0])] == n - 1

    witness = None
    up_down = True
    for i in range(1, n - 1):
        before_up = oc.less(vs[i - 1], vs[i])
        after_up = oc.less(vs[i], vs[i + 1])
        if before_up == after_up:
            up_down = False
            witness = ("up_down", i)
            break

    tight = up_down
    local_normal = up_down
    if up_down:
        for i in range(1, n - 1):
            rising = oc.less(vs[i - 1], vs[i])
            if rising:
                peak = poset.join(p, [vs[i - 1], vs[i + 1]])
            else:
                peak = poset.meet(p, [vs[i - 1], vs[i + 1]])
            if peak != vs[i]:
                tight = False
                break
        for i in range(1, n - 1):
            rising = oc.less(vs[i - 1], vs[i])
            ok = _zigzag_blocked(
                p, p.index[vs[i - 1]], p.index[vs[i]], p.index[vs[i + 1]], rising
            )
            if not ok:
                local_normal = False
                if witness is None:
                    witness = ("local_normal", i)
                break

    normal = up_down and geodesic
    if normal:
        for i in range(n - 1):
            want = n - i - 2
            nxt = vs[i + 1]
            rising = oc.less(vs[i], nxt)
            for y in c.neighbors(vs[i]):
                if row[c.index(y)] != want:
                    continue
                if rising and not oc.leq(nxt, y):
                    normal = False
                elif not rising and not oc.leq(y, nxt):
                    normal = False
                if not normal:
                    if witness is None:
                        witness = ("normal", i)
                    break
            if not normal:
                break

    return PathReport(up_down, tight, local_normal, normal, geodesic, witness)


def _assemble_vertex(oc, p, members):
    kinds = {oc.base.type_of(v) for v in members}
    if len(kinds) != 1:
        raise NormalFormError("mixed-type extremal set %r" % (sorted(map(str, members)),))
    lo, hi = oc.extremal_types()
    kind = kinds.pop()
    if kind == lo:
        out = poset.join(p, list(members))
    elif kind == hi:
        out = poset.meet(p, list(members))
    else:
        raise NormalFormError("set of non-extremal type %r" % (kind,))
    if out is None:
        raise bihelly.TheoryViolationError(
            "extremal set %r has no bound to assemble" % (sorted(map(str, members)),)
        )
    return out


def _extremal_fan(oc, g, v, below):
    if below:
        return [u for u in g.vertices if oc.leq(u, v)]
    return [u for u in g.vertices if oc.leq(v, u)]


def _translate_normal_form(oc, x, y, n):
    """The directed-geodesic route: fans in the extremal subgraph, then
    meets and joins back.  Faithful only where fans determine vertices."""
    c = oc.base
    g = _extremal_graph(oc)
    p = oc.to_poset()
    # an up-down path into an extremal target has forced step parity
    y_max = c.type_of(y) == oc.extremal_types()[1]
    first_step_rises = y_max == (n % 2 == 1)
    fan = _extremal_fan(oc, g, x, below=first_step_rises)
    try:
        start = bihelly.near_clique(g, fan)
    except ValueError as exc:
        raise bihelly.TheoryViolationError(
            "the extremal fan at %r is not a near-clique: %s" % (x, exc)
        ) from exc
    target = bihelly.near_clique(g, [y])
    ud = bihelly.uniform_distance(g, start, target)
    if ud != n:
        raise bihelly.TheoryViolationError(
            "extremal fan at %r sits at distance %r from %r, expected %d" % (x, ud, y, n)
        )
    seq = bihelly.directed_geodesic(g, start, target)
    verts = [_assemble_vertex(oc, p, K) for K in seq]
    if verts[0] != x:
        raise bihelly.TheoryViolationError(
            "fan assembly yields %r instead of %r" % (verts[0], x)
        )
    return updown_path(oc, verts)


def _search_normal_forms(oc, x, y, cap, stop_after=None):
    """All locally normal paths from x to y with at most cap edges, by
    depth-first extension with incremental zigzag pruning."""
    c = oc.base
    p = oc.to_poset()
    out = []
    prefix = [x]

    def extend():
        last = prefix[-1]
        if last == y and len(prefix) >= 2:
            out.append(tuple(prefix))
            return
        if len(prefix) > cap:
            return
        for nb in c.neighbors(last):
            if len(prefix) >= 2:
                prev = prefix[-2]
                rising = oc.less(prev, last)
                if rising == oc.less(last, nb):
                    continue
                if not _zigzag_blocked(
                    p, p.index[prev], p.index[last], p.index[nb], rising
                ):
                    continue
            prefix.append(nb)
            extend()
            prefix.pop()
            if stop_after is not None and len(out) >= stop_after:
                return

    extend()
    return out


def compute_normal_form(oc, x, y):
    """The locally normal path from x to the extremal vertex y.

    Built by translating the problem into the extremal subgraph: the fan of
    extremal vertices flanking x and the singleton at y span a directed
    geodesic there, whose terms convert back through meets and joins.  Where
    fan assembly is not faithful (vertices the battery report pins as not
    locally determined), the path is recovered by exhaustive search instead.
    Either way the result is verified locally normal and must be unique.
    """
    _gated(oc)
    c = oc.base
    c.index(x)
    c.index(y)
    if not oc.is_extremal(y):
        raise NormalFormError("target %r is not extremal" % (y,))
    if x == y:
        return UpDownPath((x,), ())
    if c.adjacent(x, y):
        return updown_path(oc, (x, y))

    row = c.distances_from(y)
    n = row[c.index(x)]
    if n < 0:
        raise NormalFormError("%r and %r are in different components" % (x, y))

    try:
        out = _translate_normal_form(oc, x, y, n)
        if path_classify(oc, out).local_normal and len(out) == n + 1:
            return out
    except bihelly.TheoryViolationError:
        pass
    found = _search_normal_forms(oc, x, y, n + 4, stop_after=2)
    if len(found) != 1:
        raise bihelly.TheoryViolationError(
            "expected one locally normal path from %r to %r, found %d"
            % (x, y, len(found))
        )
    return updown_path(oc, found[0])


def K_sequence(oc, path):
    """Extremal fans along a path, one near-clique per vertex.

    A vertex entered or left from below gets the fan above it, and
    conversely; up-down alternation makes the rule consistent at interior
    vertices.
    """
    _gated(oc)
    w = path if isinstance(path, UpDownPath) else updown_path(oc, path)
    if len(w) < 2:
        raise NormalFormError("a fan sequence needs at least one edge")
    g = _extremal_graph(oc)
    out = []
    for i, v in enumerate(w.vertices):
        rose_in = i > 0 and w.directions[i - 1] == "+"
        falls_out = i < len(w.directions) and w.directions[i] == "-"
        fan = _extremal_fan(oc, g, v, below=not (rose_in or falls_out))
        try:
            out.append(bihelly.near_clique(g, fan))
        except ValueError as exc:
            raise bihelly.TheoryViolationError(
                "the extremal fan at %r is not a near-clique: %s" % (v, exc)
            ) from exc
    return tuple(out)


def path_from_K(oc, seq):
    """Rebuild the up-down path whose fans are the given near-cliques."""
    _gated(oc)
    entries = [frozenset(K) for K in seq]
    if not entries:
        raise NormalFormError("an empty fan sequence rebuilds nothing")
    for K in entries:
        if not K:
            raise NormalFormError("fans must be non-empty")
    p = oc.to_poset()
    return updown_path(oc, [_assemble_vertex(oc, p, K) for K in entries])


@dataclass(frozen=True)
class BestvinaReport:
    """Distances from a fixed extremal observer along a path.

    pivot is the index where the strictly increasing tail begins; unimodal
    means the profile never rises before it and always rises after it.
    """

    distances: tuple
    unimodal: bool
    pivot: int
    plateau_in_decrease: bool


def bestvina_profile(oc, path, z):
    _gated(oc)
    w = path if isinstance(path, UpDownPath) else updown_path(oc, path)
    if not oc.is_extremal(z):
        raise NormalFormError("observer %r is not extremal" % (z,))
    report = path_classify(oc, w)
    if not report.local_normal:
        raise NormalFormError("path is not locally normal")
    c = oc.base
    row = c.distances_from(z)
    f = tuple(row[c.index(v)] for v in w.vertices)
    pivot = len(f) - 1
    for i in range(len(f) - 1):
        if f[i] < f[i + 1]:
            pivot = i
            break
    unimodal = all(f[i] >= f[i + 1] for i in range(pivot)) and all(
        f[i] < f[i + 1] for i in range(pivot, len(f) - 1)
    )
    plateau = any(f[i] == f[i + 1] for i in range(pivot))
    return BestvinaReport(f, unimodal, pivot, plateau)


@dataclass(frozen=True)
class StripReport:
    below: bool
    above: bool
    violation: bool


def strip_compare(oc, p1, p2):
    """Index-wise comparison of two normal paths out of a shared start.

    Both paths must be normal toward the shared extremal start, with far
    endpoints adjacent or equal and the first path no longer than the
    second.
    """
    _gated(oc)
    w1 = p1 if isinstance(p1, UpDownPath) else updown_path(oc, p1)
    w2 = p2 if isinstance(p2, UpDownPath) else updown_path(oc, p2)
    if w1.vertices[0] != w2.vertices[0]:
        raise NormalFormError("paths must share their first vertex")
    if not oc.is_extremal(w1.vertices[0]):
        raise NormalFormError("shared start %r is not extremal" % (w1.vertices[0],))
    if len(w1) > len(w2):
        raise NormalFormError("first path must be the shorter one")
    e1, e2 = w1.vertices[-1], w2.vertices[-1]
    if e1 != e2 and not oc.base.adjacent(e1, e2):
        raise NormalFormError("far endpoints must be adjacent or equal")
    for w in (w1, w2):
        if not path_classify(oc, tuple(reversed(w.vertices))).normal:
            raise NormalFormError("paths must be normal toward the shared start")
    pairs = list(zip(w1.vertices, w2.vertices))
    below = all(oc.leq(a, b) for a, b in pairs)
    above = all(oc.leq(b, a) for a, b in pairs)
    return StripReport(below, above, not (below or above))


@dataclass(frozen=True)
class ConvexityReport:
    length2_closed: bool
    length3_closed: bool
    locally_convex: bool
    witness: tuple | None


def local_convexity(oc, members):
    """Closure of a full type-complete subcomplex under tight link detours.

    Checks, at every member vertex and in both link directions, that tight
    length-2 and length-3 up-down paths with endpoints in the subcomplex
    stay inside it.
    """
    _gated(oc)
    c = oc.base
    vs = tuple(dict.fromkeys(members))
    if not vs:
        raise NormalFormError("the subcomplex needs at least one vertex")
    mset = set(vs)
    for v in vs:
        if not any(all(u in mset for u in ch) for ch in c.chambers_at(v)):
            raise NormalFormError("%r lies in no chamber inside the subcomplex" % (v,))

    p = oc.to_poset()
    length2 = True
    length3 = True
    witness = None

    for y in vs:
        for upward in (True, False):
            if upward:
                link = [v for v in c.neighbors(y) if oc.less(y, v)]
            else:
                link = [v for v in c.neighbors(y) if oc.less(v, y)]
            if len(link) < 2:
                continue
            sub = p.restrict(link)
            inside = [v for v in link if v in mset]

            for a1, a3 in itertools.combinations(inside, 2):
                for mid in (poset.join(sub, [a1, a3]), poset.meet(sub, [a1, a3])):
                    if mid is None or mid == a1 or mid == a3:
                        continue
                    if mid not in mset:
                        length2 = False
                        if witness is None:
                            witness = ("length2", y, (a1, mid, a3))

            # lower link hosts rise-first zigzags, upper link fall-first ones
            for a1, a4 in itertools.permutations(inside, 2):
                for a3 in link:
                    if upward:
                        if a3 == a4 or not sub.leq(a4, a3):
                            continue
                        a2 = poset.meet(sub, [a1, a3])
                        if a2 is None or a2 == a1 or a2 == a3:
                            continue
                        if poset.join(sub, [a2, a4]) != a3:
                            continue
                    else:
                        if a3 == a4 or not sub.leq(a3, a4):
                            continue
                        a2 = poset.join(sub, [a1, a3])
                        if a2 is None or a2 == a1 or a2 == a3:
                            continue
                        if poset.meet(sub, [a2, a4]) != a3:
                            continue
                    if a2 not in mset or a3 not in mset:
                        length3 = False
                        if witness is None:
                            witness = ("length3", y, (a1, a2, a3, a4))

    return ConvexityReport(length2, length3, length2 and length3, witness)


def star_subcomplex(c, x, types):
    """Vertices of the given types adjacent or equal to x, in index order."""
    c.index(x)
    wanted = tuple(dict.fromkeys(types))
    if not wanted:
        raise NormalFormError("at least one target type is required")
    for t in wanted:
        if t not in c.types:
            raise NormalFormError("unknown type %r" % (t,))
    keep = set(wanted)
    return tuple(
        v for v in c.vertices if c.type_of(v) in keep and (v == x or c.adjacent(v, x))
    )


@dataclass(frozen=True)
class TripleReport:
    triple_nonempty: bool
    intersection: tuple
    minimum: int
    minimizer: tuple
    degenerate: bool


def triple_intersection_experiment(oc, X1, X2, X3):
    """Minimize the perimeter over extremal corner triples of three stars.

    Corners live in the pairwise intersections; the report records the
    minimizing triple, whether some minimizer repeats a corner, and whether
    the triple intersection is non-empty.
    """
    c = oc.base
    stars = []
    for X in (X1, X2, X3):
        vs = tuple(dict.fromkeys(X))
        for v in vs:
            c.index(v)
        stars.append(vs)

    pools = []
    for i in range(3):
        b = set(stars[(i + 1) % 3])
        both = [v for v in stars[i] if v in b]
        if not both:
            raise NormalFormError("stars %d and %d do not meet" % (i + 1, (i + 1) % 3 + 1))
        pool = [v for v in both if oc.is_extremal(v)]
        if not pool:
            raise NormalFormError(
                "no extremal vertex where stars %d and %d meet" % (i + 1, (i + 1) % 3 + 1)
            )
        pools.append(pool)

    rows = {}
    for pool in pools:
        for v in pool:
            if v not in rows:
                rows[v] = c.distances_from(v)

    best = None
    minimizer = None
    degenerate = False
    for u1, u2, u3 in itertools.product(*pools):
        s = rows[u1][c.index(u2)] + rows[u2][c.index(u3)] + rows[u3][c.index(u1)]
        if best is None or s < best:
            best = s
            minimizer = (u1, u2, u3)
            degenerate = len({u1, u2, u3}) < 3
        elif s == best and not degenerate:
            degenerate = len({u1, u2, u3}) < 3

    common = set(stars[0]) & set(stars[1]) & set(stars[2])
    intersection = tuple(v for v in c.vertices if v in common)
    return TripleReport(bool(intersection), intersection, best, minimizer, degenerate)
