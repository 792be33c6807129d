"""Subdiagram taxonomy over tree diagrams.

Grades heavy-tailed line and fork seeds (atomicity), recognizes the three
affine heavy shapes (both-ends-heavy lines, heavy-tailed forks, all-3 double
forks) and their induced occurrences, decides whether a tree avoids all such
cores, grows a core from an atomic seed by a nearest-feature search, and
emits reduction certificates that partition a forest's core-free connected
subdiagrams into settled cases and open obligations.

Everything here enumerates induced subdiagrams, so it is intended for the
small diagrams the rest of the package works with.

Vertex conventions for the recognized shapes, as stored in LikeSubdiagram:

* "B-like": path s_1 .. s_n, the terminal edge (s_{n-1}, s_n) has label >= 4.
* "C~-like": path with labels >= 4 on both terminal edges.
* "D-like": (b_1, b_2, b_3, .., b_q); b_1, b_2 are the fork leaves, b_3 the
  branch vertex, b_4 .. b_q the tail (for q = 3 the "fork" degenerates to the
  two ends of a 2-edge path, b_3 is its midpoint).
* "B~-like": D shape, q >= 4, with label >= 4 on the terminal tail edge.
* "D~-like": (a_1, a_2, b_1, .., b_k, c_1, c_2), a two-leaf fork at each end
  of a path (k = 1 gives the 4-leaf star).

Orientations are canonical: lines take the lexicographically least valid
orientation in diagram vertex order, fork pairs are sorted, and a double
fork puts the side with the least leaf first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .diagram import (
    _components,
    classify_family,
    dominates,
    induced_subdiagram,
    is_ABI,
    linear_diagram,
    make_diagram,
    path_order,
    shape,
    tree_certificate,
    tree_path,
)
from .poset import Verdict


class TaxonomyError(ValueError):
    pass


LIKE_KINDS = ("B-like", "D-like", "C~-like", "B~-like", "D~-like")
CORE_KINDS = ("C~-like", "B~-like", "D~-like")

_MIN_SIZE = {"B-like": 2, "D-like": 3, "C~-like": 3, "B~-like": 4, "D~-like": 5}


@dataclass(frozen=True)
class LikeSubdiagram:
    """A recognized occurrence of one of the five shapes.

    vertices are in the conventional order for the kind (module docstring);
    base_vertex is the distinguished vertex used to anchor cycle searches, or
    None for kinds/sizes that have no canonical one.
    """

    kind: str
    vertices: tuple
    base_vertex: object = None

    @property
    def subscript(self):
        n = len(self.vertices)
        return n if self.kind in ("B-like", "D-like") else n - 1

    @property
    def name(self):
        return "%s%d-like" % (self.kind[:-5], self.subscript)

    @property
    def vertex_set(self):
        return frozenset(self.vertices)


# -- validation ------------------------------------------------------------


def _require_vertices(d, vs):
    known = set(d.vertices)
    for v in vs:
        if v not in known:
            raise TaxonomyError("unknown vertex %r" % (v,))


def _sorted_vs(d, vs):
    vs = tuple(vs)
    _require_vertices(d, vs)
    if len(set(vs)) != len(vs):
        raise TaxonomyError("duplicate vertex in %r" % (vs,))
    return tuple(sorted(vs, key=d.index))


def _expected_edges(kind, vs):
    """Index pairs that must be edges for each shape; everything else must be
    a non-edge (the occurrence is induced)."""
    q = len(vs)
    if kind in ("B-like", "C~-like"):
        return [(i, i + 1) for i in range(q - 1)]
    if kind in ("D-like", "B~-like"):
        return [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, q - 1)]
    # D~-like: fork at position 2 and at position q - 3
    out = [(0, 2), (1, 2)]
    out += [(i, i + 1) for i in range(2, q - 3)]
    out += [(q - 3, q - 2), (q - 3, q - 1)]
    return out


def _validate_like(d, like):
    if not isinstance(like, LikeSubdiagram):
        raise TaxonomyError("expected a LikeSubdiagram, got %r" % (like,))
    if like.kind not in LIKE_KINDS:
        raise TaxonomyError("unknown kind %r" % (like.kind,))
    vs = like.vertices
    _require_vertices(d, vs)
    if len(set(vs)) != len(vs):
        raise TaxonomyError("duplicate vertex in %r" % (vs,))
    if len(vs) < _MIN_SIZE[like.kind]:
        raise TaxonomyError("%s needs >= %d vertices" % (like.kind, _MIN_SIZE[like.kind]))
    want = set(map(frozenset, _expected_edges(like.kind, vs)))
    for i, j in itertools.combinations(range(len(vs)), 2):
        need = frozenset((i, j)) in want
        if d.adjacent(vs[i], vs[j]) != need:
            raise TaxonomyError(
                "vertices %r do not induce a %s in the stated order" % (vs, like.kind)
            )
    if like.kind in ("B-like", "B~-like") and d.label(vs[-2], vs[-1]) < 4:
        raise TaxonomyError("terminal edge of a %s must have label >= 4" % (like.kind,))
    if like.kind == "C~-like":
        if d.label(vs[0], vs[1]) < 4 or d.label(vs[-2], vs[-1]) < 4:
            raise TaxonomyError("both terminal edges of a C~-like must have label >= 4")


# -- recognition -----------------------------------------------------------


def _like_from_subset(d, kind, vs, tail_leaf=None):
    """Canonical LikeSubdiagram of the given kind on the vertex set, or None.

    tail_leaf disambiguates the 4-vertex star case of "B~-like", where any
    heavy spoke can serve as the tail; other kinds and sizes ignore it.
    """
    vs = tuple(sorted(set(vs), key=d.index))
    sub = induced_subdiagram(d, vs)
    sh = shape(sub)
    if not sh.is_connected or not sh.is_tree:
        return None
    q = len(vs)

    if kind in ("B-like", "C~-like"):
        if not sh.is_linear or q < _MIN_SIZE[kind]:
            return None
        seq = path_order(sub)
        head = d.label(seq[0], seq[1])
        tail = d.label(seq[-2], seq[-1])
        if kind == "C~-like":
            if head >= 4 and tail >= 4:
                return LikeSubdiagram(kind, tuple(seq))
            return None
        if tail >= 4:
            chosen = seq
        elif head >= 4:
            chosen = list(reversed(seq))
        else:
            return None
        base = chosen[0] if q >= 3 else None
        return LikeSubdiagram(kind, tuple(chosen), base)

    if kind in ("D-like", "B~-like"):
        if kind == "D-like" and q == 3:
            if not sh.is_linear:
                return None
            seq = path_order(sub)
            if any(d.label(seq[i], seq[i + 1]) > 3 for i in range(2)):
                return None
            f1, f2 = sorted((seq[0], seq[2]), key=d.index)
            return LikeSubdiagram(kind, (f1, f2, seq[1]), seq[1])
        if q < 4 or not sh.is_tripod:
            return None
        branch = next(v for v in vs if sh.valence[v] == 3)
        leafnbrs = [u for u in sub.neighbors(branch) if sh.valence[u] == 1]
        if q == 4:
            if kind == "D-like":
                if any(m > 3 for m in sub.edges.values()):
                    return None
                ls = sorted(leafnbrs, key=d.index)
                return LikeSubdiagram(kind, (ls[0], ls[1], branch, ls[2]))
            if tail_leaf is None or tail_leaf not in leafnbrs:
                return None
            if d.label(branch, tail_leaf) < 4:
                return None
            fork = sorted((u for u in leafnbrs if u != tail_leaf), key=d.index)
            return LikeSubdiagram(kind, (fork[0], fork[1], branch, tail_leaf))
        if len(leafnbrs) != 2:
            return None
        order = sorted(leafnbrs, key=d.index) + [branch]
        cur = next(u for u in sub.neighbors(branch) if u not in leafnbrs)
        while True:
            order.append(cur)
            nxt = [w for w in sub.neighbors(cur) if w != order[-2]]
            if not nxt:
                break
            cur = nxt[0]
        if kind == "D-like":
            if any(m > 3 for m in sub.edges.values()):
                return None
            return LikeSubdiagram(kind, tuple(order), order[-1])
        if d.label(order[-2], order[-1]) < 4:
            return None
        return LikeSubdiagram(kind, tuple(order))

    if kind == "D~-like":
        if q < 5:
            return None
        if q == 5:
            centers = [v for v in vs if sh.valence[v] == 4]
            if len(centers) != 1 or len(sh.leaves) != 4:
                return None
            ls = sorted(sh.leaves, key=d.index)
            return LikeSubdiagram(kind, (ls[0], ls[1], centers[0], ls[2], ls[3]))
        branches = [v for v in vs if sh.valence[v] == 3]
        if len(branches) != 2 or len(sh.leaves) != 4:
            return None
        if any(sh.valence[v] > 3 for v in vs):
            return None
        pairs = {}
        for br in branches:
            pr = sorted((u for u in sub.neighbors(br) if sh.valence[u] == 1), key=d.index)
            if len(pr) != 2:
                return None
            pairs[br] = pr
        mid = tree_path(sub, branches[0], branches[1])
        if any(sh.valence[v] != 2 for v in mid[1:-1]):
            return None
        a_br = min(branches, key=lambda br: d.index(pairs[br][0]))
        if a_br != mid[0]:
            mid.reverse()
        c_br = mid[-1]
        return LikeSubdiagram(kind, (*pairs[a_br], *mid, *pairs[c_br]))

    raise TaxonomyError("unknown kind %r" % (kind,))


def _connected_subsets(d, min_size=1):
    nbrs = {v: set(d.neighbors(v)) for v in d.vertices}
    for size in range(min_size, len(d.vertices) + 1):
        for combo in itertools.combinations(d.vertices, size):
            cs = set(combo)
            seen = {combo[0]}
            stack = [combo[0]]
            while stack:
                for u in nbrs[stack.pop()]:
                    if u in cs and u not in seen:
                        seen.add(u)
                        stack.append(u)
            if len(seen) == size:
                yield combo


def enumerate_like(d, kind):
    """All induced occurrences of the kind, canonically oriented.

    Order is deterministic: by size, then by vertex combination in diagram
    order. kind "C~-core" merges the three affine heavy kinds, sorted by
    (size, vertex set, kind). The 4-vertex star with several heavy spokes
    yields one "B~-like" item per heavy spoke.
    """
    if kind == "C~-core":
        items = []
        for k in CORE_KINDS:
            items.extend(enumerate_like(d, k))
        items.sort(
            key=lambda it: (
                len(it.vertices),
                tuple(sorted(d.index(v) for v in it.vertices)),
                it.kind,
            )
        )
        return items
    if kind not in LIKE_KINDS:
        raise TaxonomyError("unknown kind %r" % (kind,))
    out = []
    for combo in _connected_subsets(d, _MIN_SIZE[kind]):
        if kind == "B~-like" and len(combo) == 4:
            for t in combo:
                item = _like_from_subset(d, kind, combo, tail_leaf=t)
                if item is not None:
                    out.append(item)
        else:
            item = _like_from_subset(d, kind, combo)
            if item is not None:
                out.append(item)
    return out


# -- admissibility ---------------------------------------------------------


def is_admissible(d, sub):
    """Whether a connected vertex set separates compatibly with the ambient
    diagram: removing any of its vertices may not merge, inside the ambient
    diagram, two pieces that the removal separates inside the subdiagram.

    Returns a Verdict; a failure carries the least witness (s, u, w) where u
    and w are split by s in the subdiagram but joined outside it."""
    vs = _sorted_vs(d, sub)
    if not vs:
        raise TaxonomyError("empty vertex set")
    if len(_components(induced_subdiagram(d, vs))) != 1:
        raise TaxonomyError("vertex set %r is not connected" % (list(vs),))
    for s in vs:
        rest = [v for v in vs if v != s]
        if len(rest) < 2:
            continue
        sub_comps = _components(induced_subdiagram(d, rest))
        if len(sub_comps) < 2:
            continue
        smap = {v: i for i, comp in enumerate(sub_comps) for v in comp}
        dmap = {}
        for i, comp in enumerate(_components(d, removed=(s,))):
            for v in comp:
                dmap[v] = i
        for i, u in enumerate(rest):
            for w in rest[i + 1 :]:
                if smap[u] != smap[w] and dmap[u] == dmap[w]:
                    return Verdict(False, (s, u, w))
    return Verdict(True, None)


# -- atomicity -------------------------------------------------------------


def atomicity(d, sub):
    """Grade of a "B-like" or "D-like" seed: "atomic", "weakly_atomic", or
    "none".

    Atomic: every non-distinguished seed edge has label 3 and every interior
    seed vertex keeps its valence in the ambient diagram, except at the two
    exempt positions (second and second-to-last vertex of a line; branch
    vertex and second-to-last tail vertex of a fork). Weakly atomic (forks
    only): exactly one fork edge carries a label > 3 and everything else is
    as in the atomic case.
    """
    _validate_like(d, sub)
    vs = sub.vertices
    q = len(vs)
    if sub.kind == "B-like":
        if any(d.label(vs[i], vs[i + 1]) != 3 for i in range(q - 2)):
            return "none"
        exempt = {vs[1], vs[-2]}
        for v in vs[1:-1]:
            if v not in exempt and d.valence(v) != 2:
                return "none"
        return "atomic"
    if sub.kind != "D-like":
        raise TaxonomyError("atomicity grades B-like and D-like seeds only")
    heavy_fork = sum(1 for u in vs[:2] if d.label(u, vs[2]) > 3)
    tail_ok = all(d.label(vs[i], vs[i + 1]) == 3 for i in range(2, q - 1))
    interior = vs[2 : q - 1] if q >= 4 else (vs[2],)
    exempt = {vs[2], vs[q - 2]}
    valence_ok = all(d.valence(v) == 2 for v in interior if v not in exempt)
    if tail_ok and valence_ok:
        if heavy_fork == 0:
            return "atomic"
        if heavy_fork == 1:
            return "weakly_atomic"
    return "none"


# -- core avoidance ----------------------------------------------------------

_AFFINE_TARGETS = {}


def _affine_target(kind, k):
    """Reference diagram of subscript k for each affine heavy kind."""
    key = (kind, k)
    if key not in _AFFINE_TARGETS:
        names = ["t%d" % i for i in range(k + 1)]
        if kind == "C~":
            _AFFINE_TARGETS[key] = linear_diagram([4] + [3] * (k - 2) + [4], names)
        elif kind == "B~":
            edges = [(names[0], names[2], 3), (names[1], names[2], 3)]
            edges += [(names[i], names[i + 1], 3) for i in range(2, k - 1)]
            edges.append((names[k - 1], names[k], 4))
            _AFFINE_TARGETS[key] = make_diagram(names, edges)
        else:
            edges = [(names[0], names[2], 3), (names[1], names[2], 3)]
            edges += [(names[i], names[i + 1], 3) for i in range(2, k - 2)]
            edges += [(names[k - 2], names[k - 1], 3), (names[k - 2], names[k], 3)]
            _AFFINE_TARGETS[key] = make_diagram(names, edges)
    return _AFFINE_TARGETS[key]


def _has_core(d):
    for combo in _connected_subsets(d, 3):
        sub = induced_subdiagram(d, combo)
        k = len(combo) - 1
        if dominates(sub, _affine_target("C~", k)) is not None:
            return True
        if k >= 3 and dominates(sub, _affine_target("B~", k)) is not None:
            return True
        if k >= 4 and dominates(sub, _affine_target("D~", k)) is not None:
            return True
    return False


_ELEMENTARY_CACHE = {}


def is_ctilde_elementary(d):
    """True when no connected induced subdiagram label-dominates one of the
    three affine heavy reference shapes. Tree diagrams only; results are
    cached by canonical tree certificate."""
    sh = shape(d)
    if not (sh.is_connected and sh.is_tree):
        raise TaxonomyError("defined for nonempty tree diagrams only")
    key = tree_certificate(d)
    if key not in _ELEMENTARY_CACHE:
        _ELEMENTARY_CACHE[key] = not _has_core(d)
    return _ELEMENTARY_CACHE[key]


def is_ctilde_elementary_shape(d):
    """Same verdict as is_ctilde_elementary, computed from the closed shape
    description instead of a subdiagram search: a line with at most one
    heavy edge, or a one-branch tree with all labels 3. Kept as a separate
    route on purpose; tests cross-check the two."""
    sh = shape(d)
    if not (sh.is_connected and sh.is_tree):
        raise TaxonomyError("defined for nonempty tree diagrams only")
    if sh.is_linear:
        return sum(1 for m in d.edges.values() if m >= 4) <= 1
    if sh.is_tripod:
        return all(m == 3 for m in d.edges.values())
    return False


# -- growing a core from an atomic seed -------------------------------------


@dataclass(frozen=True)
class CoreConfig:
    """Outcome of find_robust_core.

    config_label numbers the nineteen local pictures the construction can
    end in (1-10 leave part of the seed outside the core, 11-19 contain it).
    side_conditions holds the four figure-side checks as True/False/None in
    a fixed order; entries that do not apply to the label are None.
    exempt_vertices are the marked vertices whose ambient valence the checks
    ignore; plus_edges are the edges allowed to carry any label >= 3.
    tie_break is True when equally near features forced an order-based pick.
    """

    core: LikeSubdiagram
    config_label: int
    contains_seed: bool
    side_conditions: tuple
    exempt_vertices: tuple = ()
    plus_edges: tuple = ()
    tie_break: bool = False
    notes: tuple = ()


def _dist_from(d, starts):
    dist = {v: 0 for v in starts}
    queue = list(starts)
    while queue:
        nxt = []
        for v in queue:
            for u in d.neighbors(v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        queue = nxt
    return dist


def _features(d, dist, skip_edges=(), skip_vertices=(), domain=None):
    """Heavy edges and branch vertices sorted by (distance, edges first,
    vertex order). domain restricts to one component after a cut."""
    pos = {v: i for i, v in enumerate(d.vertices)}
    skip = {frozenset(e) for e in skip_edges}
    feats = []
    for a, b, m in d.edge_list:
        if m < 4 or frozenset((a, b)) in skip:
            continue
        if domain is not None and a not in domain:
            continue
        feats.append((min(dist[a], dist[b]), 0, pos[a], pos[b], "edge", (a, b)))
    for v in d.vertices:
        if d.valence(v) <= 2 or v in skip_vertices:
            continue
        if domain is not None and v not in domain:
            continue
        feats.append((dist[v], 1, pos[v], -1, "vertex", v))
    feats.sort()
    return [(f[4], f[5], f[0]) for f in feats]


def _extra_neighbors(d, v, used):
    return [u for u in d.neighbors(v) if u not in used]


def _span(d, vs, anchor):
    out = set()
    for v in vs:
        out.update(tree_path(d, v, anchor))
    return out


def find_robust_core(d, seed):
    """Grow an affine heavy core from an atomic seed by the nearest-feature
    construction and report which of the nineteen local pictures applies.

    The diagram must be a tree that is not core-free, and the seed must
    grade "atomic". The returned core always satisfies: it contains the
    seed exactly for labels 11-19; for labels 1-16 the part of the core
    outside the seed is connected; every seed vertex left outside is nearest
    to an end of the core.
    """
    sh = shape(d)
    if not (sh.is_connected and sh.is_tree):
        raise TaxonomyError("defined for nonempty tree diagrams only")
    if is_ctilde_elementary(d):
        raise TaxonomyError("diagram has no core to grow")
    if atomicity(d, seed) != "atomic":
        raise TaxonomyError("seed must grade atomic")
    if seed.kind == "B-like":
        return _core_from_b_seed(d, seed)
    if len(seed.vertices) >= 4:
        return _core_from_d_seed(d, seed.vertices, set(seed.vertices), seed)
    return _core_from_d3_seed(d, seed)


def _core_from_b_seed(d, seed):
    vs = seed.vertices
    m = len(vs)
    seed_set = set(vs)
    heavy = (vs[-2], vs[-1])
    if m >= 3 and d.valence(vs[1]) > 2:
        extras = _extra_neighbors(d, vs[1], seed_set)
        t = extras[0]
        core = _like_from_subset(d, "B~-like", seed_set | {t}, tail_leaf=vs[-1])
        return _finish(
            d, seed, core, 12,
            exempts=(vs[1],),
            free_edges=(heavy, (vs[1], t)),
            pair_edges=((vs[0], vs[1]), (vs[1], t)),
            tie=len(extras) > 1,
        )
    if m >= 4 and d.valence(vs[-2]) > 2:
        extras = _extra_neighbors(d, vs[-2], seed_set)
        t = extras[0]
        core = _like_from_subset(d, "B~-like", {vs[-3], vs[-2], vs[-1], t}, tail_leaf=vs[-1])
        return _finish(
            d, seed, core, 5,
            exempts=(vs[-2],),
            free_edges=(heavy, (vs[-2], t)),
            tie=len(extras) > 1,
        )
    dist = _dist_from(d, heavy)
    feats = _features(d, dist, skip_edges=(heavy,))
    if not feats:
        raise TaxonomyError("no feature found; the diagram should be core-free")
    kind, obj, d0 = feats[0]
    tie = sum(1 for f in feats if f[2] == d0) > 1
    if kind == "edge":
        a, b = obj
        core_set = _span(d, {a, b, vs[-2]}, vs[-1])
        core = _like_from_subset(d, "C~-like", core_set)
        config = 11 if seed_set <= core_set else 2
        return _finish(d, seed, core, config, free_edges=(heavy, (a, b)), tie=tie)
    v = obj
    far = vs[-1] if vs[-2] in tree_path(d, v, vs[-1]) else vs[-2]
    line = set(tree_path(d, v, far))
    prongs = _extra_neighbors(d, v, line)
    core_set = line | set(prongs[:2])
    core = _like_from_subset(d, "B~-like", core_set, tail_leaf=far)
    config = 12 if seed_set <= core_set else 1
    return _finish(
        d, seed, core, config,
        exempts=(v,),
        free_edges=(heavy,),
        pair_edges=((v, prongs[0]), (v, prongs[1])) if config == 12 else None,
        tie=tie or len(prongs) > 2,
    )


def _core_from_d_seed(d, bvs, contain_ref, seed, notes=(), tie0=False):
    q = len(bvs)
    b3 = bvs[2]
    seed_set = set(bvs)
    if d.valence(b3) > 3:
        extras = _extra_neighbors(d, b3, seed_set)
        t = extras[0]
        core_set = {bvs[0], bvs[1], b3, bvs[3], t}
        core = _like_from_subset(d, "D~-like", core_set)
        config = 16 if contain_ref <= core_set else 3
        return _finish(
            d, seed, core, config,
            exempts=(b3,),
            free_edges=((b3, t),),
            tie=tie0 or len(extras) > 1,
            notes=notes,
            conn_ref=seed_set,
        )
    if q >= 5 and d.valence(bvs[-2]) >= 3:
        extras = _extra_neighbors(d, bvs[-2], seed_set)
        t0 = extras[0]
        core = _like_from_subset(d, "D~-like", seed_set | {t0})
        return _finish(
            d, seed, core, 14,
            exempts=(bvs[-2],),
            free_edges=((bvs[-2], t0),),
            pair_edges=((bvs[-2], bvs[-1]), (bvs[-2], t0)),
            tie=tie0 or len(extras) > 1,
            notes=notes,
            conn_ref=seed_set,
        )
    dist = _dist_from(d, (b3,))
    feats = _features(d, dist, skip_vertices=(b3,))
    if not feats:
        raise TaxonomyError("no feature found; the diagram should be core-free")
    kind, obj, d0 = feats[0]
    tie = tie0 or sum(1 for f in feats if f[2] == d0) > 1
    if kind == "edge":
        a, b = obj
        far = a if dist[a] >= dist[b] else b
        path = tree_path(d, b3, far)
        core_set = set(path) | {bvs[0], bvs[1], bvs[3]}
        core = _like_from_subset(d, "B~-like", core_set, tail_leaf=far)
        contained = contain_ref <= core_set
        tail_side = path[1] == bvs[3]
        config = (13 if tail_side else 15) if contained else 4
        near = a if dist[a] < dist[b] else b
        return _finish(
            d, seed, core, config,
            exempts=(near,),
            free_edges=((a, b),),
            tie=tie,
            notes=notes,
            conn_ref=seed_set,
        )
    v = obj
    path = tree_path(d, b3, v)
    line = set(path)
    prongs = _extra_neighbors(d, v, line)
    core_set = line | {bvs[0], bvs[1], bvs[3]} | set(prongs[:2])
    core = _like_from_subset(d, "D~-like", core_set)
    contained = contain_ref <= core_set
    tail_side = path[1] == bvs[3]
    config = (14 if tail_side else 16) if contained else 3
    return _finish(
        d, seed, core, config,
        exempts=(v,),
        tie=tie or len(prongs) > 2,
        notes=notes,
        conn_ref=seed_set,
    )


def _core_from_d3_seed(d, seed):
    b1, b2, b3 = seed.vertices
    seed_set = {b1, b2, b3}
    if d.valence(b3) > 2:
        extras = _extra_neighbors(d, b3, seed_set)
        heavies = [t for t in extras if d.label(b3, t) >= 4]
        if heavies:
            t = heavies[0]
            core = _like_from_subset(d, "B~-like", {b1, b2, b3, t}, tail_leaf=t)
            return _finish(
                d, seed, core, 13,
                exempts=(b3,),
                free_edges=((b3, t),),
                tie=len(heavies) > 1,
            )
        t = extras[0]
        return _core_from_d_seed(
            d, (b1, b2, b3, t), seed_set, seed,
            notes=("seed extended through the midpoint's third edge",),
            tie0=len(extras) > 1,
        )
    dist = _dist_from(d, (b3,))
    comps = _components(d, removed=(b3,))
    side1 = next(set(c) for c in comps if b1 in c)
    side2 = next(set(c) for c in comps if b2 in c)
    f1 = _features(d, dist, skip_vertices=(b3,), domain=side1)
    f2 = _features(d, dist, skip_vertices=(b3,), domain=side2)
    if f1 and f2:
        return _core_both_sides(d, seed, f1, f2, dist)
    feats = f1 or f2
    if not feats:
        raise TaxonomyError("no feature found; the diagram should be core-free")
    return _core_one_side(d, seed, feats, dist)


def _vertex_arm(d, b3, v, dist):
    """Path from the cut vertex to a branch-vertex feature plus the first two
    spare edges there; ties go to vertex order."""
    line = set(tree_path(d, b3, v))
    prongs = _extra_neighbors(d, v, line)
    return line | set(prongs[:2]), len(prongs) > 2


def _core_both_sides(d, seed, f1, f2, dist):
    b3 = seed.vertices[2]
    arms = []
    tie = False
    free = []
    exempts = []
    tails = []
    for feats in (f1, f2):
        kind, obj, d0 = feats[0]
        tie = tie or sum(1 for f in feats if f[2] == d0) > 1
        if kind == "edge":
            a, b = obj
            far = a if dist[a] >= dist[b] else b
            arms.append(set(tree_path(d, b3, far)))
            free.append((a, b))
            tails.append(far)
        else:
            arm, t = _vertex_arm(d, b3, obj, dist)
            arms.append(arm)
            exempts.append(obj)
            tie = tie or t
    core_set = arms[0] | arms[1]
    if len(free) == 2:
        core = _like_from_subset(d, "C~-like", core_set)
        config = 17
    elif len(free) == 1:
        core = _like_from_subset(d, "B~-like", core_set, tail_leaf=tails[0])
        config = 18
    else:
        core = _like_from_subset(d, "D~-like", core_set)
        config = 19
    return _finish(
        d, seed, core, config,
        exempts=tuple(exempts),
        free_edges=tuple(free),
        tie=tie,
    )


def _core_one_side(d, seed, feats, dist):
    b3 = seed.vertices[2]
    kind0, obj0, d0 = feats[0]
    nearest = [f for f in feats if f[2] == d0]
    rest = [f for f in feats if f[2] > d0]
    vertex_entries = [f for f in nearest if f[0] == "vertex"]
    edge_entries = [f for f in nearest if f[0] == "edge"]
    if vertex_entries and edge_entries:
        # the nearest branch vertex sits on the nearest heavy edge; take the
        # three-edge star there, heavy spokes first
        v = vertex_entries[0][1]
        toward = tree_path(d, b3, v)[-2]
        away = [u for u in d.neighbors(v) if u != toward]
        heavies = [u for u in away if d.label(v, u) >= 4]
        others = [u for u in away if d.label(v, u) < 4]
        picks = (heavies + others)[:2]
        core = _like_from_subset(d, "B~-like", {toward, v, *picks}, tail_leaf=heavies[0])
        return _finish(
            d, seed, core, 10,
            exempts=(v,),
            free_edges=tuple((v, h) for h in heavies if h in picks),
            tie=len(vertex_entries) + len(edge_entries) > 2 or len(picks) < len(away),
        )
    if kind0 == "edge":
        a, b = obj0
        if not rest:
            raise TaxonomyError("no second feature; the seed should not be atomic")
        kind2, obj2, d2 = rest[0]
        tie = len(nearest) > 1 or sum(1 for f in rest if f[2] == d2) > 1
        if kind2 == "edge":
            a2, b2 = obj2
            core_set = _span(d, {b, a2, b2}, a)
            core = _like_from_subset(d, "C~-like", core_set)
            return _finish(d, seed, core, 6, free_edges=(obj0, obj2), tie=tie)
        w = obj2
        x = a if len(tree_path(d, w, a)) > len(tree_path(d, w, b)) else b
        line = set(tree_path(d, w, x))
        prongs = _extra_neighbors(d, w, line)
        core = _like_from_subset(d, "B~-like", line | set(prongs[:2]), tail_leaf=x)
        return _finish(
            d, seed, core, 7,
            exempts=(w,),
            free_edges=(obj0,),
            tie=tie or len(prongs) > 2,
        )
    v = obj0
    toward = tree_path(d, b3, v)[-2]
    if d.valence(v) >= 4:
        others = [u for u in d.neighbors(v) if u != toward]
        core = _like_from_subset(d, "D~-like", {toward, v, *others[:3]})
        return _finish(
            d, seed, core, 9,
            exempts=(v,),
            tie=len(nearest) > 1 or len(others) > 3,
        )
    if not rest:
        raise TaxonomyError("no second feature; the diagram should be core-free")
    kind2, obj2, d2 = rest[0]
    tie = len(nearest) > 1 or sum(1 for f in rest if f[2] == d2) > 1
    away = [u for u in d.neighbors(v) if u != toward]
    if kind2 == "edge":
        a2, b2 = obj2
        far = a2 if len(tree_path(d, v, a2)) > len(tree_path(d, v, b2)) else b2
        line = set(tree_path(d, v, far))
        fork = [toward] + [u for u in away if u not in line]
        core = _like_from_subset(d, "B~-like", line | set(fork), tail_leaf=far)
        return _finish(
            d, seed, core, 8,
            exempts=(v,),
            free_edges=(obj2,),
            tie=tie,
        )
    w = obj2
    line = set(tree_path(d, v, w))
    fork = [toward] + [u for u in away if u not in line]
    prongs = _extra_neighbors(d, w, line | set(fork))
    core = _like_from_subset(d, "D~-like", line | set(fork) | set(prongs[:2]))
    return _finish(
        d, seed, core, 9,
        exempts=(v, w),
        tie=tie or len(prongs) > 2,
    )


def _interiors_preserved(d, region, exempts):
    for v in region.vertices:
        if region.valence(v) >= 2 and v not in exempts and d.valence(v) != region.valence(v):
            return False
    return True


def _edges_all_3(region, free):
    return all(m == 3 for pair, m in region.edges.items() if pair not in free)


def _side_conditions(d, seed_set, core, config, exempts, free):
    """The four figure-side checks, scoped to the configuration label; the
    defining heavy edges of the core and the feature edges count as labeled
    (they sit in `free`), everything else must keep label 3."""
    c1 = c2 = c3 = c4 = None
    if config <= 10:
        theta_vs = _span(d, seed_set | set(core.vertices), core.vertices[0])
        theta = induced_subdiagram(d, tuple(sorted(theta_vs, key=d.index)))
        c1 = _interiors_preserved(d, theta, exempts)
        if config == 3:
            c3 = _edges_all_3(theta, free)
        else:
            c2 = _edges_all_3(theta, free)
    elif config <= 16:
        region = induced_subdiagram(d, tuple(sorted(core.vertices, key=d.index)))
        c4 = _interiors_preserved(d, region, exempts) and _edges_all_3(region, free)
    return (c1, c2, c3, c4)


def _finish(d, seed, core, config, exempts=(), free_edges=(), pair_edges=None,
            tie=False, notes=(), conn_ref=None):
    if core is None:
        raise TaxonomyError("internal: constructed vertex set is not a valid core")
    seed_set = set(seed.vertices)
    core_set = set(core.vertices)
    contained = seed_set <= core_set
    if contained != (config >= 11):
        raise TaxonomyError("internal: containment does not match label %d" % config)
    # the new part of the core (edges not inside the seed) must hang together
    # except in the two-sided pictures 17-19, which grow in both directions;
    # a seed extended through its midpoint measures newness from the extension
    conn_base = seed_set if conn_ref is None else set(conn_ref)
    core_sub = induced_subdiagram(d, tuple(sorted(core_set, key=d.index)))
    new_edges = [pair for pair in core_sub.edges if not pair <= conn_base]
    if config > 16:
        new_edges = []
    if new_edges:
        reach = set(new_edges[0])
        grew = True
        while grew:
            grew = False
            for pair in new_edges:
                if pair & reach and not pair <= reach:
                    reach |= pair
                    grew = True
        if any(not pair <= reach for pair in new_edges):
            raise TaxonomyError("internal: the new part of the core is disconnected")
    for v in sorted(seed_set - core_set, key=d.index):
        if extremal_class(d, core, v) not in ("extremal_min", "extremal_max"):
            raise TaxonomyError("internal: seed vertex %r is not core-extremal" % (v,))
    free = tuple(tuple(sorted(e, key=d.index)) for e in free_edges)
    conds = _side_conditions(
        d, seed_set, core, config, set(exempts), {frozenset(e) for e in free}
    )
    if pair_edges is not None and config in (12, 14):
        pair_ok = sum(1 for a, b in pair_edges if d.label(a, b) > 3) <= 1
        conds = conds[:3] + (conds[3] and pair_ok,)
    return CoreConfig(
        core, config, contained, conds, tuple(exempts), free, tie, tuple(notes)
    )


# -- extremal classes --------------------------------------------------------


def extremal_class(d, core, s):
    """Where a vertex meets a core: its nearest core vertex is a least end
    ("extremal_min"), a greatest end ("extremal_max"), another leaf of the
    core ("extremal_other"), or an interior core vertex ("not_extremal")."""
    _validate_like(d, core)
    if core.kind not in CORE_KINDS:
        raise TaxonomyError("extremal classes are relative to an affine heavy core")
    _require_vertices(d, (s,))
    vs = core.vertices
    if core.kind == "C~-like":
        mins, maxs = {vs[0]}, {vs[-1]}
    elif core.kind == "B~-like":
        mins, maxs = {vs[0], vs[1]}, {vs[-1]}
    else:
        mins, maxs = {vs[0], vs[1]}, {vs[-2], vs[-1]}
    if s in set(vs):
        t = s
    else:
        dist = _dist_from(d, (s,))
        reachable = [u for u in vs if u in dist]
        if not reachable:
            raise TaxonomyError("vertex %r cannot reach the core" % (s,))
        t = min(reachable, key=lambda u: (dist[u], d.index(u)))
    if t in mins:
        return "extremal_min"
    if t in maxs:
        return "extremal_max"
    sub = induced_subdiagram(d, tuple(sorted(vs, key=d.index)))
    if sub.valence(t) == 1:
        return "extremal_other"
    return "not_extremal"


# -- reduction certificates --------------------------------------------------


def _one_heavy_linear(d):
    """Label of the single heavy edge of a line whose other labels are all 3,
    or None."""
    if not shape(d).is_linear:
        return None
    heavy = [m for m in d.edges.values() if m >= 4]
    if len(heavy) == 1 and all(m == 3 for m in d.edges.values() if m < 4):
        return heavy[0]
    return None


def _leaf_entry(sub):
    tag = classify_family(sub)
    entry = {
        "diagram": {
            "vertices": list(sub.vertices),
            "edges": [list(e) for e in sub.edge_list],
        },
        "family_tag": str(tag),
        "status": "settled",
        "reason": "",
    }
    kind = tag.kind
    if kind in ("A", "B"):
        entry["reason"] = "classical linear type; settled"
    elif kind == "I2":
        m = tag.params[0]
        if m == 5:
            entry["reason"] = "pentagonal dihedral; settled"
        else:
            entry["reason"] = "single edge with label %d; settled" % m
    elif kind in ("F4", "F", "H3", "H4", "H", "E6", "E7", "E8", "E", "D"):
        entry["status"] = "obligation"
        fam = next((n for n in tag.names if n[0] in "FHE" and "(" in n), str(tag))
        entry["family_tag"] = fam
        entry["reason"] = "interior-heavy line or all-3 fork family; open"
    else:
        m = _one_heavy_linear(sub)
        if m is not None:
            entry["family_tag"] = "I2(%d)" % m
            entry["reason"] = (
                "line with one label-%d edge; settled by passing to that edge" % m
            )
        else:
            entry["status"] = "unclassified"
            entry["reason"] = "no recognized family"
    return entry


def reduction_certificate(d):
    """Partition the core-free connected subdiagrams of a forest into settled
    leaves and open obligations, one representative per isomorphism class.

    The verdict is "settled" when no obligations remain, or when every
    spherical subdiagram is of type A/B/dihedral and all labels stay at most
    5; otherwise "open". Returns a JSON-ready dict."""
    comps = _components(d)
    for comp in comps:
        if not shape(induced_subdiagram(d, comp)).is_tree:
            raise TaxonomyError("certificate requires a forest diagram")
    leaves = []
    seen = set()
    for comp in comps:
        cd = induced_subdiagram(d, comp)
        for combo in _connected_subsets(cd, 1):
            sub = induced_subdiagram(cd, combo)
            if not is_ctilde_elementary(sub):
                continue
            key = tree_certificate(sub)
            if key in seen:
                continue
            seen.add(key)
            leaves.append(_leaf_entry(sub))
    obligations = [e for e in leaves if e["status"] == "obligation"]
    abi, _ = is_ABI(d)
    max_label = max(d.edges.values(), default=2)
    settled = not obligations or (abi and max_label <= 5)
    citations = []
    if obligations:
        citations.append(
            "open families remain: " + ", ".join(sorted({e["family_tag"] for e in obligations}))
        )
    else:
        citations.append("every core-free subdiagram lands in a settled family")
    if abi and max_label <= 5:
        citations.append(
            "all spherical subdiagrams are of type A, B or dihedral with labels at most 5"
        )
    return {
        "elementary_leaves": leaves,
        "verdict": "settled" if settled else "open",
        "citations": citations,
        "abi": abi,
        "max_label": max_label,
    }
