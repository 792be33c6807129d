"""Finite ranked posets on integer bitmasks: property checks with minimal
witnesses, joins/meets, and the rank-reduction criteria with their
exhaustive oracles.

The relation is stored as full up-sets/down-sets (one Python int per
element), so comparability tests and bound intersections are single AND
operations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.holds


PROPERTIES = (
    "weakly_graded",
    "r_saturated",
    "bowtie_free",
    "upward_flag",
    "downward_flag",
    "weakly_upward_flag",
    "weakly_downward_flag",
)

CRITERIA = ("bowtie_L2.7", "bowtie_C2.8", "flag_L2.9", "flag_C2.10")


class RankedPoset:
    """Poset on labeled elements with an integer rank in [1, n].

    leq_pairs is any generating relation on labels; the constructor takes
    the reflexive-transitive closure and rejects cycles and rank-map
    violations (x < y forces rank(x) < rank(y)).
    """

    def __init__(self, elements, rank, leq_pairs):
        self.elements = list(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise PosetError("duplicate elements")
        m = len(self.elements)
        self.rank = [0] * m
        for e, r in (rank.items() if isinstance(rank, dict) else zip(self.elements, rank)):
            if not isinstance(r, int):
                raise PosetError("rank must be an integer")
            self.rank[self.index[e]] = r
        if m and min(self.rank) < 1:
            raise PosetError("ranks must be >= 1")
        self.n = max(self.rank) if m else 0

        up = [1 << i for i in range(m)]
        for a, b in leq_pairs:
            i, j = self.index[a], self.index[b]
            up[i] |= 1 << j
        # closure: propagate along increasing rank, iterate to a fixed point
        changed = True
        while changed:
            changed = False
            for i in range(m):
                acc = up[i]
                probe = acc
                while probe:
                    j = (probe & -probe).bit_length() - 1
                    probe &= probe - 1
                    acc |= up[j]
                if acc != up[i]:
                    up[i] = acc
                    changed = True
        self.up = up
        down = [1 << i for i in range(m)]
        for i in range(m):
            probe = up[i] & ~(1 << i)
            while probe:
                j = (probe & -probe).bit_length() - 1
                probe &= probe - 1
                down[j] |= 1 << i
        self.down = down

        for i in range(m):
            probe = up[i] & ~(1 << i)
            while probe:
                j = (probe & -probe).bit_length() - 1
                probe &= probe - 1
                if up[j] & (1 << i):
                    raise PosetError(
                        "relation has a cycle through %r and %r"
                        % (self.elements[i], self.elements[j])
                    )
                if self.rank[j] <= self.rank[i]:
                    raise PosetError(
                        "rank map violated: %r < %r but ranks %d >= %d"
                        % (self.elements[i], self.elements[j], self.rank[i], self.rank[j])
                    )

    # -- small accessors ---------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def leq(self, a, b):
        return bool(self.up[self.index[a]] & (1 << self.index[b]))

    def _bits(self, mask):
        out = []
        while mask:
            i = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            out.append(i)
        return out

    def _labels(self, idxs):
        return tuple(self.elements[i] for i in idxs)

    def upset(self, a, strict=False):
        mask = self.up[self.index[a]]
        if strict:
            mask &= ~(1 << self.index[a])
        return self._labels(self._bits(mask))

    def downset(self, a, strict=False):
        mask = self.down[self.index[a]]
        if strict:
            mask &= ~(1 << self.index[a])
        return self._labels(self._bits(mask))

    def restrict(self, labels):
        """Induced subposet, ranks kept."""
        keep = [e for e in self.elements if e in set(labels)]
        pairs = [
            (a, b)
            for a in keep
            for b in keep
            if a != b and self.leq(a, b)
        ]
        return RankedPoset(keep, [self.rank[self.index[e]] for e in keep], pairs)

    def hasse_edges(self):
        out = []
        for i in range(len(self.elements)):
            probe = self.up[i] & ~(1 << i)
            covers = self._bits(probe)
            for j in covers:
                between = self.up[i] & self.down[j] & ~(1 << i) & ~(1 << j)
                if not between:
                    out.append((self.elements[i], self.elements[j]))
        return out

    def to_json(self):
        return json.dumps(
            {
                "elements": [repr(e) for e in self.elements],
                "rank": self.rank,
                "hasse_edges": [[repr(a), repr(b)] for a, b in self.hasse_edges()],
            },
            sort_keys=True,
        )


# -- bounds ----------------------------------------------------------------


def _upper_mask(p, idxs):
    acc = (1 << len(p.elements)) - 1
    for i in idxs:
        acc &= p.up[i]
    return acc


def _lower_mask(p, idxs):
    acc = (1 << len(p.elements)) - 1
    for i in idxs:
        acc &= p.down[i]
    return acc


def join(p, Q):
    """Least upper bound of the label set Q, or None."""
    idxs = [p.index[q] for q in Q]
    ub = _upper_mask(p, idxs)
    for i in p._bits(ub):
        if ub & ~p.up[i] == 0:
            return p.elements[i]
    return None


def meet(p, Q):
    """Greatest lower bound of the label set Q, or None."""
    idxs = [p.index[q] for q in Q]
    lb = _lower_mask(p, idxs)
    for i in p._bits(lb):
        if lb & ~p.down[i] == 0:
            return p.elements[i]
    return None


# -- property checks ---------------------------------------------------------


def _check_weakly_graded(p):
    for i in range(len(p.elements)):
        probe = p.up[i] & ~(1 << i)
        for j in p._bits(probe):
            if p.rank[j] <= p.rank[i]:
                return Verdict(False, p._labels((i, j)))
    return Verdict(True)


def _check_r_saturated(p):
    """Every element sees comparable elements at every rank above it up to n
    and below it down to 1 (the two directions are required independently)."""
    by_rank = {}
    for i, r in enumerate(p.rank):
        by_rank.setdefault(r, 0)
        by_rank[r] |= 1 << i
    for i in range(len(p.elements)):
        r = p.rank[i]
        for m in range(1, p.n + 1):
            if m == r:
                continue
            reachable = p.down[i] if m < r else p.up[i]
            if not (reachable & by_rank.get(m, 0)):
                return Verdict(False, (p.elements[i], m))
    return Verdict(True)


def _quasi_bowties(p, top_rank_only=False, equal_ranks=False):
    """Yield (x1, y1, x2, y2) index tuples with {x1,x2}, {y1,y2} incomparable
    pairs and x_i < y_j for all four combinations, in lexicographic order of
    the tuple. Degenerate quasi-bowties (a comparable pair) always have a
    center, so they are skipped.

    equal_ranks restricts to r(x1)=r(x2) and r(y1)=r(y2); top_rank_only
    additionally pins r(y_j) = n.
    """
    m = len(p.elements)
    out = []
    for x1 in range(m):
        for x2 in range(x1 + 1, m):
            if (p.up[x1] >> x2) & 1 or (p.down[x1] >> x2) & 1:
                continue
            if equal_ranks and p.rank[x1] != p.rank[x2]:
                continue
            above = p.up[x1] & p.up[x2]
            ys = p._bits(above)
            for a in range(len(ys)):
                y1 = ys[a]
                for b in range(a + 1, len(ys)):
                    y2 = ys[b]
                    if (p.up[y1] >> y2) & 1 or (p.down[y1] >> y2) & 1:
                        continue
                    if equal_ranks and p.rank[y1] != p.rank[y2]:
                        continue
                    if top_rank_only and (p.rank[y1] != p.n or p.rank[y2] != p.n):
                        continue
                    out.append((x1, y1, x2, y2))
    out.sort()
    return out


def _center_mask(p, quad):
    x1, y1, x2, y2 = quad
    return p.up[x1] & p.up[x2] & p.down[y1] & p.down[y2]


def _check_bowtie_free(p):
    for quad in _quasi_bowties(p):
        if not _center_mask(p, quad):
            return Verdict(False, p._labels(quad))
    return Verdict(True)


def _bounded_triples(p, upward, ranks=None):
    """Yield index triples a<b<c that are pairwise upper (resp. lower)
    bounded, optionally restricted to given ranks."""
    m = len(p.elements)
    rel = p.up if upward else p.down
    idxs = [i for i in range(m) if ranks is None or p.rank[i] in ranks]
    for a in range(len(idxs)):
        i = idxs[a]
        for b in range(a + 1, len(idxs)):
            j = idxs[b]
            if not rel[i] & rel[j]:
                continue
            for c in range(b + 1, len(idxs)):
                k = idxs[c]
                if rel[i] & rel[k] and rel[j] & rel[k]:
                    yield i, j, k


def _check_flag(p, upward):
    rel = p.up if upward else p.down
    for i, j, k in _bounded_triples(p, upward):
        if not rel[i] & rel[j] & rel[k]:
            return Verdict(False, p._labels((i, j, k)))
    return Verdict(True)


def _check_weakly_flag(p, upward):
    rel = p.up if upward else p.down
    m = len(p.elements)
    # non-maximal (resp. non-minimal) elements
    if upward:
        inner = 0
        for i in range(m):
            if p.up[i] & ~(1 << i):
                inner |= 1 << i
    else:
        inner = 0
        for i in range(m):
            if p.down[i] & ~(1 << i):
                inner |= 1 << i
    for a in range(m):
        for b in range(a + 1, m):
            if not rel[a] & rel[b] & inner:
                continue
            for c in range(b + 1, m):
                if rel[a] & rel[c] & inner and rel[b] & rel[c] & inner:
                    if not rel[a] & rel[b] & rel[c]:
                        return Verdict(False, p._labels((a, b, c)))
    return Verdict(True)


def check(p, prop):
    """Exhaustive check of one property; failing verdicts carry the
    lexicographically least witness in element order."""
    if prop == "weakly_graded":
        return _check_weakly_graded(p)
    if prop == "r_saturated":
        return _check_r_saturated(p)
    if prop == "bowtie_free":
        return _check_bowtie_free(p)
    if prop == "upward_flag":
        return _check_flag(p, True)
    if prop == "downward_flag":
        return _check_flag(p, False)
    if prop == "weakly_upward_flag":
        return _check_weakly_flag(p, True)
    if prop == "weakly_downward_flag":
        return _check_weakly_flag(p, False)
    raise PosetError("unknown property %r" % (prop,))


# -- rank-reduction criteria --------------------------------------------------


@dataclass(frozen=True)
class CriterionReport:
    which: str
    reduced: bool | None  # None: the reduced conditions prove nothing here
    oracle: bool
    agreement: bool
    conditions: dict


def _require_saturated(p, which):
    v = check(p, "r_saturated")
    if not v:
        raise PosetError(
            "%s requires an r-saturated poset; saturation fails at %r" % (which, v.witness)
        )


def _cond_lower_sets_bowtie_free(p):
    """P_{<q} bowtie free for each top-rank q. A failure inside P_{<q} is
    also a failure in P, so this condition doubles as a negative witness."""
    for i in range(len(p.elements)):
        if p.rank[i] != p.n:
            continue
        strict = p.down[i] & ~(1 << i)
        sub = p.restrict(p._labels(p._bits(strict)))
        v = check(sub, "bowtie_free")
        if not v:
            return Verdict(False, (p.elements[i],) + v.witness)
    return Verdict(True)


def _cond_equal_rank_bowties(p, top_only):
    for quad in _quasi_bowties(p, top_rank_only=top_only, equal_ranks=True):
        if not _center_mask(p, quad):
            return Verdict(False, p._labels(quad))
    return Verdict(True)


def _cond_upper_sets_flag(p):
    """P_{>q} upward flag for each rank-1 q; bounds above q stay above q, so
    a failure is also a failure in P."""
    for i in range(len(p.elements)):
        if p.rank[i] != 1:
            continue
        strict = p.up[i] & ~(1 << i)
        sub = p.restrict(p._labels(p._bits(strict)))
        v = check(sub, "upward_flag")
        if not v:
            return Verdict(False, (p.elements[i],) + v.witness)
    return Verdict(True)


def _cond_rank_triples_bounded(p, ranks):
    for i, j, k in _bounded_triples(p, True, ranks=ranks):
        if p.rank[i] == p.rank[j] == p.rank[k] and not p.up[i] & p.up[j] & p.up[k]:
            return Verdict(False, p._labels((i, j, k)))
    return Verdict(True)


def criterion(p, which):
    """Evaluate a reduction criterion's conditions, conclude what they allow,
    and compare with the exhaustive oracle.

    For the two bowtie criteria every failed condition is itself a bowtie
    witness, so the reduced verdict is always conclusive. For the flag
    criteria a failure of the bowtie-freeness hypothesis proves nothing
    about flagness; reduced is then None and agreement is vacuous.
    """
    if which not in CRITERIA:
        raise PosetError("unknown criterion %r" % (which,))
    _require_saturated(p, which)

    conditions = {}
    if which == "bowtie_L2.7":
        conditions["lower_sets_bowtie_free"] = _cond_lower_sets_bowtie_free(p)
        conditions["top_equal_rank_bowties_centered"] = _cond_equal_rank_bowties(p, True)
        reduced = all(bool(v) for v in conditions.values())
        oracle = bool(check(p, "bowtie_free"))
    elif which == "bowtie_C2.8":
        conditions["equal_rank_bowties_centered"] = _cond_equal_rank_bowties(p, False)
        reduced = bool(conditions["equal_rank_bowties_centered"])
        oracle = bool(check(p, "bowtie_free"))
    elif which == "flag_L2.9":
        conditions["bowtie_free"] = check(p, "bowtie_free")
        conditions["upper_sets_upward_flag"] = _cond_upper_sets_flag(p)
        conditions["rank1_triples_bounded"] = _cond_rank_triples_bounded(p, {1})
        if conditions["bowtie_free"]:
            reduced = all(bool(v) for v in conditions.values())
        elif not conditions["upper_sets_upward_flag"] or not conditions["rank1_triples_bounded"]:
            reduced = False
        else:
            reduced = None
        oracle = bool(check(p, "upward_flag"))
    else:  # flag_C2.10
        conditions["bowtie_free"] = check(p, "bowtie_free")
        ranks = set(range(1, p.n))
        conditions["low_rank_triples_bounded"] = _cond_rank_triples_bounded(p, ranks)
        if conditions["bowtie_free"]:
            reduced = all(bool(v) for v in conditions.values())
        elif not conditions["low_rank_triples_bounded"]:
            reduced = False
        else:
            reduced = None
        oracle = bool(check(p, "upward_flag"))

    agreement = reduced is None or reduced == oracle
    return CriterionReport(which, reduced, oracle, agreement, conditions)


# -- random corpus -------------------------------------------------------------


def generate_poset(seed, max_elements=40):
    """Seeded random layered poset: random layer sizes and cover edges
    between consecutive layers, closure, then repeated pruning of elements
    that break r-saturation. Returns None when pruning empties a layer."""
    import random

    rng = random.Random(seed)
    n_layers = rng.randint(2, 4)
    sizes = [rng.randint(2, max(2, max_elements // (2 * n_layers))) for _ in range(n_layers)]
    labels = []
    rank = []
    for layer, size in enumerate(sizes, start=1):
        for k in range(size):
            labels.append("r%dn%d" % (layer, k))
            rank.append(layer)
    pairs = []
    offset = 0
    for layer in range(n_layers - 1):
        lo = range(offset, offset + sizes[layer])
        hi = range(offset + sizes[layer], offset + sizes[layer] + sizes[layer + 1])
        for j in hi:
            k = rng.randint(1, min(3, sizes[layer]))
            for i in rng.sample(list(lo), k):
                pairs.append((labels[i], labels[j]))
        offset += sizes[layer]

    rank_of = dict(zip(labels, rank))
    alive = set(labels)
    while True:
        sub_labels = [e for e in labels if e in alive]
        if not sub_labels:
            return None
        sub_rank = [rank_of[e] for e in sub_labels]
        if len(set(sub_rank)) != n_layers:
            return None
        p = RankedPoset(
            sub_labels,
            sub_rank,
            [(a, b) for a, b in pairs if a in alive and b in alive],
        )
        bad = set()
        by_rank = {}
        for i, r in enumerate(p.rank):
            by_rank.setdefault(r, 0)
            by_rank[r] |= 1 << i
        for i in range(len(p.elements)):
            r = p.rank[i]
            for m1 in range(r + 1, n_layers + 1):
                if not (p.up[i] & by_rank.get(m1, 0)):
                    bad.add(p.elements[i])
            for m2 in range(1, r):
                if not (p.down[i] & by_rank.get(m2, 0)):
                    bad.add(p.elements[i])
        if not bad:
            return p
        alive -= bad
