"""Exact enumeration of finite Coxeter groups via coset-table completion.

Everything is integer arithmetic on a coset table: generators act as
involutions, relator scans fill missing entries, and detected coincidences
are merged through a union-find. No root systems, no floats, so labels like
5 cost nothing. Elements of the finished group are indices with identity 0;
words are never stored, only the permutation action and word lengths.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass


class EnumerationCapError(RuntimeError):
    """Raised when the live coset count passes the cap.

    For inputs whose group is finite and not larger than the cap this never
    fires; hitting it at a generous cap is the practical signal that the
    diagram is not spherical.
    """

    def __init__(self, cap, partial):
        super().__init__(
            "enumeration passed the cap of %d cosets (partial count %d)"
            % (cap, partial)
        )
        self.cap = cap
        self.partial = partial


class GroupTable:
    """Finished multiplication table of a finite Coxeter group.

    act[s] is the right-multiplication permutation of element indices by the
    generator s; length[e] is the word length of element e. Instances are
    immutable after construction and safe to share.
    """

    def __init__(self, diagram, act, length):
        self.diagram = diagram
        self.gens = diagram.vertices
        self.act = {s: tuple(p) for s, p in act.items()}
        self.length = tuple(length)
        self.size = len(length)

    def __len__(self):
        return self.size

    def mult(self, e, s):
        """Index of e·s."""
        return self.act[s][e]

    def apply_word(self, e, word):
        for s in word:
            e = self.act[s][e]
        return e

    def subgroup(self, T):
        """Element indices of the standard parabolic subgroup generated by T."""
        T = list(T)
        seen = {0}
        queue = deque([0])
        while queue:
            e = queue.popleft()
            for s in T:
                f = self.act[s][e]
                if f not in seen:
                    seen.add(f)
                    queue.append(f)
        return frozenset(seen)

    def to_json(self):
        return json.dumps(
            {
                "size": self.size,
                "generators": list(self.gens),
                "action": {s: list(p) for s, p in self.act.items()},
                "length": list(self.length),
            },
            sort_keys=True,
        )


@dataclass(frozen=True)
class Coset:
    """A left coset w·W_T of a standard parabolic subgroup, stored by its
    unique minimal-length representative."""

    parabolic: tuple
    representative: int


def enumerate_group(d, cap=2_000_000):
    """Coset-table enumeration of the Coxeter group of d over the trivial
    subgroup. Returns the full GroupTable, or raises EnumerationCapError
    once more than cap cosets are simultaneously live."""
    gens = list(d.vertices)
    ngen = len(gens)
    if ngen == 0:
        return GroupTable(d, {}, [0])

    relators = []
    for i in range(ngen):
        relators.append((i, i))
    for i in range(ngen):
        for j in range(i + 1, ngen):
            m = d.label(gens[i], gens[j])
            relators.append((i, j) * m)

    table = [[None] * ngen]
    parent = [0]
    live = 1

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def coincidence(a, b):
        nonlocal live
        queue = deque()

        def merge(k, ell):
            nonlocal live
            k, ell = find(k), find(ell)
            if k == ell:
                return
            lo, hi = (k, ell) if k < ell else (ell, k)
            parent[hi] = lo
            live -= 1
            queue.append(hi)

        merge(a, b)
        while queue:
            y = queue.popleft()
            for x in range(ngen):
                dd = table[y][x]
                if dd is None:
                    continue
                table[dd][x] = None
                mu, nu = find(y), find(dd)
                if table[mu][x] is not None:
                    merge(nu, table[mu][x])
                elif table[nu][x] is not None:
                    merge(mu, table[nu][x])
                else:
                    table[mu][x] = nu
                    table[nu][x] = mu

    def scan_and_fill(alpha, word):
        nonlocal live
        f, i = alpha, 0
        b, r = alpha, len(word) - 1
        while True:
            while i <= r and table[f][word[i]] is not None:
                f = find(table[f][word[i]])
                i += 1
            if i > r:
                if f != b:
                    coincidence(f, b)
                return
            while r >= i and table[b][word[r]] is not None:
                b = find(table[b][word[r]])
                r -= 1
            if r < i:
                coincidence(f, b)
                return
            if r == i:
                table[f][word[i]] = b
                table[b][word[i]] = f
                return
            new = len(table)
            table.append([None] * ngen)
            parent.append(new)
            table[f][word[i]] = new
            table[new][word[i]] = f
            live += 1
            if live > cap:
                raise EnumerationCapError(cap, live)
            f = new
            i += 1

    alpha = 0
    while alpha < len(table):
        if find(alpha) == alpha:
            for rel in relators:
                scan_and_fill(alpha, rel)
                if find(alpha) != alpha:
                    break
        alpha += 1

    # compact: surviving cosets keep their relative order, identity stays 0
    alive = [i for i in range(len(table)) if find(i) == i]
    new_index = {old: new for new, old in enumerate(alive)}
    act = {}
    for g, s in enumerate(gens):
        act[s] = [new_index[find(table[old][g])] for old in alive]

    n = len(alive)
    length = [-1] * n
    length[0] = 0
    queue = deque([0])
    while queue:
        e = queue.popleft()
        for s in gens:
            f = act[s][e]
            if length[f] < 0:
                length[f] = length[e] + 1
                queue.append(f)

    return GroupTable(d, act, length)


def min_coset_rep(g, w, T):
    """Minimal-length element of the coset w·W_T, by greedy length descent.

    Any order of descent steps lands on the same element; the scan order
    here (T sorted by diagram position) just makes runs reproducible.
    """
    T = sorted(T, key=g.diagram.index)
    changed = True
    while changed:
        changed = False
        for t in T:
            f = g.act[t][w]
            if g.length[f] < g.length[w]:
                w = f
                changed = True
    return w


def cosets(g, T):
    """All cosets of W_T, one per distinct minimal representative, sorted by
    representative index."""
    T = tuple(sorted(T, key=g.diagram.index))
    reps = sorted({min_coset_rep(g, w, T) for w in range(g.size)})
    return [Coset(T, r) for r in reps]


def coset_orbit(g, w, T):
    """Element set of the coset w·W_T."""
    T = list(T)
    seen = {w}
    queue = deque([w])
    while queue:
        e = queue.popleft()
        for t in T:
            f = g.act[t][e]
            if f not in seen:
                seen.add(f)
                queue.append(f)
    return frozenset(seen)


def coset_disjoint(g, w, T1, T2):
    """True iff w·W_{T1} and W_{T2} share no element (exhaustive scan)."""
    return not (coset_orbit(g, w, T1) & g.subgroup(T2))
