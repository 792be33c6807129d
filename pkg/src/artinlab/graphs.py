"""Plain-graph kernel on integer bitmasks.

Vertices are 0..n-1; a vertex set is an int with bit i set for vertex i.
Everything downstream that enumerates cliques or measures graph distance
(complex chamber graphs, half-ball intersection graphs) goes through here.
"""

from __future__ import annotations


class CliqueCapError(RuntimeError):
    """Raised when maximal-clique enumeration exceeds its cap.

    cliques holds the cliques found before the cap was hit.
    """

    def __init__(self, cap, cliques):
        super().__init__("more than %d maximal cliques" % cap)
        self.cap = cap
        self.cliques = cliques


def adjacency_masks(n, edges):
    """Neighbor bitmasks for an n-vertex simple graph given (i, j) pairs."""
    adj = [0] * n
    for i, j in edges:
        if i == j:
            raise ValueError("loop at %d" % i)
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return adj


def bit_indices(mask):
    """Indices of the set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def bfs_distances(adj, start):
    """Edge-count distances from start; -1 where unreachable."""
    n = len(adj)
    dist = [-1] * n
    dist[start] = 0
    frontier = 1 << start
    seen = frontier
    d = 0
    while frontier:
        reach = 0
        for i in bit_indices(frontier):
            reach |= adj[i]
        frontier = reach & ~seen
        seen |= frontier
        d += 1
        for i in bit_indices(frontier):
            dist[i] = d
    return dist


def is_connected(adj):
    if not adj:
        return True
    return all(x >= 0 for x in bfs_distances(adj, 0))


def maximal_cliques(adj, cap=None):
    """All maximal cliques as bitmasks, sorted; Bron-Kerbosch with pivoting.

    cap bounds the number of cliques collected: exceeding it raises
    CliqueCapError carrying the partial list.
    """
    n = len(adj)
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(r)
            if cap is not None and len(out) > cap:
                raise CliqueCapError(cap, out[:cap])
            return
        # pivot on the candidate covering the most of p
        pivot = max(bit_indices(p | x), key=lambda u: (adj[u] & p).bit_count())
        for v in bit_indices(p & ~adj[pivot]):
            bit = 1 << v
            expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    if n:
        expand(0, (1 << n) - 1, 0)
    out.sort()
    return out
