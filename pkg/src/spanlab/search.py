"""Breadth-first search helpers on plain adjacency dicts.

An adjacency dict maps each node to the set of its neighbors; all graphs are
undirected and unweighted, so hop counts are distances.
"""

from __future__ import annotations

Adjacency = dict[int, set[int]]


def bfs_distances(adj: Adjacency, source: int, cutoff: int | None = None) -> dict[int, int]:
    """Hop distance from ``source`` to every node within ``cutoff`` (or all)."""
    dist = {source: 0}
    frontier = [source]
    level = 0
    while frontier and (cutoff is None or level < cutoff):
        level += 1
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in dist:
                    dist[w] = level
                    nxt.append(w)
        frontier = nxt
    return dist


def within_distance(adj: Adjacency, u: int, v: int, k: int) -> bool:
    """True iff the hop distance between u and v is at most k.

    Bidirectional depth-limited expansion: u is grown ceil(k/2) levels and v
    the remaining floor(k/2); the two balls intersect iff dist(u, v) <= k.
    """
    if u == v:
        return True
    if k <= 0:
        return False
    du = {u: 0}
    dv = {v: 0}
    fu, fv = [u], [v]
    steps_u = (k + 1) // 2
    steps_v = k - steps_u
    for _ in range(steps_u):
        nxt = []
        for x in fu:
            for y in adj[x]:
                if y not in du:
                    du[y] = du[x] + 1
                    nxt.append(y)
        fu = nxt
        if v in du:
            return True
    for _ in range(steps_v):
        nxt = []
        for x in fv:
            for y in adj[x]:
                if y not in dv:
                    dv[y] = dv[x] + 1
                    nxt.append(y)
                    if y in du:
                        return True
        fv = nxt
    if v in du:
        return True
    return any(x in dv for x in du)
