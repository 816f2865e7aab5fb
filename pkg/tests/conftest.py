"""Shared builders for hand-crafted instances and small fixture graphs."""

from spanlab.graph_model import ColoredGraph


def build_instance(n: int, region_size: int, red_pairs, ids=None) -> ColoredGraph:
    """ColoredGraph from explicit red index pairs; IDs default to identity."""
    red = [set() for _ in range(n)]
    for a, b in red_pairs:
        red[a].add(b)
        red[b].add(a)
    if ids is None:
        ids = tuple(range(1, n + 1))
    return ColoredGraph(n, region_size, tuple(ids), tuple(frozenset(s) for s in red))


def two_region_instance(extra_red=()):
    """8 nodes, two regions of 2, red edge between regions (ids 1 and 3)."""
    return build_instance(8, 2, [(0, 2), *extra_red])


def caption_instance():
    """32 nodes, regions of 4, with one critical and two detour-covered red edges.

    Red edges by id: (1,5), (1,10), (5,9), (1,13). Removing (1,5) leaves u5
    reachable via RBBR, removing (1,10) leaves u10 reachable via RRBB, and
    (1,13) is the only way into its region, hence critical at k=5.
    """
    return build_instance(32, 4, [(0, 4), (0, 9), (4, 8), (0, 12)])


def complete_graph(n: int) -> dict[int, set[int]]:
    return {v: set(range(1, n + 1)) - {v} for v in range(1, n + 1)}


def cycle_graph(n: int) -> dict[int, set[int]]:
    return {v: {v % n + 1, (v - 2) % n + 1} for v in range(1, n + 1)}


def path_graph(n: int) -> dict[int, set[int]]:
    adj = {v: set() for v in range(1, n + 1)}
    for v in range(1, n):
        adj[v].add(v + 1)
        adj[v + 1].add(v)
    return adj


def graph_edges(adj) -> set[tuple[int, int]]:
    return {tuple(sorted((u, v))) for u in adj for v in adj[u]}


def girth_at_most(adj, limit: int) -> bool:
    """True iff the graph contains a cycle of length <= limit (BFS from each node)."""
    for s in adj:
        dist = {s: 0}
        parent = {s: None}
        frontier = [s]
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        parent[w] = v
                        nxt.append(w)
                    elif parent[v] != w:
                        # non-tree edge closes a cycle through s of this length or less
                        if dist[v] + dist[w] + 1 <= limit:
                            return True
            frontier = nxt
    return False
