"""Output validation: stretch, size, critical inclusion, and the sparse node set.

For unweighted multiplicative spanners it suffices to check every *edge* of
the host graph: a shortest path is a concatenation of edges, each stretched
by at most k. The brute-force all-pairs check is kept alongside as a test
oracle for small graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from spanlab.graph_model import ColoredGraph, LowerBoundParams, sparse_output_threshold
from spanlab.search import Adjacency, bfs_distances, within_distance
from spanlab.traversal import CriticalityReport

Edge = tuple[int, int]


def _spanner_adjacency(adj: Adjacency, edges) -> Adjacency:
    sub: Adjacency = {v: set() for v in adj}
    for u, v in edges:
        if v not in adj.get(u, ()):
            raise ValueError(f"spanner edge ({u}, {v}) is not an edge of the host graph")
        sub[u].add(v)
        sub[v].add(u)
    return sub


def stretch_check(adj: Adjacency, edges, k: int) -> tuple[bool, tuple[Edge, int | None] | None]:
    """Check dist_S(u, v) <= k for every host edge (u, v).

    Returns (ok, worst); worst names the violating edge with the largest
    spanner distance (None when disconnected in S) and is None when the
    check passes. Spanner edges themselves sit at distance 1 and are skipped.
    """
    sub = _spanner_adjacency(adj, edges)
    edge_set = {tuple(sorted(e)) for e in edges}
    failures: list[Edge] = []
    by_source: dict[int, list[int]] = {}
    for u in sorted(adj):
        for v in adj[u]:
            if u < v and (u, v) not in edge_set:
                by_source.setdefault(u, []).append(v)
    for u, targets in by_source.items():
        for v in sorted(targets):
            if not within_distance(sub, u, v, k):
                failures.append((u, v))
    if not failures:
        return True, None
    # exact distances for the failing edges only
    worst: tuple[Edge, int | None] = (failures[0], None)
    worst_rank = -1.0
    for u, v in failures:
        dist = bfs_distances(sub, u).get(v)
        rank = math.inf if dist is None else float(dist)
        if rank > worst_rank:
            worst_rank = rank
            worst = ((u, v), dist)
    return False, worst


def stretch_check_allpairs(adj: Adjacency, edges, k: int) -> bool:
    """Brute-force oracle: every connected pair's distance stretched at most k."""
    sub = _spanner_adjacency(adj, edges)
    for u in sorted(adj):
        dg = bfs_distances(adj, u)
        ds = bfs_distances(sub, u)
        for v, d in dg.items():
            if v == u:
                continue
            if v not in ds or ds[v] > k * d:
                return False
    return True


def size_threshold(n: int, t: int, slack_exponent: float | None = None) -> float:
    """Edge budget n^{1 + 1/t + eps} + n; eps defaults to 1/(16 k^2) for k = 2t-1."""
    k = 2 * t - 1
    eps = slack_exponent if slack_exponent is not None else 1.0 / (16 * k * k)
    return n ** (1.0 + 1.0 / t + eps) + n


def size_check(edges_or_size, n: int, t: int, slack_exponent: float | None = None) -> bool:
    size = edges_or_size if isinstance(edges_or_size, int) else len(edges_or_size)
    return size <= size_threshold(n, t, slack_exponent)


def critical_inclusion_check(report: CriticalityReport, edges) -> list[Edge]:
    """Critical edges absent from the candidate spanner (must be empty when stretch holds)."""
    have = {tuple(sorted(e)) for e in edges}
    return sorted(e for e in report.edges if e not in have)


def sparse_set_floor(params: LowerBoundParams) -> int:
    """Smallest admissible sparse-set size: n/2 - floor(n / log2 n)."""
    return params.n // 2 - math.floor(params.n / math.log2(params.n))


def sparse_set(
    g: ColoredGraph,
    params: LowerBoundParams,
    output_counts: dict[int, int],
) -> tuple[frozenset[int], bool]:
    """U nodes whose declared output stays below the sparse budget.

    Returns (S, ok) with ok true when |S| >= n/2 - floor(n/log2 n); the
    comparison is meaningful whenever the run's global size check passed.
    """
    budget = sparse_output_threshold(params)
    members = frozenset(
        g.ids[u] for u in range(g.half) if output_counts.get(g.ids[u], 0) <= budget
    )
    return members, len(members) >= sparse_set_floor(params)


@dataclass(frozen=True)
class VerificationReport:
    stretch_ok: bool
    worst_edge: tuple[Edge, int | None] | None
    size_ok: bool
    size_threshold: float
    spanner_size: int
    missing_critical: tuple[Edge, ...]
    sparse_members: frozenset[int]
    sparse_floor: float
    sparse_ok: bool


def verification_report(
    g: ColoredGraph,
    params: LowerBoundParams,
    edges,
    criticality: CriticalityReport,
    output_counts: dict[int, int] | None = None,
) -> VerificationReport:
    adj = g.to_adjacency()
    ok, worst = stretch_check(adj, edges, params.k)
    if output_counts is None:
        counts: dict[int, int] = {}
        for u, v in edges:
            counts[u] = counts.get(u, 0) + 1
            counts[v] = counts.get(v, 0) + 1
        output_counts = counts
    members, sparse_ok = sparse_set(g, params, output_counts)
    size = len({tuple(sorted(e)) for e in edges})
    return VerificationReport(
        stretch_ok=ok,
        worst_edge=worst,
        size_ok=size_check(size, params.n, params.t),
        size_threshold=size_threshold(params.n, params.t),
        spanner_size=size,
        missing_critical=tuple(critical_inclusion_check(criticality, edges)),
        sparse_members=members,
        sparse_floor=float(sparse_set_floor(params)),
        sparse_ok=sparse_ok,
    )
