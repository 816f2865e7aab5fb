"""Spanner constructions: a greedy sequential oracle and a cluster-based 3-spanner.

The greedy scan is the reference: it adds an edge exactly when the current
spanner leaves its endpoints more than k hops apart, so its output has girth
above k+1, stretch at most k, and at most n^{1+1/t} + n edges for
k = 2t-1. The cluster construction is the randomized 3-spanner: sample
centers, join each remaining node to its smallest-ID neighboring center, and
connect every node to each adjacent foreign cluster through its smallest-ID
member. It comes in centralized, two-party and simulator-hosted forms that
produce identical edge sets under the same seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from spanlab.graph_model import _geometric_pair_sample
from spanlab.search import Adjacency, within_distance
from spanlab.seeds import node_seed
from spanlab.simulator import Mode, ModelConfig, NodeProgram, RunResult, id_bits, run

Edge = tuple[int, int]


@dataclass(frozen=True)
class SpannerOutput:
    algorithm: str
    edges: frozenset[Edge]
    per_node: dict[int, tuple[Edge, ...]]
    bits: int | None = None
    rounds: int | None = None
    fallback_count: int = 0

    @property
    def size(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def _normalize(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _per_node_view(nodes, edges: frozenset[Edge]) -> dict[int, tuple[Edge, ...]]:
    listing: dict[int, list[Edge]] = {v: [] for v in nodes}
    for e in sorted(edges):
        listing[e[0]].append(e)
        listing[e[1]].append(e)
    return {v: tuple(es) for v, es in listing.items()}


def all_edges(adj: Adjacency) -> list[Edge]:
    return sorted({_normalize(u, v) for u in adj for v in adj[u]})


def random_gnp(n: int, p: float, seed: int) -> Adjacency:
    """Erdos-Renyi G(n, p) test fixture on ids 1..n."""
    adj: Adjacency = {v: set() for v in range(1, n + 1)}
    rng = random.Random(seed)
    for a, b in _geometric_pair_sample(n, p, rng):
        adj[a + 1].add(b + 1)
        adj[b + 1].add(a + 1)
    return adj


def greedy_spanner(adj: Adjacency, k: int, order: list[Edge] | None = None) -> SpannerOutput:
    """Classical greedy k-spanner; default scan order is (min id, max id).

    Adding (u, v) only when the spanner distance exceeds k means no cycle of
    length <= k+1 ever forms, which bounds both stretch (<= k) and size.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    edges = order if order is not None else all_edges(adj)
    spanner: Adjacency = {v: set() for v in adj}
    chosen: set[Edge] = set()
    for u, v in edges:
        if not within_distance(spanner, u, v, k):
            spanner[u].add(v)
            spanner[v].add(u)
            chosen.add(_normalize(u, v))
    out = frozenset(chosen)
    return SpannerOutput(algorithm="greedy", edges=out, per_node=_per_node_view(adj, out))


# -- cluster-based 3-spanner --------------------------------------------------


@dataclass(frozen=True)
class ClusterAssignment:
    center: dict[int, bool]
    cluster: dict[int, int]  # node -> cluster id (a center's node id, or itself)
    low_degree: dict[int, bool]
    fallback: frozenset[int]  # non-centers with no neighboring center


def center_probability(n: int) -> float:
    return min(1.0, 2.0 * math.log(n) / math.sqrt(n))


def _center_coin(seed: int, v: int, p: float) -> bool:
    # Same stream a simulator-hosted node would draw from, so outputs match.
    return random.Random(node_seed(seed, v)).random() < p


def assign_clusters(adj: Adjacency, seed: int) -> ClusterAssignment:
    """Sampling and joining phases; fallback nodes become their own singleton cluster."""
    n = len(adj)
    deg_threshold = math.ceil(math.sqrt(n))
    p = center_probability(n)
    center: dict[int, bool] = {}
    low: dict[int, bool] = {}
    for v in sorted(adj):
        low[v] = len(adj[v]) <= deg_threshold
        center[v] = low[v] or _center_coin(seed, v, p)
    cluster: dict[int, int] = {}
    fallback: set[int] = set()
    for v in sorted(adj):
        if center[v]:
            cluster[v] = v
            continue
        candidates = [w for w in adj[v] if center[w]]
        if candidates:
            cluster[v] = min(candidates)
        else:
            cluster[v] = v
            fallback.add(v)
    return ClusterAssignment(center=center, cluster=cluster, low_degree=low, fallback=frozenset(fallback))


def _cluster_edges(adj: Adjacency, assignment: ClusterAssignment, owned=None) -> set[Edge]:
    """Join and inter-cluster edges contributed by the ``owned`` nodes (default: all)."""
    nodes = sorted(adj) if owned is None else sorted(owned)
    chosen: set[Edge] = set()
    cluster = assignment.cluster
    for v in nodes:
        if v in assignment.fallback:
            chosen.update(_normalize(v, w) for w in adj[v])
            continue
        if not assignment.center[v]:
            chosen.add(_normalize(v, cluster[v]))
        by_cluster: dict[int, int] = {}
        for w in adj[v]:
            c = cluster[w]
            if c == cluster[v]:
                continue
            if c not in by_cluster or w < by_cluster[c]:
                by_cluster[c] = w
        for w in by_cluster.values():
            chosen.add(_normalize(v, w))
    return chosen


def cluster_3spanner_centralized(adj: Adjacency, seed: int) -> SpannerOutput:
    assignment = assign_clusters(adj, seed)
    edges = frozenset(_cluster_edges(adj, assignment))
    return SpannerOutput(
        algorithm="cluster3-central",
        edges=edges,
        per_node=_per_node_view(adj, edges),
        fallback_count=len(assignment.fallback),
    )


def cluster_3spanner_two_party(
    adj: Adjacency,
    vertex_partition: tuple[set[int], set[int]],
    seed: int,
) -> tuple[SpannerOutput, int]:
    """Vertex-partition two-party run; returns the spanner and the exchanged bits.

    Each party owns its vertices with all incident edges. Center status of an
    owned vertex is decided locally; the parties then pool per-vertex
    (vertex id, cluster id) announcements -- charged 2 * ceil(log2 n) bits per
    owned vertex -- after which joining and inter-cluster selection need no
    further communication. Output equals the centralized run on the same seed.
    """
    side_a, side_b = (set(vertex_partition[0]), set(vertex_partition[1]))
    if side_a & side_b or side_a | side_b != set(adj):
        raise ValueError("vertex_partition must split the vertex set into two disjoint parts")
    assignment = assign_clusters(adj, seed)
    pair_bits = 2 * id_bits(len(adj))
    bits = sum(len(side) * pair_bits for side in (side_a, side_b))
    edges = frozenset(_cluster_edges(adj, assignment, owned=side_a) | _cluster_edges(adj, assignment, owned=side_b))
    out = SpannerOutput(
        algorithm="cluster3-2party",
        edges=edges,
        per_node=_per_node_view(adj, edges),
        bits=bits,
        fallback_count=len(assignment.fallback),
    )
    return out, bits


class _Cluster3Program(NodeProgram):
    """Three-round simulator form: flag centers, announce clusters, select edges."""

    def setup(self, knowledge, rng):
        super().setup(knowledge, rng)
        n = len(knowledge.roster)
        deg = len(knowledge.neighbor_ids)
        self.is_center = deg <= math.ceil(math.sqrt(n)) or rng.random() < center_probability(n)
        self.id_width = id_bits(max(knowledge.roster))
        self.center_neighbors: list[int] = []
        self.cluster_of: dict[int, int] = {}
        self.my_cluster: int | None = None
        self.fallback = False

    def _encode_id(self, v: int) -> str:
        return format(v - 1, f"0{self.id_width}b")

    def _decode_id(self, bits: str) -> int:
        return int(bits, 2) + 1

    def round_start(self, round_no, inbox):
        me = self.knowledge.own_id
        neighbors = sorted(self.knowledge.neighbor_ids)
        if round_no == 1:
            flag = "1" if self.is_center else "0"
            return [(w, flag) for w in neighbors]
        if round_no == 2:
            self.center_neighbors = sorted(m.sender for m in inbox if m.payload == "1")
            for m in inbox:
                if m.payload == "1":
                    self.cluster_of[m.sender] = m.sender
            if self.is_center:
                self.my_cluster = me
                return []
            if self.center_neighbors:
                self.my_cluster = self.center_neighbors[0]
            else:
                self.my_cluster = me
                self.fallback = True
            return [(w, self._encode_id(self.my_cluster)) for w in neighbors]
        # round 3: non-center neighbors announced their clusters last round
        for m in inbox:
            if len(m.payload) == self.id_width:
                self.cluster_of[m.sender] = self._decode_id(m.payload)
        edges: set[Edge] = set()
        if self.fallback:
            edges.update(_normalize(me, w) for w in neighbors)
        elif not self.is_center:
            edges.add(_normalize(me, self.my_cluster))
        by_cluster: dict[int, int] = {}
        for w in neighbors:
            c = self.cluster_of.get(w, w)  # silent neighbor in round 2 == center or fallback singleton
            if c == self.my_cluster:
                continue
            if c not in by_cluster or w < by_cluster[c]:
                by_cluster[c] = w
        edges.update(_normalize(me, w) for w in by_cluster.values())
        self.finish(edges)
        return []


def cluster_3spanner_program():
    """Factory for the simulator-hosted three-round form."""
    return _Cluster3Program()


def assemble_program_output(result: RunResult) -> SpannerOutput:
    """Union the per-node declarations into a consistent SpannerOutput.

    A node adds inter-cluster edges unilaterally, so the chosen endpoint may
    not list them; symmetrizing here keeps both endpoints' views equal.
    """
    edges: set[Edge] = set()
    for declared in result.outputs.values():
        edges.update(declared)
    out = frozenset(edges)
    return SpannerOutput(
        algorithm="cluster3-distributed",
        edges=out,
        per_node=_per_node_view(result.outputs, out),
        bits=result.total_bits,
        rounds=result.rounds_used,
    )


def run_cluster_3spanner(adj: Adjacency, seed: int, mode: Mode = Mode.CONGEST_KT1, max_rounds: int = 8) -> SpannerOutput:
    """Convenience wrapper: host the three-round program on the simulator."""
    if mode not in (Mode.CONGEST_KT1, Mode.CONGESTED_CLIQUE):
        raise ValueError("the cluster 3-spanner program runs under congest_kt1 or congested_clique")
    config = ModelConfig(mode=mode, id_space=len(adj), max_rounds=max_rounds)
    result = run(config, adj, cluster_3spanner_program, seed=seed)
    return assemble_program_output(result)
