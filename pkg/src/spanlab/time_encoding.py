"""Conveying a whole graph through the timing of single bits.

With lock-step rounds and unbounded time, the *index* of the round in which
a node stays briefly un-silent can carry arbitrarily much information. The
codec here fixes a bijection between labeled graphs and integers: an
n-node graph with IDs drawn from [1, id_space] maps to a mixed-radix index
over (edge bitmask, permutation rank, ID-subset rank), giving

    count = 2^C(n,2) * n! * C(id_space, n)

possibilities. The convergecast demo then moves a full topology to the root
of a spanning tree in one 1-bit message per node per direction -- at the
price of a round count proportional to that astronomical total. Hence the
demo's hard n <= 3 guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True)
class LabeledGraph:
    """n node slots with distinct IDs and an edge set over slot pairs (i < j)."""

    ids: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    @property
    def n(self) -> int:
        return len(self.ids)

    def __post_init__(self):
        n = len(self.ids)
        if len(set(self.ids)) != n or any(v < 1 for v in self.ids):
            raise ValueError("ids must be distinct positive integers")
        for i, j in self.edges:
            if not (0 <= i < j < n):
                raise ValueError(f"edge slot pair ({i}, {j}) is out of range")

    def adjacency_ids(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.ids}
        for i, j in self.edges:
            adj[self.ids[i]].add(self.ids[j])
            adj[self.ids[j]].add(self.ids[i])
        return adj


def enumeration_size(n: int, id_space: int) -> int:
    """Exact count of (edge set, ID assignment) configurations."""
    if n < 1 or id_space < n:
        raise ValueError("need id_space >= n >= 1")
    return 2 ** math.comb(n, 2) * math.factorial(n) * math.comb(id_space, n)


def _pair_slots(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def _perm_rank(perm: tuple[int, ...]) -> int:
    rank = 0
    items = list(perm)
    n = len(items)
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if items[j] < items[i])
        rank += smaller * math.factorial(n - 1 - i)
    return rank


def _perm_unrank(rank: int, n: int) -> tuple[int, ...]:
    pool = list(range(n))
    out = []
    for i in range(n):
        f = math.factorial(n - 1 - i)
        idx, rank = divmod(rank, f)
        out.append(pool.pop(idx))
    return tuple(out)


def _comb_rank(subset: tuple[int, ...], id_space: int) -> int:
    """Lexicographic rank of a sorted ID subset within [1, id_space]."""
    rank = 0
    n = len(subset)
    prev = 0
    for i, s in enumerate(subset):
        for skipped in range(prev + 1, s):
            rank += math.comb(id_space - skipped, n - i - 1)
        prev = s
    return rank


def _comb_unrank(rank: int, n: int, id_space: int) -> tuple[int, ...]:
    out = []
    prev = 0
    remaining = n
    for _ in range(n):
        s = prev + 1
        while True:
            block = math.comb(id_space - s, remaining - 1)
            if rank < block:
                break
            rank -= block
            s += 1
        out.append(s)
        prev = s
        remaining -= 1
    return tuple(out)


def encode_graph(g: LabeledGraph, id_space: int) -> int:
    """Index of the labeled graph in the fixed enumeration; inverse of decode_graph."""
    n = g.n
    if id_space < n:
        raise ValueError("id_space smaller than the graph")
    if any(v > id_space for v in g.ids):
        raise ValueError("an id exceeds id_space")
    slots = _pair_slots(n)
    mask = 0
    for bit, pair in enumerate(slots):
        if pair in g.edges:
            mask |= 1 << bit
    subset = tuple(sorted(g.ids))
    position = {v: i for i, v in enumerate(subset)}
    perm = tuple(position[v] for v in g.ids)
    subset_count = math.comb(id_space, n)
    return (mask * math.factorial(n) + _perm_rank(perm)) * subset_count + _comb_rank(subset, id_space)


def decode_graph(index: int, n: int, id_space: int) -> LabeledGraph:
    """Labeled graph at ``index``; rejects indices outside [0, enumeration_size)."""
    total = enumeration_size(n, id_space)
    if not 0 <= index < total:
        raise ValueError(f"index {index} out of range [0, {total})")
    subset_count = math.comb(id_space, n)
    rest, subset_rank = divmod(index, subset_count)
    mask, perm_rank = divmod(rest, math.factorial(n))
    subset = _comb_unrank(subset_rank, n, id_space)
    perm = _perm_unrank(perm_rank, n)
    ids = tuple(subset[p] for p in perm)
    slots = _pair_slots(n)
    edges = frozenset(pair for bit, pair in enumerate(slots) if mask >> bit & 1)
    return LabeledGraph(ids=ids, edges=edges)


@dataclass(frozen=True)
class ConvergecastReport:
    n: int
    id_space: int
    enumeration_count: int
    rounds_used: int
    payload_bits: int
    decode_ok: bool
    decoded: LabeledGraph
    setup_cost_note: str


def _depths(tree_parent: dict[int, int | None]) -> dict[int, int]:
    depths: dict[int, int] = {}

    def depth(v: int) -> int:
        if v in depths:
            return depths[v]
        parent = tree_parent[v]
        d = 0 if parent is None else depth(parent) + 1
        depths[v] = d
        return d

    for v in tree_parent:
        depth(v)
    return depths


def convergecast_demo(
    g: LabeledGraph,
    id_space: int,
    tree_parent: dict[int, int | None],
) -> ConvergecastReport:
    """Collect the topology at the root with one timed bit per node per direction.

    ``tree_parent`` maps each node slot to its parent slot (root to None) and
    must be a spanning tree of g. Iterations of ``enumeration_size`` rounds
    run strictly one depth level at a time: in up-iteration i, the nodes at
    depth d-i+1 each send a single bit whose round number is the index of
    their accumulated subgraph knowledge (own incident edges plus everything
    decoded from the children). The same mechanism then broadcasts the
    root's final index back down. Spanning-tree construction and leader
    election are presumed done and reported as a symbolic cost note.
    """
    n = g.n
    if n > 3:
        raise ValueError("the demo is capped at n <= 3; the round count explodes beyond that")
    if id_space > 4:
        raise ValueError("the demo is capped at id_space <= 4")
    if set(tree_parent) != set(range(n)):
        raise ValueError("tree_parent must cover exactly the node slots")
    roots = [v for v, p in tree_parent.items() if p is None]
    if len(roots) != 1:
        raise ValueError("tree must have exactly one root")
    for v, p in tree_parent.items():
        if p is not None and tuple(sorted((v, p))) not in g.edges:
            raise ValueError(f"tree edge ({v}, {p}) is not an edge of the graph")
    root = roots[0]
    depths = _depths(tree_parent)
    d = max(depths.values())
    t = enumeration_size(n, id_space)

    children: dict[int, list[int]] = {v: [] for v in range(n)}
    for v, p in tree_parent.items():
        if p is not None:
            children[p].append(v)

    incident = {
        v: frozenset(e for e in g.edges if v in e) for v in range(n)
    }
    known: dict[int, set[tuple[int, int]]] = {v: set(incident[v]) for v in range(n)}

    payload_bits = 0
    rounds_used = 0
    # Up phase: one depth level per iteration of t rounds.
    for i in range(1, d + 1):
        level = d - i + 1
        rounds_used += t
        for v in sorted(v for v in range(n) if depths[v] == level):
            index = encode_graph(LabeledGraph(ids=g.ids, edges=frozenset(known[v])), id_space)
            assert 0 <= index < t
            payload_bits += 1  # the single bit, timed at round `index` of this iteration
            parent = tree_parent[v]
            received = decode_graph(index, n, id_space)
            known[parent] |= set(received.edges)
    final_index = encode_graph(LabeledGraph(ids=g.ids, edges=frozenset(known[root])), id_space)
    decoded = decode_graph(final_index, n, id_space)

    # Down phase: the root's index trickles one level per iteration.
    node_view: dict[int, int] = {root: final_index}
    for i in range(1, d + 1):
        rounds_used += t
        for v in sorted(v for v in range(n) if depths[v] == i - 1):
            for c in sorted(children[v]):
                payload_bits += 1
                node_view[c] = node_view[v]

    decode_ok = decoded == g and all(
        decode_graph(ix, n, id_space) == decoded for ix in node_view.values()
    )
    return ConvergecastReport(
        n=n,
        id_space=id_space,
        enumeration_count=t,
        rounds_used=rounds_used,
        payload_bits=payload_bits,
        decode_ok=decode_ok,
        decoded=decoded,
        setup_cost_note="spanning tree + leader election assumed: ~O(n * polylog n) bits, not simulated",
    )
