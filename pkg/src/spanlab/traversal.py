"""Critical-edge detection and the traversal-sequence calculus.

A red edge (u, v) is *critical* at stretch k when removing it leaves u and v
more than k hops apart, so every k-spanner must keep it. Criticality is
decided two independent ways: a depth-limited search on the punctured graph,
and an exhaustive sweep over *traversal sequences* (color strings over
{R, B} that constrain which edge color each hop may use). The two must agree
on every edge; tests lean on that cross-check.

The sequence calculus also covers the growth bookkeeping: which sequences
reach the most nodes per step, and why even the best of them fall short of a
constant fraction of U.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from spanlab.graph_model import ColoredGraph, LowerBoundParams, RED

R = "R"
B = "B"


def _check_sequence(seq: str) -> None:
    if not seq:
        raise ValueError("traversal sequence must be nonempty")
    bad = set(seq) - {R, B}
    if bad:
        raise ValueError(f"traversal sequence may only contain 'R' and 'B', got {sorted(bad)}")


def all_sequences(k: int):
    """All length-k traversal sequences in lexicographic order (B before R)."""
    for chars in itertools.product(B + R, repeat=k):
        yield "".join(chars)


@dataclass(frozen=True)
class ReachableLevels:
    """Level sets of the deduplicated view tree walked by one sequence."""

    start: int
    sequence: str
    levels: tuple[frozenset[int], ...]

    @property
    def union(self) -> frozenset[int]:
        out: set[int] = set()
        for level in self.levels:
            out |= level
        return frozenset(out)


def _resolve_edge(g: ColoredGraph, edge: tuple[int, int]) -> tuple[int, int]:
    a, b = edge
    i, j = g.index_of(a), g.index_of(b)
    if g.edge_color(i, j) is None:
        raise ValueError(f"({a}, {b}) is not an edge of the graph")
    return i, j


def reachable_levels(
    g: ColoredGraph,
    start: int,
    sequence: str,
    excluded: tuple[int, int] | None = None,
) -> ReachableLevels:
    """Expand level by level from ``start`` following the colors of ``sequence``.

    Level i+1 holds the nodes adjacent to level i via an edge of color
    sequence[i] that have not appeared on any earlier level; ``excluded`` (an
    id pair) is never traversed. All node arguments and results are IDs.
    """
    _check_sequence(sequence)
    src = g.index_of(start)
    skip: set[tuple[int, int]] = set()
    if excluded is not None:
        i, j = _resolve_edge(g, excluded)
        skip = {(i, j), (j, i)}
    visited = {src}
    current = [src]
    levels = [frozenset([g.ids[src]])]
    for color in sequence:
        nxt: set[int] = set()
        for x in current:
            nbrs = g.red_neighbors(x) if color == R else g.blue_neighbors(x)
            for y in nbrs:
                if (x, y) in skip:
                    continue
                if y not in visited:
                    visited.add(y)
                    nxt.add(y)
        levels.append(frozenset(g.ids[y] for y in nxt))
        current = list(nxt)
    return ReachableLevels(start=start, sequence=sequence, levels=tuple(levels))


def is_critical(g: ColoredGraph, edge: tuple[int, int], k: int) -> bool:
    """True iff removing the red edge leaves its endpoints > k hops apart."""
    i, j = _resolve_edge(g, edge)
    if g.edge_color(i, j) != RED:
        raise ValueError(f"edge {edge} is not red; only red edges can be critical")
    # depth-limited BFS from i, never crossing (i, j)
    visited = {i}
    frontier = [i]
    for _ in range(k):
        nxt = []
        for x in frontier:
            for y in g.neighbors(x):
                if (x == i and y == j) or (x == j and y == i):
                    continue
                if y == j:
                    return False
                if y not in visited:
                    visited.add(y)
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    return True


def criticality_via_traversal(g: ColoredGraph, edge: tuple[int, int], k: int) -> bool:
    """Criticality decided by the sequence oracle: no length-k sequence reaches v from u.

    Agrees with :func:`is_critical` on every input; a path of length d <= k
    with colors c1..cd puts v in the level union of any sequence extending
    c1..cd, and conversely every union member is reachable within k hops.
    """
    a, b = edge
    i, j = _resolve_edge(g, edge)
    if g.edge_color(i, j) != RED:
        raise ValueError(f"edge {edge} is not red; only red edges can be critical")
    for seq in all_sequences(k):
        if _reaches(g, i, j, seq):
            return False
    return True


def _reaches(g: ColoredGraph, src: int, dst: int, sequence: str) -> bool:
    """Does the color-constrained expansion from src (minus edge (src, dst)) hit dst?"""
    visited = {src}
    current = [src]
    for color in sequence:
        nxt = []
        for x in current:
            nbrs = g.red_neighbors(x) if color == R else g.blue_neighbors(x)
            for y in nbrs:
                if (x == src and y == dst) or (x == dst and y == src):
                    continue
                if y == dst:
                    return True
                if y not in visited:
                    visited.add(y)
                    nxt.append(y)
        current = nxt
        if not current:
            return False
    return False


@dataclass(frozen=True)
class CriticalityReport:
    """Per-U-node critical incidence plus the many-critical-edges flags."""

    per_node: dict[int, tuple[tuple[int, int], ...]]  # node id -> sorted incident critical edges
    counts: dict[int, int]
    total: int
    threshold: float  # (1/16) n^{1/(k+1)}
    meets_threshold: dict[int, bool]

    @property
    def edges(self) -> set[tuple[int, int]]:
        out: set[tuple[int, int]] = set()
        for group in self.per_node.values():
            out.update(group)
        return out


def critical_edges(g: ColoredGraph, params: LowerBoundParams) -> CriticalityReport:
    """Exhaustively classify every red edge and aggregate per U node."""
    k = params.k
    per_node: dict[int, list[tuple[int, int]]] = {g.ids[u]: [] for u in range(g.half)}
    total = 0
    for a, b in g.red_edge_ids():
        if is_critical(g, (a, b), k):
            total += 1
            per_node[a].append((a, b))
            per_node[b].append((a, b))
    threshold = params.n ** (1.0 / (k + 1)) / 16.0
    counts = {nid: len(group) for nid, group in per_node.items()}
    return CriticalityReport(
        per_node={nid: tuple(sorted(group)) for nid, group in per_node.items()},
        counts=counts,
        total=total,
        threshold=threshold,
        meets_threshold={nid: c >= threshold for nid, c in counts.items()},
    )


# -- sequence shape calculus -------------------------------------------------


def _runs(seq: str) -> list[tuple[str, int]]:
    return [(ch, len(list(grp))) for ch, grp in itertools.groupby(seq)]


def blue_steps_paired(seq: str) -> bool:
    """True iff every maximal run of B steps has length exactly two.

    Starting on the U side, an odd blue step lands in V where red edges do
    not exist, so productive sequences cross blue edges in pairs.
    """
    _check_sequence(seq)
    return all(length == 2 for ch, length in _runs(seq) if ch == B)


def eliminate_long_b_runs(seq: str) -> str:
    """Rewrite the first run of >= 3 consecutive B steps to BB followed by Rs.

    The first two blue steps of the run already saturate the regions in view;
    turning the rest into red steps can only enlarge the reachable union.
    Raises if no such run exists.
    """
    _check_sequence(seq)
    i = 0
    while i < len(seq):
        if seq[i] == B:
            j = i
            while j < len(seq) and seq[j] == B:
                j += 1
            if j - i >= 3:
                return seq[: i + 2] + R * (j - i - 2) + seq[j:]
            i = j
        else:
            i += 1
    raise ValueError("sequence has no run of three or more consecutive B steps")


def max_blue_pairs(k: int) -> int:
    """Most BB pairs a length-k sequence can host with single-R separators."""
    return (k + 1) // 3


def is_b_maximal(seq: str) -> bool:
    """True iff the sequence attains the fastest idealized growth for its length.

    That means: blue steps come in pairs (precondition), the number of BB
    pairs is the maximum possible for the length, and consecutive BB pairs
    are separated by exactly one R step (surplus R steps may only sit at the
    ends). Replacing any adjacent RR of such a sequence by BB would glue two
    blue pairs together, so no rewrite gains another pair.
    """
    if not blue_steps_paired(seq):
        raise ValueError("blue steps must come in pairs (runs of exactly two)")
    if seq.count(B) // 2 != max_blue_pairs(len(seq)):
        return False
    runs = _runs(seq)
    for idx, (ch, length) in enumerate(runs):
        if ch == R and length > 1 and 0 < idx < len(runs) - 1:
            return False
    return True


def enumerate_b_maximal(k: int) -> list[str]:
    """All B-maximal sequences of length k, lexicographic (B before R)."""
    if k < 3:
        raise ValueError("k must be >= 3")
    return [seq for seq in all_sequences(k) if blue_steps_paired(seq) and is_b_maximal(seq)]


def idealized_reach_exponent(seq: str, k: int) -> Fraction:
    """Exponent e with idealized reachable-set size n^e after walking ``seq``.

    Each R step multiplies the frontier by n^{1/(k+1)} and each BB pair by
    n^{2/(k+1) + 1/(4k^2)} (one full region per frontier node). Exact
    rational arithmetic throughout.
    """
    if len(seq) != k:
        raise ValueError(f"sequence length {len(seq)} does not match k={k}")
    if not blue_steps_paired(seq):
        raise ValueError("blue steps must come in pairs (runs of exactly two)")
    r_step = Fraction(1, k + 1)
    bb_pair = Fraction(2, k + 1) + Fraction(1, 4 * k * k)
    total = Fraction(0)
    for ch, length in _runs(seq):
        if ch == R:
            total += length * r_step
        else:
            total += bb_pair
    return total


def check_bmaximal_reach_bound(k: int) -> bool:
    """Verify that every B-maximal sequence's exponent stays below 1 - 1/k^3 - 1/k^2.

    The margin of 1/k^2 is what absorbs the 2^k union over sequences; the
    comparison is exact on rationals.
    """
    if k < 3:
        raise ValueError("k must be >= 3")
    bound = 1 - Fraction(1, k**3) - Fraction(1, k**2)
    return all(idealized_reach_exponent(seq, k) <= bound for seq in enumerate_b_maximal(k))
