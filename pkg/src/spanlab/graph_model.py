"""Two-sided region graphs with deterministic blue and sampled red edges.

An instance on n nodes splits them into sides U and V of n/2 each. Both
sides are carved into consecutive regions of ``region_size`` nodes (the last
region keeps the remainder), and every region induces a complete bipartite
graph of *blue* edges between its U and V members. *Red* edges are sampled
independently inside U, each unordered pair with probability ``red_prob``.
Node IDs are a uniformly random permutation of [1, n] (or a random
n-subset of [1, id_space] when a larger ID space is requested).

Blue structure is implied by (n, region_size) and never stored; only the red
adjacency is explicit. Edge colors are an analysis device, not node input.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from spanlab.seeds import subseed

BLUE = "blue"
RED = "red"


@dataclass(frozen=True)
class LowerBoundParams:
    """Derived parameters of the instance family at a given (n, t)."""

    n: int
    t: int
    k: int
    region_size: int
    red_prob: float
    expected_red_degree: float
    id_space: int

    @property
    def half(self) -> int:
        return self.n // 2


def _iroot(x: int, r: int) -> int:
    """floor(x ** (1/r)) for nonnegative integers, exactly (integer Newton)."""
    if x < 0 or r < 1:
        raise ValueError("x must be >= 0 and r >= 1")
    if x < 2 or r == 1:
        return x
    y = 1 << ((x.bit_length() + r - 1) // r)  # upper bound on the root
    while True:
        better = ((r - 1) * y + x // y ** (r - 1)) // r
        if better >= y:
            break
        y = better
    while y**r > x:
        y -= 1
    while (y + 1) ** r <= x:
        y += 1
    return y


def floor_power(n: int, exponent: Fraction) -> int:
    """floor(n ** exponent) computed in exact integer arithmetic."""
    num, den = exponent.numerator, exponent.denominator
    if num < 0:
        raise ValueError("exponent must be nonnegative")
    return _iroot(n**num, den)


def region_exponent(k: int) -> Fraction:
    """Exponent e with region_size = floor(n ** e)."""
    return Fraction(2, k + 1) + Fraction(1, 4 * k * k)


def derive_params(n: int, t: int, id_space: int | None = None) -> LowerBoundParams:
    """Compute all derived quantities of the family at (n, t).

    Rejects odd n, n < 16 and t < 2. Also rejects combinations where the
    region size would drop below 2 (t too large for the given n), since a
    region must host at least one blue edge per member.
    """
    if not isinstance(n, int) or not isinstance(t, int):
        raise ValueError("n and t must be integers")
    if n < 16 or n % 2 != 0:
        raise ValueError(f"n must be an even integer >= 16, got {n}")
    if t < 2:
        raise ValueError(f"t must be an integer >= 2, got {t}")
    k = 2 * t - 1
    region_size = floor_power(n, region_exponent(k))
    if region_size < 2:
        raise ValueError(f"region size {region_size} < 2: t={t} is too large for n={n}")
    red_prob = 1.5 / n ** (k / (k + 1))
    if not 0.0 < red_prob < 1.0:
        raise ValueError(f"red edge probability {red_prob} out of (0, 1)")
    expected = (n // 2 - 1) * red_prob
    if id_space is None:
        id_space = n
    elif id_space < n:
        raise ValueError("id_space must be at least n")
    return LowerBoundParams(
        n=n,
        t=t,
        k=k,
        region_size=region_size,
        red_prob=red_prob,
        expected_red_degree=expected,
        id_space=id_space,
    )


def red_degree_band(params: LowerBoundParams) -> tuple[float, float]:
    """Concentration band for per-node red degree: (3/4)n^{1/(k+1)} +- 3 n^{1/(2(k+1))} sqrt(ln n).

    The deviation constant 3 comes from a relative deviation of
    4 sqrt(ln(n) / n^{1/(k+1)}) around the mean.
    """
    n, k = params.n, params.k
    center = 0.75 * n ** (1.0 / (k + 1))
    dev = 3.0 * n ** (1.0 / (2 * (k + 1))) * math.sqrt(math.log(n))
    return center - dev, center + dev


def sparse_output_threshold(params: LowerBoundParams) -> int:
    """Per-node output budget floor(n^{2/(k+1) + 1/(8 k^2)}) below which a node counts as sparse."""
    k = params.k
    return floor_power(params.n, Fraction(2, k + 1) + Fraction(1, 8 * k * k))


class ColoredGraph:
    """An instance: implicit blue region structure plus explicit red adjacency.

    Nodes are addressed internally by index 0..n-1 (U first, then V) and
    externally by their ID. All public graph operations in the package speak
    external IDs; the index view is available for construction and tests.
    """

    def __init__(
        self,
        n: int,
        region_size: int,
        ids: tuple[int, ...],
        red: tuple[frozenset[int], ...],
        seed: int | None = None,
    ):
        if n % 2 != 0 or n < 2:
            raise ValueError("n must be a positive even integer")
        if region_size < 1:
            raise ValueError("region_size must be >= 1")
        if len(ids) != n or len(set(ids)) != n:
            raise ValueError("ids must assign n distinct IDs")
        if len(red) != n:
            raise ValueError("red adjacency must cover all n nodes")
        half = n // 2
        for i, nbrs in enumerate(red):
            if i in nbrs:
                raise ValueError("self loop in red adjacency")
            if i >= half and nbrs:
                raise ValueError("V-side nodes cannot carry red edges")
            for j in nbrs:
                if not 0 <= j < half or i not in red[j]:
                    raise ValueError("red adjacency must be symmetric within U")
        self.n = n
        self.half = half
        self.region_size = region_size
        self.ids = ids
        self.red = red
        self.seed = seed
        self._index_of = {node_id: i for i, node_id in enumerate(ids)}

    # -- structure ---------------------------------------------------------

    @property
    def n_regions(self) -> int:
        return (self.half + self.region_size - 1) // self.region_size

    def side(self, index: int) -> str:
        return "U" if index < self.half else "V"

    def region(self, index: int) -> int:
        pos = index if index < self.half else index - self.half
        return pos // self.region_size

    def region_u_members(self, region: int) -> range:
        lo = region * self.region_size
        return range(lo, min(lo + self.region_size, self.half))

    def region_v_members(self, region: int) -> range:
        lo = region * self.region_size
        return range(self.half + lo, self.half + min(lo + self.region_size, self.half))

    def blue_neighbors(self, index: int) -> range:
        r = self.region(index)
        return self.region_v_members(r) if index < self.half else self.region_u_members(r)

    def red_neighbors(self, index: int) -> frozenset[int]:
        return self.red[index]

    def neighbors(self, index: int):
        yield from self.blue_neighbors(index)
        yield from self.red[index]

    def blue_degree(self, index: int) -> int:
        return len(self.blue_neighbors(index))

    def red_degree(self, index: int) -> int:
        return len(self.red[index])

    def degree(self, index: int) -> int:
        return self.blue_degree(index) + self.red_degree(index)

    def edge_color(self, i: int, j: int) -> str | None:
        if j in self.red[i]:
            return RED
        if j in self.blue_neighbors(i):
            return BLUE
        return None

    def edges(self):
        """Yield (i, j, color) with i < j over all edges, blue then red."""
        for r in range(self.n_regions):
            for u in self.region_u_members(r):
                for v in self.region_v_members(r):
                    yield u, v, BLUE
        for u in range(self.half):
            for w in self.red[u]:
                if w > u:
                    yield u, w, RED

    def n_red_edges(self) -> int:
        return sum(len(s) for s in self.red) // 2

    def n_blue_edges(self) -> int:
        return sum(len(self.region_u_members(r)) * len(self.region_v_members(r)) for r in range(self.n_regions))

    # -- id view -----------------------------------------------------------

    def id_of(self, index: int) -> int:
        return self.ids[index]

    def index_of(self, node_id: int) -> int:
        try:
            return self._index_of[node_id]
        except KeyError:
            raise ValueError(f"unknown node id {node_id}") from None

    def red_edge_ids(self) -> list[tuple[int, int]]:
        """All red edges as sorted (min id, max id) pairs, sorted."""
        out = []
        for u in range(self.half):
            for w in self.red[u]:
                if w > u:
                    a, b = self.ids[u], self.ids[w]
                    out.append((min(a, b), max(a, b)))
        return sorted(out)

    def to_adjacency(self) -> dict[int, set[int]]:
        """External-ID adjacency over the union of blue and red edges."""
        adj: dict[int, set[int]] = {node_id: set() for node_id in self.ids}
        for i in range(self.n):
            nid = self.ids[i]
            for j in self.neighbors(i):
                adj[nid].add(self.ids[j])
        return adj

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.region_size == other.region_size
            and self.ids == other.ids
            and self.red == other.red
        )

    def __hash__(self):
        return hash((self.n, self.region_size, self.ids, self.red))

    def __repr__(self):
        return (
            f"ColoredGraph(n={self.n}, region_size={self.region_size}, "
            f"red_edges={self.n_red_edges()}, seed={self.seed})"
        )


def _geometric_pair_sample(n_items: int, p: float, rng: random.Random) -> list[tuple[int, int]]:
    """Sample each unordered pair over range(n_items) with probability p.

    Geometric jumps over the pair sequence make this O(#sampled) rather than
    O(n_items^2).
    """
    pairs: list[tuple[int, int]] = []
    if p <= 0.0 or n_items < 2:
        return pairs
    if p >= 1.0:
        return [(j, i) for i in range(1, n_items) for j in range(i)]
    log_q = math.log(1.0 - p)
    v, w = 1, -1
    while v < n_items:
        log_r = math.log(1.0 - rng.random())
        w = w + 1 + int(log_r / log_q)
        while w >= v and v < n_items:
            w -= v
            v += 1
        if v < n_items:
            pairs.append((w, v))
    return pairs


def sample_instance_from_subseeds(
    params: LowerBoundParams,
    edge_seed: int,
    id_seed: int,
    master_seed: int | None = None,
) -> ColoredGraph:
    """Sample with explicit edge/ID substreams (kept separate so either can be varied alone)."""
    half = params.half
    red_sets: list[set[int]] = [set() for _ in range(params.n)]
    edge_rng = random.Random(edge_seed)
    for a, b in _geometric_pair_sample(half, params.red_prob, edge_rng):
        red_sets[a].add(b)
        red_sets[b].add(a)
    id_rng = random.Random(id_seed)
    ids = tuple(id_rng.sample(range(1, params.id_space + 1), params.n))
    return ColoredGraph(
        n=params.n,
        region_size=params.region_size,
        ids=ids,
        red=tuple(frozenset(s) for s in red_sets),
        seed=master_seed,
    )


def sample_instance(params: LowerBoundParams, seed: int) -> ColoredGraph:
    """Draw one instance; deterministic per (params, seed)."""
    return sample_instance_from_subseeds(
        params,
        edge_seed=subseed(seed, "edges"),
        id_seed=subseed(seed, "ids"),
        master_seed=seed,
    )


@dataclass(frozen=True)
class DegreeReport:
    """Red-degree statistics over the U side of one instance."""

    red_degrees: dict[int, int]  # by node id, U side only
    mean: float
    min: int
    max: int
    band: tuple[float, float]
    in_band: dict[int, bool]
    all_in_band: bool


def degree_report(g: ColoredGraph, params: LowerBoundParams) -> DegreeReport:
    lo, hi = red_degree_band(params)
    degrees: dict[int, int] = {}
    in_band: dict[int, bool] = {}
    for u in range(g.half):
        nid = g.ids[u]
        d = g.red_degree(u)
        degrees[nid] = d
        in_band[nid] = lo <= d <= hi
    values = list(degrees.values())
    return DegreeReport(
        red_degrees=degrees,
        mean=sum(values) / len(values),
        min=min(values),
        max=max(values),
        band=(lo, hi),
        in_band=in_band,
        all_in_band=all(in_band.values()),
    )


# -- instance files ---------------------------------------------------------

_FORMAT_TAG = "spanlab-instance 1"


def save_instance(path, params: LowerBoundParams, g: ColoredGraph, seed: int) -> None:
    """Write a textual instance file; loading it back reproduces the instance bit-exactly.

    The red edge probability is serialized as the exact numerator/denominator
    of its binary floating-point value.
    """
    num, den = params.red_prob.as_integer_ratio()
    lines = [_FORMAT_TAG]
    lines.append(
        f"header n={params.n} t={params.t} k={params.k} region_size={params.region_size} "
        f"red_prob={num}/{den} id_space={params.id_space} seed={seed}"
    )
    for i in range(g.n):
        lines.append(f"node {i} {g.ids[i]} {g.side(i)} {g.region(i)}")
    edge_rows = []
    for i, j, color in g.edges():
        a, b = g.ids[i], g.ids[j]
        edge_rows.append((min(a, b), max(a, b), color))
    for a, b, color in sorted(edge_rows):
        lines.append(f"edge {a} {b} {color}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_instance(path) -> tuple[LowerBoundParams, ColoredGraph, int]:
    """Read an instance file back into (params, graph, seed).

    The blue records are validated against the implied region structure; any
    mismatch is an error rather than silently accepted.
    """
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != _FORMAT_TAG:
        raise ValueError(f"{path}: not a spanlab instance file")
    header = dict(tok.split("=", 1) for tok in lines[1].split()[1:])
    n, t = int(header["n"]), int(header["t"])
    seed = int(header["seed"])
    params = derive_params(n, t, id_space=int(header.get("id_space", n)))
    num, den = header["red_prob"].split("/")
    if Fraction(int(num), int(den)) != Fraction(*params.red_prob.as_integer_ratio()):
        raise ValueError(f"{path}: red_prob header does not match derived value")
    if int(header["region_size"]) != params.region_size or int(header["k"]) != params.k:
        raise ValueError(f"{path}: derived header fields do not match")

    ids: list[int | None] = [None] * n
    blue_rows: set[tuple[int, int]] = set()
    red_pairs: list[tuple[int, int]] = []
    for line in lines[2:]:
        parts = line.split()
        if parts[0] == "node":
            idx, node_id = int(parts[1]), int(parts[2])
            ids[idx] = node_id
        elif parts[0] == "edge":
            a, b, color = int(parts[1]), int(parts[2]), parts[3]
            if color == RED:
                red_pairs.append((a, b))
            elif color == BLUE:
                blue_rows.add((a, b))
            else:
                raise ValueError(f"{path}: unknown edge color {color!r}")
        else:
            raise ValueError(f"{path}: unexpected record {parts[0]!r}")
    if any(v is None for v in ids):
        raise ValueError(f"{path}: missing node records")
    index_of = {node_id: i for i, node_id in enumerate(ids)}
    red_sets: list[set[int]] = [set() for _ in range(n)]
    for a, b in red_pairs:
        i, j = index_of[a], index_of[b]
        red_sets[i].add(j)
        red_sets[j].add(i)
    g = ColoredGraph(
        n=n,
        region_size=params.region_size,
        ids=tuple(ids),
        red=tuple(frozenset(s) for s in red_sets),
        seed=seed,
    )
    expected_blue = {
        (min(g.ids[i], g.ids[j]), max(g.ids[i], g.ids[j]))
        for i, j, color in g.edges()
        if color == BLUE
    }
    if blue_rows != expected_blue:
        raise ValueError(f"{path}: blue edge records do not match the region structure")
    return params, g, seed
