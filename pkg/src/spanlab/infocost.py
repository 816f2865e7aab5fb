"""Discrete information toolkit, empirical per-node information estimates, and bound curves.

Entropies are in bits (all logarithms base 2). Distributions are explicit
joint tables over named variables, so every quantity is a finite sum and the
standard identities can be checked to near machine precision on exact tables.

The *local information cost* of a run is the sum over nodes of
I[transcript : graph | initial knowledge]. At toy scale this is estimated by
the plug-in method from (transcript key, graph label, knowledge label)
triples -- either sampled, or enumerated exactly with atom weights.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from spanlab.seeds import subseed
from spanlab.simulator import Mode, ModelConfig, NodeProgram, collect_transcript_key, kt1_init, run

Number = Fraction | float


def _log2(x: float) -> float:
    return math.log2(x)


class DiscreteDistribution:
    """A finite joint distribution over named variables.

    ``table`` maps value tuples (aligned with ``variables``) to
    probabilities, which may be floats or exact Fractions. Probabilities must
    be nonnegative and sum to 1 within 1e-12.
    """

    def __init__(self, variables: tuple[str, ...], table: dict[tuple, Number]):
        if len(set(variables)) != len(variables) or not variables:
            raise ValueError("variables must be distinct and nonempty")
        total = sum(table.values())
        if any(p < 0 for p in table.values()):
            raise ValueError("probabilities must be nonnegative")
        if abs(float(total) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {float(total)}, expected 1")
        for atom in table:
            if len(atom) != len(variables):
                raise ValueError("atom arity does not match the variable list")
        self.variables = tuple(variables)
        self.table = {atom: p for atom, p in table.items() if p > 0}
        self._index = {name: i for i, name in enumerate(self.variables)}

    def _cols(self, names) -> tuple[int, ...]:
        if isinstance(names, str):
            names = (names,)
        try:
            return tuple(self._index[name] for name in names)
        except KeyError as exc:
            raise ValueError(f"unknown variable {exc.args[0]!r}") from None

    def marginal(self, names) -> dict[tuple, Number]:
        cols = self._cols(names)
        out: dict[tuple, Number] = {}
        for atom, p in self.table.items():
            key = tuple(atom[c] for c in cols)
            out[key] = out.get(key, 0) + p
        return out

    def support(self, names) -> set[tuple]:
        return set(self.marginal(names))

    def condition(self, names, values) -> "DiscreteDistribution":
        """Distribution given that the named variables take the given values."""
        cols = self._cols(names)
        if isinstance(values, (str, int, float)) or not isinstance(values, tuple):
            values = (values,)
        mass = sum(p for atom, p in self.table.items() if tuple(atom[c] for c in cols) == values)
        if mass == 0:
            raise ValueError(f"conditioning event {values} has zero probability")
        table = {
            atom: p / mass
            for atom, p in self.table.items()
            if tuple(atom[c] for c in cols) == values
        }
        return DiscreteDistribution(self.variables, table)


def entropy(d: DiscreteDistribution, names) -> float:
    """Shannon entropy H[X] in bits; zero-probability terms contribute zero."""
    return -sum(float(p) * _log2(float(p)) for p in d.marginal(names).values() if p > 0)


def conditional_entropy(d: DiscreteDistribution, names, given) -> float:
    """H[X | Y] as the Y-expectation of slice entropies."""
    cond_cols = d._cols(given)
    x_cols = d._cols(names)
    slices: dict[tuple, dict[tuple, float]] = {}
    weights: dict[tuple, float] = {}
    for atom, p in d.table.items():
        y = tuple(atom[c] for c in cond_cols)
        x = tuple(atom[c] for c in x_cols)
        fp = float(p)
        weights[y] = weights.get(y, 0.0) + fp
        bucket = slices.setdefault(y, {})
        bucket[x] = bucket.get(x, 0.0) + fp
    total = 0.0
    for y, bucket in slices.items():
        w = weights[y]
        if w <= 0:
            continue
        h = -sum((q / w) * _log2(q / w) for q in bucket.values() if q > 0)
        total += w * h
    return total


def _group(*parts) -> tuple[str, ...]:
    out: list[str] = []
    for part in parts:
        if part is None:
            continue
        if isinstance(part, str):
            out.append(part)
        else:
            out.extend(part)
    return tuple(out)


def mutual_information(d: DiscreteDistribution, x, y, given=None) -> float:
    """I[X : Y | Z] = H[X | Z] - H[X | Y, Z]; unconditional when given is None."""
    if given is None:
        return entropy(d, x) - conditional_entropy(d, x, y)
    return conditional_entropy(d, x, given) - conditional_entropy(d, x, _group(y, given))


def check_event_conditioning_bound(
    d: DiscreteDistribution, x, y, z1, z2, z_value
) -> tuple[float, float, bool]:
    """Check I[X:Y | Z1, Z2] >= Pr[Z1=z] * I[X:Y | Z1=z, Z2] for one event Z1=z.

    Conditioning on the full variable is an average over its events, so any
    single event contributes at most its probability share.
    """
    marg = d.marginal(z1)
    key = z_value if isinstance(z_value, tuple) else (z_value,)
    if key not in marg:
        raise ValueError(f"{z_value!r} is not in the support of {z1!r}")
    lhs = mutual_information(d, x, y, given=_group(z1, z2))
    sliced = d.condition(z1, key)
    rhs = float(marg[key]) * mutual_information(sliced, x, y, given=z2)
    return lhs, rhs, lhs >= rhs - 1e-9


def check_data_processing(d: DiscreteDistribution, x="x", y="y", z="z") -> bool:
    """I[X:Y] >= I[X:Z] for a table built so that Z depends on Y alone."""
    return mutual_information(d, x, y) >= mutual_information(d, x, z) - 1e-9


def load_distribution(path) -> DiscreteDistribution:
    """Read a whitespace-separated table: header with variable names then
    one row per atom, values followed by the probability in the last column."""
    with open(path) as fh:
        rows = [ln.split() for ln in fh if ln.strip() and not ln.startswith("#")]
    if len(rows) < 2:
        raise ValueError(f"{path}: expected a header and at least one atom row")
    header = rows[0]
    if header[-1] != "probability":
        raise ValueError(f"{path}: last header column must be 'probability'")
    variables = tuple(header[:-1])
    table: dict[tuple, Number] = {}
    for row in rows[1:]:
        *values, prob = row
        if len(values) != len(variables):
            raise ValueError(f"{path}: row arity mismatch: {row}")
        table[tuple(values)] = Fraction(prob)
    return DiscreteDistribution(variables, table)


# -- empirical local information cost ----------------------------------------


@dataclass(frozen=True)
class LicCase:
    """One atom of the instance distribution: a graph and its label."""

    adj: dict[int, set[int]]
    label: str


def knowledge_label(adj: dict[int, set[int]], node: int) -> str:
    """Canonical serialization of a node's initial view (own id + neighbor ids)."""
    return f"{node}:" + ",".join(str(w) for w in sorted(adj[node]))


@dataclass(frozen=True)
class LicEstimate:
    per_node: dict[int, float]
    total: float
    trials: int
    exact: bool
    graph_support: int
    joint_support: dict[int, int]


def estimate_lic(
    sampler,
    program,
    config: ModelConfig,
    trials: int = 0,
    exact: bool = False,
    base_seed: int = 0,
    support_cap: int = 100_000,
) -> LicEstimate:
    """Plug-in estimate of sum_i I[transcript_i : graph | knowledge_i] in bits.

    ``sampler`` provides either ``atoms()`` yielding (weight, LicCase) pairs
    covering the whole instance space (use with exact=True; the program must
    be deterministic), or ``sample(rng)`` yielding one LicCase per trial.
    Sampled estimates are biased upward at finite trial counts; only the
    exact mode reproduces true information values.
    """
    weighted: list[tuple[Number, LicCase, int]] = []
    if exact:
        for weight, case in sampler.atoms():
            weighted.append((weight, case, base_seed))
        total_w = sum(w for w, _, _ in weighted)
        if abs(float(total_w) - 1.0) > 1e-12:
            raise ValueError("atom weights must sum to 1")
        n_trials = len(weighted)
    else:
        if trials < 1:
            raise ValueError("sampled mode needs trials >= 1")
        rng = random.Random(subseed(base_seed, "lic-sampling"))
        w = Fraction(1, trials)
        for i in range(trials):
            case = sampler.sample(rng)
            weighted.append((w, case, subseed(base_seed, f"trial/{i}")))
        n_trials = trials

    node_tables: dict[int, dict[tuple, Number]] = {}
    graph_labels: set[str] = set()
    for weight, case, seed in weighted:
        init = kt1_init(case.adj, config.id_space, seed)
        result = run(config, case.adj, program, init=init, seed=seed)
        graph_labels.add(case.label)
        for node in case.adj:
            key = (
                collect_transcript_key(result, node),
                case.label,
                knowledge_label(case.adj, node),
            )
            table = node_tables.setdefault(node, {})
            table[key] = table.get(key, 0) + weight
            if len(table) > support_cap:
                raise ValueError(
                    f"joint support for node {node} exceeded the cap of {support_cap} atoms"
                )

    per_node: dict[int, float] = {}
    for node, table in sorted(node_tables.items()):
        d = DiscreteDistribution(("transcript", "graph", "knowledge"), table)
        per_node[node] = mutual_information(d, "transcript", "graph", given="knowledge")
    return LicEstimate(
        per_node=per_node,
        total=sum(per_node.values()),
        trials=n_trials,
        exact=exact,
        graph_support=len(graph_labels),
        joint_support={node: len(table) for node, table in sorted(node_tables.items())},
    )


class OneBitSendProgram(NodeProgram):
    """Toy protocol: node 2 tells node 1 whether the swing edge (2, 3) exists."""

    def round_start(self, round_no, inbox):
        me = self.knowledge.own_id
        if round_no == 1 and me == 2:
            bit = "1" if 3 in self.knowledge.neighbor_ids else "0"
            self.finish()
            return [(1, bit)]
        self.finish()
        return []


class OneBitToySampler:
    """Three nodes, fixed edge (1,2), and a uniformly random edge (2,3).

    Node 1 is not incident to the swing edge, so its initial knowledge is
    independent of it; the transcript it receives carries exactly one bit.
    """

    def _case(self, bit: int) -> LicCase:
        adj: dict[int, set[int]] = {1: {2}, 2: {1}, 3: set()}
        if bit:
            adj[2].add(3)
            adj[3].add(2)
        return LicCase(adj=adj, label=f"swing={bit}")

    def atoms(self):
        yield Fraction(1, 2), self._case(0)
        yield Fraction(1, 2), self._case(1)

    def sample(self, rng: random.Random) -> LicCase:
        return self._case(rng.getrandbits(1))


def one_bit_toy_config(max_rounds: int = 4) -> ModelConfig:
    return ModelConfig(mode=Mode.CONGEST_KT1, id_space=4, max_rounds=max_rounds)


# -- bound curves -------------------------------------------------------------

CURVE_MODELS = {
    "lic": "lic_async_bits",
    "async": "lic_async_bits",
    "congest": "congest_kt1_bits",
    "congested_clique": "congest_kt1_bits",
    "node_congested_clique": "node_clique_rounds",
    "gossip": "gossip_rounds",
}


def bound_curves(n: int, t: int, model: str | None = None) -> dict[str, float]:
    """Lower/upper bound shapes with unit constants and base-2 logs.

    These are asymptotic shapes meant for plotting next to measured costs;
    they carry no calibrated constants and are never asserted against
    measurements. Keys:

    * ``lic_async_bits``     -- n^{1+1/(2t)} log2(n) / t^2
    * ``congest_kt1_bits``   -- n^{1+1/(2t)} / (t^2 log2 n)
    * ``node_clique_rounds`` -- n^{1/(2t)} / (t^2 log2^4 n)
    * ``gossip_rounds``      -- n^{1/(2t)} / (t^2 log2^3 n)
    * ``trivial_bits``       -- n
    * ``alg_tm_bits``        -- t * (expected instance edges), the shape of
      the known fast constructions (log factors dropped)
    """
    if n < 16 or t < 2:
        raise ValueError("need n >= 16 and t >= 2")
    if model is not None and model not in CURVE_MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {sorted(CURVE_MODELS)}")
    from spanlab.graph_model import derive_params

    log_n = math.log2(n)
    growth = n ** (1.0 + 1.0 / (2 * t))
    rounds_base = n ** (1.0 / (2 * t))
    params = derive_params(n, t)
    q, rem = divmod(params.half, params.region_size)
    blue = q * params.region_size**2 + rem * rem
    expected_red = math.comb(params.half, 2) * params.red_prob
    curves = {
        "lic_async_bits": growth * log_n / t**2,
        "congest_kt1_bits": growth / (t**2 * log_n),
        "node_clique_rounds": rounds_base / (t**2 * log_n**4),
        "gossip_rounds": rounds_base / (t**2 * log_n**3),
        "trivial_bits": float(n),
        "alg_tm_bits": t * (blue + expected_red),
    }
    return curves
