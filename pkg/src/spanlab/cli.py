"""Experiment driver: generate instances, run algorithms, emit deterministic CSV reports.

Subcommands: gen, run, critical, experiment, curves, lic-toy, check.
Exit codes: 0 ok, 1 check/assertion failure, 2 usage error, 3 I/O error.
All CSV output is byte-deterministic for a fixed command line: stable row
order, LF newlines, floats printed with 6 significant digits.
"""

from __future__ import annotations

import argparse
import os
import sys

from spanlab import graph_model, infocost, spanners, time_encoding, traversal, verify
from spanlab.simulator import Mode, ModelConfig, ProtocolViolation, run as sim_run

ALGORITHMS = ("greedy", "cluster3-central", "cluster3-2party", "cluster3-distributed", "timeenc-demo")

CURVE_KEYS = (
    "lic_async_bits",
    "congest_kt1_bits",
    "node_clique_rounds",
    "gossip_rounds",
    "trivial_bits",
    "alg_tm_bits",
)


class CheckFailure(Exception):
    pass


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def _write_csv(path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _out_path(args, name: str):
    base = getattr(args, "out_dir", None) or os.environ.get("SPANLAB_OUT", ".")
    if os.path.isabs(name):
        return name
    os.makedirs(base, exist_ok=True)
    return os.path.join(base, name)


def _load_config_file(path) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}: expected key=value, got {line!r}")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    return values


# -- gen ----------------------------------------------------------------------


def cmd_gen(args) -> int:
    params = graph_model.derive_params(args.n, args.t)
    g = graph_model.sample_instance(params, args.seed)
    path = _out_path(args, args.out)
    graph_model.save_instance(path, params, g, args.seed)
    print(
        f"wrote {path}: n={params.n} t={params.t} k={params.k} "
        f"region_size={params.region_size} red_prob={_fmt(params.red_prob)} "
        f"red_edges={g.n_red_edges()} blue_edges={g.n_blue_edges()}"
    )
    return 0


# -- run ----------------------------------------------------------------------


def _run_timeenc_demo(args) -> int:
    if args.instance:
        params, _, _ = graph_model.load_instance(args.instance)
        raise ValueError(
            f"the time-encoding demo is capped at n <= 3; the instance has n={params.n}. "
            "Use --demo-n/--demo-id-space/--demo-index instead."
        )
    n, id_space, index = args.demo_n, args.demo_id_space, args.demo_index
    g = time_encoding.decode_graph(index, n, id_space)
    adj = {i: set() for i in range(n)}
    for a, b in g.edges:
        adj[a].add(b)
        adj[b].add(a)
    parent: dict[int, int | None] = {0: None}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for w in sorted(adj[v]):
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
    if len(parent) != n:
        raise ValueError("decoded graph is disconnected; no spanning tree exists")
    report = time_encoding.convergecast_demo(g, id_space, parent)
    path = _out_path(args, args.summary)
    _write_csv(
        path,
        ["n", "id_space", "enumeration_count", "rounds_used", "payload_bits", "decode_ok"],
        [[report.n, report.id_space, report.enumeration_count, report.rounds_used, report.payload_bits, report.decode_ok]],
    )
    print(f"wrote {path}: rounds_used={report.rounds_used} payload_bits={report.payload_bits} decode_ok={report.decode_ok}")
    return 0


def cmd_run(args) -> int:
    if args.algorithm == "timeenc-demo":
        if not args.instance and args.demo_n is None:
            raise ValueError("timeenc-demo needs --instance or --demo-n")
        return _run_timeenc_demo(args)
    if not args.instance:
        raise ValueError(f"--instance is required for {args.algorithm}")
    if args.algorithm != "cluster3-distributed" and args.mode is not None:
        raise ValueError(f"{args.algorithm} does not take a --mode")

    params, g, _ = graph_model.load_instance(args.instance)
    adj = g.to_adjacency()
    if args.algorithm == "greedy":
        out = spanners.greedy_spanner(adj, params.k)
        stretch_k = params.k
    elif args.algorithm == "cluster3-central":
        out = spanners.cluster_3spanner_centralized(adj, args.seed)
        stretch_k = 3
    elif args.algorithm == "cluster3-2party":
        ids = sorted(adj)
        half = len(ids) // 2
        out, _ = spanners.cluster_3spanner_two_party(adj, (set(ids[:half]), set(ids[half:])), args.seed)
        stretch_k = 3
    else:  # cluster3-distributed
        mode = Mode(args.mode) if args.mode else Mode.CONGEST_KT1
        out = spanners.run_cluster_3spanner(adj, args.seed, mode=mode)
        stretch_k = 3

    stretch_ok, _ = verify.stretch_check(adj, out.edges, stretch_k)
    summary = _out_path(args, args.summary)
    _write_csv(
        summary,
        ["algorithm", "n", "size", "bits", "rounds", "stretch_ok", "fallback_count"],
        [[out.algorithm, params.n, out.size, out.bits, out.rounds, stretch_ok, out.fallback_count]],
    )
    edges_path = _out_path(args, args.edges_out)
    with open(edges_path, "w", newline="\n") as fh:
        for a, b in out.sorted_edges():
            fh.write(f"{a} {b}\n")
    print(f"wrote {summary} and {edges_path}: size={out.size} stretch_ok={stretch_ok}")
    return 0


# -- critical -------------------------------------------------------------------


def cmd_critical(args) -> int:
    params, g, _ = graph_model.load_instance(args.instance)
    report = traversal.critical_edges(g, params)
    use_oracle = args.oracle == "on" or (args.oracle == "auto" and params.n <= 512)
    oracle_agree = None
    if use_oracle:
        oracle_agree = all(
            traversal.criticality_via_traversal(g, e, params.k) == (e in report.edges)
            for e in g.red_edge_ids()
        )
    rows = []
    degrees = graph_model.degree_report(g, params).red_degrees
    for nid in sorted(report.counts):
        rows.append([nid, degrees[nid], report.counts[nid], report.meets_threshold[nid], ""])
    rows.append(["TOTAL", sum(degrees.values()), report.total, "", oracle_agree])
    path = _out_path(args, args.out)
    _write_csv(path, ["id", "red_degree", "critical_count", "meets_threshold", "oracle_agree"], rows)
    print(f"wrote {path}: critical_total={report.total} oracle_agree={oracle_agree}")
    return 0


# -- experiment -----------------------------------------------------------------


def _merge_config(args) -> None:
    if not args.config:
        return
    values = _load_config_file(args.config)
    mapping = {
        "n_list": ("n_list", str),
        "t": ("t", int),
        "seeds": ("seeds", int),
        "algorithm": ("algorithm", str),
        "mode": ("mode", str),
        "out": ("out", str),
    }
    for key, (attr, cast) in mapping.items():
        if key in values and getattr(args, attr) is None:
            setattr(args, attr, cast(values[key]))


def _experiment_row(params, g, algorithm, mode, seed) -> list:
    adj = g.to_adjacency()
    graph_edges = g.n_blue_edges() + g.n_red_edges()
    if algorithm == "greedy":
        out = spanners.greedy_spanner(adj, params.k)
        stretch_k = params.k
    elif algorithm == "cluster3-central":
        out = spanners.cluster_3spanner_centralized(adj, seed)
        stretch_k = 3
    elif algorithm == "cluster3-2party":
        ids = sorted(adj)
        half = len(ids) // 2
        out, _ = spanners.cluster_3spanner_two_party(adj, (set(ids[:half]), set(ids[half:])), seed)
        stretch_k = 3
    elif algorithm == "cluster3-distributed":
        out = spanners.run_cluster_3spanner(adj, seed, mode=Mode(mode) if mode else Mode.CONGEST_KT1)
        stretch_k = 3
    else:
        raise ValueError(f"algorithm {algorithm!r} cannot run on an experiment grid")
    stretch_ok, _ = verify.stretch_check(adj, out.edges, stretch_k)
    size_ok = verify.size_check(out.size, params.n, params.t)
    missing = ""
    if params.n <= 512:
        report = traversal.critical_edges(g, params)
        missing = len(verify.critical_inclusion_check(report, out.edges))
    return [
        "run", algorithm, mode or "", params.n, params.t, seed, graph_edges,
        out.size, out.bits, out.rounds, stretch_ok, size_ok, missing,
        out.fallback_count, "ok", "", "", "", "", "", "",
    ]


def cmd_experiment(args) -> int:
    _merge_config(args)
    if args.n_list is None or args.algorithm is None:
        raise ValueError("experiment needs --n-list and --algorithm (flags or config file)")
    t = args.t if args.t is not None else 2
    seeds = args.seeds if args.seeds is not None else 10
    out_name = args.out if args.out is not None else "experiment.csv"
    n_values = [int(tok) for tok in str(args.n_list).split(",") if tok]
    header = [
        "row", "algorithm", "mode", "n", "t", "seed", "graph_edges", "spanner_edges",
        "bits", "rounds", "stretch_ok", "size_ok", "missing_critical", "fallback_count",
        "status", *CURVE_KEYS,
    ]
    rows: list[list] = []
    failures = 0
    for n in n_values:
        params = graph_model.derive_params(n, t)
        for seed in range(seeds):
            try:
                g = graph_model.sample_instance(params, seed)
                rows.append(_experiment_row(params, g, args.algorithm, args.mode, seed))
            except (ValueError, ProtocolViolation) as exc:
                failures += 1
                rows.append([
                    "run", args.algorithm, args.mode or "", n, t, seed, "", "", "", "",
                    "", "", "", "", f"error: {exc}", "", "", "", "", "", "",
                ])
        curves = infocost.bound_curves(n, t)
        rows.append([
            "curve", "", "", n, t, "", "", "", "", "", "", "", "", "", "",
            *[curves[key] for key in CURVE_KEYS],
        ])
    path = _out_path(args, out_name)
    _write_csv(path, header, rows)
    print(f"wrote {path}: {len(rows)} rows ({failures} failures)")
    return 0 if failures == 0 else 1


# -- curves ---------------------------------------------------------------------


def cmd_curves(args) -> int:
    n_values = [int(tok) for tok in str(args.n_list).split(",") if tok]
    rows = []
    for n in n_values:
        curves = infocost.bound_curves(n, args.t)
        for key in CURVE_KEYS:
            rows.append([n, args.t, key, curves[key]])
    path = _out_path(args, args.out)
    _write_csv(path, ["n", "t", "theorem_id", "value"], rows)
    print(f"wrote {path}: {len(rows)} curve values")
    return 0


# -- lic-toy ----------------------------------------------------------------------


def cmd_lic_toy(args) -> int:
    sampler = infocost.OneBitToySampler()
    config = infocost.one_bit_toy_config()
    exact = infocost.estimate_lic(sampler, infocost.OneBitSendProgram, config, exact=True)
    sampled = infocost.estimate_lic(
        sampler, infocost.OneBitSendProgram, config, trials=args.trials, base_seed=args.seed
    )
    print("one-bit toy: node 2 reveals the swing edge to node 1")
    print(f"  exact (enumerated atoms):  total={exact.total:.6f} bits, per node {exact.per_node}")
    print(f"  sampled ({args.trials} trials):  total={sampled.total:.6f} bits, per node {sampled.per_node}")
    print("  note: plug-in estimates from samples are biased upward; only the exact mode is exact")
    return 0


# -- check ------------------------------------------------------------------------


def _run_checks() -> list[tuple[str, bool, str]]:
    results: list[tuple[str, bool, str]] = []

    def add(name: str, fn) -> None:
        try:
            fn()
            results.append((name, True, ""))
        except Exception as exc:  # report, don't abort the battery
            results.append((name, False, str(exc)))

    def reach_exponents():
        for k in range(3, 13):
            if not traversal.check_bmaximal_reach_bound(k):
                raise CheckFailure(f"reach exponent bound fails at k={k}")
        if traversal.enumerate_b_maximal(6) != ["BBRBBR", "RBBRBB"]:
            raise CheckFailure("unexpected B-maximal set at k=6")

    def codec():
        for n, space in ((2, 4), (3, 4)):
            total = time_encoding.enumeration_size(n, space)
            for index in range(total):
                if time_encoding.encode_graph(time_encoding.decode_graph(index, n, space), space) != index:
                    raise CheckFailure(f"codec round-trip failed at ({n}, {space}) index {index}")

    def criticality_oracle():
        params = graph_model.derive_params(64, 2)
        for seed in range(3):
            g = graph_model.sample_instance(params, seed)
            for e in g.red_edge_ids():
                if traversal.is_critical(g, e, params.k) != traversal.criticality_via_traversal(g, e, params.k):
                    raise CheckFailure(f"oracle disagreement on edge {e} seed {seed}")

    def greedy_guarantees():
        params = graph_model.derive_params(64, 2)
        g = graph_model.sample_instance(params, 7)
        adj = g.to_adjacency()
        out = spanners.greedy_spanner(adj, params.k)
        ok, _ = verify.stretch_check(adj, out.edges, params.k)
        if not ok or not verify.size_check(out.size, params.n, params.t, slack_exponent=0.0):
            raise CheckFailure("greedy guarantee violated on a sampled instance")

    def simulator_ledger():
        from spanlab.simulator import NodeProgram

        class Star(NodeProgram):
            def round_start(self, round_no, inbox):
                me = self.knowledge.own_id
                self.finish()
                if me == 1:
                    return [(w, "10101010") for w in sorted(self.knowledge.neighbor_ids)]
                return []

        adj = {1: {2, 3, 4, 5}, 2: {1}, 3: {1}, 4: {1}, 5: {1}}
        config = ModelConfig(mode=Mode.CONGEST_KT1, id_space=16, max_rounds=4, link_bandwidth_bits=12)
        result = sim_run(config, adj, Star, seed=0)
        if result.total_bits != 48:
            raise CheckFailure(f"star broadcast ledger {result.total_bits} != 48")

    def info_identities():
        import random as _random

        rng = _random.Random(1234)
        for _ in range(200):
            d = _random_table(rng)
            lhs = infocost.mutual_information(d, "x", "y", given="z")
            rhs = (
                infocost.entropy(d, ("x", "z"))
                + infocost.entropy(d, ("y", "z"))
                - infocost.entropy(d, ("x", "y", "z"))
                - infocost.entropy(d, "z")
            )
            if abs(lhs - rhs) > 1e-9:
                raise CheckFailure("conditional mutual information identity failed")

    def two_party_agreement():
        params = graph_model.derive_params(256, 2)
        for seed in range(3):
            g = graph_model.sample_instance(params, seed)
            adj = g.to_adjacency()
            central = spanners.cluster_3spanner_centralized(adj, seed)
            ids = sorted(adj)
            half = len(ids) // 2
            duo, _ = spanners.cluster_3spanner_two_party(adj, (set(ids[:half]), set(ids[half:])), seed)
            if central.edges != duo.edges:
                raise CheckFailure(f"two-party output differs from centralized at seed {seed}")

    def sparse_thresholds():
        params = graph_model.derive_params(4096, 2)
        if graph_model.sparse_output_threshold(params) != 71:
            raise CheckFailure("per-node sparse threshold at n=4096 is not 71")
        if verify.sparse_set_floor(params) != 1707:
            raise CheckFailure(f"sparse-set floor {verify.sparse_set_floor(params)} != 1707")

    add("bmaximal_reach_exponents", reach_exponents)
    add("codec_roundtrip", codec)
    add("criticality_oracle_agreement", criticality_oracle)
    add("greedy_guarantees", greedy_guarantees)
    add("simulator_star_ledger", simulator_ledger)
    add("information_identities", info_identities)
    add("two_party_equals_centralized", two_party_agreement)
    add("sparse_set_thresholds", sparse_thresholds)
    return results


def _random_table(rng) -> "infocost.DiscreteDistribution":
    atoms = {}
    for x in range(2):
        for y in range(2):
            for z in range(2):
                atoms[(x, y, z)] = rng.random()
    total = sum(atoms.values())
    table = {k: v / total for k, v in atoms.items()}
    return infocost.DiscreteDistribution(("x", "y", "z"), table)


def cmd_check(args) -> int:
    results = _run_checks()
    failed = 0
    for name, ok, detail in results:
        line = f"{name}: {'PASS' if ok else 'FAIL'}"
        if detail and not ok:
            line += f" ({detail})"
        print(line)
        failed += 0 if ok else 1
    return 0 if failed == 0 else 1


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spanlab",
        description="Generate lower-bound instances, run spanner algorithms, and verify the results.",
    )
    parser.add_argument(
        "--out-dir",
        default=None,
        help="directory for output files (default: $SPANLAB_OUT or the working directory)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample an instance and write it to a file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="instance.txt")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run one algorithm on an instance")
    p.add_argument("--instance", default=None)
    p.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--summary", default="run_summary.csv")
    p.add_argument("--edges-out", default="spanner_edges.txt")
    p.add_argument("--demo-n", type=int, default=None)
    p.add_argument("--demo-id-space", type=int, default=4)
    p.add_argument("--demo-index", type=int, default=0)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("critical", help="classify every red edge of an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--oracle", choices=("auto", "on", "off"), default="auto")
    p.add_argument("--out", default="critical.csv")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("experiment", help="batch runs over an n/seed grid plus bound curves")
    p.add_argument("--config", default=None, help="key=value file; flags take precedence")
    p.add_argument("--n-list", default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--seeds", type=int, default=None)
    p.add_argument("--algorithm", choices=ALGORITHMS[:4], default=None)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("curves", help="evaluate the bound curves on a grid of n")
    p.add_argument("--n-list", required=True)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--out", default="curves.csv")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("lic-toy", help="exact and sampled information estimates on the one-bit toy")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lic_toy)

    p = sub.add_parser("check", help="run the fast invariant battery")
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ProtocolViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
