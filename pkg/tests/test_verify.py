import pytest

from conftest import complete_graph, cycle_graph, graph_edges
from spanlab.graph_model import derive_params, sample_instance
from spanlab.spanners import greedy_spanner, random_gnp
from spanlab.traversal import critical_edges
from spanlab.verify import (
    critical_inclusion_check,
    size_check,
    size_threshold,
    sparse_set,
    sparse_set_floor,
    stretch_check,
    stretch_check_allpairs,
    verification_report,
)


def test_full_edge_set_always_passes():
    for adj in (complete_graph(6), cycle_graph(7)):
        for k in (1, 2, 3):
            ok, worst = stretch_check(adj, graph_edges(adj), k)
            assert ok and worst is None


def test_c5_minus_edge():
    adj = cycle_graph(5)
    edges = graph_edges(adj) - {(1, 5)}
    ok, worst = stretch_check(adj, edges, 3)
    assert not ok
    assert worst == ((1, 5), 4)


def test_k4_star_is_a_2_spanner():
    ok, _ = stretch_check(complete_graph(4), {(1, 2), (1, 3), (1, 4)}, 2)
    assert ok


def test_disconnected_spanner_reports_none_distance():
    adj = cycle_graph(4)
    ok, worst = stretch_check(adj, {(1, 2), (3, 4)}, 3)
    assert not ok
    assert worst[1] is None


def test_rejects_foreign_edges():
    with pytest.raises(ValueError):
        stretch_check(cycle_graph(5), {(1, 3)}, 3)


def test_per_edge_check_matches_allpairs_oracle():
    import random

    rng = random.Random(5)
    for trial in range(30):
        n = rng.randrange(8, 33)
        adj = random_gnp(n, rng.uniform(0.1, 0.5), trial)
        edges = sorted(graph_edges(adj))
        keep = {e for e in edges if rng.random() < 0.7}
        for k in (2, 3):
            assert stretch_check(adj, keep, k)[0] == stretch_check_allpairs(adj, keep, k)
    params = derive_params(64, 2)
    adj = sample_instance(params, 8).to_adjacency()
    out = greedy_spanner(adj, params.k)
    assert stretch_check(adj, out.edges, params.k)[0]
    assert stretch_check_allpairs(adj, out.edges, params.k)


def test_size_check_examples():
    assert size_check(0, 64, 2) is True
    assert size_check(2016, 64, 2) is False  # complete K64 blows the budget
    # greedy obeys the zero-slack variant on arbitrary inputs
    for seed in range(3):
        adj = random_gnp(48, 0.3, seed)
        out = greedy_spanner(adj, 3)
        assert out.size <= 48 ** (1 + 1 / 2) + 48
        assert size_check(out.size, 48, 2, slack_exponent=0.0)
    assert size_threshold(64, 2) == 64 ** (1 + 1 / 2 + 1 / 144) + 64


def test_critical_inclusion_and_removal():
    params = derive_params(64, 2)
    for seed in range(4):
        g = sample_instance(params, seed)
        adj = g.to_adjacency()
        report = critical_edges(g, params)
        out = greedy_spanner(adj, params.k)
        assert critical_inclusion_check(report, out.edges) == []
        full = graph_edges(adj)
        assert critical_inclusion_check(report, full) == []
        for victim in sorted(report.edges)[:3]:
            damaged = full - {victim}
            assert critical_inclusion_check(report, damaged) == [victim]
            ok, _ = stretch_check(adj, damaged, params.k)
            assert not ok  # dropping a critical edge is always visible


def test_sparse_set_examples():
    params = derive_params(4096, 2)
    g = sample_instance(params, 0)
    all_zero = {nid: 0 for nid in g.ids}
    members, ok = sparse_set(g, params, all_zero)
    assert ok and len(members) == params.n // 2
    heavy = {g.ids[u]: 80 for u in range(g.half)}  # full blue degree > 71
    members, ok = sparse_set(g, params, heavy)
    assert members == frozenset() and not ok
    assert sparse_set_floor(params) == 1707


def test_verification_report_roundup():
    params = derive_params(64, 2)
    g = sample_instance(params, 1)
    adj = g.to_adjacency()
    report = critical_edges(g, params)
    out = greedy_spanner(adj, params.k)
    vr = verification_report(g, params, out.edges, report)
    assert vr.stretch_ok and vr.size_ok
    assert vr.missing_critical == ()
    assert vr.spanner_size == out.size
    assert vr.sparse_ok  # greedy outputs are tiny per node at this scale
