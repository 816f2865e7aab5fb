import pytest

from spanlab.time_encoding import (
    LabeledGraph,
    convergecast_demo,
    decode_graph,
    encode_graph,
    enumeration_size,
)


def test_enumeration_size_examples():
    assert enumeration_size(1, 1) == 1
    assert enumeration_size(2, 4) == 2 * 2 * 6 == 24
    assert enumeration_size(3, 4) == 8 * 6 * 4 == 192
    with pytest.raises(ValueError):
        enumeration_size(3, 2)


def test_index_zero_is_the_mixed_radix_origin():
    g = decode_graph(0, 3, 4)
    assert g.ids == (1, 2, 3)
    assert g.edges == frozenset()
    assert encode_graph(g, 4) == 0


@pytest.mark.parametrize("n,space", [(1, 1), (2, 3), (2, 4), (3, 4)])
def test_roundtrip_bijection(n, space):
    seen = set()
    for index in range(enumeration_size(n, space)):
        g = decode_graph(index, n, space)
        assert encode_graph(g, space) == index
        assert g not in seen
        seen.add(g)


def test_out_of_range_and_bad_graphs():
    with pytest.raises(ValueError):
        decode_graph(192, 3, 4)
    with pytest.raises(ValueError):
        decode_graph(-1, 3, 4)
    with pytest.raises(ValueError):
        LabeledGraph(ids=(1, 1), edges=frozenset())
    with pytest.raises(ValueError):
        LabeledGraph(ids=(1, 2), edges=frozenset({(0, 2)}))
    with pytest.raises(ValueError):
        encode_graph(LabeledGraph(ids=(1, 5), edges=frozenset()), 4)


def test_two_node_demo():
    g = LabeledGraph(ids=(1, 2), edges=frozenset({(0, 1)}))
    rep = convergecast_demo(g, 4, {0: None, 1: 0})
    assert rep.decode_ok and rep.decoded == g
    assert rep.enumeration_count == 24
    assert rep.rounds_used == 2 * 1 * 24
    assert rep.payload_bits == 2  # one up bit, one down bit


def test_three_node_exhaustive_star_tree():
    # every connected input decodes exactly at the root of the fixed star tree
    checked = 0
    for index in range(192):
        g = decode_graph(index, 3, 4)
        if not {(0, 1), (0, 2)} <= g.edges:
            continue  # star tree must be a subgraph
        rep = convergecast_demo(g, 4, {0: None, 1: 0, 2: 0})
        assert rep.decode_ok and rep.decoded == g
        assert rep.rounds_used == 2 * 1 * 192
        assert rep.payload_bits <= 2 * (3 - 1)
        checked += 1
    assert checked == 2 * 6 * 4  # both (1,2)-edge states, all labelings


def test_three_node_path_tree_rounds():
    tri = LabeledGraph(ids=(2, 3, 4), edges=frozenset({(0, 1), (0, 2), (1, 2)}))
    rep = convergecast_demo(tri, 4, {0: None, 1: 0, 2: 1})
    assert rep.rounds_used == 2 * 2 * 192  # depth-2 tree: two iterations per direction
    assert rep.decode_ok


def test_rounds_dwarf_payload():
    g = LabeledGraph(ids=(1, 2, 3), edges=frozenset({(0, 1), (1, 2)}))
    rep = convergecast_demo(g, 4, {0: None, 1: 0, 2: 1})
    assert rep.payload_bits <= 4 * g.n
    assert rep.rounds_used >= rep.enumeration_count


def test_demo_guards():
    with pytest.raises(ValueError):
        convergecast_demo(LabeledGraph(ids=(1, 2, 3, 4), edges=frozenset()), 4, {})
    g = LabeledGraph(ids=(1, 2), edges=frozenset({(0, 1)}))
    with pytest.raises(ValueError):
        convergecast_demo(g, 5, {0: None, 1: 0})
    with pytest.raises(ValueError):
        convergecast_demo(g, 4, {0: None, 1: None})  # two roots
    with pytest.raises(ValueError):
        convergecast_demo(LabeledGraph(ids=(1, 2), edges=frozenset()), 4, {0: None, 1: 0})
