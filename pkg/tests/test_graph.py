import pytest

from pgstrat.errors import GraphError
from pgstrat.graph import GraphBuilder, PortGraph, interface_of, validate
from pgstrat.model import SimConfig, build_initial_graph


def bank(gb, ports=("O", "C")):
    return gb.add_node({"Name": "Bank", "z": 0}, ports=ports)


def test_interface_tracks_ports():
    gb = GraphBuilder()
    b = bank(gb)
    lone = gb.add_node("Solo")
    theta = gb.add_node("Theta", ports=["PB"])
    g = gb.freeze()
    assert interface_of(g, b) == ["O", "C"]
    assert interface_of(g, lone) == []
    assert interface_of(g, theta) == ["PB"]
    with pytest.raises(GraphError):
        interface_of(g, "missing")


def test_empty_graph_is_valid():
    assert validate(PortGraph()) == []


def test_name_interface_coherence():
    gb = GraphBuilder()
    bank(gb)
    bank(gb, ports=("O",))
    problems = validate(gb.freeze())
    assert len(problems) == 1
    assert problems[0].rule == "name-interface"


def test_stale_interface_detected():
    gb = GraphBuilder()
    b = bank(gb)
    gb.set_attr(b, "Interface", ("O",))
    rules = {v.rule for v in validate(gb.freeze())}
    assert "interface" in rules


def test_multi_edges_and_self_loops():
    gb = GraphBuilder()
    a, b = bank(gb), bank(gb)
    pa, pb = gb.port(a, "C"), gb.port(b, "C")
    gb.add_edge(pa, pb)
    gb.add_edge(pb, pa)
    loop = gb.add_edge(pa, pa)
    g = gb.freeze()
    assert validate(g) == []
    assert len(g.edges_at(pa)) == 3
    assert g.edges_at(pa).count(loop) == 1


def test_builder_rejects_unknown_targets():
    gb = GraphBuilder()
    with pytest.raises(GraphError):
        gb.add_port("nope", "O")
    b = bank(gb)
    with pytest.raises(GraphError):
        gb.add_edge(gb.port(b, "O"), "ghost")


def test_remove_node_takes_ports_and_edges():
    gb = GraphBuilder()
    a, b = bank(gb), bank(gb)
    gb.add_edge(gb.port(a, "C"), gb.port(b, "C"))
    gb.remove_node(a)
    g = gb.freeze()
    assert list(g.nodes) == [b] and len(g.ports) == 2 and not g.edges
    assert validate(g) == []


def test_ids_are_shared_and_fresh():
    gb = GraphBuilder()
    b = bank(gb)
    g = gb.freeze()
    assert len(g.components()) == 3
    gb2 = g.edit()
    c = gb2.add_node("X")
    assert c not in g.components()
    assert b in gb2.freeze().nodes and c not in g.nodes


def test_initial_market_graph_is_valid():
    g = build_initial_graph(SimConfig())
    assert validate(g) == []
