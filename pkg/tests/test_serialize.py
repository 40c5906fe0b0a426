import json
import random

import pytest

from pgstrat.graph import GraphBuilder
from pgstrat.iso import isomorphic
from pgstrat.model import SimConfig, build_initial_graph, model_rules
from pgstrat.records import Term, Var
from pgstrat.serialize import (graph_from_json, graph_to_dict, graph_to_dot, graph_to_json,
                               rule_from_dict, rule_to_dict)
from pgstrat.rules import validate_rule
from randgen import random_host


def test_graph_json_round_trip_is_exact():
    g = build_initial_graph(SimConfig(seed=4))
    back = graph_from_json(graph_to_json(g))
    assert set(back.nodes) == set(g.nodes)
    assert all(back.label(c) == g.label(c) for c in g.components())
    assert graph_to_json(back) == graph_to_json(g)
    assert isomorphic(g, back)


@pytest.mark.parametrize("seed", range(10))
def test_random_graph_round_trip(seed):
    g = random_host(random.Random(seed))
    assert isomorphic(g, graph_from_json(graph_to_json(g)))


def test_variables_and_terms_survive():
    gb = GraphBuilder()
    gb.add_node({"Name": "N", "v": Var("x"), "t": Term("+", (Var("x"), 1)), "ok": True})
    g = gb.freeze()
    back = graph_from_json(graph_to_json(g))
    assert back.label(next(iter(back.nodes))) == g.label(next(iter(g.nodes)))


def test_document_header():
    doc = graph_to_dict(build_initial_graph(SimConfig(num_agents=2)))
    assert doc["format"] == "pgstrat/portgraph" and doc["version"] == 1
    json.dumps(doc)
    with pytest.raises(ValueError):
        graph_from_json(json.dumps({"format": "other"}))


def test_rules_round_trip():
    for rule in model_rules():
        back = rule_from_dict(json.loads(json.dumps(rule_to_dict(rule))))
        assert back.name == rule.name
        assert back.condition_text == rule.condition_text
        assert back.algorithm_text == rule.algorithm_text
        assert isomorphic(back.lhs, rule.lhs) and isomorphic(back.rhs, rule.rhs)
        assert back.arrow_ports == rule.arrow_ports
        assert validate_rule(back) == []


def test_dot_mentions_every_node():
    g = build_initial_graph(SimConfig(num_agents=3))
    dot = graph_to_dot(g)
    assert dot.startswith("graph") or dot.startswith("digraph")
    assert dot.count("Bank") >= 3 and "Asset" in dot
