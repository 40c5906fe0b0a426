import csv
import io
import json

import pytest

from pgstrat.iso import isomorphic
from pgstrat.model import SimConfig, run
from pgstrat.strategy import DerivationTree, export_tree
from pgstrat.strategy.tree import Step
from test_interpreter import RULES, xs
from pgstrat.strategy import execute, parse_strategy


def test_single_state_tree():
    t = DerivationTree()
    t.add_root(xs(1), {"n": 1})
    dot = export_tree(t, "dot")
    assert dot.count("->") == 0 and dot.count("[label=") == 1
    with pytest.raises(ValueError):
        t.add_root(xs(1))


def three_steps():
    _, tree = execute(parse_strategy("one(mark); one(toz); one(mark)"), xs(2), RULES,
                      observers={"nodes": lambda g: len(g.nodes)})
    return tree


def test_three_step_derivation_dot():
    tree = three_steps()
    assert len(tree) == 4
    dot = tree.to_dot()
    assert dot.count("->") == 3
    for rule in ("mark", "toz"):
        assert f'[label="{rule}"' in dot


def test_json_round_trip():
    tree = three_steps()
    back = DerivationTree.from_json(tree.to_json())
    assert len(back) == len(tree)
    for a, b in zip(tree.nodes, back.nodes):
        assert (a.id, a.parent, a.depth, a.abandoned, a.annotations) == \
               (b.id, b.parent, b.depth, b.abandoned, b.annotations)
        assert a.step == b.step
        assert isomorphic(a.graph, b.graph)
    json.loads(export_tree(tree, "json"))
    with pytest.raises(ValueError):
        DerivationTree.from_dict({"format": "nope"})


def test_abandoned_branches_are_marked_in_dot():
    _, tree = execute(parse_strategy("(one(mark); Fail) orelse one(mark)"), xs(1), RULES)
    dot = tree.to_dot()
    assert "dashed" in dot
    assert [n.id for n in tree.trunk()] == [0, 2]


def test_annotation_csv():
    tree = three_steps()
    rows = list(csv.reader(io.StringIO(export_tree(tree, "csv"))))
    assert rows[0] == ["depth", "name", "value"]
    assert [r[0] for r in rows[1:]] == ["0", "1", "2", "3"]
    with pytest.raises(ValueError):
        export_tree(tree, "png")


def test_model_tree_round_trip():
    res = run(SimConfig(num_agents=3, initial_mix=1.0), keep_states=True)
    back = DerivationTree.from_json(res.tree.to_json())
    assert isomorphic(back.nodes[-1].graph, res.final_graph)
    assert back.nodes[-1].step == res.tree.nodes[-1].step
    assert isinstance(back.nodes[1].step, Step)
