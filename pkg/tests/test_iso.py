import itertools
import random

from pgstrat.graph import GraphBuilder
from pgstrat.iso import isomorphic
from randgen import random_host


def three_banks(order, ids=None):
    gb = GraphBuilder()
    nodes = {}
    for i in order:
        nodes[i] = gb.add_node({"Name": "Bank", "b_id": i}, ports=["O", "C"],
                               id=None if ids is None else ids[i])
    for i, j in itertools.combinations(sorted(nodes), 2):
        gb.add_edge(gb.port(nodes[i], "C"), gb.port(nodes[j], "C"))
    return gb.freeze()


def test_identity_and_relabelled_ids():
    g = three_banks([0, 1, 2])
    assert isomorphic(g, g)
    h = three_banks([2, 0, 1], ids={0: "x", 1: "y", 2: "z"})
    assert isomorphic(g, h)


def test_attribute_change_breaks_isomorphism():
    g = three_banks([0, 1, 2])
    gb = g.edit()
    gb.set_attr(next(iter(g.nodes)), "b_id", 7)
    assert not isomorphic(g, gb.freeze())


def test_numeric_tolerance():
    gb = GraphBuilder()
    gb.add_node({"Name": "Z", "z": 0.5})
    gb2 = GraphBuilder()
    gb2.add_node({"Name": "Z", "z": 0.5 + 1e-12})
    assert isomorphic(gb.freeze(), gb2.freeze())
    assert not isomorphic(gb.freeze(), gb2.freeze(), tol=0.0)


def test_edge_placement_matters():
    def path(a_port):
        gb = GraphBuilder()
        x = gb.add_node("A", ports=["p", "q"])
        y = gb.add_node("B", ports=["r"])
        gb.add_edge(gb.port(x, a_port), gb.port(y, "r"))
        return gb.freeze()
    assert not isomorphic(path("p"), path("q"))


def test_multi_edge_count_matters():
    gb = GraphBuilder()
    x = gb.add_node("B", ports=["r"])
    y = gb.add_node("B", ports=["r"])
    gb.add_edge(gb.port(x, "r"), gb.port(y, "r"))
    single = gb.freeze()
    gb.add_edge(gb.port(x, "r"), gb.port(y, "r"))
    assert not isomorphic(single, gb.freeze())


def _shuffled_copy(g, rng):
    """Rebuild ``g`` with fresh ids and a random insertion order."""
    gb = GraphBuilder()
    nodes = list(g.nodes)
    rng.shuffle(nodes)
    pm = {}
    for n in nodes:
        nid = gb.add_node(g.nodes[n].without("Interface"))
        for p in g.ports_of(n):
            pm[p] = gb.add_port(nid, g.ports[p].label)
    edges = list(g.edges.values())
    rng.shuffle(edges)
    for e in edges:
        a, b = e.ends
        gb.add_edge(pm[b], pm[a], e.label) if rng.random() < 0.5 else gb.add_edge(pm[a], pm[b], e.label)
    return gb.freeze()


def test_equivalence_relation_on_pool():
    rng = random.Random(3)
    pool = []
    for _ in range(15):
        g = random_host(rng, 4)
        pool += [g, _shuffled_copy(g, rng)]
    for g in pool:
        assert isomorphic(g, g)
    for a, b in itertools.product(pool, repeat=2):
        assert isomorphic(a, b) == isomorphic(b, a)
    for a, b, c in itertools.product(pool[:12], repeat=3):
        if isomorphic(a, b) and isomorphic(b, c):
            assert isomorphic(a, c)
    for i in range(0, len(pool), 2):
        assert isomorphic(pool[i], pool[i + 1])
