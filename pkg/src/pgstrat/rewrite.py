"""Applying a rule at a match.

The redex ``g(L)`` is removed, a fresh instance of ``R`` is inserted, and each
context edge that touched a port of the redex is rerouted according to the
arrow port that port is linked to:

* bridge    -- the edge is re-attached to every ``R`` port the bridge lists
               (one copy per port; the first keeps the original edge id);
* wire      -- the context edges at the two wired ports are fused pairwise
               into direct edges between their outer endpoints;
* blackhole -- the edge is deleted.

The algorithm tab then runs top to bottom on the inserted nodes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import expr as ex
from .errors import DanglingEdgeError, EvalError
from .graph import Edge, GraphBuilder, PortGraph
from .matching import Morphism
from .rules import ArrowPortType, RewriteRule


@dataclass(frozen=True)
class RewriteResult:
    graph: PortGraph
    added: frozenset      # ids created by this step (including copied/fused edges)
    removed: frozenset    # ids of g(L) plus deleted context edges
    rhs_map: dict         # R component id -> new host id


def rewrite(host: PortGraph, rule: RewriteRule, m: Morphism) -> RewriteResult:
    rhs = rule.rhs
    gone_nodes = set(m.node_map.values())
    gone_ports = set(m.port_map.values())
    gone_edges = set(m.edge_map.values())
    inv_port = {hp: lp for lp, hp in m.port_map.items()}

    for hn in gone_nodes:
        for hp in host.ports_of(hn):
            if hp not in gone_ports:
                if any(e not in gone_edges for e in host.edges_at(hp)):
                    raise DanglingEdgeError(f"port {hp!r} of removed node {hn!r} is unmatched but connected")
                gone_ports.add(hp)

    gb = GraphBuilder(host)
    for eid in gone_edges:
        del gb.edges[eid]
    for pid in gone_ports:
        del gb.ports[pid]
    for nid in gone_nodes:
        del gb.nodes[nid]

    bindings = m.bindings
    new_id: dict = {}
    added: set = set()
    for alias, rec in rhs.nodes.items():
        explicit = rec.without("Interface").instantiate(bindings)
        if alias in m.node_map:
            base = host.nodes[m.node_map[alias]].without("Interface")
            label = base.update(dict(explicit.items()))
        else:
            label = explicit
        nid = gb.add_node(label)
        new_id[alias] = nid
        added.add(nid)
        for rp in rhs.ports_of(alias):
            plabel = rhs.ports[rp].label.instantiate(bindings)
            if rp in m.port_map:
                plabel = host.ports[m.port_map[rp]].label.update(dict(plabel.items()))
            pid = gb.add_port(nid, plabel)
            new_id[rp] = pid
            added.add(pid)
    for re_id, edge in rhs.edges.items():
        eid = gb.add_edge(new_id[edge.ends[0]], new_id[edge.ends[1]],
                          edge.label.instantiate(bindings))
        new_id[re_id] = eid
        added.add(eid)

    removed = set(gone_nodes) | gone_ports | gone_edges

    # -- reroute context edges -------------------------------------------
    context = []
    for hp in gone_ports:
        for eid in host.edges_at(hp):
            if eid not in gone_edges and eid not in context:
                context.append(eid)
    context.sort(key=_order_key(host))

    wired: dict = {}   # wire arrow port -> {lhs port: [(edge id, outer targets)]}
    for eid in context:
        edge = host.edges[eid]
        targets = []
        wire_ends = []
        for end in edge.ends:
            if end not in gone_ports:
                targets.append([end])
                continue
            lp = inv_port.get(end)
            ap = rule.arrow_of(lp) if lp is not None else None
            if ap is None:
                raise DanglingEdgeError(
                    f"edge {eid!r} touches port {end!r} of the redex, which is not linked "
                    f"to the arrow node of {rule.name!r}")
            if ap.type is ArrowPortType.BRIDGE:
                targets.append([new_id[rp] for rp in ap.rhs_ports])
            elif ap.type is ArrowPortType.BLACKHOLE:
                targets.append([])
            else:
                targets.append(None)
                wire_ends.append((ap, lp))
        del gb.edges[eid]
        if not wire_ends:
            combos = list(itertools.product(*targets))
            if not combos:
                removed.add(eid)
            for i, ends in enumerate(combos):
                if i == 0:
                    gb.edges[eid] = Edge(tuple(ends), edge.label)
                else:
                    added.add(gb.add_edge(ends[0], ends[1], edge.label))
        elif len(wire_ends) == 2:
            # both ends run into wires: the edge closes a loop through the redex
            removed.add(eid)
        else:
            ap, lp = wire_ends[0]
            outer = targets[1] if targets[0] is None else targets[0]
            wired.setdefault(ap, {}).setdefault(lp, []).append((eid, edge.label, outer))
            removed.add(eid)

    for ap, sides in wired.items():
        la, lb = ap.lhs_ports
        for (_, label, outer_a), (_, _, outer_b) in itertools.product(sides.get(la, []),
                                                                      sides.get(lb, [])):
            for t1, t2 in itertools.product(outer_a, outer_b):
                added.add(gb.add_edge(t1, t2, label))

    # -- algorithm tab ---------------------------------------------------
    def ref(alias: str, attr: str):
        if alias in new_id and alias in rhs.nodes:
            rec = gb.nodes[new_id[alias]]
            if attr in rec:
                return rec[attr]
        if alias in m.node_map:
            rec = host.nodes[m.node_map[alias]]
            if attr in rec:
                return rec[attr]
        raise EvalError(f"{alias}.{attr} is not defined in rule {rule.name!r}")

    def var(name: str):
        if name not in bindings:
            raise EvalError(f"unbound variable {name!r}")
        return bindings[name]

    for line in rule.algorithm:
        target = line.target
        if target.alias not in rhs.nodes:
            raise EvalError(f"algorithm target {target.alias}.{target.attr} is not an R node")
        if target.attr == "Interface":
            raise EvalError("Interface is maintained by the engine and cannot be assigned")
        value = ex.evaluate(line.value, ref, var)
        gb.set_attr(new_id[target.alias], target.attr, value)

    return RewriteResult(gb.freeze(), frozenset(added), frozenset(removed), new_id)


def apply(host: PortGraph, rule: RewriteRule, m: Morphism, rng=None) -> PortGraph:
    """Rewrite ``host`` at ``m``.  ``rng`` is accepted for interface symmetry and unused."""
    return rewrite(host, rule, m).graph


def _order_key(host: PortGraph):
    rank = {eid: i for i, eid in enumerate(host.edges)}
    return lambda eid: rank[eid]

