"""Attributed port graphs.

Nodes, ports and edges are identified by opaque ids drawn from one id space
(so the three component sets are disjoint).  Labels are :class:`Record`
values.  Edges are undirected and a pair of ports may be joined by several
edges.

A :class:`PortGraph` is never mutated after construction.  To derive a new
graph, call :meth:`PortGraph.edit` to get a :class:`GraphBuilder`, change it,
and :meth:`GraphBuilder.freeze` the result.  Unchanged records are shared.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Iterator, Mapping

from .errors import GraphError
from .records import EMPTY, Record

Id = Hashable


@dataclass(frozen=True)
class Port:
    node: Id
    label: Record


@dataclass(frozen=True)
class Edge:
    ends: tuple  # (port id, port id); unordered
    label: Record

    def other(self, port: Id) -> Id:
        a, b = self.ends
        return b if port == a else a


class PortGraph:
    """Immutable attributed port graph."""

    __slots__ = ("_nodes", "_ports", "_edges", "_node_ports", "_port_edges", "next_id")

    def __init__(self, nodes: Mapping[Id, Record] | None = None,
                 ports: Mapping[Id, Port] | None = None,
                 edges: Mapping[Id, Edge] | None = None,
                 next_id: int = 0):
        self._nodes = dict(nodes or {})
        self._ports = dict(ports or {})
        self._edges = dict(edges or {})
        self.next_id = next_id
        self._node_ports = None
        self._port_edges = None

    # -- component access -------------------------------------------------
    @property
    def nodes(self) -> Mapping[Id, Record]:
        return self._nodes

    @property
    def ports(self) -> Mapping[Id, Port]:
        return self._ports

    @property
    def edges(self) -> Mapping[Id, Edge]:
        return self._edges

    def components(self) -> set:
        return set(self._nodes) | set(self._ports) | set(self._edges)

    def label(self, cid: Id) -> Record:
        if cid in self._nodes:
            return self._nodes[cid]
        if cid in self._ports:
            return self._ports[cid].label
        if cid in self._edges:
            return self._edges[cid].label
        raise GraphError(f"unknown component {cid!r}")

    def attach(self, port: Id) -> Id:
        return self._ports[port].node

    def connect(self, edge: Id) -> tuple:
        return self._edges[edge].ends

    def _index(self):
        node_ports: dict = {n: [] for n in self._nodes}
        for pid, port in self._ports.items():
            node_ports.setdefault(port.node, []).append(pid)
        port_edges: dict = {p: [] for p in self._ports}
        for eid, edge in self._edges.items():
            a, b = edge.ends
            port_edges.setdefault(a, []).append(eid)
            if b != a:
                port_edges.setdefault(b, []).append(eid)
        self._node_ports = node_ports
        self._port_edges = port_edges

    def ports_of(self, node: Id) -> list:
        if self._node_ports is None:
            self._index()
        if node not in self._nodes:
            raise GraphError(f"unknown node {node!r}")
        return self._node_ports.get(node, [])

    def edges_at(self, port: Id) -> list:
        """Edges with ``port`` as an endpoint (a self-loop is listed once)."""
        if self._port_edges is None:
            self._index()
        return self._port_edges.get(port, [])

    def port_by_name(self, node: Id, name: str) -> Id | None:
        for pid in self.ports_of(node):
            if self._ports[pid].label.name == name:
                return pid
        return None

    def nodes_named(self, name: Any) -> list:
        return [n for n, rec in self._nodes.items() if rec.name == name]

    def edit(self) -> "GraphBuilder":
        return GraphBuilder(self)

    def __repr__(self) -> str:
        return (f"PortGraph(nodes={len(self._nodes)}, ports={len(self._ports)}, "
                f"edges={len(self._edges)})")


class GraphBuilder:
    """Mutable staging area used to construct or derive port graphs.

    Adding a port keeps the owning node's ``Interface`` attribute in sync.
    """

    def __init__(self, base: PortGraph | None = None):
        if base is None:
            base = PortGraph()
        self.nodes: dict = dict(base.nodes)
        self.ports: dict = dict(base.ports)
        self.edges: dict = dict(base.edges)
        self.next_id = base.next_id

    def fresh_id(self) -> int:
        while self.next_id in self.nodes or self.next_id in self.ports or self.next_id in self.edges:
            self.next_id += 1
        nid = self.next_id
        self.next_id += 1
        return nid

    def _claim(self, cid: Id | None) -> Id:
        if cid is None:
            return self.fresh_id()
        if cid in self.nodes or cid in self.ports or cid in self.edges:
            raise GraphError(f"component id {cid!r} already in use")
        return cid

    def add_node(self, label: Record | Mapping[str, Any] | str, ports: Iterable = (),
                 id: Id | None = None) -> Id:
        """Add a node and, optionally, ports given as names or port records.

        ``label`` may be a bare name.  Returns the new node id.
        """
        if isinstance(label, str):
            label = Record([("Name", label)])
        elif not isinstance(label, Record):
            label = Record(label)
        if "Name" not in label:
            raise GraphError("node label must define Name")
        nid = self._claim(id)
        self.nodes[nid] = label.set("Interface", ())
        for port in ports:
            self.add_port(nid, port)
        return nid

    def add_port(self, node: Id, label: Record | Mapping[str, Any] | str,
                 id: Id | None = None) -> Id:
        if node not in self.nodes:
            raise GraphError(f"unknown node {node!r}")
        if isinstance(label, str):
            label = Record([("Name", label)])
        elif not isinstance(label, Record):
            label = Record(label)
        if "Name" not in label:
            raise GraphError("port label must define Name")
        pid = self._claim(id)
        self.ports[pid] = Port(node, label)
        rec = self.nodes[node]
        self.nodes[node] = rec.set("Interface", tuple(rec.get("Interface", ())) + (label.name,))
        return pid

    def add_edge(self, p1: Id, p2: Id, label: Record | Mapping[str, Any] | None = None,
                 id: Id | None = None) -> Id:
        for p in (p1, p2):
            if p not in self.ports:
                raise GraphError(f"unknown port {p!r}")
        if label is None:
            label = EMPTY
        elif not isinstance(label, Record):
            label = Record(label)
        eid = self._claim(id)
        self.edges[eid] = Edge((p1, p2), label)
        return eid

    def set_attr(self, cid: Id, key: str, value: Any) -> None:
        if cid in self.nodes:
            self.nodes[cid] = self.nodes[cid].set(key, value)
        elif cid in self.ports:
            p = self.ports[cid]
            self.ports[cid] = Port(p.node, p.label.set(key, value))
        elif cid in self.edges:
            e = self.edges[cid]
            self.edges[cid] = Edge(e.ends, e.label.set(key, value))
        else:
            raise GraphError(f"unknown component {cid!r}")

    def remove_edge(self, eid: Id) -> None:
        del self.edges[eid]

    def remove_node(self, nid: Id) -> None:
        """Remove a node, its ports, and every edge touching those ports."""
        doomed = {pid for pid, p in self.ports.items() if p.node == nid}
        for eid in [e for e, edge in self.edges.items() if set(edge.ends) & doomed]:
            del self.edges[eid]
        for pid in doomed:
            del self.ports[pid]
        del self.nodes[nid]

    def port(self, node: Id, name: str) -> Id:
        for pid, p in self.ports.items():
            if p.node == node and p.label.name == name:
                return pid
        raise GraphError(f"node {node!r} has no port {name!r}")

    def freeze(self) -> PortGraph:
        return PortGraph(self.nodes, self.ports, self.edges, self.next_id)


def interface_of(graph: PortGraph, node: Id) -> list:
    """The ``Interface`` attribute stored on ``node``: the names of its ports."""
    if node not in graph.nodes:
        raise GraphError(f"unknown node {node!r}")
    return list(graph.nodes[node].get("Interface", ()))


def derived_interface(graph: PortGraph, node: Id) -> list:
    return [graph.ports[p].label.name for p in graph.ports_of(node)]


@dataclass(frozen=True)
class Violation:
    component: Any
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule} at {self.component!r}: {self.detail}"


def validate(graph: PortGraph, allow_variables: bool = False) -> list[Violation]:
    """Check the well-formedness conditions of an attributed port graph.

    Returns one :class:`Violation` per broken condition; an empty list means
    the graph is valid.  Variables in labels are reported unless
    ``allow_variables`` (rule sides may carry them).
    """
    out: list[Violation] = []
    nodes, ports, edges = graph.nodes, graph.ports, graph.edges

    for a, b, what in ((nodes, ports, "node/port"), (nodes, edges, "node/edge"),
                       (ports, edges, "port/edge")):
        for cid in set(a) & set(b):
            out.append(Violation(cid, "disjoint-ids", f"id used as both {what}"))

    for cid, rec in _all_labels(graph):
        if "Name" not in rec and cid not in edges:
            out.append(Violation(cid, "name-required", "label has no Name attribute"))
        if not allow_variables and not rec.is_ground():
            out.append(Violation(cid, "ground-label", "label contains variables"))

    for pid, port in ports.items():
        if port.node not in nodes:
            out.append(Violation(pid, "attach", f"port attached to missing node {port.node!r}"))

    for eid, edge in edges.items():
        if len(edge.ends) != 2:
            out.append(Violation(eid, "connect", "edge must connect exactly two ports"))
            continue
        for p in edge.ends:
            if p not in ports:
                out.append(Violation(eid, "connect", f"edge endpoint {p!r} is not a port"))

    names_to_interface: dict = {}
    for nid, rec in nodes.items():
        stored = rec.get("Interface")
        derived = [ports[p].label.name for p in graph.ports_of(nid)]
        if stored is None:
            out.append(Violation(nid, "interface", "node has no Interface attribute"))
            continue
        if sorted(map(str, stored)) != sorted(map(str, derived)):
            out.append(Violation(nid, "interface",
                                 f"stored Interface {list(stored)} != attached ports {derived}"))
        key = rec.name
        canon = sorted(map(str, stored))
        if key in names_to_interface:
            first_id, first = names_to_interface[key]
            if first != canon:
                out.append(Violation(nid, "name-interface",
                                     f"node named {key!r} has Interface {list(stored)} but "
                                     f"node {first_id!r} with the same Name has {first}"))
        else:
            try:
                hash(key)
                names_to_interface[key] = (nid, canon)
            except TypeError:
                pass
    return out


def _all_labels(graph: PortGraph) -> Iterator[tuple[Any, Record]]:
    yield from graph.nodes.items()
    for pid, p in graph.ports.items():
        yield pid, p.label
    for eid, e in graph.edges.items():
        yield eid, e.label
