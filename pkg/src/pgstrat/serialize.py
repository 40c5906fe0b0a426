"""JSON and DOT renderings of graphs and rules.

Graph documents (``format: "pgstrat/portgraph"``, ``version: 1``)::

    {
      "format": "pgstrat/portgraph", "version": 1, "next_id": 42,
      "nodes": [{"id": 0, "label": [["Name", "Bank"], ["Interface", ["O", "C"]], ...]}],
      "ports": [{"id": 1, "node": 0, "label": [["Name", "O"]]}],
      "edges": [{"id": 5, "ports": [1, 3], "label": []}]
    }

Labels are lists of ``[attribute, value]`` pairs so attribute order survives.
Values are JSON scalars; ``Interface`` is a list of port names; a variable is
``{"var": name}`` and a term is ``{"op": op, "args": [...]}``.  Component ids
are JSON integers or strings and are kept as given.

Rule documents (``format: "pgstrat/rule"``) hold ``name``, ``lhs`` and
``rhs`` graph documents, ``arrow`` (a list of ``{"name", "type", "lhs",
"rhs"}`` port lists), ``condition`` (expression text) and ``algorithm`` (a
list of ``Alias.attr := expr`` lines).
"""
from __future__ import annotations

import json
from typing import Any

from .graph import Edge, Port, PortGraph
from .records import Record, Term, Var
from .rules import ArrowPort, ArrowPortType, RewriteRule

GRAPH_FORMAT = "pgstrat/portgraph"
RULE_FORMAT = "pgstrat/rule"
VERSION = 1


def _value_to_json(v: Any) -> Any:
    if isinstance(v, Var):
        return {"var": v.name}
    if isinstance(v, Term):
        return {"op": v.op, "args": [_value_to_json(a) for a in v.args]}
    if isinstance(v, tuple):
        return [_value_to_json(a) for a in v]
    return v


def _value_from_json(v: Any) -> Any:
    if isinstance(v, dict):
        if "var" in v:
            return Var(v["var"])
        return Term(v["op"], tuple(_value_from_json(a) for a in v["args"]))
    if isinstance(v, list):
        return tuple(_value_from_json(a) for a in v)
    return v


def _label_to_json(rec: Record) -> list:
    return [[k, _value_to_json(v)] for k, v in rec.items()]


def _label_from_json(pairs: list) -> Record:
    return Record([(k, _value_from_json(v)) for k, v in pairs])


def _id_from_json(x):
    return tuple(x) if isinstance(x, list) else x


def graph_to_dict(g: PortGraph) -> dict:
    return {
        "format": GRAPH_FORMAT,
        "version": VERSION,
        "next_id": g.next_id,
        "nodes": [{"id": n, "label": _label_to_json(rec)} for n, rec in g.nodes.items()],
        "ports": [{"id": p, "node": port.node, "label": _label_to_json(port.label)}
                  for p, port in g.ports.items()],
        "edges": [{"id": e, "ports": list(edge.ends), "label": _label_to_json(edge.label)}
                  for e, edge in g.edges.items()],
    }


def graph_from_dict(doc: dict) -> PortGraph:
    if doc.get("format") != GRAPH_FORMAT:
        raise ValueError(f"not a port graph document: format={doc.get('format')!r}")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported port graph document version {doc.get('version')!r}")
    nodes = {_id_from_json(n["id"]): _label_from_json(n["label"]) for n in doc["nodes"]}
    ports = {_id_from_json(p["id"]): Port(_id_from_json(p["node"]), _label_from_json(p["label"]))
             for p in doc["ports"]}
    edges = {_id_from_json(e["id"]): Edge(tuple(_id_from_json(x) for x in e["ports"]),
                                          _label_from_json(e["label"]))
             for e in doc["edges"]}
    return PortGraph(nodes, ports, edges, doc.get("next_id", 0))


def graph_to_json(g: PortGraph, indent: int | None = 1) -> str:
    return json.dumps(graph_to_dict(g), indent=indent)


def graph_from_json(text: str) -> PortGraph:
    return graph_from_dict(json.loads(text))


def rule_to_dict(rule: RewriteRule) -> dict:
    return {
        "format": RULE_FORMAT,
        "version": VERSION,
        "name": rule.name,
        "lhs": graph_to_dict(rule.lhs),
        "rhs": graph_to_dict(rule.rhs),
        "arrow": [{"name": ap.name, "type": ap.type.value, "lhs": list(ap.lhs_ports),
                   "rhs": list(ap.rhs_ports)} for ap in rule.arrow_ports],
        "condition": rule.condition_text,
        "algorithm": list(rule.algorithm_text),
    }


def rule_from_dict(doc: dict) -> RewriteRule:
    if doc.get("format") != RULE_FORMAT:
        raise ValueError(f"not a rule document: format={doc.get('format')!r}")
    arrows = tuple(ArrowPort(ArrowPortType(a["type"]), tuple(a["lhs"]), tuple(a["rhs"]),
                             a.get("name", "")) for a in doc["arrow"])
    return RewriteRule(doc["name"], graph_from_dict(doc["lhs"]), graph_from_dict(doc["rhs"]),
                       arrows, doc.get("condition", "true"), tuple(doc.get("algorithm", ())))


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, tuple):
        return "[" + ",".join(_fmt(x) for x in v) + "]"
    return str(v)


def _dot_escape(s: str) -> str:
    out = s
    for ch in '\\{}|<>"':
        out = out.replace(ch, "\\" + ch)
    return out


def graph_to_dot(g: PortGraph, name: str = "G", attributes: bool = True) -> str:
    """Graphviz rendering: nodes are record boxes whose fields are the ports."""
    lines = [f"graph {json.dumps(name)} {{", "  node [shape=record, fontsize=10];"]
    ids = {n: f"n{i}" for i, n in enumerate(g.nodes)}
    pids = {p: f"p{i}" for i, p in enumerate(g.ports)}
    for n, rec in g.nodes.items():
        title = _dot_escape(_fmt(rec.name))
        if attributes:
            extra = [f"{k}={_fmt(v)}" for k, v in rec.items() if k not in ("Name", "Interface")]
            if extra:
                title += "\\n" + _dot_escape(" ".join(extra))
        fields = "|".join(f"<{pids[p]}> {_dot_escape(_fmt(g.ports[p].label.name))}"
                          for p in g.ports_of(n))
        label = f"{{{title}|{{{fields}}}}}" if fields else f"{{{title}}}"
        lines.append(f'  {ids[n]} [label="{label}"];')
    for e, edge in g.edges.items():
        a, b = edge.ends
        lines.append(f"  {ids[g.attach(a)]}:{pids[a]} -- {ids[g.attach(b)]}:{pids[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
