"""Derivation trees: graph states linked by rewrite steps."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

from ..graph import PortGraph
from ..serialize import graph_from_dict, graph_to_dict

TREE_FORMAT = "pgstrat/derivation-tree"


@dataclass(frozen=True)
class Step:
    rule: str
    match: dict      # L node alias -> host node id
    trace: str       # position in the strategy, e.g. "repeat[2]/orelse.2/one(followresult)"


@dataclass
class TreeNode:
    id: int
    parent: int | None
    depth: int
    graph: PortGraph | None
    step: Step | None = None
    annotations: dict = field(default_factory=dict)
    abandoned: bool = False


class DerivationTree:
    """Rooted tree of states.

    Steps whose strategy later failed are kept but flagged ``abandoned``;
    they hang off the trunk as dead branches.
    """

    def __init__(self):
        self.nodes: list[TreeNode] = []
        self.children: dict[int, list[int]] = {}

    def add_root(self, graph: PortGraph, annotations: dict | None = None) -> TreeNode:
        if self.nodes:
            raise ValueError("tree already has a root")
        node = TreeNode(0, None, 0, graph, None, dict(annotations or {}))
        self.nodes.append(node)
        self.children[0] = []
        return node

    def add_child(self, parent: int, graph: PortGraph | None, step: Step,
                  annotations: dict | None = None) -> TreeNode:
        p = self.nodes[parent]
        node = TreeNode(len(self.nodes), parent, p.depth + 1, graph, step, dict(annotations or {}))
        self.nodes.append(node)
        self.children[parent].append(node.id)
        self.children[node.id] = []
        return node

    def abandon_from(self, start: int) -> None:
        """Flag every node created at or after index ``start``."""
        for node in self.nodes[start:]:
            node.abandoned = True

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def __len__(self) -> int:
        return len(self.nodes)

    def path_to(self, node_id: int) -> list[TreeNode]:
        out = []
        cur: int | None = node_id
        while cur is not None:
            out.append(self.nodes[cur])
            cur = self.nodes[cur].parent
        return out[::-1]

    def trunk(self) -> list[TreeNode]:
        """The committed derivation: root to the last non-abandoned node."""
        live = [n for n in self.nodes if not n.abandoned]
        return self.path_to(live[-1].id) if live else []

    def steps(self) -> list[tuple[TreeNode, TreeNode]]:
        return [(self.nodes[n.parent], n) for n in self.nodes if n.parent is not None]

    # -- exports ------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "format": TREE_FORMAT,
            "version": 1,
            "nodes": [{
                "id": n.id,
                "parent": n.parent,
                "depth": n.depth,
                "abandoned": n.abandoned,
                "annotations": n.annotations,
                "step": None if n.step is None else {
                    "rule": n.step.rule,
                    "match": {str(k): v for k, v in n.step.match.items()},
                    "trace": n.step.trace,
                },
                "graph": None if n.graph is None else graph_to_dict(n.graph),
            } for n in self.nodes],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DerivationTree":
        if doc.get("format") != TREE_FORMAT:
            raise ValueError(f"not a derivation tree document: {doc.get('format')!r}")
        t = cls()
        for item in doc["nodes"]:
            step = item["step"]
            node = TreeNode(
                item["id"], item["parent"], item["depth"],
                None if item["graph"] is None else graph_from_dict(item["graph"]),
                None if step is None else Step(step["rule"], dict(step["match"]), step["trace"]),
                dict(item["annotations"]), item["abandoned"])
            if node.id != len(t.nodes):
                raise ValueError("tree nodes must be listed in id order")
            t.nodes.append(node)
            t.children[node.id] = []
            if node.parent is not None:
                t.children[node.parent].append(node.id)
        return t

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "DerivationTree":
        return cls.from_dict(json.loads(text))

    def to_dot(self) -> str:
        lines = ["digraph derivation {", "  node [shape=box, fontsize=10];"]
        for n in self.nodes:
            text = [f"#{n.id}"] + [f"{k}={_fmt(v)}" for k, v in n.annotations.items()]
            style = ', style=dashed, color=gray' if n.abandoned else ""
            lines.append(f'  s{n.id} [label="{_esc(chr(10).join(text))}"{style}];')
        for parent, child in self.steps():
            style = ', style=dashed, color=gray' if child.abandoned else ""
            lines.append(f'  s{parent.id} -> s{child.id} [label="{_esc(child.step.rule)}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def annotations_csv(self, trunk_only: bool = True) -> str:
        """Rows ``depth,name,value`` for each annotated state."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["depth", "name", "value"])
        for n in (self.trunk() if trunk_only else self.nodes):
            for name, value in n.annotations.items():
                w.writerow([n.depth, name, value])
        return buf.getvalue()


def export_tree(tree: DerivationTree, format: str = "dot") -> str:
    if format == "dot":
        return tree.to_dot()
    if format == "json":
        return tree.to_json()
    if format == "csv":
        return tree.annotations_csv()
    raise ValueError(f"unknown tree export format {format!r}")


def _fmt(v: Any) -> str:
    return f"{v:.6g}" if isinstance(v, float) else str(v)


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
