"""Port graph rewrite rules.

A rule has a left-hand side ``L``, a right-hand side ``R``, an arrow node
whose ports say how edges between the redex and its context are rerouted, a
condition checked at matching time, and an algorithm tab: a list of
assignments evaluated after the structural replacement.

Inside a rule, node ids double as aliases used by the condition and the
algorithm tab (``Theta.U1``).  A node of ``R`` whose alias also names a node
of ``L`` is a continuation of it: its copy in the rewritten graph starts from
the matched node's attributes, overridden by whatever ``R`` states.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from . import expr as ex
from .graph import GraphBuilder, PortGraph, Violation, validate
from .records import Record, Term, is_ground, variables_of


class ArrowPortType(str, enum.Enum):
    BRIDGE = "bridge"
    WIRE = "wire"
    BLACKHOLE = "blackhole"


@dataclass(frozen=True)
class ArrowPort:
    type: ArrowPortType
    lhs_ports: tuple
    rhs_ports: tuple = ()
    name: str = ""


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: PortGraph
    rhs: PortGraph
    arrow_ports: tuple = ()
    condition_text: str = "true"
    algorithm_text: tuple = ()
    condition: Any = field(default=None, compare=False)
    algorithm: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "arrow_ports", tuple(self.arrow_ports))
        object.__setattr__(self, "algorithm_text", tuple(self.algorithm_text))
        if self.condition is None:
            object.__setattr__(self, "condition", ex.parse_expr(self.condition_text or "true"))
        if not self.algorithm and self.algorithm_text:
            object.__setattr__(self, "algorithm",
                               tuple(ex.parse_assignment(t) for t in self.algorithm_text))

    def arrow_of(self, lhs_port) -> ArrowPort | None:
        for ap in self.arrow_ports:
            if lhs_port in ap.lhs_ports:
                return ap
        return None

    @property
    def arrow_connected(self) -> frozenset:
        """Ports of ``L`` attached to the arrow node."""
        return frozenset(p for ap in self.arrow_ports for p in ap.lhs_ports)

    def __repr__(self) -> str:
        return f"RewriteRule({self.name!r})"


class RuleBuilder:
    """Programmatic rule construction.

    Ports are addressed as ``"alias.PortName"``::

        rb = RuleBuilder("drop")
        rb.lhs_node("X", "X", ports=["a", "b"])
        rb.wire("X.a", "X.b")
        rule = rb.build()
    """

    def __init__(self, name: str):
        self.name = name
        self._lhs = GraphBuilder()
        self._rhs = GraphBuilder()
        self._arrows: list[ArrowPort] = []
        self._condition = "true"
        self._algorithm: list[str] = []

    @staticmethod
    def _node(gb: GraphBuilder, alias: str, label, ports: Iterable) -> str:
        if isinstance(label, str):
            label = {"Name": label}
        gb.add_node(label, id=alias)
        for p in ports:
            name = p if isinstance(p, str) else Record(p).name
            gb.add_port(alias, p, id=f"{alias}.{name}")
        return alias

    def lhs_node(self, alias: str, label: str | Mapping[str, Any], ports: Iterable = ()) -> str:
        return self._node(self._lhs, alias, label, ports)

    def rhs_node(self, alias: str, label: str | Mapping[str, Any], ports: Iterable = ()) -> str:
        return self._node(self._rhs, alias, label, ports)

    def lhs_edge(self, p1: str, p2: str, label=None) -> None:
        self._lhs.add_edge(p1, p2, label, id=f"L{len(self._lhs.edges)}:{p1}-{p2}")

    def rhs_edge(self, p1: str, p2: str, label=None) -> None:
        self._rhs.add_edge(p1, p2, label, id=f"R{len(self._rhs.edges)}:{p1}-{p2}")

    def keep(self, alias: str, name: str | None = None, ports: Iterable[str] | None = None,
             extra_ports: Iterable[str] = (), unlinked: Iterable[str] = (),
             **attrs: Any) -> str:
        """Carry an ``L`` node over to ``R`` under the same alias.

        The copy keeps the ports named in ``ports`` (default: all of them) and
        each is bridged to its counterpart, except those listed in
        ``unlinked``.  An unlinked port must then be free of context edges for
        the rule to match.  ``name`` relabels the node and ``attrs`` become
        explicit ``R`` attributes; all other attributes of the matched node
        are inherited.
        """
        src = self._lhs.nodes[alias]
        label = {k: v for k, v in src.items() if k != "Interface"}
        if name is not None:
            label["Name"] = name
        label.update(attrs)
        all_ports = [self._lhs.ports[p].label.name
                     for p in self._lhs.ports if self._lhs.ports[p].node == alias]
        carried = all_ports if ports is None else list(ports)
        self.rhs_node(alias, label, carried + list(extra_ports))
        skip = set(unlinked)
        for pn in carried:
            if pn in all_ports and pn not in skip:
                self.bridge(f"{alias}.{pn}", f"{alias}.{pn}")
        return alias

    def bridge(self, lhs_port: str, *rhs_ports: str) -> None:
        self._arrows.append(ArrowPort(ArrowPortType.BRIDGE, (lhs_port,), tuple(rhs_ports),
                                      f"bridge:{lhs_port}"))

    def wire(self, lhs_port_a: str, lhs_port_b: str) -> None:
        self._arrows.append(ArrowPort(ArrowPortType.WIRE, (lhs_port_a, lhs_port_b), (),
                                      f"wire:{lhs_port_a}~{lhs_port_b}"))

    def blackhole(self, *lhs_ports: str) -> None:
        self._arrows.append(ArrowPort(ArrowPortType.BLACKHOLE, tuple(lhs_ports), (),
                                      f"blackhole:{','.join(lhs_ports)}"))

    def condition(self, text: str) -> None:
        self._condition = text

    def algorithm(self, *lines: str) -> None:
        self._algorithm.extend(lines)

    def build(self) -> RewriteRule:
        return RewriteRule(self.name, self._lhs.freeze(), self._rhs.freeze(),
                           tuple(self._arrows), self._condition, tuple(self._algorithm))


def validate_rule(rule: RewriteRule) -> list[Violation]:
    """Structural and scoping checks for a rule; empty list means valid."""
    out: list[Violation] = []
    for side, g in (("lhs", rule.lhs), ("rhs", rule.rhs)):
        for v in validate(g, allow_variables=True):
            out.append(Violation(f"{side}:{v.component}", v.rule, v.detail))

    seen: dict = {}
    for ap in rule.arrow_ports:
        nl, nr = len(ap.lhs_ports), len(ap.rhs_ports)
        if ap.type is ArrowPortType.BRIDGE and not (nl == 1 and nr >= 1):
            out.append(Violation(ap.name, "bridge",
                                 f"needs one edge into L and at least one into R, has {nl}/{nr}"))
        elif ap.type is ArrowPortType.BLACKHOLE and not (nl >= 1 and nr == 0):
            out.append(Violation(ap.name, "blackhole",
                                 f"needs at least one edge into L and none into R, has {nl}/{nr}"))
        elif ap.type is ArrowPortType.WIRE and not (nl == 2 and nr == 0):
            out.append(Violation(ap.name, "wire",
                                 f"needs exactly two edges into L and none into R, has {nl}/{nr}"))
        for p in ap.lhs_ports:
            if p not in rule.lhs.ports:
                out.append(Violation(ap.name, "arrow-port", f"unknown L port {p!r}"))
            elif p in seen and seen[p] is not ap:
                out.append(Violation(ap.name, "arrow-port",
                                     f"L port {p!r} is linked to more than one arrow port"))
            seen.setdefault(p, ap)
        for p in ap.rhs_ports:
            if p not in rule.rhs.ports:
                out.append(Violation(ap.name, "arrow-port", f"unknown R port {p!r}"))
        if len(set(ap.lhs_ports)) != nl:
            out.append(Violation(ap.name, "arrow-port", "repeated L port"))

    bound: set[str] = set()
    for cid in rule.lhs.components():
        for key, value in rule.lhs.label(cid).items():
            if isinstance(value, Term) and not is_ground(value):
                out.append(Violation(f"lhs:{cid}", "lhs-term",
                                     f"attribute {key} is a non-ground term; L may only bind plain variables"))
            bound |= variables_of(value)

    for cid in rule.rhs.components():
        for key, value in rule.rhs.label(cid).items():
            free = variables_of(value) - bound
            if free:
                out.append(Violation(f"rhs:{cid}", "scope",
                                     f"attribute {key} uses unbound variables {sorted(free)}"))

    lhs_aliases = set(rule.lhs.nodes)
    rhs_aliases = set(rule.rhs.nodes)
    for alias, attr in sorted(ex.refs(rule.condition)):
        if alias not in lhs_aliases:
            out.append(Violation("condition", "scope", f"{alias}.{attr} does not name an L node"))
    for name in sorted(ex.variables(rule.condition) - bound):
        out.append(Violation("condition", "scope", f"unbound variable {name!r}"))

    assigned: set = set()
    for line in rule.algorithm:
        t = line.target
        if t.alias not in rhs_aliases:
            out.append(Violation(line.source, "scope", f"target {t.alias}.{t.attr} is not an R node"))
        for alias, attr in sorted(ex.refs(line.value)):
            if alias in rhs_aliases and alias not in lhs_aliases:
                if attr not in rule.rhs.nodes[alias] and (alias, attr) not in assigned:
                    out.append(Violation(line.source, "scope",
                                         f"{alias}.{attr} is read before it is assigned"))
            elif alias not in rhs_aliases and alias not in lhs_aliases:
                out.append(Violation(line.source, "scope", f"{alias}.{attr} names no rule node"))
        for name in sorted(ex.variables(line.value) - bound):
            out.append(Violation(line.source, "scope", f"unbound variable {name!r}"))
        assigned.add((t.alias, t.attr))
    return out
