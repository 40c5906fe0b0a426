"""Finding redexes of a rule in a host graph.

A match is an injective map of the nodes, ports and edges of the rule's
left-hand side into the host that preserves attachment, connection and labels
(variables in the rule bind to host values), satisfies the rule condition,
and leaves no dangling edges: a left-hand port that is not linked to the
arrow node must have no host edges outside the image of ``L``.

Labels match by inclusion: every attribute stated in ``L`` must be present in
the host component with an equal value, while the host may carry more.  Since
node records include ``Interface``, a left-hand node still has to list all the
ports of the node it matches.

The search is plain backtracking.  It starts from the left-hand node whose
``Name`` is rarest in the host and extends along edges, so most candidates
come from the neighbourhood of nodes already placed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

from . import expr as ex
from .errors import EvalError
from .graph import PortGraph
from .records import Record, Term, Var, instantiate, values_equal
from .rules import RewriteRule


@dataclass(frozen=True)
class Morphism:
    node_map: Mapping = field(default_factory=dict)
    port_map: Mapping = field(default_factory=dict)
    edge_map: Mapping = field(default_factory=dict)
    bindings: Mapping = field(default_factory=dict)

    def image(self) -> set:
        return set(self.node_map.values()) | set(self.port_map.values()) | set(self.edge_map.values())

    def key(self) -> tuple:
        """Hashable identity of the structural maps (bindings follow from them)."""
        return (frozenset(self.node_map.items()), frozenset(self.port_map.items()),
                frozenset(self.edge_map.items()))

    def summary(self) -> dict:
        return {str(k): v for k, v in self.node_map.items()}


def match_label(pattern: Record, target: Record, bindings: Mapping[str, Any]) -> dict | None:
    """Match a rule label against a host label.

    Returns the extended bindings, or ``None`` on mismatch.  A variable binds
    on its first occurrence and must see an equal value afterwards.
    """
    out = None
    for key, want in pattern.items():
        if key not in target:
            return None
        have = target[key]
        if key == "Interface":
            if sorted(map(str, want)) != sorted(map(str, have)):
                return None
            continue
        if isinstance(want, Var):
            current = (out or bindings).get(want.name, _UNBOUND)
            if current is _UNBOUND:
                if out is None:
                    out = dict(bindings)
                out[want.name] = have
            elif not values_equal(current, have):
                return None
            continue
        if isinstance(want, Term):
            want = instantiate(want, out or bindings)
        if not values_equal(want, have):
            return None
    return dict(bindings) if out is None else out


_UNBOUND = object()


def resolver(rule: RewriteRule, morphism: Morphism, host: PortGraph):
    """Reference resolver for expressions over matched left-hand nodes."""
    def ref(alias: str, attr: str):
        hid = morphism.node_map.get(alias)
        if hid is None:
            raise EvalError(f"{alias!r} is not a node of the left-hand side of {rule.name!r}")
        rec = host.nodes[hid]
        if attr not in rec:
            raise EvalError(f"matched node {alias} has no attribute {attr!r}")
        return rec[attr]

    def var(name: str):
        if name not in morphism.bindings:
            raise EvalError(f"unbound variable {name!r}")
        return morphism.bindings[name]

    return ref, var


def check_condition(rule: RewriteRule, morphism: Morphism, host: PortGraph) -> bool:
    ref, var = resolver(rule, morphism, host)
    value = ex.evaluate(rule.condition, ref, var)
    if not isinstance(value, bool):
        raise EvalError(f"condition of {rule.name!r} evaluated to non-boolean {value!r}")
    return value


class _Plan:
    """Static search order for one (rule, host) pair."""

    def __init__(self, rule: RewriteRule, host: PortGraph):
        lhs = rule.lhs
        self.lhs = lhs
        counts: dict = {}
        for rec in host.nodes.values():
            counts[rec.name] = counts.get(rec.name, 0) + 1

        def rarity(n):
            name = lhs.nodes[n].name
            return len(host.nodes) if isinstance(name, (Var, Term)) else counts.get(name, 0)

        adjacent: dict = {n: set() for n in lhs.nodes}
        for e in lhs.edges.values():
            a, b = (lhs.attach(p) for p in e.ends)
            adjacent[a].add(b)
            adjacent[b].add(a)

        order: list = []
        placed: set = set()
        position = {n: i for i, n in enumerate(lhs.nodes)}
        while len(order) < len(lhs.nodes):
            frontier = [n for n in lhs.nodes if n not in placed and adjacent[n] & placed]
            pool = frontier or [n for n in lhs.nodes if n not in placed]
            nxt = min(pool, key=lambda n: (rarity(n), position[n]))
            order.append(nxt)
            placed.add(nxt)

        # edges become checkable once both endpoint nodes are placed
        rank = {n: i for i, n in enumerate(order)}
        self.steps: list = []
        edge_due: dict = {n: [] for n in order}
        for eid, e in lhs.edges.items():
            a, b = (lhs.attach(p) for p in e.ends)
            edge_due[order[max(rank[a], rank[b])]].append(eid)
        for n in order:
            self.steps.append(("node", n))
            for eid in edge_due[n]:
                self.steps.append(("edge", eid))

        # for each node, an earlier-placed neighbour to draw candidates from
        self.anchor: dict = {}
        for n in order:
            for eid, e in lhs.edges.items():
                p1, p2 = e.ends
                for mine, theirs in ((p1, p2), (p2, p1)):
                    if lhs.attach(mine) == n and rank[lhs.attach(theirs)] < rank[n]:
                        self.anchor.setdefault(n, (mine, theirs))


def _search(rule: RewriteRule, host: PortGraph) -> Iterator[Morphism]:
    plan = _Plan(rule, host)
    lhs = plan.lhs
    by_name: dict = {}
    for hid, rec in host.nodes.items():
        by_name.setdefault(rec.name, []).append(hid)

    nmap: dict = {}
    pmap: dict = {}
    emap: dict = {}
    used: set = set()
    steps = plan.steps

    def node_candidates(n):
        anchor = plan.anchor.get(n)
        if anchor is not None:
            _, theirs = anchor
            hp = pmap[theirs]
            seen = []
            for eid in host.edges_at(hp):
                c = host.attach(host.edges[eid].other(hp))
                if c not in seen:
                    seen.append(c)
            return seen
        name = lhs.nodes[n].name
        if isinstance(name, (Var, Term)):
            return list(host.nodes)
        return by_name.get(name, [])

    def assign_ports(lports, i, hnode, bindings):
        if i == len(lports):
            yield bindings
            return
        lp = lports[i]
        pattern = lhs.ports[lp].label
        for hp in host.ports_of(hnode):
            if hp in used:
                continue
            b2 = match_label(pattern, host.ports[hp].label, bindings)
            if b2 is None:
                continue
            pmap[lp] = hp
            used.add(hp)
            yield from assign_ports(lports, i + 1, hnode, b2)
            used.discard(hp)
            del pmap[lp]

    def step(i, bindings):
        if i == len(steps):
            yield Morphism(dict(nmap), dict(pmap), dict(emap), bindings)
            return
        kind, x = steps[i]
        if kind == "node":
            pattern = lhs.nodes[x]
            lports = lhs.ports_of(x)
            for c in node_candidates(x):
                if c in used:
                    continue
                b2 = match_label(pattern, host.nodes[c], bindings)
                if b2 is None:
                    continue
                nmap[x] = c
                used.add(c)
                for b3 in assign_ports(lports, 0, c, b2):
                    yield from step(i + 1, b3)
                used.discard(c)
                del nmap[x]
        else:
            le = lhs.edges[x]
            a, b = (pmap[p] for p in le.ends)
            for he in host.edges_at(a):
                if he in used:
                    continue
                if set(host.edges[he].ends) != {a, b}:
                    continue
                b2 = match_label(le.label, host.edges[he].label, bindings)
                if b2 is None:
                    continue
                emap[x] = he
                used.add(he)
                yield from step(i + 1, b2)
                used.discard(he)
                del emap[x]

    yield from step(0, {})


def satisfies_match_conditions(rule: RewriteRule, host: PortGraph, m: Morphism,
                               position=None, banned=None) -> bool:
    """Dangling, position/banned and rule-condition checks for a morphism."""
    edge_image = set(m.edge_map.values())
    linked = rule.arrow_connected
    for lp, hp in m.port_map.items():
        if lp in linked:
            continue
        for he in host.edges_at(hp):
            if he not in edge_image:
                return False
    if position is not None or banned:
        image = m.image()
        if position is not None and not (image & position):
            return False
        if banned and image & banned:
            return False
    return check_condition(rule, m, host)


def find_matches(rule: RewriteRule, host: PortGraph, position: set | None = None,
                 banned: set | None = None) -> list[Morphism]:
    """All redexes of ``rule`` in ``host``.

    ``position`` (``None`` means the whole graph) must share at least one
    component with the redex; ``banned`` must share none.  The order of the
    result depends only on the host's construction order.
    """
    return [m for m in _search(rule, host)
            if satisfies_match_conditions(rule, host, m, position, banned)]
