"""Isomorphism of attributed port graphs.

Used as a test oracle for rewriting, so it shares no code with the matcher.
"""
from __future__ import annotations

import itertools
from collections import Counter

from .graph import PortGraph

DEFAULT_TOL = 1e-9


def _node_shape(g: PortGraph, n) -> tuple:
    ports = g.ports_of(n)
    degree = sum(len(g.edges_at(p)) for p in ports)
    return (str(g.nodes[n].name), len(ports), degree)


def isomorphic(g1: PortGraph, g2: PortGraph, tol: float = DEFAULT_TOL) -> bool:
    """True iff a bijection of nodes, ports and edges preserves structure and labels.

    Numeric attributes compare within ``tol``.
    """
    if (len(g1.nodes), len(g1.ports), len(g1.edges)) != (len(g2.nodes), len(g2.ports), len(g2.edges)):
        return False
    shapes1 = {n: _node_shape(g1, n) for n in g1.nodes}
    shapes2 = {n: _node_shape(g2, n) for n in g2.nodes}
    if Counter(shapes1.values()) != Counter(shapes2.values()):
        return False

    # most constrained nodes first: fewest same-shape peers, then highest degree
    peers = Counter(shapes1.values())
    order = sorted(g1.nodes, key=lambda n: (peers[shapes1[n]], -shapes1[n][2]))
    nmap: dict = {}
    pmap: dict = {}
    used: set = set()

    def pair_edges(g, p, q):
        return [g.edges[e].label for e in g.edges_at(p) if set(g.edges[e].ends) == {p, q}]

    def port_bijections(u, v):
        pu, pv = g1.ports_of(u), g2.ports_of(v)
        for perm in itertools.permutations(pv):
            if all(g1.ports[a].label.equals(g2.ports[b].label, tol) for a, b in zip(pu, perm)):
                yield dict(zip(pu, perm))

    def edges_agree(new_ports: dict) -> bool:
        # every port pair with at least one newly placed end must carry matching edge labels
        for a, b in new_ports.items():
            for q1, q2 in list(pmap.items()) + list(new_ports.items()):
                l1 = pair_edges(g1, a, q1)
                l2 = pair_edges(g2, b, q2)
                if not _labels_match(l1, l2, tol):
                    return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        u = order[i]
        for v in g2.nodes:
            if v in used or shapes2[v] != shapes1[u]:
                continue
            if not g1.nodes[u].equals(g2.nodes[v], tol):
                continue
            for pb in port_bijections(u, v):
                if not edges_agree(pb):
                    continue
                nmap[u] = v
                used.add(v)
                pmap.update(pb)
                if extend(i + 1):
                    return True
                for k in pb:
                    del pmap[k]
                used.discard(v)
                del nmap[u]
        return False

    return extend(0)


def _labels_match(l1: list, l2: list, tol: float) -> bool:
    if len(l1) != len(l2):
        return False
    remaining = list(l2)
    for rec in l1:
        for i, other in enumerate(remaining):
            if rec.equals(other, tol):
                del remaining[i]
                break
        else:
            return False
    return True
