"""Executing strategies over port graphs.

Every strategy maps a located graph (graph, position set ``P``, banned set
``Q``) to success with a new located graph, or to failure.  Failure rolls
back to the input state; the tree keeps the failed attempt as an abandoned
branch.

After a rewrite step the position set becomes ``(P - removed) | added`` and
the banned set loses removed components, so ``setPos(crtGraph)`` keeps the
whole graph in position for the rest of a derivation.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from ..errors import PgStratError
from ..graph import PortGraph
from ..matching import find_matches
from ..rewrite import rewrite
from ..rules import RewriteRule
from . import ast as A
from .parser import UdfRegistry, check_probabilities, link, parse_strategy
from .tree import DerivationTree, Step, TreeNode

ID, FAIL = "Id", "Fail"


@dataclass(frozen=True)
class ExecOutcome:
    status: str          # "Id" or "Fail"
    graph: PortGraph     # state the run ended in (the input graph on Fail)
    steps: int           # committed rewrite steps
    node: int            # tree node holding the final state


@dataclass(frozen=True)
class _Located:
    graph: PortGraph
    position: frozenset
    banned: frozenset
    node: int


class StepLimitExceeded(PgStratError):
    pass


class Interpreter:
    """One strategy run.

    ``observers`` map annotation names to functions of a graph; they are
    evaluated on every new state.  ``hooks`` are called as
    ``hook(node, parent_graph, child_graph, rule)`` after each committed
    rewrite step, before later steps run.
    """

    def __init__(self, rules: Iterable[RewriteRule] | Mapping[str, RewriteRule],
                 udfs: UdfRegistry | Mapping[str, Callable] | None = None,
                 seed: int = 0,
                 observers: Mapping[str, Callable[[PortGraph], float]] | None = None,
                 hooks: Iterable[Callable] = (),
                 keep_states: bool = True,
                 max_steps: int | None = None):
        if isinstance(rules, Mapping):
            self.rules = dict(rules)
        else:
            self.rules = {r.name: r for r in rules}
        if isinstance(udfs, UdfRegistry) or udfs is None:
            self.udfs = udfs or UdfRegistry()
        else:
            self.udfs = UdfRegistry(udfs)
        self.rng = random.Random(seed)
        self.observers = dict(observers or {})
        self.hooks = list(hooks)
        self.keep_states = keep_states
        self.max_steps = max_steps
        self.tree = DerivationTree()
        self.steps = 0
        self._trace: list[str] = []

    def annotate(self, graph: PortGraph) -> dict:
        return {name: fn(graph) for name, fn in self.observers.items()}

    def run(self, strategy: A.Strategy, g0: PortGraph) -> ExecOutcome:
        root = self.tree.add_root(g0, self.annotate(g0))
        start = _Located(g0, frozenset(g0.components()), frozenset(), root.id)
        ok, end = self.eval(strategy, start)
        if not ok:
            end = start
        return ExecOutcome(ID if ok else FAIL, end.graph, self.tree.nodes[end.node].depth, end.node)

    # -- evaluation -----------------------------------------------------------
    def eval(self, s: A.Strategy, st: _Located) -> tuple[bool, _Located]:
        mark = len(self.tree)
        ok, out = self._eval(s, st)
        if not ok and len(self.tree) > mark:
            self.tree.abandon_from(mark)
        return ok, (out if ok else st)

    def _eval(self, s, st: _Located) -> tuple[bool, _Located]:
        if isinstance(s, A.Seq):
            self._trace.append("seq.1")
            ok, mid = self.eval(s.first, st)
            self._trace.pop()
            if not ok:
                return False, st
            self._trace.append("seq.2")
            ok, end = self.eval(s.second, mid)
            self._trace.pop()
            return ok, end
        if isinstance(s, A.One):
            return self._one(s.rule, st)
        if isinstance(s, A.Match):
            return bool(self._matches(s.rule, st)), st
        if isinstance(s, A.OrElse):
            self._trace.append("orelse.1")
            ok, out = self.eval(s.first, st)
            self._trace.pop()
            if ok:
                return True, out
            self._trace.append("orelse.2")
            ok, out = self.eval(s.second, st)
            self._trace.pop()
            return ok, out
        if isinstance(s, A.Repeat):
            i = 0
            while s.bound is None or i < s.bound:
                self._trace.append(f"repeat[{i + 1}]")
                ok, nxt = self.eval(s.body, st)
                self._trace.pop()
                if not ok:
                    break
                st = nxt
                i += 1
            return True, st
        if isinstance(s, A.While):
            i = 0
            while s.bound is None or i < s.bound:
                ok, _ = self.eval(s.cond, st)
                if not ok:
                    break
                self._trace.append(f"while[{i + 1}]")
                ok, nxt = self.eval(s.body, st)
                self._trace.pop()
                if not ok:
                    break
                st = nxt
                i += 1
            return True, st
        if isinstance(s, A.PPick):
            probs = self._distribution(s, st.graph)
            k = self._sample(probs)
            self._trace.append(f"ppick.{k + 1}")
            ok, out = self.eval(s.branches[k], st)
            self._trace.pop()
            return ok, out
        if isinstance(s, A.SetPos):
            return True, _Located(st.graph, frozenset(st.graph.components()), frozenset(), st.node)
        if isinstance(s, A.Id):
            return True, st
        if isinstance(s, A.Fail):
            return False, st
        if isinstance(s, A.Macro):
            raise PgStratError(f"macro #{s.name}# was not expanded; link the strategy first")
        raise PgStratError(f"not a strategy: {s!r}")

    def _matches(self, rule_name: str, st: _Located):
        return find_matches(self.rules[rule_name], st.graph, st.position, st.banned)

    def _one(self, rule_name: str, st: _Located) -> tuple[bool, _Located]:
        matches = self._matches(rule_name, st)
        if not matches:
            return False, st
        m = matches[self.rng.randrange(len(matches))]
        rule = self.rules[rule_name]
        res = rewrite(st.graph, rule, m)
        graph = res.graph
        self.steps += 1
        if self.max_steps is not None and self.steps > self.max_steps:
            raise StepLimitExceeded(f"more than {self.max_steps} rewrite steps")
        step = Step(rule_name, m.summary(), "/".join(self._trace + [f"one({rule_name})"]))
        node = self.tree.add_child(st.node, graph if self.keep_states else None, step,
                                   self.annotate(graph))
        for hook in self.hooks:
            hook(node, st.graph, graph, rule)
        position = (st.position - res.removed) | res.added
        banned = st.banned - res.removed
        return True, _Located(graph, position, banned, node.id)

    def _distribution(self, s: A.PPick, graph: PortGraph) -> list[float]:
        if isinstance(s.dist, A.LiteralDist):
            return check_probabilities(s.dist.probs, len(s.branches))
        probs = self.udfs[s.dist.name](graph)
        return check_probabilities(probs, len(s.branches))

    def _sample(self, probs: list[float]) -> int:
        u = self.rng.random()
        acc = 0.0
        for i, p in enumerate(probs):
            acc += p
            if u < acc:
                return i
        return max(i for i, p in enumerate(probs) if p > 0)


def execute(strategy: A.Strategy | str, g0: PortGraph,
            rules: Iterable[RewriteRule] | Mapping[str, RewriteRule],
            macros: Mapping[str, object] | None = None,
            udfs: UdfRegistry | Mapping[str, Callable] | None = None,
            seed: int = 0, params: Mapping[str, int] | None = None,
            observers: Mapping[str, Callable] | None = None,
            hooks: Iterable[Callable] = (), keep_states: bool = True,
            max_steps: int | None = None) -> tuple[ExecOutcome, DerivationTree]:
    """Parse (if needed), link and run a strategy from ``g0``."""
    interp = Interpreter(rules, udfs, seed, observers, hooks, keep_states, max_steps)
    if isinstance(strategy, str):
        strategy = parse_strategy(strategy)
    linked = link(strategy, interp.rules, macros, interp.udfs, params)
    outcome = interp.run(linked, g0)
    return outcome, interp.tree


__all__ = ["ExecOutcome", "Interpreter", "execute", "StepLimitExceeded", "TreeNode"]
