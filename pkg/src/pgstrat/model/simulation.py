"""Building the initial market and running it to a fixed point."""
from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Mapping

from ..errors import ConfigError, EvalError
from ..graph import GraphBuilder, PortGraph
from ..matching import find_matches
from ..strategy import UdfRegistry, execute
from ..strategy.tree import DerivationTree
from .payoff import logit_probs
from .rules import (LOGIT_UDF, SAMPLING_MODES, all_trade_strategy, fixed_point_search_strategy,
                    model_rules)

MODES = ("deterministic", "logit")
NOT_REACHED = "not reached"


@dataclass(frozen=True)
class SimConfig:
    num_agents: int = 11
    initial_mix: float = 6 / 11
    p_tox: float = 0.1
    c_val: float = 0.6
    ddcost: float = 0.001
    beta: float = 50.0
    mode: str = "deterministic"
    seed: int = 0
    max_cycles: int = 500
    sampling: str = "round"

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise ConfigError("; ".join(problems))

    def problems(self) -> list[str]:
        out = []
        if not _is_int(self.num_agents) or self.num_agents < 2:
            out.append(f"num_agents must be an integer >= 2, got {self.num_agents!r}")
        for name in ("initial_mix", "p_tox", "c_val"):
            v = getattr(self, name)
            if not _is_real(v) or not 0.0 <= v <= 1.0:
                out.append(f"{name} must lie in [0, 1], got {v!r}")
        for name in ("ddcost", "beta"):
            v = getattr(self, name)
            if not _is_real(v) or not math.isfinite(v) or v < 0:
                out.append(f"{name} must be a finite number >= 0, got {v!r}")
        if self.mode not in MODES:
            out.append(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.sampling not in SAMPLING_MODES:
            out.append(f"sampling must be one of {SAMPLING_MODES}, got {self.sampling!r}")
        if not _is_int(self.seed):
            out.append(f"seed must be an integer, got {self.seed!r}")
        if not _is_int(self.max_cycles) or self.max_cycles < 1:
            out.append(f"max_cycles must be a positive integer, got {self.max_cycles!r}")
        return out

    @property
    def negligent_banks(self) -> int:
        """``round(m * n)`` with halves rounded up."""
        return math.floor(self.initial_mix * self.num_agents + 0.5)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        return cls(**dict(data))

    def replace(self, **changes) -> "SimConfig":
        return SimConfig(**{**self.to_dict(), **changes})


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def build_initial_graph(cfg: SimConfig) -> PortGraph:
    """Complete contact network of banks, one asset held by bank 0, Z and Change.

    The negligent banks and the asset's toxicity are drawn from a generator
    seeded by the run seed, independent of the one driving the strategy.
    """
    n = cfg.num_agents
    rng = random.Random(f"{cfg.seed}/initial")
    negligent = set(rng.sample(range(n), cfg.negligent_banks))
    a_tox = 1 if rng.random() < cfg.p_tox else 0

    gb = GraphBuilder()
    banks = []
    for i in range(n):
        banks.append(gb.add_node({"Name": "Bank", "payoff": 0.0, "z": int(i in negligent),
                                  "b_id": i, "lastround": 0}, ports=["O", "C"]))
    asset = gb.add_node({"Name": "Asset", "c_val": cfg.c_val, "p_tox": cfg.p_tox,
                         "a_tox": a_tox, "pe": cfg.p_tox, "ddcost": cfg.ddcost}, ports=["OB"])
    gb.add_node({"Name": "Z", "z": len(negligent) / n, "numofiterations": 0,
                 "numofagents": n}, ports=["EN"])
    gb.add_node({"Name": "Change", "change": 0, "sumofchange": 0}, ports=["CH"])
    gb.add_edge(gb.port(asset, "OB"), gb.port(banks[0], "O"))
    for i in range(n):
        for j in range(i + 1, n):
            gb.add_edge(gb.port(banks[i], "C"), gb.port(banks[j], "C"))
    return gb.freeze()


# -- observables ---------------------------------------------------------------

def _single(graph: PortGraph, name: str):
    found = graph.nodes_named(name)
    if len(found) != 1:
        raise EvalError(f"expected exactly one {name} node, found {len(found)}")
    return graph.label(found[0])


def z_value(graph: PortGraph) -> float:
    return float(_single(graph, "Z")["z"])


def negligent_count(graph: PortGraph) -> int:
    """Banks (including one mid-trade as PotentialBuyer) with z = 1."""
    return sum(1 for nid in graph.nodes
               if graph.label(nid).name in ("Bank", "PotentialBuyer") and graph.label(nid).get("z") == 1)


def mean_z(graph: PortGraph) -> float:
    zs = [graph.label(nid)["z"] for nid in graph.nodes
          if graph.label(nid).name in ("Bank", "PotentialBuyer")]
    return sum(zs) / len(zs)


def udf_logit(graph: PortGraph, beta: float) -> list[float]:
    """``[p_follow, p_deviate]`` from the payoffs stored on the single Theta node."""
    theta = _single(graph, "Theta")
    return list(logit_probs(beta, theta["U1"], theta["U0"]))


# -- running -------------------------------------------------------------------

@dataclass(frozen=True)
class ZRow:
    depth: int
    z: float
    negligent_count: int
    mean_z: float


@dataclass(frozen=True)
class Analysis:
    """Inputs and outputs of one ``beginanalysis`` step."""
    depth: int
    p: float
    Z: float
    c: float
    x_w: float
    U1: float
    U0: float
    delta: float


@dataclass(frozen=True)
class Decision:
    depth: int
    branch: str          # "follow" or "deviate"
    delta: float
    U1: float
    U0: float
    z_before: int
    z_after: int

    @property
    def flipped(self) -> bool:
        return self.z_before != self.z_after


@dataclass
class SimResult:
    config: SimConfig
    z_series: list[ZRow]
    final_graph: PortGraph
    cycles_to_fixed_point: int | str
    cycles: int
    status: str
    tree: DerivationTree
    analyses: list[Analysis] = field(default_factory=list)
    decisions: list[Decision] = field(default_factory=list)
    cycle_flips: list[int] = field(default_factory=list)

    @property
    def reached_fixed_point(self) -> bool:
        return self.cycles_to_fixed_point != NOT_REACHED

    @property
    def flips(self) -> int:
        return sum(1 for d in self.decisions if d.flipped)


class _Recorder:
    """Collects per-step observations; entries of abandoned steps are dropped later."""

    def __init__(self):
        self.z_rows: list[tuple[int, ZRow]] = []
        self.analyses: list[tuple[int, Analysis]] = []
        self.decisions: list[tuple[int, Decision]] = []
        self.cycle_marks: list[int] = []

    def __call__(self, node, before: PortGraph, after: PortGraph, rule) -> None:
        name = rule.name
        if name == "updatez":
            self.z_rows.append((node.id, ZRow(node.depth, z_value(after),
                                              negligent_count(after), mean_z(after))))
        elif name == "beginanalysis":
            asset = _single(after, "Asset")
            theta = _single(after, "Theta")
            self.analyses.append((node.id, Analysis(
                node.depth, asset["p_tox"], z_value(before), asset["c_val"], asset["ddcost"],
                theta["U1"], theta["U0"], theta["DeltaU1U0"])))
        elif name in ("followdecision", "deviationdecision"):
            theta = _single(before, "Theta")
            buyer = _single(before, "PotentialBuyer")
            owner = _owner(after)
            self.decisions.append((node.id, Decision(
                node.depth, "follow" if name == "followdecision" else "deviate",
                theta["DeltaU1U0"], theta["U1"], theta["U0"], buyer["z"], owner["z"])))
        elif name == "change":
            self.cycle_marks.append(node.id)


def _owner(graph: PortGraph):
    asset = graph.nodes_named("Asset")[0]
    (port,) = graph.ports_of(asset)
    (edge,) = graph.edges_at(port)
    return graph.label(graph.ports[graph.edges[edge].other(port)].node)


def run(cfg: SimConfig, keep_states: bool = False, observers: bool = True) -> SimResult:
    """Run FixedPointSearch from the initial market of ``cfg``.

    ``keep_states`` stores every intermediate graph in the tree (memory grows
    with the run); the final graph is returned either way.  ``observers``
    annotates each state with ``Z`` and ``negligent``.
    """
    g0 = build_initial_graph(cfg)
    logit = cfg.mode == "logit"
    rules = model_rules(gated=not logit, sampling=cfg.sampling)
    udfs = UdfRegistry({LOGIT_UDF: lambda g: udf_logit(g, cfg.beta)})
    rec = _Recorder()
    obs = {"Z": z_value, "negligent": negligent_count} if observers else None
    outcome, tree = execute(
        fixed_point_search_strategy(), g0, rules,
        macros={"AllTrade": all_trade_strategy(cfg.mode)}, udfs=udfs, seed=cfg.seed,
        params={"k": cfg.num_agents, "max_cycles": cfg.max_cycles},
        observers=obs, hooks=[rec], keep_states=keep_states)

    def live(items):
        return [x for nid, x in items if not tree.nodes[nid].abandoned]

    z_series = [ZRow(0, z_value(g0), negligent_count(g0), mean_z(g0))] + live(rec.z_rows)
    decisions = live(rec.decisions)
    change_steps = [nid for nid in rec.cycle_marks if not tree.nodes[nid].abandoned]
    cycles = 1 + len(change_steps)

    # flips per AllTrade cycle, split at the ``change`` steps
    bounds = [tree.nodes[nid].depth for nid in change_steps] + [math.inf]
    cycle_flips = [0] * cycles
    for d in decisions:
        idx = next(i for i, b in enumerate(bounds) if d.depth < b)
        cycle_flips[idx] += d.flipped

    change_rule = next(r for r in rules if r.name == "change")
    fixed = not find_matches(change_rule, outcome.graph)
    return SimResult(
        config=cfg, z_series=z_series, final_graph=outcome.graph,
        cycles_to_fixed_point=cycles if fixed else NOT_REACHED, cycles=cycles,
        status=outcome.status, tree=tree, analyses=live(rec.analyses),
        decisions=decisions, cycle_flips=cycle_flips)


def z_series_csv(result: SimResult | list[ZRow]) -> str:
    rows = result.z_series if isinstance(result, SimResult) else result
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["depth", "Z", "negligent_count"])
    for r in rows:
        w.writerow([r.depth, repr(r.z), r.negligent_count])
    return buf.getvalue()
