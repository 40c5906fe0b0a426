"""Command-line front end: ``pgstrat run | sweep | export-tree | validate``.

Settings are resolved in the order defaults < ``--config`` file <
``PGSTRAT_*`` environment variables < flags.  The config file is a flat JSON
object whose keys are the :class:`SimConfig` field names; a run manifest is
accepted too (its ``config`` member is used), so any run can be repeated
from its manifest alone.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .errors import PgStratError
from .graph import validate
from .model.presets import PRESETS, preset
from .model.rules import model_rules
from .model.simulation import NOT_REACHED, SimConfig, SimResult, run, z_series_csv, z_value
from .rules import validate_rule
from .serialize import graph_from_json, graph_to_json
from .strategy.tree import export_tree

ENV_PREFIX = "PGSTRAT_"
EXIT_FIXED, EXIT_ERROR, EXIT_NOT_REACHED = 0, 1, 2

# flag -> (config field, parser)
FLAGS = {
    "agents": ("num_agents", int),
    "mix": ("initial_mix", float),
    "p_tox": ("p_tox", float),
    "c_val": ("c_val", float),
    "ddcost": ("ddcost", float),
    "beta": ("beta", float),
    "mode": ("mode", str),
    "seed": ("seed", int),
    "max_cycles": ("max_cycles", int),
    "sampling": ("sampling", str),
}
MODE_ALIASES = {"deterministic-orelse": "deterministic", "logit-ppick": "logit"}


def _defaults_table() -> str:
    d = SimConfig()
    lines = ["configuration defaults (flag / env var / default):"]
    for flag, (name, _) in FLAGS.items():
        lines.append(f"  --{flag.replace('_', '-'):<12} {ENV_PREFIX + name.upper():<26} {getattr(d, name)!r}")
    return "\n".join(lines)


def _coerce(name: str, raw: Any) -> Any:
    kind = {f.name: f.type for f in fields(SimConfig)}[name]
    if isinstance(raw, str):
        try:
            raw = int(raw) if kind == "int" else float(raw) if kind == "float" else raw
        except ValueError:
            raise PgStratError(f"{name}: cannot read {raw!r} as {kind}") from None
    if name == "mode":
        raw = MODE_ALIASES.get(raw, raw)
    if kind == "float" and isinstance(raw, int) and not isinstance(raw, bool):
        raw = float(raw)
    return raw


def load_config_file(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise PgStratError(f"cannot read config {path}: {exc}") from None
    if isinstance(doc, dict) and isinstance(doc.get("config"), dict):
        doc = doc["config"]
    if not isinstance(doc, dict):
        raise PgStratError(f"config {path} must be a JSON object")
    return doc


def resolve_config(args: argparse.Namespace, environ=os.environ) -> SimConfig:
    values: dict[str, Any] = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    known = {f.name for f in fields(SimConfig)}
    for name in known:
        key = ENV_PREFIX + name.upper()
        if key in environ:
            values[name] = environ[key]
    for flag, (name, _) in FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[name] = v
    unknown = set(values) - known
    if unknown:
        raise PgStratError(f"unknown configuration keys: {sorted(unknown)}")
    return SimConfig(**{k: _coerce(k, v) for k, v in values.items()})


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat JSON config or a run manifest")
    p.add_argument("--agents", type=int, help="number of banks (>= 2)")
    p.add_argument("--mix", type=float, help="initial share of negligent banks")
    p.add_argument("--p-tox", dest="p_tox", type=float, help="probability the asset is toxic")
    p.add_argument("--c-val", dest="c_val", type=float, help="purchase cost of the asset")
    p.add_argument("--ddcost", type=float, help="cost of due diligence")
    p.add_argument("--beta", type=float, help="logit intensity of choice")
    p.add_argument("--mode", help="deterministic or logit")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--max-cycles", dest="max_cycles", type=int, help="bound on trading cycles")
    p.add_argument("--sampling", help="buyer selection: round or uniform")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(prog="pgstrat", description=__doc__.split("\n")[0],
                                     epilog=_defaults_table(), formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one market to a fixed point", epilog=_defaults_table(),
                       formatter_class=fmt)
    _add_config_flags(p)
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--export-tree", dest="export_tree", choices=["dot", "json", "both"],
                   help="also write the derivation tree")
    p.add_argument("--keep-states", action="store_true",
                   help="store every intermediate graph in the exported tree")
    p.add_argument("--plot", action="store_true", help="write z_series.png")

    p = sub.add_parser("sweep", help="run every cell of a preset grid over many seeds",
                       epilog=_defaults_table(), formatter_class=fmt)
    _add_config_flags(p)
    p.add_argument("--preset", default="figure2", choices=sorted(PRESETS))
    p.add_argument("--seeds", type=int, default=10, help="number of seeds per cell")
    p.add_argument("--seed-start", dest="seed_start", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="sweep", help="output directory (default: sweep)")
    p.add_argument("--plot", action="store_true", help="write a grid figure of all cells")

    p = sub.add_parser("export-tree", help="run once and write the derivation tree",
                       formatter_class=fmt)
    _add_config_flags(p)
    p.add_argument("--format", choices=["dot", "json", "csv"], default="dot")
    p.add_argument("--keep-states", action="store_true")
    p.add_argument("--out", default="-", help="output file, '-' for stdout")

    p = sub.add_parser("validate", help="check a configuration, the model rules, and graph files")
    _add_config_flags(p)
    p.add_argument("--graph", action="append", default=[], help="port graph JSON to validate")
    return parser


# -- commands -------------------------------------------------------------------

def _manifest(cfg: SimConfig, res: SimResult, outputs: list[str]) -> dict:
    last = res.z_series[-1]
    return {
        "tool": "pgstrat",
        "version": __version__,
        "config": cfg.to_dict(),
        "status": "fixed point" if res.reached_fixed_point else "max_cycles reached",
        "cycles_to_fixed_point": res.cycles_to_fixed_point,
        "cycles": res.cycles,
        "final_Z": z_value(res.final_graph),
        "final_negligent_count": last.negligent_count,
        "outputs": outputs,
    }


def write_run(cfg: SimConfig, out: Path, tree_format: str | None = None,
              keep_states: bool = False, plot: bool = False,
              final_state: bool = True) -> SimResult:
    out.mkdir(parents=True, exist_ok=True)
    res = run(cfg, keep_states=keep_states)
    outputs = ["z_series.csv"]
    (out / "z_series.csv").write_text(z_series_csv(res))
    if final_state:
        (out / "final_state.json").write_text(graph_to_json(res.final_graph))
        outputs.append("final_state.json")
    for fmt in (("dot", "json") if tree_format == "both" else (tree_format,) if tree_format else ()):
        (out / f"tree.{fmt}").write_text(export_tree(res.tree, fmt))
        outputs.append(f"tree.{fmt}")
    if plot:
        from .plotting import plot_z_series
        plot_z_series(res.z_series, out / "z_series.png",
                      title=f"n={cfg.num_agents} m={cfg.initial_mix:.3g} p={cfg.p_tox:g} "
                            f"x_w={cfg.ddcost:g} {cfg.mode}")
        outputs.append("z_series.png")
    outputs.append("manifest.json")
    (out / "manifest.json").write_text(json.dumps(_manifest(cfg, res, outputs), indent=2) + "\n")
    return res


def cmd_run(args) -> int:
    cfg = resolve_config(args)
    res = write_run(cfg, Path(args.out), args.export_tree, args.keep_states, args.plot)
    last = res.z_series[-1]
    print(f"cycles={res.cycles} fixed_point={res.cycles_to_fixed_point} "
          f"Z={last.z:.6g} negligent={last.negligent_count}/{cfg.num_agents} -> {args.out}")
    return EXIT_FIXED if res.reached_fixed_point else EXIT_NOT_REACHED


def _sweep_job(job):
    name, cfg, out = job
    res = write_run(cfg, Path(out), final_state=False)
    return name, cfg.seed, res.cycles_to_fixed_point, res.z_series


def cmd_sweep(args) -> int:
    base = resolve_config(args)
    overrides = {k: getattr(base, k) for k in ("c_val", "beta", "mode", "max_cycles", "sampling")}
    cells = preset(args.preset, **overrides)
    out = Path(args.out)
    jobs = [(name, cfg.replace(seed=seed), str(out / name / f"seed_{seed}"))
            for name, cfg in cells.items()
            for seed in range(args.seed_start, args.seed_start + args.seeds)]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(_sweep_job, jobs, chunksize=4))
    else:
        results = [_sweep_job(j) for j in jobs]

    out.mkdir(parents=True, exist_ok=True)
    lines = ["preset,seed,cycles_to_fixed_point,final_Z,final_negligent_count"]
    series: dict[str, list] = {name: [] for name in cells}
    missed = 0
    for name, seed, cycles, rows in results:
        lines.append(f"{name},{seed},{cycles},{rows[-1].z!r},{rows[-1].negligent_count}")
        series[name].append(rows)
        missed += cycles == NOT_REACHED
    (out / "summary.csv").write_text("\n".join(lines) + "\n")
    if args.plot:
        from .plotting import plot_grid
        plot_grid(series, out / f"{args.preset}.png")
    print(f"{len(results)} runs, {missed} without fixed point -> {out}")
    return EXIT_NOT_REACHED if missed else EXIT_FIXED


def cmd_export_tree(args) -> int:
    cfg = resolve_config(args)
    res = run(cfg, keep_states=args.keep_states)
    text = export_tree(res.tree, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_FIXED if res.reached_fixed_point else EXIT_NOT_REACHED


def cmd_validate(args) -> int:
    ok = True
    cfg = resolve_config(args)
    print(f"config ok: {cfg.to_dict()}")
    for rule in model_rules(gated=cfg.mode != "logit", sampling=cfg.sampling):
        problems = validate_rule(rule)
        ok &= not problems
        for v in problems:
            print(f"rule {rule.name}: {v.component}: {v.rule}: {v.detail}")
    for path in args.graph:
        problems = validate(graph_from_json(Path(path).read_text()))
        ok &= not problems
        for v in problems:
            print(f"{path}: {v.component}: {v.rule}: {v.detail}")
        if not problems:
            print(f"{path}: ok")
    return EXIT_FIXED if ok else EXIT_ERROR


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "export-tree": cmd_export_tree,
            "validate": cmd_validate}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (PgStratError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
