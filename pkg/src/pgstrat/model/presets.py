"""Named configurations for the twelve-cell parameter grid (mix x toxicity x diligence cost)."""
from __future__ import annotations

from .simulation import SimConfig

MIXES = {"m0545": 6 / 11, "m0": 0.0, "m1": 1.0}
TOXICITIES = {"ptox0001": 0.001, "ptox01": 0.1}
DDCOSTS = {"ddcost01": 0.1, "ddcost0001": 0.001}


def grid_presets(**overrides) -> dict[str, SimConfig]:
    """Grid cells keyed like ``m0545_ptox01_ddcost0001`` (11 banks, c = 0.6)."""
    out = {}
    for m_key, m in MIXES.items():
        for p_key, p in TOXICITIES.items():
            for x_key, x in DDCOSTS.items():
                cfg = SimConfig(num_agents=11, initial_mix=m, p_tox=p, ddcost=x)
                out[f"{m_key}_{p_key}_{x_key}"] = cfg.replace(**overrides) if overrides else cfg
    return out


# "figure2" is the preset name the command line accepts
PRESETS = {"figure2": grid_presets}


def preset(name: str, **overrides) -> dict[str, SimConfig]:
    try:
        return PRESETS[name](**overrides)
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None
