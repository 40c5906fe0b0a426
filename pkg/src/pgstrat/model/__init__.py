"""The rational-negligence market as port graph rules and strategies."""
from .payoff import delta_u1_u0, logit_probs, u0, u1
from .presets import grid_presets, preset
from .rules import all_trade_strategy, all_trade_text, fixed_point_search_strategy, model_rules
from .simulation import (NOT_REACHED, Analysis, Decision, SimConfig, SimResult, ZRow,
                         build_initial_graph, mean_z, negligent_count, run, udf_logit,
                         z_series_csv, z_value)

__all__ = [
    "delta_u1_u0", "logit_probs", "u0", "u1", "grid_presets", "preset",
    "all_trade_strategy", "all_trade_text", "fixed_point_search_strategy", "model_rules",
    "NOT_REACHED", "Analysis", "Decision", "SimConfig", "SimResult", "ZRow",
    "build_initial_graph", "mean_z", "negligent_count", "run", "udf_logit", "z_series_csv",
    "z_value",
]
