"""Closed-form payoffs of the rational negligence market.

``u1`` is a bank's expected profit when it skips due diligence (z = 1) and
``u0`` when it performs it (z = 0).  ``Z`` is the market-wide share of
negligent banks, ``c`` the purchase cost (resale pays 1), ``p`` the toxicity
probability and ``x_w`` the due-diligence cost.
"""
from __future__ import annotations

import math


def u1(p: float, Z: float, c: float) -> float:
    return 1.0 - p * (1.0 - Z) - c


def u0(p: float, c: float, x_w: float) -> float:
    return (1.0 - p) * (1.0 - c) - x_w


def delta_u1_u0(p: float, Z: float, c: float, x_w: float) -> float:
    """Advantage of negligence over diligence, ``u1 - u0``."""
    return p * (Z - c) + x_w


def logit_probs(beta: float, u_follow: float, u_deviate: float) -> tuple[float, float]:
    """Logit choice between following the negligence rule and deviating.

    >>> logit_probs(1.0, 1.0, 0.0)[0]
    0.7310585786300049
    """
    if beta < 0:
        raise ValueError("intensity of choice must be non-negative")
    a, b = beta * u_follow, beta * u_deviate
    top = max(a, b)
    ea, eb = math.exp(a - top), math.exp(b - top)
    p_follow = ea / (ea + eb)
    return p_follow, 1.0 - p_follow
