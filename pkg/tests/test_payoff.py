import math
import random

import pytest

from pgstrat.errors import EvalError
from pgstrat.graph import GraphBuilder
from pgstrat.model import delta_u1_u0, logit_probs, u0, u1, udf_logit

# frozen from a 30-digit evaluation of the closed forms
E_OVER_E_PLUS_1 = 0.731058578630004879
LOGIT_AT_MINUS_00045 = 0.498875001898433656


def test_delta_examples():
    assert delta_u1_u0(0.0, 0.3, 0.6, 0.05) == pytest.approx(0.05, abs=1e-15)
    assert delta_u1_u0(0.1, 0.545454, 0.6, 0.001) == pytest.approx(-0.0044546, abs=1e-12)
    assert u0(0.1, 0.6, 0.001) == pytest.approx(0.359, abs=1e-12)
    assert u1(0.0, 0.9, 0.6) == pytest.approx(0.4, abs=1e-15)


def test_difference_identity():
    rng = random.Random(5)
    for _ in range(1000):
        p, Z, c, xw = rng.random(), rng.random(), rng.random(), rng.uniform(0, 0.5)
        assert abs((u1(p, Z, c) - u0(p, c, xw)) - delta_u1_u0(p, Z, c, xw)) <= 1e-12


def test_logit_examples():
    assert logit_probs(3.0, 0.2, 0.2) == (0.5, 0.5)
    assert logit_probs(0.0, 5.0, -3.0) == (0.5, 0.5)
    pf, pd = logit_probs(1.0, 1.0, 0.0)
    assert pf == pytest.approx(E_OVER_E_PLUS_1, abs=1e-15)
    assert pd == pytest.approx(1 - E_OVER_E_PLUS_1, abs=1e-15)


def test_logit_is_overflow_safe():
    pf, pd = logit_probs(1e6, 1.0, 0.0)
    assert pf == 1.0 and pd == 0.0
    pf, pd = logit_probs(1e6, -5.0, 5.0)
    assert pf == 0.0 and pd == 1.0
    assert all(math.isfinite(x) for x in logit_probs(1e308, 1.0, 0.5))
    with pytest.raises(ValueError):
        logit_probs(-1.0, 0.0, 0.0)


def theta_graph(*payoffs):
    gb = GraphBuilder()
    for U1, U0 in payoffs:
        gb.add_node({"Name": "Theta", "U1": U1, "U0": U0, "DeltaU1U0": U1 - U0}, ports=["PB"])
    return gb.freeze()


def test_udf_logit():
    assert udf_logit(theta_graph((0.3, 0.3)), 7.0) == [0.5, 0.5]
    pf, pd = udf_logit(theta_graph((0.3545, 0.359)), 1.0)
    assert pf == pytest.approx(LOGIT_AT_MINUS_00045, abs=1e-12)
    assert pd == pytest.approx(1 - LOGIT_AT_MINUS_00045, abs=1e-12)
    with pytest.raises(EvalError):
        udf_logit(theta_graph(), 1.0)
    with pytest.raises(EvalError):
        udf_logit(theta_graph((0.1, 0.2), (0.3, 0.4)), 1.0)
