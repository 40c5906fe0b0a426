"""Rewrite rules and strategies of the negligence market.

A trade runs as four rewrites:

1. ``requesttobuy`` turns a contact of the asset owner into a PotentialBuyer.
2. ``beginanalysis`` attaches a Theta node holding both payoffs and their
   difference.
3. ``followresult`` or ``deviationresult`` tags the Theta node with the
   outcome.
4. The matching ``*decision`` rule hands the asset to the buyer, sets its z,
   counts a flip in the Change node and removes Theta and the tag.

``updatez`` then folds the new owner's z into the market average.
"""
from __future__ import annotations

from ..rules import RewriteRule, RuleBuilder
from ..strategy import ast as A
from ..strategy.parser import parse_strategy

BANK_PORTS = ("O", "C")
BUYER_PORTS = ("O", "C", "GE")

LOGIT_UDF = "udfLogitModel"
ROUND = "floor(Z.numofiterations / Z.numofagents)"

SAMPLING_MODES = ("round", "uniform")


def request_to_buy(sampling: str = "round") -> RewriteRule:
    """Ask a contact of the owner to buy.

    With ``sampling="round"`` a bank can be asked at most once per block of
    ``numofagents`` trades, so every bank is asked exactly once per AllTrade
    cycle.  With ``"uniform"`` the buyer is any contact.
    """
    rb = RuleBuilder("requesttobuy")
    rb.lhs_node("A", "Asset", ["OB"])
    rb.lhs_node("S", "Bank", BANK_PORTS)
    rb.lhs_node("B", "Bank", BANK_PORTS)
    rb.lhs_edge("A.OB", "S.O")
    rb.lhs_edge("S.C", "B.C")
    rb.keep("A")
    rb.keep("S")
    rb.keep("B", name="PotentialBuyer", extra_ports=["GE"])
    rb.rhs_edge("A.OB", "S.O")
    rb.rhs_edge("S.C", "B.C")
    if sampling == "round":
        rb.lhs_node("Z", "Z", ["EN"])
        rb.keep("Z")
        rb.condition(f"B.lastround <= {ROUND}")
        rb.algorithm(f"B.lastround := {ROUND} + 1")
    elif sampling != "uniform":
        raise ValueError(f"unknown sampling mode {sampling!r}")
    return rb.build()


def begin_analysis() -> RewriteRule:
    rb = RuleBuilder("beginanalysis")
    rb.lhs_node("A", "Asset", ["OB"])
    rb.lhs_node("Z", "Z", ["EN"])
    rb.lhs_node("B", "PotentialBuyer", BUYER_PORTS)
    rb.keep("A")
    rb.keep("Z")
    # GE stays unlinked: a buyer already wired to a Theta cannot match again.
    rb.keep("B", unlinked=["GE"])
    rb.rhs_node("Theta", "Theta", ["PB"])
    rb.rhs_edge("B.GE", "Theta.PB")
    rb.algorithm(
        "Theta.U1 := 1 - A.p_tox(1 - Z.z) - A.c_val",
        "Theta.U0 := (1 - A.p_tox)(1 - A.c_val) - A.ddcost",
        "Theta.DeltaU1U0 := Theta.U1 - Theta.U0",
    )
    return rb.build()


def _result(name: str, tag: str, condition: str) -> RewriteRule:
    rb = RuleBuilder(name)
    rb.lhs_node("B", "PotentialBuyer", BUYER_PORTS)
    rb.lhs_node("Theta", "Theta", ["PB"])
    rb.lhs_edge("B.GE", "Theta.PB")
    rb.keep("B")
    rb.keep("Theta", unlinked=["PB"])
    rb.rhs_node("T", tag, ["R"])
    rb.rhs_edge("B.GE", "Theta.PB")
    rb.rhs_edge("T.R", "Theta.PB")
    rb.condition(condition)
    return rb.build()


def follow_result(gated: bool = True) -> RewriteRule:
    return _result("followresult", "Follow", "Theta.DeltaU1U0 >= 0" if gated else "true")


def deviation_result(gated: bool = True) -> RewriteRule:
    return _result("deviationresult", "Deviation", "Theta.DeltaU1U0 < 0" if gated else "true")


def _decision(name: str, tag: str, z: int, flip: str) -> RewriteRule:
    rb = RuleBuilder(name)
    rb.lhs_node("A", "Asset", ["OB"])
    rb.lhs_node("S", "Bank", BANK_PORTS)
    rb.lhs_node("B", "PotentialBuyer", BUYER_PORTS)
    rb.lhs_node("Theta", "Theta", ["PB"])
    rb.lhs_node("T", tag, ["R"])
    rb.lhs_node("Change", "Change", ["CH"])
    rb.lhs_edge("A.OB", "S.O")
    rb.lhs_edge("B.GE", "Theta.PB")
    rb.lhs_edge("T.R", "Theta.PB")
    rb.keep("A")
    rb.keep("S")
    rb.keep("B", name="Bank", ports=BANK_PORTS)
    rb.keep("Change")
    rb.rhs_edge("A.OB", "B.O")
    # The counters read B.z before it is overwritten, i.e. the buyer's old z.
    rb.algorithm(
        f"Change.change := Change.change + {flip}",
        f"Change.sumofchange := Change.sumofchange + {flip}",
        f"B.z := {z}",
    )
    return rb.build()


def follow_decision() -> RewriteRule:
    return _decision("followdecision", "Follow", 1, "(1 - B.z)")


def deviation_decision() -> RewriteRule:
    return _decision("deviationdecision", "Deviation", 0, "B.z")


def update_z() -> RewriteRule:
    rb = RuleBuilder("updatez")
    rb.lhs_node("Z", "Z", ["EN"])
    rb.lhs_node("A", "Asset", ["OB"])
    rb.lhs_node("B", "Bank", BANK_PORTS)
    rb.lhs_edge("A.OB", "B.O")
    rb.keep("Z")
    rb.keep("A")
    rb.keep("B")
    rb.rhs_edge("A.OB", "B.O")
    rb.algorithm(
        "Z.z := ((Z.z * (Z.numofagents - 1)) + B.z) / Z.numofagents",
        "Z.numofiterations := Z.numofiterations + 1",
    )
    return rb.build()


def change() -> RewriteRule:
    rb = RuleBuilder("change")
    rb.lhs_node("Change", "Change", ["CH"])
    rb.keep("Change")
    rb.condition("Change.change > 0")
    rb.algorithm("Change.change := 0", "Change.sumofchange := 0")
    return rb.build()


def model_rules(gated: bool = True, sampling: str = "round") -> list[RewriteRule]:
    """The eight market rules.

    ``gated=False`` drops the sign conditions on the two result rules, which
    is what the logit strategy needs: there the branch is drawn by ``ppick``.
    """
    return [
        request_to_buy(sampling),
        begin_analysis(),
        follow_result(gated),
        deviation_result(gated),
        follow_decision(),
        deviation_decision(),
        update_z(),
        change(),
    ]


DETERMINISTIC_TRADE = (
    "(one(deviationresult);one(deviationdecision)) orelse\n"
    "    (one(followresult);one(followdecision))"
)
LOGIT_TRADE = (
    "ppick(one(followresult);one(followdecision),\n"
    f"          one(deviationresult);one(deviationdecision), {LOGIT_UDF})"
)

ALL_TRADE_TEMPLATE = """setPos(crtGraph);
repeat(one(requesttobuy);
    one(beginanalysis);
    {trade}
    setPos(crtGraph);
    one(updatez))(k)
"""

FIXED_POINT_SEARCH = """#AllTrade#;
while(match(change))(max_cycles)do(
    one(change);
    #AllTrade#)
"""


def all_trade_text(mode: str = "deterministic") -> str:
    if mode == "deterministic":
        trade = DETERMINISTIC_TRADE
    elif mode == "logit":
        trade = LOGIT_TRADE
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return ALL_TRADE_TEMPLATE.format(trade=trade)


def all_trade_strategy(mode: str = "deterministic") -> A.Strategy:
    """One trading cycle: ``k`` trades, each followed by a Z update.

    ``k`` is a symbolic bound, supplied as a link parameter.
    """
    return parse_strategy(all_trade_text(mode))


def fixed_point_search_strategy() -> A.Strategy:
    """Repeat AllTrade cycles while the last cycle flipped some bank.

    Uses the ``AllTrade`` macro and the ``max_cycles`` link parameter.
    """
    return parse_strategy(FIXED_POINT_SEARCH)
