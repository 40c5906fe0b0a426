import pytest

from pgstrat.errors import DistributionError, LinkError, StrategySyntaxError
from pgstrat.model.rules import (all_trade_strategy, all_trade_text, fixed_point_search_strategy,
                                 model_rules)
from pgstrat.strategy import (Fail, Id, LiteralDist, Macro, Match, NamedDist, One, OrElse, PPick,
                              Repeat, Seq, SetPos, UdfRegistry, While, link, parse_strategy,
                              register_udf, to_text)
from pgstrat.strategy.parser import check_probabilities, resolve_rule_name

RULES = [r.name for r in model_rules()]


def test_repeat_with_bound():
    assert parse_strategy("repeat(one(r))(5)") == Repeat(One("r"), 5)
    assert parse_strategy("repeat(one(r)) max 5") == Repeat(One("r"), 5)
    assert parse_strategy("repeat(one(r))") == Repeat(One("r"), None)


def test_sequencing_is_right_associative():
    s = parse_strategy("one(a); one(b); one(c)")
    assert s == Seq(One("a"), Seq(One("b"), One("c")))
    assert parse_strategy("one(a) one(b)") == Seq(One("a"), One("b"))
    assert parse_strategy("one(a);") == One("a")


def test_orelse_binds_tighter_than_sequencing():
    s = parse_strategy("(one(a);one(b)) orelse (one(c)) ; match(d)")
    assert s == Seq(OrElse(Seq(One("a"), One("b")), One("c")), Match("d"))


def test_all_trade_shape():
    s = all_trade_strategy()
    assert isinstance(s, Seq) and s.first == SetPos("crtGraph")
    rep = s.second
    assert isinstance(rep, Repeat) and rep.bound == "k"
    body = rep.body
    assert body.first == One("requesttobuy")
    assert body.second.first == One("beginanalysis")
    trade = body.second.second.first
    assert isinstance(trade, OrElse)
    assert trade.first == Seq(One("deviationresult"), One("deviationdecision"))
    assert body.second.second.second == Seq(SetPos("crtGraph"), One("updatez"))


def test_logit_variant_uses_ppick():
    s = all_trade_strategy("logit")
    trade = s.second.body.second.second.first
    assert isinstance(trade, PPick)
    assert trade.dist == NamedDist("udfLogitModel")
    assert trade.branches == (Seq(One("followresult"), One("followdecision")),
                              Seq(One("deviationresult"), One("deviationdecision")))
    assert "orelse" not in all_trade_text("logit")


def test_fixed_point_search_shape():
    s = fixed_point_search_strategy()
    assert s.first == Macro("AllTrade")
    loop = s.second
    assert isinstance(loop, While) and loop.cond == Match("change") and loop.bound == "max_cycles"
    assert loop.body == Seq(One("change"), Macro("AllTrade"))


def test_ppick_forms():
    s = parse_strategy("ppick(a, one(b); one(c), [0.25, 0.75])")
    assert s == PPick((One("a"), Seq(One("b"), One("c"))), LiteralDist((0.25, 0.75)))
    assert parse_strategy("ppick(a, b, udf)").dist == NamedDist("udf")


def test_while_forms():
    assert parse_strategy("while(match(x))do(one(x))") == While(Match("x"), One("x"), None)
    assert parse_strategy("while(match(x))(3)do(one(x))") == While(Match("x"), One("x"), 3)


def test_text_round_trip():
    for s in (all_trade_strategy(), all_trade_strategy("logit"), fixed_point_search_strategy(),
              parse_strategy("Id orelse Fail; ppick(a, b, [0.5, 0.5])")):
        assert parse_strategy(to_text(s)) == s


@pytest.mark.parametrize("text,line,col", [
    ("one()", 1, 5),
    ("one(a);\n  repeat(one(b)", 2, 16),
    ("one(a); ppick(a)", 1, 9),
    ("ppick(a, [1.0], b)", 1, 1),
    ("repeat(one(a))(0)", 1, 16),
    ("one(a) $", 1, 8),
])
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(StrategySyntaxError) as info:
        parse_strategy(text)
    assert (info.value.line, info.value.column) == (line, col)
    assert f"line {line}, column {col}" in str(info.value)


def test_link_expands_macros_and_parameters():
    linked = link(fixed_point_search_strategy(), RULES,
                  macros={"AllTrade": all_trade_text()}, params={"k": 11, "max_cycles": 7})
    assert linked.first.second.bound == 11
    assert linked.second.bound == 7
    assert linked.second.body.second == linked.first


def test_link_errors():
    with pytest.raises(LinkError):
        link(parse_strategy("one(nosuchrule)"), RULES)
    with pytest.raises(LinkError):
        link(parse_strategy("#Missing#"), RULES)
    with pytest.raises(LinkError):
        link(parse_strategy("#A#"), RULES, macros={"A": "#B#", "B": "one(change); #A#"})
    with pytest.raises(LinkError):
        link(parse_strategy("ppick(change, change, udfLogitModel)"), RULES)
    with pytest.raises(LinkError):
        link(parse_strategy("repeat(one(change))(k)"), RULES)
    with pytest.raises(LinkError):
        link(parse_strategy("repeat(one(change))(k)"), RULES, params={"k": 0})
    with pytest.raises(LinkError):
        link(parse_strategy("while(one(change))do(Id)"), RULES)
    with pytest.raises(DistributionError):
        link(parse_strategy("ppick(change, change, [0.5, 0.6])"), RULES)


def test_rule_names_resolve_case_insensitively():
    assert link(parse_strategy("one(followResult)"), RULES) == One("followresult")
    assert resolve_rule_name("UpdateZ", RULES) == "updatez"
    with pytest.raises(LinkError):
        resolve_rule_name("ab", ["AB", "Ab"])


def test_udf_registry():
    reg = register_udf(None, "udfLogitModel", lambda g: [0.5, 0.5])
    assert "udfLogitModel" in reg
    linked = link(parse_strategy("ppick(change, change, udfLogitModel)"), RULES, udfs=reg)
    assert isinstance(linked, PPick)
    with pytest.raises(ValueError):
        reg.register("udfLogitModel", lambda g: [1.0])
    assert UdfRegistry({"a": len}).names() == ["a"]


def test_probability_checks():
    assert check_probabilities([0.3, 0.7], 2) == [0.3, 0.7]
    for bad in ([0.5], [1.2, -0.2], [0.5, 0.6], ["x", 1], [float("nan"), 1.0]):
        with pytest.raises(DistributionError):
            check_probabilities(bad, 2)
    assert parse_strategy("Id; Fail") == Seq(Id(), Fail())
