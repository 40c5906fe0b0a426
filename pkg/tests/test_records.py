import pytest

from pgstrat.records import (EMPTY, Record, Signature, Term, Var, instantiate, is_ground,
                             values_equal, variables_of)
from pgstrat.errors import EvalError


def test_record_basics():
    r = Record([("Name", "Bank"), ("z", 1), ("Interface", ["O", "C"])])
    assert r.name == "Bank"
    assert r["Interface"] == ("O", "C")
    assert r.keys() == ["Name", "z", "Interface"]
    assert r.set("z", 0)["z"] == 0 and r["z"] == 1
    assert "payoff" not in r and r.get("payoff", 3) == 3
    assert r.without("z").keys() == ["Name", "Interface"]
    assert EMPTY.keys() == []


def test_duplicate_attribute_rejected():
    with pytest.raises(ValueError):
        Record([("Name", "a"), ("Name", "b")])


def test_equality_ignores_order_and_interface_order():
    a = Record([("Name", "Bank"), ("Interface", ("O", "C")), ("z", 1)])
    b = Record([("z", 1), ("Name", "Bank"), ("Interface", ("C", "O"))])
    assert a.equals(b)
    assert not a.equals(b.set("z", 0))
    assert Record({"x": 1.0}).equals(Record({"x": 1.0 + 1e-12}), tol=1e-9)
    assert not Record({"x": 1.0}).equals(Record({"x": 1.0 + 1e-12}))


def test_bool_is_not_a_number():
    assert not values_equal(True, 1)
    assert not values_equal(0, False)
    assert values_equal(1, 1.0 + 1e-12, tol=1e-9)


def test_ground_and_variables():
    t = Term("+", (Var("x"), 1))
    assert not is_ground(t)
    assert variables_of(t) == {"x"}
    assert instantiate(t, {"x": 2}) == 3
    assert is_ground(instantiate(t, {"x": 2}))
    with pytest.raises(EvalError):
        instantiate(t, {})
    assert not Record({"Name": "n", "v": Var("y")}).is_ground()
    assert Record({"Name": "n", "v": Var("y")}).instantiate({"y": 5})["v"] == 5


def test_signature_disjointness():
    assert Signature(frozenset({"a"}), frozenset({"b"})).violations() == []
    bad = Signature(frozenset({"a"}), frozenset({"a"}))
    assert len(bad.violations()) == 1
    sig = Signature.of_records([Record({"Name": "n", "v": Var("x")})])
    assert sig.attributes == {"Name", "v"} and sig.value_variables == {"x"}
