import pytest

import liftsl


def test_fan_does_not_lift():
    r = liftsl.lift("1|->_ /\\ a*b", "1|->_*a \\/ 1|->_*b", ["a", "b"])
    assert r["verdict"] == "NoGuarantee"
    assert r["counterexample"]["witness"] == "([1↦0],[1↦0])"
    assert r["counterexample"]["rechecked"]


def test_chk_forgetting_the_split():
    assert liftsl.chk("1|->_ /\\ a*b", "1|->_", ["a", "b"])["headline"] == "LIFTS (Balloon)"
    assert not liftsl.chk("1|->_ /\\ a*b", "1|->_*a \\/ 1|->_*b", ["a", "b"])["ok"]


def test_layout_counts():
    assert liftsl.lift_counts(["a", "b"], [[1, 1], [1, 2]], [[1, 2], [0, 2]]) == "Lifts(Shadow)"


def test_normalize_and_pretty():
    assert liftsl.pretty("a*b", ["a", "b"]) == "a * b"
    assert liftsl.normalize("a * (b /\\ c)", ["a", "b", "c"]) is None


def test_search_arity():
    lhs, rhs = "1|->_ /\\ a*a*b", "1|->_*a \\/ 1|->_*b"
    assert liftsl.find_counter_env(lhs, rhs, ["a", "b"], arity=2, gens=3) is None
    assert liftsl.find_counter_env(lhs, rhs, ["a", "b"], arity=3, gens=3) is not None


def test_exec():
    assert liftsl.exec_command("[1] := 5", "[1:0]") == "[1↦5]"
    assert liftsl.exec_command("[2] := 5", "[1:0]") is None


def test_scenarios():
    assert set(liftsl.scenario_names()) == {"counter", "goodbad-left", "goodbad-right"}
    r = liftsl.run_scenario(liftsl.scenario_text("goodbad-right"))
    assert r["violated"]
    assert r["proof_accepted"] is False
    ok, report = liftsl.demo("counter")
    assert ok, report


def test_errors():
    with pytest.raises(liftsl.ParseError):
        liftsl.pretty("a * (", ["a"])
    with pytest.raises(ValueError):
        liftsl.demo("nope")
