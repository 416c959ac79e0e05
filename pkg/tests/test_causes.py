import pytest

import oracles
from hpexplain.causes import (
    CauseKind, cause_witness, enumerate_causes, is_cause, is_part_of_cause, replay_witness,
)
from hpexplain.expr import Prim
from hpexplain.model import Conjunction, ModelError

FF = Prim("FF", 1)
C = Conjunction


def test_overdetermined_fire_causes(ex1):
    m = ex1.model
    u = {"U_L": 1, "U_MD": 1}
    assert set(enumerate_causes(m, u, FF, CauseKind.ACTUAL)) == {C({"FF": 1}), C({"L": 1, "MD": 1})}
    assert C({"L": 1}) not in enumerate_causes(m, u, FF, CauseKind.ACTUAL)
    assert is_cause(m, u, {"L": 1, "MD": 1}, FF, CauseKind.WEAK)
    assert is_part_of_cause(m, u, Prim("L", 1), FF, CauseKind.ACTUAL)


def test_single_lightning_is_a_cause(ex1):
    u = {"U_L": 1, "U_MD": 0}
    assert set(enumerate_causes(ex1.model, u, FF, CauseKind.ACTUAL)) == {C({"FF": 1}), C({"L": 1})}


def test_weak_causes_are_closed_under_adding_true_conjuncts(ex1):
    u = {"U_L": 1, "U_MD": 0}
    weak = set(enumerate_causes(ex1.model, u, FF, CauseKind.WEAK))
    assert C({"L": 1, "MD": 0}) in weak
    assert C({"L": 1, "MD": 0, "FF": 1}) in weak


def test_no_cause_when_event_is_false(ex1):
    assert enumerate_causes(ex1.model, {"U_L": 0, "U_MD": 0}, FF, CauseKind.ACTUAL) == ()


def test_sufficient_causes(ex2):
    m = ex2.model
    assert set(enumerate_causes(m, {"U_L": 1, "U_MD": 1, "U_B": 1}, FF, CauseKind.SUFFICIENT)) == {
        C({"FF": 1}), C({"L": 1}), C({"B": 1, "MD": 1})
    }
    assert set(enumerate_causes(m, {"U_L": 1, "U_MD": 0, "U_B": 1}, FF, CauseKind.SUFFICIENT)) == {
        C({"FF": 1}), C({"L": 1})
    }


def test_witness_contents(ex1):
    w = cause_witness(ex1.model, {"U_L": 1, "U_MD": 1}, {"L": 1, "MD": 1}, FF, CauseKind.ACTUAL)
    assert w.contingency == C() and w.alternative == C({"L": 0, "MD": 0})
    assert replay_witness(ex1.model, {"U_L": 1, "U_MD": 1}, FF, w)


def test_empty_candidate_is_an_error(ex1):
    with pytest.raises(ModelError):
        cause_witness(ex1.model, {"U_L": 1, "U_MD": 1}, {}, FF, CauseKind.ACTUAL)


def test_kind_parsing():
    assert CauseKind.parse("weak") is CauseKind.WEAK
    with pytest.raises(ValueError):
        CauseKind.parse("necessary")


@pytest.mark.parametrize("name", ["example1", "example2", "example4"])
def test_matches_naive_oracle_on_every_context(name):
    from conftest import load

    doc = load(name)
    m = doc.model
    ev = next(iter(doc.events.values()))
    for u in m.contexts():
        assert set(enumerate_causes(m, u, ev, CauseKind.WEAK)) == oracles.weak_causes(m, u, ev)
        assert set(enumerate_causes(m, u, ev, CauseKind.ACTUAL)) == oracles.actual_causes(m, u, ev)
        assert set(enumerate_causes(m, u, ev, CauseKind.SUFFICIENT)) == oracles.sufficient_causes(m, u, ev)
