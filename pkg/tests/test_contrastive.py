import pytest

from hpexplain.causes import CauseKind
from hpexplain.contrastive import (
    ContrastivePair, FactFoil, check_incompatibility, contrastive_cause_witness, contrastive_causes,
    enumerate_borner_contrastive, enumerate_miller, enumerate_modified_hp_contrastive, enumerate_modular,
    interventions, is_contrastive_cause, pairs_of, perturbs,
)
from hpexplain.dsl import format_pair, parse_event
from hpexplain.explanations import Base
from hpexplain.expr import ENot, Prim
from hpexplain.model import Conjunction, EpistemicState, ModelError

C = Conjunction
FF = Prim("FF", 1)
WHY = FactFoil(FF, ENot(FF))


def pair(fact, foil):
    return ContrastivePair(C(fact), C(foil))


def texts(model, pairs):
    return {format_pair(p, model) for p in pairs}


def test_lightning_against_no_lightning(ex1):
    u = {"U_L": 1, "U_MD": 0}
    w = contrastive_cause_witness(ex1.model, u, pair({"L": 1}, {"L": 0}), WHY, CauseKind.ACTUAL)
    assert w is not None
    assert w.intervention == C({"L": 0})
    assert w.fact_cause == C({"L": 1}) and w.foil_cause == C({"L": 0})


def test_difference_condition(ex1):
    u = {"U_L": 1, "U_MD": 0}
    assert not is_contrastive_cause(ex1.model, u, pair({"L": 1, "MD": 0}, {"L": 0, "MD": 0}), WHY, CauseKind.ACTUAL)


def test_foil_must_be_false(ex1):
    u = {"U_L": 1, "U_MD": 0}
    assert not is_contrastive_cause(ex1.model, u, pair({"L": 1}, {"L": 0}), FactFoil(FF, FF), CauseKind.ACTUAL)


def test_empty_or_misaligned_pair_is_an_error():
    with pytest.raises(ModelError):
        ContrastivePair(C(), C())
    with pytest.raises(ModelError):
        pair({"L": 1}, {"MD": 0})


def test_pair_extension_order():
    small, big = pair({"MD": 1}, {"MD": 0}), pair({"L": 1, "MD": 1}, {"L": 0, "MD": 0})
    assert small < big and not big < small
    assert not pair({"MD": 1}, {"MD": 1}) < big
    assert list(big.sub_pairs()) == [pair({"L": 1}, {"L": 0}), small]


def test_incompatibility(ex1, ex2):
    k1 = ex1.epistemic("K")
    assert check_incompatibility(ex1.model, k1, WHY)
    assert not check_incompatibility(ex2.model, ex2.epistemic("K"), FactFoil(FF, FF))
    both = parse_event("L & MD", ex1.model)
    assert not check_incompatibility(ex1.model, k1, FactFoil(FF, both))


def test_perturbation_reading():
    x = C({"L": 1, "MD": 0})
    assert not perturbs(C({"L": 1}), x)
    assert perturbs(C({"L": 0}), x)
    assert perturbs(C({"B": 1}), x)


def test_interventions_are_nonempty_and_complete(ex1):
    ivs = interventions(ex1.model)
    assert len(ivs) == 3 ** 3 - 1
    assert all(ivs)


def test_miller_needs_fact_and_not_foil_everywhere(ex1):
    assert enumerate_miller(ex1.model, ex1.epistemic("K"), WHY) == ()


def test_modular_on_the_contrastive_forest_fire(ex5):
    m, k = ex5.model, ex5.epistemic("K")

    def mod(base):
        return texts(m, pairs_of(enumerate_modular(m, k, WHY, base)))

    assert mod(Base.ORIGINAL_HP) == {"<¬MD, MD>", "<MD, ¬MD>", "<¬B, B>", "<B, ¬B>"}
    assert mod(Base.MODIFIED_HP) == {"<MD, ¬MD>", "<L, ¬L>", "<FF, ¬FF>"}
    assert mod(Base.MODIFIED_HP_NONTRIVIAL) == {"<MD, ¬MD>"}
    assert mod(Base.BORNER_POTENTIAL) == mod(Base.BORNER_PARSIMONIOUS) == {"<MD, ¬MD>", "<B, ¬B>"}
    assert mod(Base.BORNER_ACTUAL) == {"<L, ¬L>", "<FF, ¬FF>"}


def test_borner_contrastive_actual_set(ex5):
    res = enumerate_borner_contrastive(ex5.model, ex5.epistemic("K"), WHY)
    assert texts(ex5.model, pairs_of(res, "actual")) == {"<L, ¬L>", "<FF, ¬FF>"}


# The next two tests pin clause-level facts checked by hand; they explain why the
# direct definitions, read clause by clause, diverge from the modular sets above.


def test_single_match_pair_is_not_maximal_at_a_context(ex5):
    u = {"U_L": 1, "U_MD": 0, "U_B": 0}
    m = ex5.model
    assert not is_contrastive_cause(m, u, pair({"MD": 0}, {"MD": 1}), WHY, CauseKind.WEAK)
    bigger = [p for p in contrastive_causes(m, u, WHY, CauseKind.WEAK) if pair({"MD": 0}, {"MD": 1}) < p]
    assert bigger and all(C({"L": 1, "MD": 0}) <= p.fact for p in bigger)


def test_dry_brush_is_no_part_of_a_sufficient_cause_without_the_match(ex5):
    u = {"U_L": 1, "U_MD": 0, "U_B": 1}
    causes = contrastive_causes(ex5.model, u, WHY, CauseKind.SUFFICIENT)
    assert not any("B" in p.variables for p in causes)


def test_direct_results_satisfy_the_difference_condition(ex5):
    m, k = ex5.model, ex5.epistemic("K")
    for enum in (enumerate_miller, enumerate_modified_hp_contrastive, enumerate_borner_contrastive):
        assert all(r.pair.differs for r in enum(m, k, WHY))


def test_empty_state_is_an_error(ex5):
    with pytest.raises(ModelError):
        enumerate_miller(ex5.model, EpistemicState(()), WHY)
