import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from conftest import load
from invariants import check_causes, check_contrastive, check_explanations, check_intervention_laws, check_solutions
from hpexplain.contrastive import FactFoil, enumerate_borner_contrastive, pairs_of
from hpexplain.expr import negate
from hpexplain.model import EpistemicState
from hpexplain.verify import RandomModelParams, draw_trial

FIXTURES = [("example1", "fire"), ("example2", "fire"), ("example4", "broken")]


@pytest.mark.parametrize("name, event", FIXTURES)
def test_fixture_invariants(name, event):
    doc = load(name)
    m, k, phi = doc.model, doc.epistemic("K"), doc.events[event]
    check_solutions(m)
    check_intervention_laws(m)
    check_causes(m, phi)
    if name != "example4":
        check_explanations(m, k, phi)
        check_contrastive(m, k, FactFoil(phi, negate(phi)))


def _trial(seed):
    model, k, fact, other = draw_trial(RandomModelParams(seed=seed), 0)
    return model, k, fact, other


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(min_value=0, max_value=10**6))
def test_random_model_invariants(seed):
    model, k, fact, other = _trial(seed)
    check_solutions(model)
    check_intervention_laws(model)
    check_causes(model, fact)
    check_explanations(model, k, fact)
    check_contrastive(model, k, FactFoil(fact, negate(fact)))
    check_contrastive(model, k, FactFoil(fact, other))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_singleton_state_has_no_potential_contrastive_explanations(seed):
    model, k, fact, _ = _trial(seed)
    single = EpistemicState((k.contexts[0],))
    res = enumerate_borner_contrastive(model, single, FactFoil(fact, negate(fact)))
    assert pairs_of(res, "potential") == ()
