import pytest

from hpexplain.contrastive import FactFoil
from hpexplain.expr import Prim, negate
from hpexplain.verify import (
    CONDITION_NOT_MET, COUNTEREXAMPLE, EQUAL, RandomModelParams, compare, draw_trial, model_digest,
    random_model, run_trial, trial_rng, verify_theorems,
)


def test_generation_is_deterministic():
    p = RandomModelParams(seed=7)
    a, b = draw_trial(p, 3), draw_trial(p, 3)
    assert a[0] == b[0] and a[1] == b[1] and a[2] == b[2] and a[3] == b[3]
    assert model_digest(a[0]) == model_digest(b[0])


def test_generated_models_respect_the_bounds():
    p = RandomModelParams(seed=0)
    for i in range(50):
        m = random_model(trial_rng(0, i), p)
        assert m.validate().ok
        assert 1 <= len(m.exogenous) <= 3 and 1 <= len(m.endogenous) <= 4
        assert all(v.is_bool for v in m.variables)


def test_params_reject_oversized_models():
    with pytest.raises(ValueError):
        RandomModelParams(max_endogenous=5)


def test_overlapping_foil_is_condition_not_met(ex2):
    ff = FactFoil(Prim("FF", 1), Prim("L", 1))
    inc, direct, modular, verdict = compare(ex2.model, ex2.epistemic("K"), ff, 1)
    assert (inc, verdict, direct, modular) == (False, CONDITION_NOT_MET, {}, {})


def test_negated_foil_always_meets_the_condition():
    p = RandomModelParams(seed=3)
    for i in range(20):
        negated = run_trial(p, i, 3)[0]
        assert negated.foil_mode == "negated" and negated.incompatible
        assert negated.ff.foil == negate(negated.ff.fact)


def test_counterexamples_reproduce_from_seed_and_index():
    p = RandomModelParams(seed=42)
    report = verify_theorems(p, 30, 2)
    for t in report.counterexamples:
        again = [r for r in run_trial(p, t.index, 2) if r.foil_mode == t.foil_mode][0]
        assert again.to_structured() == t.to_structured()
    for t in report.trials:
        if t.verdict == EQUAL:
            assert compare(t.model, t.k, t.ff, 2)[3] == EQUAL


def test_report_counts_add_up():
    report = verify_theorems(RandomModelParams(seed=5), 10, 1)
    counts = report.to_structured()["counts"]
    assert sum(counts.values()) == 20
    assert set(counts) == {EQUAL, COUNTEREXAMPLE, CONDITION_NOT_MET}


def test_zero_trials_rejected():
    with pytest.raises(ValueError):
        verify_theorems(RandomModelParams(), 0, 1)
