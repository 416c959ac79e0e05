"""Invariant checks shared by the property suite and the acceptance run.

Each checker raises AssertionError with a short reason on the first violation.
"""


import oracles
from hpexplain.causes import CauseKind, cause_witness, causes_of_kind, replay_witness
from hpexplain.contrastive import (
    FactFoil, _contrastive_causes, aligned_foils, enumerate_borner_contrastive, enumerate_miller,
    enumerate_modified_hp_contrastive, enumerate_modular, interventions,
)
from hpexplain.contrastive import _cb12_witness, _ch1
from hpexplain.explanations import Base, enumerate_borner, enumerate_modified_hp, enumerate_original_hp, explanations
from hpexplain.expr import evaluate
from hpexplain.model import Conjunction


def check_solutions(model):
    for u in model.contexts():
        world = model.solve(u)
        for n in model.endogenous_names:
            assert world[n] == evaluate(model.equation[n], world), f"{n} is not a fixed point at {u}"


def check_intervention_laws(model, sample=6):
    ivs = interventions(model)
    picks = ivs[:: max(1, len(ivs) // sample)]
    for u in model.contexts():
        world = model.solve(u)
        actual = Conjunction((n, world[n]) for n in model.endogenous_names)
        assert model.solve(u, actual) == world, "setting actual values changed the world"
        for iv in picks:
            w = model.solve(u, iv)
            assert iv.holds_in(w), "intervened values not respected"
            assert model.intervene(iv).solve(u) == w, "surgery and direct intervention disagree"
            for n in model.endogenous_names:
                if n not in iv:
                    assert w[n] == evaluate(model.equation[n], w), "non-intervened equation violated"
            for other in picks:
                if not set(other.variables) & set(iv.variables):
                    assert model.intervene(iv).intervene(other).solve(u) == model.solve(u, iv.union(other))


def check_causes(model, phi):
    for u in model.contexts():
        weak = set(causes_of_kind(model, u, phi, CauseKind.WEAK))
        actual = set(causes_of_kind(model, u, phi, CauseKind.ACTUAL))
        sufficient = set(causes_of_kind(model, u, phi, CauseKind.SUFFICIENT))
        assert weak == oracles.weak_causes(model, u, phi), f"weak causes differ at {u}"
        assert actual == oracles.actual_causes(model, u, phi), f"actual causes differ at {u}"
        assert sufficient == oracles.sufficient_causes(model, u, phi), f"sufficient causes differ at {u}"
        for x in actual:
            assert not any(oracles.is_weak(model, u, y, phi) for y in x.subsets(proper=True)), "AC3 antichain"
        for kind, found in ((CauseKind.WEAK, weak), (CauseKind.SUFFICIENT, sufficient)):
            for x in found:
                assert replay_witness(model, u, phi, cause_witness(model, u, x, phi, kind)), "witness replay"


def check_explanations(model, k, phi):
    assert set(enumerate_original_hp(model, k, phi)) == oracles.original_hp(model, k, phi), "original HP"
    got = {r.explanation: r.nontrivial for r in enumerate_modified_hp(model, k, phi)}
    assert got == oracles.modified_hp(model, k, phi), "modified HP"
    got = {r.explanation: (r.potential, r.actual, r.parsimonious) for r in enumerate_borner(model, k, phi)}
    assert got == oracles.borner(model, k, phi), "Borner (E6 flags included)"


def check_contrastive(model, k, ff: FactFoil):
    miller = enumerate_miller(model, k, ff, override=True)
    modified = enumerate_modified_hp_contrastive(model, k, ff, override=True)
    borner = enumerate_borner_contrastive(model, k, ff, override=True)
    modular = {b: enumerate_modular(model, k, ff, b, override=True) for b in Base}
    everything = list(miller) + list(modified) + list(borner) + [r for rs in modular.values() for r in rs]
    assert all(r.pair.differs for r in everything), "difference condition"
    if miller:
        assert all(model.holds(u, ff.fact) and not model.holds(u, ff.foil) for u in k), "CE1 soundness"

    # CE3: no strict sub-pair of a Miller pair satisfies CE2
    def ce2(p):
        return all(p in _contrastive_causes(model, u, ff, CauseKind.WEAK) for u in k if p.fact.holds_in(model.solve(u)))

    for r in miller:
        assert ce2(r.pair) and not any(ce2(q) for q in r.pair.sub_pairs()), "CE3 antichain"

    ch1 = _ch1(model, k, ff)
    for r in modified:
        assert ch1(r.pair) and not any(ch1(q) for q in r.pair.sub_pairs()), "CH2 antichain"
    for r in borner:
        assert _cb12_witness(model, k, ff, r.pair) is not None
        if r.parsimonious:
            assert not any(_cb12_witness(model, k, ff, q) for q in r.pair.sub_pairs()), "CB6 antichain"

    # CC5 per context: returned contrastive causes form an antichain and their witnesses replay
    for u in k:
        for kind in CauseKind:
            found = _contrastive_causes(model, u, ff, kind)
            for p, w in found.items():
                assert not any(p < q for q in found), "CC5 antichain"
                sub = model.intervene(w.intervention)
                assert w.foil_cause in causes_of_kind(sub, u, ff.foil, kind) and w.pair.foil <= w.foil_cause
                assert w.fact_cause in causes_of_kind(model, u, ff.fact, kind) and w.pair.fact <= w.fact_cause

    # CE4': modular pairs are maximal among pairs of fact and foil partial explanations
    for base, rs in modular.items():
        fact_parts = {s for e in explanations(model, k, ff.fact, base, override=True) for s in e.subsets()}
        foil_parts = set()
        for w in interventions(model):
            for e in explanations(model.intervene(w), k, ff.foil, base, override=True):
                foil_parts.update(e.subsets())
        for r in rs:
            assert r.pair.fact in fact_parts and r.pair.foil in foil_parts, "CE1'/CE2'"
            for y in fact_parts:
                if r.pair.fact < y:
                    for yp in aligned_foils(model, y):
                        assert not (r.pair.foil < yp and yp in foil_parts), "CE4' antichain"
