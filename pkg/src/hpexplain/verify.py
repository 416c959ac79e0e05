"""Brute-force comparison of the direct contrastive definitions with the modular one.

Each trial draws a small random boolean model, a random non-empty epistemic
state and a random fact ``φ``.  It is run twice: once with foil ``¬φ``
(incompatibility holds by construction) and once with an independently drawn
foil, which is only compared when incompatibility happens to hold.

Variants:

1. Miller vs modular over original-HP explanations;
2. modified-HP contrastive vs modular over modified-HP explanations, plus the
   non-trivial subsets;
3. Borner contrastive vs modular over Borner explanations, per flag.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Callable

from .contrastive import (
    FactFoil,
    check_incompatibility,
    enumerate_borner_contrastive,
    enumerate_miller,
    enumerate_modified_hp_contrastive,
    enumerate_modular,
    pairs_of,
)
from .dsl import ModelDocument, format_document, format_event, format_pair
from .explanations import Base
from .expr import EAnd, ENot, EOr, And, Event, Expr, Ite, Lit, Not, Or, Prim, Ref, negate
from .model import CausalModel, EpistemicState, bool_model

EQUAL = "equal"
COUNTEREXAMPLE = "counterexample"
CONDITION_NOT_MET = "condition-not-met"


@dataclass(frozen=True)
class RandomModelParams:
    seed: int = 0
    max_exogenous: int = 3
    max_endogenous: int = 4
    depth: int = 3

    def __post_init__(self):
        if not 1 <= self.max_exogenous <= 3 or not 1 <= self.max_endogenous <= 4:
            raise ValueError("random models are capped at 3 exogenous and 4 endogenous variables")


def trial_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def random_expr(rng: random.Random, refs: list[str], depth: int) -> Expr:
    if depth == 0 or rng.random() < 0.3:
        return Ref(rng.choice(refs)) if rng.random() < 0.9 else Lit(rng.choice((0, 1)))
    op = rng.choice(("not", "and", "or", "ite"))
    if op == "not":
        return Not(random_expr(rng, refs, depth - 1))
    args = [random_expr(rng, refs, depth - 1) for _ in range(3 if op == "ite" else 2)]
    if op == "and":
        return And(*args)
    if op == "or":
        return Or(*args)
    return Ite(*args)


def random_event(rng: random.Random, names: list[str], depth: int = 2) -> Event:
    if depth == 0 or rng.random() < 0.4:
        return Prim(rng.choice(names), rng.choice((0, 1)))
    op = rng.choice(("not", "and", "or"))
    if op == "not":
        return ENot(random_event(rng, names, depth - 1))
    a, b = random_event(rng, names, depth - 1), random_event(rng, names, depth - 1)
    return EAnd(a, b) if op == "and" else EOr(a, b)


def random_model(rng: random.Random, params: RandomModelParams) -> CausalModel:
    """An acyclic boolean model: each equation only sees earlier endogenous variables."""
    exo = [f"U{i}" for i in range(rng.randint(1, params.max_exogenous))]
    endo = [f"X{i}" for i in range(rng.randint(1, params.max_endogenous))]
    eqs = {n: random_expr(rng, exo + endo[:i], params.depth) for i, n in enumerate(endo)}
    model = bool_model(exo, eqs)
    model.require_valid()
    return model


def random_state(rng: random.Random, model: CausalModel) -> EpistemicState:
    ctx = list(model.contexts())
    k = [u for u in ctx if rng.random() < 0.5]
    return EpistemicState(tuple(k) if k else (rng.choice(ctx),))


def model_digest(model: CausalModel) -> str:
    return hashlib.sha256(format_document(ModelDocument(model)).encode()).hexdigest()[:16]


# -- comparisons per variant ------------------------------------------------------------


def _variant1(model, k, ff):
    return {"pairs": (pairs_of(enumerate_miller(model, k, ff, override=True)), _mod(model, k, ff, Base.ORIGINAL_HP))}


def _variant2(model, k, ff):
    direct = enumerate_modified_hp_contrastive(model, k, ff, override=True)
    return {
        "pairs": (pairs_of(direct), _mod(model, k, ff, Base.MODIFIED_HP)),
        "non-trivial": (pairs_of(direct, "nontrivial"), _mod(model, k, ff, Base.MODIFIED_HP_NONTRIVIAL)),
    }


def _variant3(model, k, ff):
    direct = enumerate_borner_contrastive(model, k, ff, override=True)
    return {
        "potential": (pairs_of(direct, "potential"), _mod(model, k, ff, Base.BORNER_POTENTIAL)),
        "actual": (pairs_of(direct, "actual"), _mod(model, k, ff, Base.BORNER_ACTUAL)),
        "parsimonious": (pairs_of(direct, "parsimonious"), _mod(model, k, ff, Base.BORNER_PARSIMONIOUS)),
    }


def _mod(model, k, ff, base):
    return pairs_of(enumerate_modular(model, k, ff, base, override=True))


VARIANTS: dict[int, Callable] = {1: _variant1, 2: _variant2, 3: _variant3}


@dataclass
class TrialResult:
    seed: int
    index: int
    foil_mode: str  # "negated" | "independent"
    digest: str
    model: CausalModel = field(repr=False)
    k: EpistemicState = field(repr=False)
    ff: FactFoil = field(repr=False)
    incompatible: bool
    direct: dict
    modular: dict
    verdict: str

    def to_structured(self) -> dict:
        m = self.model
        return {
            "seed": self.seed,
            "trial": self.index,
            "foil_mode": self.foil_mode,
            "model_digest": self.digest,
            "epistemic_size": len(self.k),
            "fact": format_event(self.ff.fact, m),
            "foil": format_event(self.ff.foil, m),
            "incompatible": self.incompatible,
            "direct": {f: [format_pair(p, m) for p in ps] for f, ps in self.direct.items()},
            "modular": {f: [format_pair(p, m) for p in ps] for f, ps in self.modular.items()},
            "verdict": self.verdict,
        }


@dataclass
class EquivalenceReport:
    variant: int
    seed: int
    trials: list[TrialResult]

    def count(self, verdict: str) -> int:
        return sum(t.verdict == verdict for t in self.trials)

    @property
    def counterexamples(self) -> list[TrialResult]:
        return [t for t in self.trials if t.verdict == COUNTEREXAMPLE]

    def to_structured(self, *, include_equal: bool = False) -> dict:
        return {
            "schema": "hpexplain.equivalence-report",
            "version": 1,
            "variant": self.variant,
            "seed": self.seed,
            "counts": {v: self.count(v) for v in (EQUAL, COUNTEREXAMPLE, CONDITION_NOT_MET)},
            "trials": [
                t.to_structured() for t in self.trials if include_equal or t.verdict != EQUAL
            ],
        }


def compare(model: CausalModel, k: EpistemicState, ff: FactFoil, variant: int):
    """Direct and modular sets per flag, the incompatibility flag and the verdict."""
    incompatible = check_incompatibility(model, k, ff)
    if not incompatible:
        return incompatible, {}, {}, CONDITION_NOT_MET
    sides = VARIANTS[variant](model, k, ff)
    direct = {f: d for f, (d, _) in sides.items()}
    modular = {f: m for f, (_, m) in sides.items()}
    verdict = EQUAL if direct == modular else COUNTEREXAMPLE
    return incompatible, direct, modular, verdict


def draw_trial(params: RandomModelParams, index: int):
    """Model, K, fact and independent foil for one trial; reproducible from (seed, index)."""
    rng = trial_rng(params.seed, index)
    model = random_model(rng, params)
    k = random_state(rng, model)
    names = list(model.endogenous_names)
    fact = random_event(rng, names)
    other = random_event(rng, names)
    return model, k, fact, other


def run_trial(params: RandomModelParams, index: int, variant: int) -> list[TrialResult]:
    model, k, fact, other = draw_trial(params, index)
    digest = model_digest(model)
    out = []
    for mode, foil in (("negated", negate(fact)), ("independent", other)):
        ff = FactFoil(fact, foil)
        inc, direct, modular, verdict = compare(model, k, ff, variant)
        out.append(TrialResult(params.seed, index, mode, digest, model, k, ff, inc, direct, modular, verdict))
    return out


def verify_theorems(params: RandomModelParams, trials: int, variant: int) -> EquivalenceReport:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant}")
    results: list[TrialResult] = []
    for i in range(trials):
        results.extend(run_trial(params, i, variant))
    return EquivalenceReport(variant, params.seed, results)
