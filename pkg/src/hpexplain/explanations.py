"""Non-contrastive explanations relative to an epistemic state ``K``.

Three definitions are provided:

* original HP (EX1-EX4): ``φ`` certain, the explanation is a weak actual
  cause wherever it holds, minimal, and its truth is uncertain in ``K``;
* modified HP (EX1'-EX3', with EX4' as the non-triviality flag): wherever the
  explanation and ``φ`` hold it intersects an actual cause, it forces ``φ``
  in every context of ``K``, and it is minimal;
* Borner (E1-E6): together with some certain side-condition ``S = s`` the
  explanation is a sufficient cause wherever it holds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .causes import _actual_conjuncts, _sufficient_table, _weak_table, canonical, world_conjunction
from .expr import Event
from .model import (
    Assignment,
    CausalModel,
    Conjunction,
    EpistemicState,
    ModelError,
    check_complexity,
    check_context,
    check_event,
)


class Definition(str, enum.Enum):
    ORIGINAL_HP = "original-hp"
    MODIFIED_HP = "modified-hp"
    BORNER = "borner"


class Base(str, enum.Enum):
    """A non-contrastive explanation family, as used by the modular definition."""

    ORIGINAL_HP = "original-hp"
    MODIFIED_HP = "modified-hp"
    MODIFIED_HP_NONTRIVIAL = "modified-hp-nontrivial"
    BORNER_POTENTIAL = "borner-potential"
    BORNER_ACTUAL = "borner-actual"
    BORNER_PARSIMONIOUS = "borner-parsimonious"


@dataclass(frozen=True)
class ExplanationResult:
    explanation: Conjunction
    definition: Definition
    nontrivial: bool = False
    potential: bool = False
    actual: bool = False
    parsimonious: bool = False
    side_condition: Optional[Conjunction] = None
    support: tuple[Assignment, ...] = field(default=(), compare=False)

    @property
    def status(self) -> Optional[str]:
        if self.potential and self.actual:
            return "both"
        if self.potential:
            return "potential"
        if self.actual:
            return "actual"
        return None


def _prepare(model: CausalModel, k: EpistemicState, event: Event, override: bool) -> EpistemicState:
    model.require_valid()
    check_event(model, event)
    if not isinstance(k, EpistemicState):
        k = EpistemicState(tuple(k))
    for u in k:
        check_context(model, u)
    check_complexity(model, k, override=override)
    return k


def _memo(model: CausalModel, key, compute):
    cache = model._cache
    if key not in cache:
        cache[key] = compute()
    return cache[key]


def _candidates(model: CausalModel, contexts) -> tuple[Conjunction, ...]:
    """Non-empty sub-conjunctions of the actual worlds of ``contexts``."""
    out: set[Conjunction] = set()
    for u in contexts:
        out.update(world_conjunction(model, model.solve(u)).subsets())
    return canonical(out)


def _minimal(candidates, satisfies) -> list:
    return [x for x in candidates if not any(satisfies(y) for y in x.subsets(proper=True))]


# -- original HP ----------------------------------------------------------------


def _ex2(model: CausalModel, k: EpistemicState, event: Event, x: Conjunction) -> bool:
    for u in k:
        if x.holds_in(model.solve(u)) and x not in _weak_table(model, u, event):
            return False
    return True


def _original_hp(model: CausalModel, k: EpistemicState, event: Event) -> tuple[Conjunction, ...]:
    if len(k) < 2 or not all(model.holds(u, event) for u in k):
        return ()
    ex2_memo: dict[Conjunction, bool] = {}

    def ex2(x: Conjunction) -> bool:
        if x not in ex2_memo:
            ex2_memo[x] = _ex2(model, k, event, x)
        return ex2_memo[x]

    out = []
    for x in _candidates(model, k):
        holds = [x.holds_in(model.solve(u)) for u in k]
        if all(holds) or not any(holds):
            continue
        if ex2(x) and not any(ex2(y) for y in x.subsets(proper=True)):
            out.append(x)
    return canonical(out)


def enumerate_original_hp(model: CausalModel, k: EpistemicState, event: Event, *, override: bool = False) -> tuple[Conjunction, ...]:
    k = _prepare(model, k, event, override)
    return _memo(model, ("original-hp", k, event), lambda: _original_hp(model, k, event))


# -- modified HP ------------------------------------------------------------------


def _ex1_prime(model: CausalModel, k: EpistemicState, event: Event, x: Conjunction) -> bool:
    for u in k:
        world = model.solve(u)
        if x.holds_in(world) and model.holds(u, event):
            parts = _actual_conjuncts(model, u, event)
            if not any(p in parts for p in x.pairs):
                return False
        if not model.holds(u, event, x):
            return False
    return True


def _modified_hp(model: CausalModel, k: EpistemicState, event: Event) -> tuple[ExplanationResult, ...]:
    ex1_memo: dict[Conjunction, bool] = {}

    def ex1(x: Conjunction) -> bool:
        if x not in ex1_memo:
            ex1_memo[x] = _ex1_prime(model, k, event, x)
        return ex1_memo[x]

    phi_ctx = [u for u in k if model.holds(u, event)]
    out = []
    for x in _candidates(model, phi_ctx):
        if not ex1(x) or any(ex1(y) for y in x.subsets(proper=True)):
            continue
        support = tuple(u for u in phi_ctx if x.holds_in(model.solve(u)))
        nontrivial = any(not x.holds_in(model.solve(u)) for u in phi_ctx)
        out.append(ExplanationResult(x, Definition.MODIFIED_HP, nontrivial=nontrivial, support=support))
    return tuple(sorted(out, key=lambda r: r.explanation.sort_key()))


def enumerate_modified_hp(model: CausalModel, k: EpistemicState, event: Event, *, override: bool = False) -> tuple[ExplanationResult, ...]:
    k = _prepare(model, k, event, override)
    return _memo(model, ("modified-hp", k, event), lambda: _modified_hp(model, k, event))


# -- Borner -------------------------------------------------------------------------


def _certain_facts(model: CausalModel, k: EpistemicState) -> Conjunction:
    worlds = [model.solve(u) for u in k]
    return Conjunction(
        (n, worlds[0][n]) for n in model.endogenous_names if all(w[n] == worlds[0][n] for w in worlds)
    )


def _e12_witness(model: CausalModel, k: EpistemicState, event: Event, x: Conjunction) -> Optional[Conjunction]:
    """The canonically smallest ``S = s`` satisfying E1-E2 for ``x``, or None.

    E1-E2(b) forces ``S = s`` to hold throughout ``K``, so ``S`` ranges over
    sub-conjunctions of the facts certain in ``K``, disjoint from ``X``.
    """
    pool = _certain_facts(model, k).without(x.variables)
    relevant = [u for u in k if x.holds_in(model.solve(u))]
    for s in pool.subsets(nonempty=False):
        xs = x.union(s)
        if all(xs in _sufficient_table(model, u, event) for u in relevant):
            return s
    return None


def _borner(model: CausalModel, k: EpistemicState, event: Event) -> tuple[ExplanationResult, ...]:
    e12_memo: dict[Conjunction, Optional[Conjunction]] = {}
    missing = object()

    def e12(x: Conjunction):
        hit = e12_memo.get(x, missing)
        if hit is missing:
            hit = e12_memo[x] = _e12_witness(model, k, event, x)
        return hit

    phi_ctx = [u for u in k if model.holds(u, event)]
    out = []
    for x in _candidates(model, phi_ctx):
        s = e12(x)
        if s is None:
            continue
        holds_x = [x.holds_in(model.solve(u)) for u in k]
        potential = any(not x.holds_in(model.solve(u)) for u in phi_ctx)
        actual = len(phi_ctx) == len(k) and all(holds_x)
        if not (potential or actual):
            continue
        parsimonious = potential and not any(e12(y) is not None for y in x.subsets(proper=True))
        support = tuple(u for u, h in zip(k, holds_x) if h)
        out.append(
            ExplanationResult(
                x,
                Definition.BORNER,
                potential=potential,
                actual=actual,
                parsimonious=parsimonious,
                side_condition=s,
                support=support,
            )
        )
    return tuple(sorted(out, key=lambda r: r.explanation.sort_key()))


def enumerate_borner(model: CausalModel, k: EpistemicState, event: Event, *, override: bool = False) -> tuple[ExplanationResult, ...]:
    k = _prepare(model, k, event, override)
    return _memo(model, ("borner", k, event), lambda: _borner(model, k, event))


# -- uniform access by base family ---------------------------------------------------------


def explanations(model: CausalModel, k: EpistemicState, event: Event, base: Base, *, override: bool = False) -> tuple[Conjunction, ...]:
    """The explanations of ``event`` under one base family, canonically ordered."""
    base = Base(base)
    if base is Base.ORIGINAL_HP:
        return enumerate_original_hp(model, k, event, override=override)
    if base in (Base.MODIFIED_HP, Base.MODIFIED_HP_NONTRIVIAL):
        res = enumerate_modified_hp(model, k, event, override=override)
        if base is Base.MODIFIED_HP_NONTRIVIAL:
            res = [r for r in res if r.nontrivial]
        return tuple(r.explanation for r in res)
    res = enumerate_borner(model, k, event, override=override)
    flag = {
        Base.BORNER_POTENTIAL: "potential",
        Base.BORNER_ACTUAL: "actual",
        Base.BORNER_PARSIMONIOUS: "parsimonious",
    }[base]
    return tuple(r.explanation for r in res if getattr(r, flag))


def enumerate_explanations(model: CausalModel, k: EpistemicState, event: Event, definition: Definition, *, override: bool = False):
    definition = Definition(definition)
    if definition is Definition.ORIGINAL_HP:
        return tuple(
            ExplanationResult(x, definition) for x in enumerate_original_hp(model, k, event, override=override)
        )
    if definition is Definition.MODIFIED_HP:
        return enumerate_modified_hp(model, k, event, override=override)
    return enumerate_borner(model, k, event, override=override)


def require_nonempty(k) -> None:
    if not k:
        raise ModelError("epistemic state must contain at least one context")
