"""Contrastive causes and contrastive explanations of a fact/foil pair.

A contrastive pair ``<X = x, X = x'>`` relates a conjunction that occurred
(the fact side) to an aligned conjunction over the same variables (the foil
side).  This module provides

* contrastive causes (CC1-CC5), parameterised by the underlying cause kind;
* three direct contrastive-explanation definitions: Miller (CE1-CE4), the
  modified HP variant (CH1-CH4) and the Borner variant (CB1-CB6);
* the modular definition (CE1'-CE4'), which assembles contrastive
  explanations from any non-contrastive explanation family.

Every clause is evaluated exhaustively.  Interventions ``W <- w`` range over
all non-empty partial settings of the endogenous variables.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import Optional

from .causes import CauseKind, causes_of_kind, world_conjunction
from .expr import Event
from .explanations import Base, _certain_facts, _memo, _prepare, explanations
from .model import Assignment, CausalModel, Conjunction, EpistemicState, ModelError, check_context, check_event


@dataclass(frozen=True)
class ContrastivePair:
    """``<X = x, X = x'>``: fact and foil conjunctions over the same variables."""

    fact: Conjunction
    foil: Conjunction

    def __post_init__(self):
        object.__setattr__(self, "fact", Conjunction(self.fact))
        object.__setattr__(self, "foil", Conjunction(self.foil))
        if not self.fact:
            raise ModelError("contrastive pair must be non-empty")
        if self.fact.variables != self.foil.variables:
            raise ModelError("fact and foil must range over the same variables")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.fact.variables

    @property
    def differs(self) -> bool:
        """The difference condition: ``x_i != x_i'`` at every variable."""
        return all(self.fact[n] != self.foil[n] for n in self.fact)

    def __lt__(self, other: "ContrastivePair") -> bool:
        """Strict extension order: both components are strict sub-conjunctions."""
        return self.fact < other.fact and self.foil < other.foil

    def __le__(self, other: "ContrastivePair") -> bool:
        return self.fact <= other.fact and self.foil <= other.foil

    def conjuncts(self) -> Iterator[tuple[str, object, object]]:
        for n in self.variables:
            yield n, self.fact[n], self.foil[n]

    def sub_pairs(self, *, proper: bool = True) -> Iterator["ContrastivePair"]:
        for f in self.fact.subsets(proper=proper):
            yield ContrastivePair(f, self.foil.restrict(f.variables))

    def sort_key(self):
        return (self.fact.sort_key(), self.foil.sort_key())


@dataclass(frozen=True)
class FactFoil:
    fact: Event
    foil: Event


@dataclass(frozen=True)
class ContrastiveCauseWitness:
    pair: ContrastivePair
    kind: CauseKind
    fact_cause: Conjunction
    intervention: Conjunction
    foil_cause: Conjunction


@dataclass(frozen=True)
class ContrastiveResult:
    pair: ContrastivePair
    definition: str
    nontrivial: bool = False
    potential: bool = False
    actual: bool = False
    parsimonious: bool = False
    side_condition: Optional[ContrastivePair | tuple] = None
    intervention: Optional[Conjunction] = None
    support: tuple[Assignment, ...] = field(default=(), compare=False)


def canonical_pairs(pairs: Iterable[ContrastivePair]) -> tuple[ContrastivePair, ...]:
    return tuple(sorted(set(pairs), key=lambda p: p.sort_key()))


def interventions(model: CausalModel) -> tuple[Conjunction, ...]:
    """All non-empty settings ``W = w`` of endogenous variables, smallest first."""

    def compute():
        names = model.endogenous_names
        out = []
        for r in range(1, len(names) + 1):
            for ws in itertools.combinations(names, r):
                for vals in itertools.product(*(model.domain(n) for n in ws)):
                    out.append(Conjunction(zip(ws, vals)))
        return tuple(out)

    return _memo(model, ("interventions",), compute)


def perturbs(w: Conjunction, x: Conjunction) -> bool:
    """Reading of "w != x": the intervention is not contained in the fact ``X = x``."""
    return not (w <= x)


def aligned_foils(model: CausalModel, fact: Conjunction) -> Iterator[Conjunction]:
    """Foil conjunctions over the fact's variables that differ everywhere."""
    names = fact.variables
    choices = [[v for v in model.domain(n) if v != fact[n]] for n in names]
    for vals in itertools.product(*choices):
        yield Conjunction(zip(names, vals))


def _extensions(model: CausalModel, pair: ContrastivePair) -> Iterator[ContrastivePair]:
    """Strict extensions of ``pair`` satisfying the difference condition on new variables."""
    rest = [n for n in model.endogenous_names if n not in pair.fact]
    for r in range(1, len(rest) + 1):
        for vs in itertools.combinations(rest, r):
            for zs in itertools.product(*(model.domain(n) for n in vs)):
                z = Conjunction(zip(vs, zs))
                for zp in aligned_foils(model, z):
                    yield ContrastivePair(pair.fact.union(z), pair.foil.union(zp))


# -- contrastive causes ------------------------------------------------------------


def _partials(model: CausalModel, u: Assignment, event: Event, kind: CauseKind) -> dict[Conjunction, Conjunction]:
    """Partial causes at ``(M, u)``, each mapped to a cause containing it."""

    def compute():
        out: dict[Conjunction, Conjunction] = {}
        for c in causes_of_kind(model, u, event, kind):
            for s in c.subsets():
                out.setdefault(s, c)
        return out

    return _memo(model, ("partials", u, event, kind), compute)


def _foil_partials(model: CausalModel, u: Assignment, event: Event, kind: CauseKind) -> dict[Conjunction, tuple]:
    """CC3 lookup: partial causes of ``event`` in some ``(M_{W<-w}, u)``."""

    def compute():
        out: dict[Conjunction, tuple] = {}
        for w in interventions(model):
            sub = model.intervene(w)
            for s, c in _partials(sub, u, event, kind).items():
                out.setdefault(s, (w, c))
        return out

    return _memo(model, ("foil-partials", u, event, kind), compute)


def _contrastive_causes(model: CausalModel, u: Assignment, ff: FactFoil, kind: CauseKind) -> dict[ContrastivePair, ContrastiveCauseWitness]:
    """All contrastive causes at ``(M, u)``: the maximal pairs satisfying CC1-CC4."""

    def compute():
        if model.holds(u, ff.foil):
            return {}
        facts = _partials(model, u, ff.fact, kind)
        foils = _foil_partials(model, u, ff.foil, kind)
        cands: dict[ContrastivePair, ContrastiveCauseWitness] = {}
        for x, fc in facts.items():
            for xp in aligned_foils(model, x):
                hit = foils.get(xp)
                if hit is not None:
                    p = ContrastivePair(x, xp)
                    cands[p] = ContrastiveCauseWitness(p, kind, fc, hit[0], hit[1])
        return {p: w for p, w in cands.items() if not any(e in cands for e in _extensions(model, p))}

    return _memo(model, ("contrastive-causes", u, ff, kind), compute)


def contrastive_causes(model: CausalModel, context, ff: FactFoil, kind: CauseKind) -> tuple[ContrastivePair, ...]:
    u = _prepare_setting(model, context, ff)
    return canonical_pairs(_contrastive_causes(model, u, ff, CauseKind(kind)))


def _prepare_setting(model: CausalModel, context, ff: FactFoil) -> Assignment:
    model.require_valid()
    check_event(model, ff.fact)
    check_event(model, ff.foil)
    return check_context(model, context)


def contrastive_cause_witness(model: CausalModel, context, pair: ContrastivePair, ff: FactFoil, kind: CauseKind) -> Optional[ContrastiveCauseWitness]:
    """CC1-CC5 for ``pair`` at ``(M, u)``; the witness (CC3 intervention and causes) or None."""
    u = _prepare_setting(model, context, ff)
    if not pair.differs:
        return None
    return _contrastive_causes(model, u, ff, CauseKind(kind)).get(pair)


def is_contrastive_cause(model: CausalModel, context, pair: ContrastivePair, ff: FactFoil, kind: CauseKind) -> bool:
    return contrastive_cause_witness(model, context, pair, ff, kind) is not None


def check_incompatibility(model: CausalModel, k: EpistemicState, ff: FactFoil) -> bool:
    """True iff no context in ``K`` makes both fact and foil true."""
    model.require_valid()
    return not any(model.holds(u, ff.fact) and model.holds(u, ff.foil) for u in k)


# -- shared machinery for the direct definitions --------------------------------------


def _prepare_k(model: CausalModel, k, ff: FactFoil, override: bool) -> EpistemicState:
    k = _prepare(model, k, ff.fact, override)
    check_event(model, ff.foil)
    return k


def _fact_candidates(model: CausalModel, contexts) -> list[ContrastivePair]:
    facts: set[Conjunction] = set()
    for u in contexts:
        facts.update(world_conjunction(model, model.solve(u)).subsets())
    out = [ContrastivePair(x, xp) for x in facts for xp in aligned_foils(model, x)]
    return sorted(out, key=lambda p: p.sort_key())


def _holds(model: CausalModel, u: Assignment, x: Conjunction) -> bool:
    return x.holds_in(model.solve(u))


def _foil_uncertain(model: CausalModel, k: EpistemicState, pair: ContrastivePair) -> Optional[Conjunction]:
    """CE4(b): some perturbing ``W <- w`` under which ``X = x'`` is uncertain in ``K``."""
    for w in interventions(model):
        if not perturbs(w, pair.fact):
            continue
        sub = model.intervene(w)
        seen = {_holds(sub, u, pair.foil) for u in k}
        if seen == {True, False}:
            return w
    return None


def _foil_nontrivial(model: CausalModel, k: EpistemicState, pair: ContrastivePair, foil: Event) -> Optional[Conjunction]:
    """CH4(b): some perturbing ``W <- w`` and ``u`` with ``¬(X = x') ∧ ψ`` in ``M_{W<-w}``."""
    for w in interventions(model):
        if not perturbs(w, pair.fact):
            continue
        sub = model.intervene(w)
        if any(not _holds(sub, u, pair.foil) and sub.holds(u, foil) for u in k):
            return w
    return None


# -- Miller (CE1-CE4) -------------------------------------------------------------------


def _miller(model: CausalModel, k: EpistemicState, ff: FactFoil) -> tuple[ContrastiveResult, ...]:
    if not all(model.holds(u, ff.fact) and not model.holds(u, ff.foil) for u in k):
        return ()
    memo: dict[ContrastivePair, bool] = {}

    def ce2(p: ContrastivePair) -> bool:
        if p not in memo:
            memo[p] = all(
                p in _contrastive_causes(model, u, ff, CauseKind.WEAK) for u in k if _holds(model, u, p.fact)
            )
        return memo[p]

    out = []
    for p in _fact_candidates(model, k):
        seen = {_holds(model, u, p.fact) for u in k}
        if seen != {True, False}:
            continue
        if not ce2(p) or any(ce2(q) for q in p.sub_pairs()):
            continue
        w = _foil_uncertain(model, k, p)
        if w is None:
            continue
        support = tuple(u for u in k if _holds(model, u, p.fact))
        out.append(ContrastiveResult(p, "miller", intervention=w, support=support))
    return tuple(out)


def enumerate_miller(model: CausalModel, k: EpistemicState, ff: FactFoil, *, override: bool = False) -> tuple[ContrastiveResult, ...]:
    k = _prepare_k(model, k, ff, override)
    return _memo(model, ("miller", k, ff), lambda: _miller(model, k, ff))


# -- modified HP variant (CH1-CH4) ------------------------------------------------------------


def _actual_pair_parts(model: CausalModel, u: Assignment, ff: FactFoil) -> frozenset:
    """Triples ``(X_i, x_i, x_i')`` that are part of a contrastive actual cause at ``u``."""

    def compute():
        parts = set()
        for p in _contrastive_causes(model, u, ff, CauseKind.ACTUAL):
            parts.update(p.conjuncts())
        return frozenset(parts)

    return _memo(model, ("actual-pair-parts", u, ff), compute)


def _all_settings(model: CausalModel, names: Iterable[str], *, nonempty: bool = False) -> Iterator[Conjunction]:
    names = list(names)
    for r in range(1 if nonempty else 0, len(names) + 1):
        for vs in itertools.combinations(names, r):
            for vals in itertools.product(*(model.domain(n) for n in vs)):
                yield Conjunction(zip(vs, vals))


def _ch1b(model: CausalModel, u: Assignment, pair: ContrastivePair, ff: FactFoil) -> Optional[tuple]:
    """CH1(b) at ``u``: witnesses ``(S=s, S=s', W=w)`` or None."""
    rest = [n for n in model.endogenous_names if n not in pair.fact]
    for s_vars in _all_settings(model, rest):
        names = s_vars.variables
        fact_ok = next(
            (s for s in _all_settings_over(model, names) if model.holds(u, ff.fact, pair.fact.union(s))), None
        )
        if fact_ok is None:
            continue
        for sp in _all_settings_over(model, names):
            iv = pair.foil.union(sp)
            for w in interventions(model):
                if not perturbs(w, pair.fact):
                    continue
                if model.intervene(w).holds(u, ff.foil, iv):
                    return fact_ok, sp, w
    return None


def _all_settings_over(model: CausalModel, names: tuple[str, ...]) -> Iterator[Conjunction]:
    for vals in itertools.product(*(model.domain(n) for n in names)):
        yield Conjunction(zip(names, vals))


def _ch1(model: CausalModel, k: EpistemicState, ff: FactFoil):
    """Returns a memoised predicate for CH1 (a)-(d) at every ``u`` in ``K``."""
    abc_memo: dict = {}

    def abc(u: Assignment, p: ContrastivePair) -> bool:
        key = (u, p)
        if key not in abc_memo:
            ok = p.differs
            if ok and _holds(model, u, p.fact) and model.holds(u, ff.fact) and not model.holds(u, ff.foil):
                parts = _actual_pair_parts(model, u, ff)
                ok = any(t in parts for t in p.conjuncts())
            abc_memo[key] = ok and _ch1b(model, u, p, ff) is not None
        return abc_memo[key]

    ch1_memo: dict = {}

    def ch1(p: ContrastivePair) -> bool:
        if p not in ch1_memo:
            ch1_memo[p] = all(abc(u, p) and not any(abc(u, e) for e in _extensions(model, p)) for u in k)
        return ch1_memo[p]

    return ch1


def _modified_hp_contrastive(model: CausalModel, k: EpistemicState, ff: FactFoil) -> tuple[ContrastiveResult, ...]:
    ch1 = _ch1(model, k, ff)
    ch3_ctx = [u for u in k if model.holds(u, ff.fact) and not model.holds(u, ff.foil)]
    out = []
    for p in _fact_candidates(model, ch3_ctx):
        if not any(_holds(model, u, p.fact) for u in ch3_ctx):
            continue
        if not ch1(p) or any(ch1(q) for q in p.sub_pairs()):
            continue
        nontrivial = any(not _holds(model, u, p.fact) and model.holds(u, ff.fact) for u in k)
        w = _foil_nontrivial(model, k, p, ff.foil) if nontrivial else None
        support = tuple(u for u in ch3_ctx if _holds(model, u, p.fact))
        out.append(
            ContrastiveResult(p, "modified-hp", nontrivial=w is not None, intervention=w, support=support)
        )
    return tuple(out)


def enumerate_modified_hp_contrastive(model: CausalModel, k: EpistemicState, ff: FactFoil, *, override: bool = False) -> tuple[ContrastiveResult, ...]:
    k = _prepare_k(model, k, ff, override)
    return _memo(model, ("modified-hp-contrastive", k, ff), lambda: _modified_hp_contrastive(model, k, ff))


# -- Borner variant (CB1-CB6) -------------------------------------------------------------------


def _cb12_witness(model: CausalModel, k: EpistemicState, ff: FactFoil, p: ContrastivePair) -> Optional[tuple]:
    """CB1-CB2: the first ``<S=s, S=s'>`` (with its CB1-CB2(c) interventions) or None.

    (b) forces ``S = s`` to hold throughout ``K``, so ``S`` ranges over the
    certain facts outside ``X``; the difference condition inside the
    contrastive sufficient cause forces ``s'`` to differ from ``s`` everywhere.
    """
    pool = _certain_facts(model, k).without(p.variables)
    relevant = [u for u in k if _holds(model, u, p.fact)]
    for s in pool.subsets(nonempty=False):
        for sp in aligned_foils(model, s) if s else [Conjunction()]:
            joint = ContrastivePair(p.fact.union(s), p.foil.union(sp))
            if not all(joint in _contrastive_causes(model, u, ff, CauseKind.SUFFICIENT) for u in relevant):
                continue
            ws = []
            for u in k:
                w = next(
                    (w for w in interventions(model) if perturbs(w, p.fact) and _holds(model.intervene(w), u, sp)),
                    None,
                )
                if w is None:
                    break
                ws.append(w)
            else:
                return s, sp, tuple(ws)
    return None


def _borner_contrastive(model: CausalModel, k: EpistemicState, ff: FactFoil) -> tuple[ContrastiveResult, ...]:
    memo: dict = {}

    def cb12(p: ContrastivePair):
        if p not in memo:
            memo[p] = _cb12_witness(model, k, ff, p)
        return memo[p]

    ch3_ctx = [u for u in k if model.holds(u, ff.fact) and not model.holds(u, ff.foil)]
    out = []
    for p in _fact_candidates(model, ch3_ctx):
        wit = cb12(p)
        if wit is None:
            continue
        w = None
        if any(not _holds(model, u, p.fact) and model.holds(u, ff.fact) for u in k):
            w = _foil_nontrivial(model, k, p, ff.foil)
        potential = w is not None
        actual = len(ch3_ctx) == len(k) and all(_holds(model, u, p.fact) for u in k)
        if not (potential or actual):
            continue
        parsimonious = potential and not any(cb12(q) is not None for q in p.sub_pairs())
        s, sp, _ = wit
        out.append(
            ContrastiveResult(
                p,
                "borner",
                potential=potential,
                actual=actual,
                parsimonious=parsimonious,
                side_condition=(s, sp),
                intervention=w,
                support=tuple(u for u in ch3_ctx if _holds(model, u, p.fact)),
            )
        )
    return tuple(out)


def enumerate_borner_contrastive(model: CausalModel, k: EpistemicState, ff: FactFoil, *, override: bool = False) -> tuple[ContrastiveResult, ...]:
    k = _prepare_k(model, k, ff, override)
    return _memo(model, ("borner-contrastive", k, ff), lambda: _borner_contrastive(model, k, ff))


# -- modular definition (CE1'-CE4') --------------------------------------------------------------------


def _modular(model: CausalModel, k: EpistemicState, ff: FactFoil, base: Base) -> tuple[ContrastiveResult, ...]:
    fact_parts: set[Conjunction] = set()
    for e in explanations(model, k, ff.fact, base, override=True):
        fact_parts.update(e.subsets())
    foil_parts: dict[Conjunction, Conjunction] = {}
    for w in interventions(model):
        for e in explanations(model.intervene(w), k, ff.foil, base, override=True):
            for s in e.subsets():
                foil_parts.setdefault(s, w)
    cands: dict[ContrastivePair, Conjunction] = {}
    for x in fact_parts:
        for xp in aligned_foils(model, x):
            if xp in foil_parts:
                cands[ContrastivePair(x, xp)] = foil_parts[xp]
    out = [
        ContrastiveResult(p, f"modular:{base.value}", intervention=w)
        for p, w in cands.items()
        if not any(e in cands for e in _extensions(model, p))
    ]
    return tuple(sorted(out, key=lambda r: r.pair.sort_key()))


def enumerate_modular(model: CausalModel, k: EpistemicState, ff: FactFoil, base: Base, *, override: bool = False) -> tuple[ContrastiveResult, ...]:
    k = _prepare_k(model, k, ff, override)
    base = Base(base)
    return _memo(model, ("modular", k, ff, base), lambda: _modular(model, k, ff, base))


def pairs_of(results: Iterable[ContrastiveResult], flag: Optional[str] = None) -> tuple[ContrastivePair, ...]:
    return canonical_pairs(r.pair for r in results if flag is None or getattr(r, flag))
