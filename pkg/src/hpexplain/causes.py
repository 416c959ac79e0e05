"""Actual, weak actual and sufficient causes in a causal setting ``(M, u)``.

Actual causes follow the modified Halpern-Pearl definition: the candidate
holds together with the event (AC1), setting it to some alternative while
freezing a contingency set ``W`` at its actual values defeats the event
(AC2), and no proper sub-conjunction does both (AC3).  Weak actual causes
drop AC3.  Sufficient causes replace AC2 by "intersects an actual cause"
plus "forces the event in every context", and are minimal with respect to
those conditions.
"""

from __future__ import annotations

import enum
import itertools
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Optional

from .expr import Event, Prim, Value
from .model import (
    Assignment,
    CausalModel,
    Conjunction,
    ModelError,
    check_complexity,
    check_context,
    check_event,
)


class CauseKind(str, enum.Enum):
    ACTUAL = "actual"
    WEAK = "weak-actual"
    SUFFICIENT = "sufficient"

    @classmethod
    def parse(cls, text: str) -> "CauseKind":
        aliases = {"weak": cls.WEAK, "weak-actual": cls.WEAK, "actual": cls.ACTUAL, "sufficient": cls.SUFFICIENT}
        try:
            return aliases[text]
        except KeyError:
            raise ValueError(f"unknown cause kind {text!r}") from None


@dataclass(frozen=True)
class CauseWitness:
    """Evidence that ``cause`` is a cause of the given kind.

    For actual/weak causes ``contingency`` is ``W = w`` (actual values) and
    ``alternative`` is the setting ``x'`` that defeats the event.  For
    sufficient causes ``part_of`` is an actual cause sharing a conjunct with
    ``cause`` and ``contexts_checked`` is the number of contexts over which
    the cause was verified to force the event.
    """

    cause: Conjunction
    kind: CauseKind
    contingency: Optional[Conjunction] = None
    alternative: Optional[Conjunction] = None
    part_of: Optional[Conjunction] = None
    contexts_checked: int = 0


def canonical(items) -> tuple:
    """Deterministic order: by size, then by variable names and values."""
    return tuple(sorted(set(items), key=lambda c: c.sort_key()))


def world_conjunction(model: CausalModel, world: Mapping[str, Value]) -> Conjunction:
    return Conjunction((n, world[n]) for n in model.endogenous_names)


# -- AC2 ------------------------------------------------------------------------


def ac2_witness(
    model: CausalModel, u: Assignment, x: Conjunction, event: Event
) -> Optional[tuple[Conjunction, Conjunction]]:
    """Search ``W`` ⊆ V \\ X (smallest first) and ``x'`` for ``[X<-x', W<-w*]¬φ``.

    ``w*`` is fixed to the actual values of ``W``.  Returns ``(W=w*, x')``.
    """
    world = model.solve(u)
    rest = [n for n in model.endogenous_names if n not in x]
    names = x.variables
    alternatives = [
        Conjunction(zip(names, vals))
        for vals in itertools.product(*(model.domain(n) for n in names))
    ]
    for r in range(len(rest) + 1):
        for ws in itertools.combinations(rest, r):
            w = Conjunction((n, world[n]) for n in ws)
            for alt in alternatives:
                if not model.holds(u, event, alt.union(w)):
                    return w, alt
    return None


# -- per-setting tables (memoised on the model) -----------------------------------


def _candidates(model: CausalModel, world: Mapping[str, Value]) -> list[Conjunction]:
    return list(world_conjunction(model, world).subsets())


def _weak_table(model: CausalModel, u: Assignment, event: Event) -> dict[Conjunction, tuple]:
    key = ("weak-table", u, event)
    cache = model._cache
    if key in cache:
        return cache[key]
    world = model.solve(u)
    table: dict[Conjunction, tuple] = {}
    if model.holds(u, event):
        for x in _candidates(model, world):
            wit = ac2_witness(model, u, x, event)
            if wit is not None:
                table[x] = wit
    cache[key] = table
    return table


def weak_causes(model: CausalModel, u: Assignment, event: Event) -> tuple[Conjunction, ...]:
    return canonical(_weak_table(model, u, event))


def actual_causes(model: CausalModel, u: Assignment, event: Event) -> tuple[Conjunction, ...]:
    key = ("actual", u, event)
    cache = model._cache
    if key not in cache:
        weak = _weak_table(model, u, event)
        cache[key] = canonical(
            x for x in weak if not any(y in weak for y in x.subsets(proper=True))
        )
    return cache[key]


def _actual_conjuncts(model: CausalModel, u: Assignment, event: Event) -> dict[tuple, Conjunction]:
    """Each conjunct that is part of an actual cause, mapped to one such cause."""
    key = ("actual-parts", u, event)
    cache = model._cache
    if key not in cache:
        parts: dict[tuple, Conjunction] = {}
        for c in actual_causes(model, u, event):
            for pair in c.pairs:
                parts.setdefault(pair, c)
        cache[key] = parts
    return cache[key]


def forces_everywhere(model: CausalModel, x: Conjunction, event: Event) -> bool:
    """SC3: ``(M, u') |= [X <- x] φ`` for every context ``u'``."""
    key = ("forces", x, event)
    cache = model._cache
    if key not in cache:
        cache[key] = all(model.holds(v, event, x) for v in model.contexts())
    return cache[key]


def _sc123(model: CausalModel, u: Assignment, x: Conjunction, event: Event) -> Optional[Conjunction]:
    """SC1-SC3 for ``x``; returns the actual cause witnessing SC2, or None."""
    world = model.solve(u)
    if not (x.holds_in(world) and model.holds(u, event)):
        return None
    parts = _actual_conjuncts(model, u, event)
    hit = next((parts[p] for p in x.pairs if p in parts), None)
    if hit is None or not forces_everywhere(model, x, event):
        return None
    return hit


def _sufficient_table(model: CausalModel, u: Assignment, event: Event) -> dict[Conjunction, Conjunction]:
    key = ("sufficient-table", u, event)
    cache = model._cache
    if key not in cache:
        world = model.solve(u)
        sat = {}
        for x in _candidates(model, world):
            hit = _sc123(model, u, x, event)
            if hit is not None:
                sat[x] = hit
        cache[key] = {
            x: hit for x, hit in sat.items() if not any(y in sat for y in x.subsets(proper=True))
        }
    return cache[key]


def sufficient_causes(model: CausalModel, u: Assignment, event: Event) -> tuple[Conjunction, ...]:
    return canonical(_sufficient_table(model, u, event))


def causes_of_kind(model: CausalModel, u: Assignment, event: Event, kind: CauseKind) -> tuple[Conjunction, ...]:
    if kind is CauseKind.ACTUAL:
        return actual_causes(model, u, event)
    if kind is CauseKind.WEAK:
        return weak_causes(model, u, event)
    return sufficient_causes(model, u, event)


def is_partial_cause(model: CausalModel, u: Assignment, x: Conjunction, event: Event, kind: CauseKind) -> bool:
    """``x`` is a non-empty sub-conjunction of some cause of the given kind."""
    if not x:
        return False
    key = ("partial", u, event, kind)
    cache = model._cache
    if key not in cache:
        parts: set[Conjunction] = set()
        for c in causes_of_kind(model, u, event, kind):
            parts.update(c.subsets())
        cache[key] = frozenset(parts)
    return x in cache[key]


# -- public operations ------------------------------------------------------------


def _prepare(model: CausalModel, context, event: Event) -> Assignment:
    model.require_valid()
    check_event(model, event)
    return check_context(model, context)


def cause_witness(
    model: CausalModel, context: Mapping[str, Value], candidate: Mapping[str, Value], event: Event, kind: CauseKind
) -> Optional[CauseWitness]:
    """Decide whether ``candidate`` is a cause of ``event``; a witness if so, else None."""
    u = _prepare(model, context, event)
    x = Conjunction(candidate)
    if not x:
        raise ModelError("candidate cause must be non-empty")
    for n in x:
        if n not in model.var:
            raise ModelError(f"candidate references unknown variable {n!r}")
    kind = CauseKind(kind)
    world = model.solve(u)
    if kind is CauseKind.SUFFICIENT:
        hit = _sufficient_table(model, u, event).get(x)
        if hit is None:
            return None
        return CauseWitness(x, kind, part_of=hit, contexts_checked=len(model.contexts()))
    if not (x.holds_in(world) and model.holds(u, event)):
        return None
    wit = _weak_table(model, u, event).get(x)
    if wit is None:
        return None
    if kind is CauseKind.ACTUAL and x not in actual_causes(model, u, event):
        return None
    return CauseWitness(x, kind, contingency=wit[0], alternative=wit[1])


def is_cause(model, context, candidate, event: Event, kind: CauseKind) -> bool:
    return cause_witness(model, context, candidate, event, kind) is not None


def enumerate_causes(model: CausalModel, context, event: Event, kind: CauseKind, *, override: bool = False) -> tuple[Conjunction, ...]:
    u = _prepare(model, context, event)
    check_complexity(model, override=override)
    return causes_of_kind(model, u, event, CauseKind(kind))


def is_part_of_cause(model: CausalModel, context, conjunct, event: Event, kind: CauseKind) -> bool:
    """True iff some cause of the given kind contains the primitive event ``conjunct``."""
    u = _prepare(model, context, event)
    if isinstance(conjunct, Prim):
        pair = (conjunct.var, conjunct.value)
    else:
        pair = tuple(conjunct)
    return any(pair in c.pairs for c in causes_of_kind(model, u, event, CauseKind(kind)))


def replay_witness(model: CausalModel, context, event: Event, w: CauseWitness) -> bool:
    """Re-check a witness against the model (used by invariant tests)."""
    u = check_context(model, context)
    world = model.solve(u)
    if not (w.cause.holds_in(world) and model.holds(u, event)):
        return False
    if w.kind is CauseKind.SUFFICIENT:
        return (
            w.part_of is not None
            and any(p in w.part_of.pairs for p in w.cause.pairs)
            and w.part_of in actual_causes(model, u, event)
            and all(model.holds(v, event, w.cause) for v in model.contexts())
        )
    if w.contingency is None or w.alternative is None:
        return False
    if any(world[n] != v for n, v in w.contingency.items()):
        return False
    return not model.holds(u, event, w.alternative.union(w.contingency))
