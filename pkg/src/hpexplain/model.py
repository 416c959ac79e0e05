"""Finite, acyclic structural equation models.

A :class:`CausalModel` is a signature (exogenous and endogenous variables
with finite domains) plus one structural equation per endogenous variable.
Models are immutable; solutions and intervened sub-models are memoised on
the model instance, so repeated queries against the same model are cheap.
"""

from __future__ import annotations

import graphlib
import itertools
import os
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Optional

from .expr import (
    EvaluationError,
    Event,
    Expr,
    Lit,
    Value,
    compile_expr,
    eval_event,
    event_prims,
    evaluate,
    references,
)

BOOL: tuple[Value, ...] = (0, 1)

EXOGENOUS = "exogenous"
ENDOGENOUS = "endogenous"


class ModelError(ValueError):
    """An operation was attempted on an invalid model or with bad arguments."""


class ComplexityError(ModelError):
    """The query exceeds the soft size caps (see :func:`check_complexity`)."""


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    domain: tuple[Value, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        if self.kind not in (EXOGENOUS, ENDOGENOUS):
            raise ValueError(f"unknown variable kind {self.kind!r}")

    @property
    def is_bool(self) -> bool:
        return self.domain == BOOL


class Assignment(Mapping):
    """Immutable mapping from variable names to values, ordered by name.

    Equality and hashing are by content, so two assignments built in a
    different order compare equal.
    """

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, items: Mapping[str, Value] | Iterable[tuple[str, Value]] = ()):
        pairs = items.items() if isinstance(items, Mapping) else items
        m: dict[str, Value] = {}
        for k, v in pairs:
            if k in m and m[k] != v:
                raise ValueError(f"conflicting values for {k}: {m[k]!r} and {v!r}")
            m[k] = v
        self._items = tuple(sorted(m.items()))
        self._map = dict(self._items)
        self._hash = hash((type(self).__name__, self._items))

    def __getitem__(self, key: str) -> Value:
        return self._map[key]

    def __iter__(self) -> Iterator[str]:
        return (k for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Assignment):
            return type(self) is type(other) and self._items == other._items
        return NotImplemented

    def __lt__(self, other: "Assignment") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        body = ", ".join(f"{k}={v!r}" for k, v in self._items)
        return f"{type(self).__name__}({body})"

    @property
    def pairs(self) -> tuple[tuple[str, Value], ...]:
        return self._items

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self._items)

    def sort_key(self):
        return (len(self._items), tuple((k, _value_key(v)) for k, v in self._items))


def _value_key(v: Value):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


class Conjunction(Assignment):
    """A conjunction of primitive events ``X = x`` (a partial setting).

    Interpreted set-theoretically as its set of conjuncts; ``<=`` is the
    sub-conjunction relation.
    """

    __slots__ = ()

    def holds_in(self, world: Mapping[str, Value]) -> bool:
        return all(world[k] == v for k, v in self._items)

    def __le__(self, other: "Conjunction") -> bool:
        return len(self) <= len(other) and all(
            k in other._map and other._map[k] == v for k, v in self._items
        )

    def __lt__(self, other: "Conjunction") -> bool:
        return len(self) < len(other) and self <= other

    def restrict(self, names: Iterable[str]) -> "Conjunction":
        keep = set(names)
        return Conjunction((k, v) for k, v in self._items if k in keep)

    def without(self, names: Iterable[str]) -> "Conjunction":
        drop = set(names)
        return Conjunction((k, v) for k, v in self._items if k not in drop)

    def union(self, other: Mapping[str, Value]) -> "Conjunction":
        return Conjunction(list(self._items) + list(other.items()))

    def subsets(self, *, proper: bool = False, nonempty: bool = True) -> Iterator["Conjunction"]:
        """Sub-conjunctions in order of increasing size."""
        n = len(self._items)
        lo = 1 if nonempty else 0
        hi = n - 1 if proper else n
        for r in range(lo, hi + 1):
            for combo in itertools.combinations(self._items, r):
                yield Conjunction(combo)

    def conflicts_with(self, other: Mapping[str, Value]) -> bool:
        return any(k in other and other[k] != v for k, v in self._items)


def conjunction(**kwargs: Value) -> Conjunction:
    return Conjunction(kwargs)


@dataclass(frozen=True)
class EpistemicState:
    """A finite non-empty set of contexts, stored without duplicates in sorted order."""

    contexts: tuple[Assignment, ...]

    def __post_init__(self):
        uniq = sorted(set(Assignment(c) for c in self.contexts), key=lambda a: a.sort_key())
        if not uniq:
            raise ModelError("epistemic state must contain at least one context")
        object.__setattr__(self, "contexts", tuple(uniq))

    def __iter__(self) -> Iterator[Assignment]:
        return iter(self.contexts)

    def __len__(self) -> int:
        return len(self.contexts)

    def __contains__(self, u) -> bool:
        return Assignment(u) in self.contexts


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=True)
class CausalModel:
    """A signature plus one structural equation per endogenous variable.

    ``variables`` may be given in any order; they are kept sorted by name.
    ``equations`` maps endogenous variable names to expressions.
    """

    variables: tuple[Variable, ...]
    equations: tuple[tuple[str, Expr], ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __init__(self, variables: Iterable[Variable], equations: Mapping[str, Expr] | Iterable[tuple[str, Expr]]):
        eqs = equations.items() if isinstance(equations, Mapping) else equations
        object.__setattr__(self, "variables", tuple(sorted(variables, key=lambda v: v.name)))
        object.__setattr__(self, "equations", tuple(sorted(eqs, key=lambda kv: kv[0])))
        object.__setattr__(self, "_cache", {})

    def __hash__(self) -> int:
        return hash((self.variables, self.equations))

    # -- signature accessors -------------------------------------------------

    @property
    def var(self) -> dict[str, Variable]:
        c = self._cache
        if "var" not in c:
            c["var"] = {v.name: v for v in self.variables}
        return c["var"]

    @property
    def exogenous(self) -> tuple[Variable, ...]:
        return tuple(v for v in self.variables if v.kind == EXOGENOUS)

    @property
    def endogenous(self) -> tuple[Variable, ...]:
        return tuple(v for v in self.variables if v.kind == ENDOGENOUS)

    @property
    def endogenous_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.endogenous)

    @property
    def equation(self) -> dict[str, Expr]:
        c = self._cache
        if "eq" not in c:
            c["eq"] = dict(self.equations)
        return c["eq"]

    def domain(self, name: str) -> tuple[Value, ...]:
        return self.var[name].domain

    # -- validity ------------------------------------------------------------

    def validate(self) -> ValidationReport:
        c = self._cache
        if "report" not in c:
            c["report"] = _validate(self)
        return c["report"]

    def require_valid(self) -> None:
        report = self.validate()
        if not report.ok:
            raise ModelError("invalid model: " + "; ".join(report.violations))

    @property
    def order(self) -> tuple[str, ...]:
        """Endogenous variables in a deterministic topological order."""
        c = self._cache
        if "order" not in c:
            self.require_valid()
            c["order"] = _topo_order(self)
        return c["order"]

    def _compiled(self):
        c = self._cache
        if "compiled" not in c:
            c["compiled"] = [(n, compile_expr(self.equation[n])) for n in self.order]
        return c["compiled"]

    # -- solving -------------------------------------------------------------

    def solve(self, context: Mapping[str, Value], intervention: Optional[Mapping[str, Value]] = None) -> Assignment:
        """The actual world of ``(M_{X<-x}, u)``; memoised per (context, intervention)."""
        u = context if isinstance(context, Assignment) else Assignment(context)
        iv = _as_conj(intervention)
        key = ("solve", u, iv)
        c = self._cache
        hit = c.get(key)
        if hit is not None:
            return hit
        env = dict(u.items())
        for name, f in self._compiled():
            env[name] = iv[name] if name in iv else f(env)
        world = Assignment(env)
        c[key] = world
        return world

    def intervene(self, intervention: Mapping[str, Value]) -> "CausalModel":
        """``M_{X<-x}``: equations of intervened variables replaced by constants."""
        iv = _as_conj(intervention)
        key = ("intervene", iv)
        c = self._cache
        hit = c.get(key)
        if hit is not None:
            return hit
        self.require_valid()
        check_intervention(self, iv)
        eqs = dict(self.equations)
        for name, value in iv.items():
            eqs[name] = Lit(value)
        sub = CausalModel(self.variables, eqs)
        c[key] = sub
        return sub

    def holds(self, context: Mapping[str, Value], event: Event, intervention: Optional[Mapping[str, Value]] = None) -> bool:
        """``(M, u) |= [X <- x] event``."""
        return eval_event(event, self.solve(context, intervention))

    def contexts(self) -> tuple[Assignment, ...]:
        c = self._cache
        if "contexts" not in c:
            exo = self.exogenous
            names = [v.name for v in exo]
            c["contexts"] = tuple(
                Assignment(zip(names, values)) for values in itertools.product(*(v.domain for v in exo))
            )
        return c["contexts"]


def _as_conj(iv: Optional[Mapping[str, Value]]) -> Conjunction:
    if iv is None:
        return _EMPTY
    if isinstance(iv, Conjunction):
        return iv
    return Conjunction(iv)


_EMPTY = Conjunction()


def check_intervention(model: CausalModel, iv: Mapping[str, Value]) -> None:
    for name, value in iv.items():
        v = model.var.get(name)
        if v is None:
            raise ModelError(f"intervention on unknown variable {name!r}")
        if v.kind != ENDOGENOUS:
            raise ModelError(f"intervention on exogenous variable {name!r}")
        if value not in v.domain:
            raise ModelError(f"value {value!r} outside the domain of {name}")


def check_event(model: CausalModel, event: Event) -> None:
    for p in event_prims(event):
        v = model.var.get(p.var)
        if v is None:
            raise ModelError(f"event references unknown variable {p.var!r}")
        if v.kind != ENDOGENOUS:
            raise ModelError(f"exogenous variable {p.var!r} in event")
        if p.value not in v.domain:
            raise ModelError(f"value {p.value!r} outside the domain of {p.var}")


def check_context(model: CausalModel, context: Mapping[str, Value]) -> Assignment:
    exo = {v.name: v for v in model.exogenous}
    if set(context) != set(exo):
        missing = sorted(set(exo) - set(context))
        extra = sorted(set(context) - set(exo))
        raise ModelError(f"context must set exactly the exogenous variables (missing {missing}, extra {extra})")
    for k, val in context.items():
        if val not in exo[k].domain:
            raise ModelError(f"context value {val!r} outside the domain of {k}")
    return Assignment(context)


def check_conjunction(model: CausalModel, c: Mapping[str, Value]) -> Conjunction:
    check_intervention(model, c)
    return _as_conj(c)


def epistemic_state(model: CausalModel, contexts: Iterable[Mapping[str, Value]]) -> EpistemicState:
    return EpistemicState(tuple(check_context(model, u) for u in contexts))


# -- validation ---------------------------------------------------------------


def _validate(model: CausalModel) -> ValidationReport:
    out: list[str] = []
    seen: set[str] = set()
    for v in model.variables:
        if v.name in seen:
            out.append(f"duplicate variable name {v.name}")
        seen.add(v.name)
        if not v.domain:
            out.append(f"empty domain for {v.name}")
        elif len(set(v.domain)) != len(v.domain):
            out.append(f"repeated value in the domain of {v.name}")
    if not model.exogenous:
        out.append("no exogenous variables")
    if not model.endogenous:
        out.append("no endogenous variables")

    names = {v.name: v for v in model.variables}
    eq_names = [n for n, _ in model.equations]
    for n in sorted(set(eq_names)):
        if eq_names.count(n) > 1:
            out.append(f"more than one equation for {n}")
    for n in eq_names:
        if n not in names:
            out.append(f"equation for unknown variable {n}")
        elif names[n].kind != ENDOGENOUS:
            out.append(f"equation for exogenous variable {n}")
    for v in model.endogenous:
        if v.name not in model.equation:
            out.append(f"missing equation for {v.name}")

    structural_ok = not out
    for n, e in model.equations:
        refs = references(e)
        if n in refs:
            out.append(f"equation for {n} references its own variable")
        for r in sorted(refs - set(names)):
            out.append(f"equation for {n} references unknown variable {r}")
    if out:
        return ValidationReport(tuple(out))

    cycle = find_cycle(model)
    if cycle:
        out.append("cyclic dependency {" + ",".join(sorted(cycle)) + "}")

    if structural_ok:
        for n, e in model.equations:
            out.extend(_closure_violations(model, n, e))
    return ValidationReport(tuple(out))


def _graph(model: CausalModel) -> dict[str, set[str]]:
    endo = set(model.endogenous_names)
    return {n: set(references(e)) & endo for n, e in model.equations}


def find_cycle(model: CausalModel) -> Optional[list[str]]:
    """Endogenous variables on one dependency cycle, or None if acyclic."""
    try:
        tuple(graphlib.TopologicalSorter(_graph(model)).static_order())
    except graphlib.CycleError as exc:
        nodes = exc.args[1]
        return list(dict.fromkeys(nodes))
    return None


def _topo_order(model: CausalModel) -> tuple[str, ...]:
    # Kahn's algorithm with name-sorted ready sets, for a reproducible order.
    graph = _graph(model)
    ts = graphlib.TopologicalSorter(graph)
    ts.prepare()
    order: list[str] = []
    while ts.is_active():
        ready = sorted(ts.get_ready())
        order.extend(ready)
        ts.done(*ready)
    return tuple(order)


def _closure_violations(model: CausalModel, name: str, e: Expr) -> list[str]:
    refs = sorted(references(e))
    target = model.var[name].domain
    doms = [model.var[r].domain for r in refs]
    for values in itertools.product(*doms):
        env = dict(zip(refs, values))
        try:
            out = evaluate(e, env)
        except EvaluationError as exc:
            return [f"domain closure: equation for {name} is not total ({exc}) at {env}"]
        if out not in target:
            return [f"domain closure: equation for {name} yields {out!r} outside its domain at {env}"]
    return []


def validate_model(model: CausalModel) -> ValidationReport:
    return model.validate()


def solve(model: CausalModel, context: Mapping[str, Value]) -> Assignment:
    model.require_valid()
    return model.solve(check_context(model, context))


def intervene(model: CausalModel, iv: Mapping[str, Value]) -> CausalModel:
    return model.intervene(iv)


def holds(model: CausalModel, context: Mapping[str, Value], iv: Optional[Mapping[str, Value]], event: Event) -> bool:
    model.require_valid()
    check_event(model, event)
    if iv:
        check_intervention(model, iv)
    return model.holds(check_context(model, context), event, iv)


def enumerate_contexts(model: CausalModel) -> tuple[Assignment, ...]:
    """All contexts, lexicographic in variable name then declared domain order."""
    model.require_valid()
    return model.contexts()


def all_contexts(model: CausalModel) -> EpistemicState:
    return EpistemicState(enumerate_contexts(model))


# -- complexity guard -----------------------------------------------------------

DEFAULT_MAX_VARS = 10
DEFAULT_MAX_CONTEXTS = 1024


def check_complexity(model: CausalModel, k: Optional[EpistemicState] = None, *, override: bool = False) -> None:
    """Enforce the soft caps on |V| and |K|.

    Caps come from ``HPEXPLAIN_MAX_VARS`` / ``HPEXPLAIN_MAX_CONTEXTS`` when
    set; ``override=True`` (or ``HPEXPLAIN_NO_LIMITS=1``) disables them.
    """
    if override or os.environ.get("HPEXPLAIN_NO_LIMITS") == "1":
        return
    max_vars = int(os.environ.get("HPEXPLAIN_MAX_VARS", DEFAULT_MAX_VARS))
    max_ctx = int(os.environ.get("HPEXPLAIN_MAX_CONTEXTS", DEFAULT_MAX_CONTEXTS))
    n = len(model.endogenous)
    if n > max_vars:
        raise ComplexityError(f"{n} endogenous variables exceeds the cap of {max_vars}")
    if k is not None and len(k) > max_ctx:
        raise ComplexityError(f"epistemic state of {len(k)} contexts exceeds the cap of {max_ctx}")


def bool_model(exogenous: Iterable[str], equations: Mapping[str, Expr]) -> CausalModel:
    """Convenience constructor for all-boolean models."""
    vs = [Variable(n, EXOGENOUS, BOOL) for n in exogenous]
    vs += [Variable(n, ENDOGENOUS, BOOL) for n in equations]
    return CausalModel(vs, equations)
