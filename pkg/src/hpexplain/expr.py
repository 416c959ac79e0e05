"""Expression and event ASTs.

Expressions are the right-hand sides of structural equations (and of
epistemic constraints).  Events are boolean formulas over primitive events
``X = x`` on endogenous variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Union

Value = Union[int, str]


class EvaluationError(ValueError):
    """Raised when an expression cannot be evaluated (e.g. non-boolean operand)."""


def _truth(v: Value) -> bool:
    if v == 1 or v is True:
        return True
    if v == 0 or v is False:
        return False
    raise EvaluationError(f"non-boolean operand {v!r} in logical connective")


# -- structural equation expressions ----------------------------------------


@dataclass(frozen=True)
class Lit:
    value: Value


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Cmp:
    op: str  # "=" or "!="
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    arg: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Ite:
    cond: "Expr"
    then: "Expr"
    other: "Expr"


@dataclass(frozen=True)
class MinMax:
    op: str  # "min" or "max"
    left: "Expr"
    right: "Expr"


Expr = Union[Lit, Ref, Cmp, Not, And, Or, Ite, MinMax]


def references(e: Expr) -> frozenset[str]:
    """Names of all variables referenced by ``e``."""
    if isinstance(e, Ref):
        return frozenset((e.name,))
    if isinstance(e, Lit):
        return frozenset()
    if isinstance(e, Not):
        return references(e.arg)
    if isinstance(e, Ite):
        return references(e.cond) | references(e.then) | references(e.other)
    return references(e.left) | references(e.right)


def evaluate(e: Expr, env: Mapping[str, Value]) -> Value:
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Ref):
        return env[e.name]
    if isinstance(e, Not):
        return 0 if _truth(evaluate(e.arg, env)) else 1
    if isinstance(e, And):
        return 1 if _truth(evaluate(e.left, env)) and _truth(evaluate(e.right, env)) else 0
    if isinstance(e, Or):
        return 1 if _truth(evaluate(e.left, env)) or _truth(evaluate(e.right, env)) else 0
    if isinstance(e, Cmp):
        eq = evaluate(e.left, env) == evaluate(e.right, env)
        return int(eq if e.op == "=" else not eq)
    if isinstance(e, Ite):
        return evaluate(e.then, env) if _truth(evaluate(e.cond, env)) else evaluate(e.other, env)
    if isinstance(e, MinMax):
        a, b = evaluate(e.left, env), evaluate(e.right, env)
        if type(a) is not type(b):
            raise EvaluationError(f"{e.op} over mixed value types {a!r}, {b!r}")
        return min(a, b) if e.op == "min" else max(a, b)
    raise TypeError(f"not an expression: {e!r}")


def compile_expr(e: Expr) -> Callable[[Mapping[str, Value]], Value]:
    """Turn ``e`` into a closure; same semantics as :func:`evaluate`, faster."""
    if isinstance(e, Lit):
        v = e.value
        return lambda env: v
    if isinstance(e, Ref):
        name = e.name
        return lambda env: env[name]
    if isinstance(e, Not):
        f = compile_expr(e.arg)
        return lambda env: 0 if _truth(f(env)) else 1
    if isinstance(e, And):
        f, g = compile_expr(e.left), compile_expr(e.right)
        return lambda env: 1 if _truth(f(env)) and _truth(g(env)) else 0
    if isinstance(e, Or):
        f, g = compile_expr(e.left), compile_expr(e.right)
        return lambda env: 1 if _truth(f(env)) or _truth(g(env)) else 0
    if isinstance(e, (Cmp, Ite, MinMax)):
        return lambda env: evaluate(e, env)
    raise TypeError(f"not an expression: {e!r}")


# -- events -------------------------------------------------------------------


@dataclass(frozen=True)
class Prim:
    """Primitive event ``var = value``."""

    var: str
    value: Value


@dataclass(frozen=True)
class ENot:
    arg: "Event"


@dataclass(frozen=True)
class EAnd:
    left: "Event"
    right: "Event"


@dataclass(frozen=True)
class EOr:
    left: "Event"
    right: "Event"


Event = Union[Prim, ENot, EAnd, EOr]


def event_vars(ev: Event) -> frozenset[str]:
    if isinstance(ev, Prim):
        return frozenset((ev.var,))
    if isinstance(ev, ENot):
        return event_vars(ev.arg)
    return event_vars(ev.left) | event_vars(ev.right)


def event_prims(ev: Event) -> list[Prim]:
    if isinstance(ev, Prim):
        return [ev]
    if isinstance(ev, ENot):
        return event_prims(ev.arg)
    return event_prims(ev.left) + event_prims(ev.right)


def eval_event(ev: Event, world: Mapping[str, Value]) -> bool:
    if isinstance(ev, Prim):
        return world[ev.var] == ev.value
    if isinstance(ev, ENot):
        return not eval_event(ev.arg, world)
    if isinstance(ev, EAnd):
        return eval_event(ev.left, world) and eval_event(ev.right, world)
    if isinstance(ev, EOr):
        return eval_event(ev.left, world) or eval_event(ev.right, world)
    raise TypeError(f"not an event: {ev!r}")


def negate(ev: Event) -> Event:
    """``¬ev``, collapsing a double negation."""
    return ev.arg if isinstance(ev, ENot) else ENot(ev)


def conj(*events: Event) -> Event:
    if not events:
        raise ValueError("empty conjunction of events")
    out = events[0]
    for e in events[1:]:
        out = EAnd(out, e)
    return out


def disj(*events: Event) -> Event:
    if not events:
        raise ValueError("empty disjunction of events")
    out = events[0]
    for e in events[1:]:
        out = EOr(out, e)
    return out
