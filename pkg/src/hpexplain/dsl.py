"""The ``.scm-model`` text format.

A document is a sequence of statements, one per line (a statement may span
lines while a parenthesis or brace is open)::

    version 1
    # forest fire
    exogenous U_L : bool
    exogenous U_MD : bool
    endogenous L : bool = U_L
    endogenous MD : bool = U_MD
    endogenous FF : bool = L | MD
    epistemic K : all
    event fire : FF
    contrast why : FF vs !FF

Grammar (informal EBNF)::

    document   = "version" INT { statement }
    statement  = "exogenous" NAME ":" domain
               | "endogenous" NAME ":" domain "=" expr
               | "epistemic" NAME ":" ( "all" | expr | "{" tuple { "," tuple } "}" )
               | "event" NAME ":" event
               | "contrast" NAME ":" event "vs" event
    domain     = "bool" | "{" value { "," value } "}"
    tuple      = "(" NAME "=" value { "," NAME "=" value } ")"
    expr       = conj { "|" conj }
    conj       = cmp { "&" cmp }
    cmp        = unary [ ( "=" | "!=" ) unary ]
    unary      = "!" unary | atom
    atom       = INT | NAME | "(" expr ")" | ("ite" "(" expr "," expr "," expr ")")
               | ( "min" | "max" ) "(" expr "," expr ")"

Events use the same connectives over primitive events ``X = v`` /
``X != v`` on endogenous variables; for a boolean ``X``, a bare ``X`` means
``X = 1`` and ``!X`` means ``X = 0``.  ``¬``, ``∧`` and ``∨`` are accepted
as aliases of ``!``, ``&`` and ``|``.

Every diagnostic carries a line and column.
"""

from __future__ import annotations

import json
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Optional

from .expr import (
    And,
    Cmp,
    EAnd,
    ENot,
    EOr,
    EvaluationError,
    Event,
    Expr,
    Ite,
    Lit,
    MinMax,
    Not,
    Or,
    Prim,
    Ref,
    Value,
    _truth,
    evaluate,
    references,
)
from .model import (
    BOOL,
    ENDOGENOUS,
    EXOGENOUS,
    Assignment,
    CausalModel,
    Conjunction,
    EpistemicState,
    ModelError,
    Variable,
    find_cycle,
)

VERSION = 1
KEYWORDS = {"version", "exogenous", "endogenous", "epistemic", "event", "contrast", "bool", "all", "ite", "min", "max", "vs"}


@dataclass(frozen=True, order=True)
class Span:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    span: Span
    message: str

    def __str__(self) -> str:
        return f"line {self.span.line}, column {self.span.column}: {self.message}"


class ParseError(ModelError):
    def __init__(self, diagnostics):
        self.diagnostics = tuple(sorted(diagnostics, key=lambda d: d.span))
        super().__init__("\n".join(str(d) for d in self.diagnostics))


# -- lexer ------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<int>-?\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>!=|[!&|=(){},:¬∧∨])
    """,
    re.VERBOSE,
)
_ALIASES = {"¬": "!", "∧": "&", "∨": "|"}


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "nl", "eof"
    text: str
    span: Span


def tokenize(text: str) -> list[Token]:
    """Tokens with newlines kept only at bracket depth zero."""
    out: list[Token] = []
    line, col, pos, depth = 1, 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError([Diagnostic(Span(line, col), f"unexpected character {text[pos]!r}")])
        kind, lexeme = m.lastgroup, m.group()
        span = Span(line, col)
        if kind == "nl":
            if depth == 0:
                out.append(Token("nl", "\n", span))
            line, col = line + 1, 1
        else:
            if kind == "op":
                lexeme = _ALIASES.get(lexeme, lexeme)
                depth += lexeme in "({"
                depth -= lexeme in ")}"
            if kind not in ("ws", "comment"):
                out.append(Token(kind, lexeme, span))
            col += len(m.group())
        pos = m.end()
    out.append(Token("eof", "", Span(line, col)))
    return out


# -- document -----------------------------------------------------------------------


@dataclass(frozen=True)
class EpistemicForm:
    """How an epistemic state was written: ``all``, a constraint, or a list."""

    kind: str  # "all" | "constraint" | "list"
    constraint: Optional[Expr] = None
    contexts: tuple[Assignment, ...] = ()


@dataclass(frozen=True)
class ModelDocument:
    model: CausalModel
    epistemic_forms: Mapping[str, EpistemicForm] = field(default_factory=dict)
    events: Mapping[str, Event] = field(default_factory=dict)
    contrasts: Mapping[str, tuple[Event, Event]] = field(default_factory=dict)
    version: int = VERSION
    spans: Mapping[str, Span] = field(default_factory=dict, compare=False)

    def epistemic(self, name: str) -> EpistemicState:
        try:
            form = self.epistemic_forms[name]
        except KeyError:
            raise ModelError(f"no epistemic state named {name!r}") from None
        return resolve_epistemic(self.model, form)


def resolve_epistemic(model: CausalModel, form: EpistemicForm) -> EpistemicState:
    if form.kind == "all":
        return EpistemicState(model.contexts())
    if form.kind == "list":
        return EpistemicState(form.contexts)
    picked = tuple(u for u in model.contexts() if _truth(evaluate(form.constraint, u)))
    if not picked:
        raise ModelError("epistemic constraint is satisfied by no context")
    return EpistemicState(picked)


# -- parser -------------------------------------------------------------------------------


class _Symbols:
    def __init__(self, variables: Mapping[str, Variable]):
        self.var = dict(variables)
        self.values = {v for var in variables.values() for v in var.domain if isinstance(v, str)}


class _Parser:
    def __init__(self, tokens: list[Token], symbols: Optional[_Symbols] = None):
        self.toks = tokens
        self.i = 0
        self.sym = symbols
        self.diags: list[Diagnostic] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "name") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.describe(self.tok)}")
        return self.advance()

    def expect_name(self, what: str = "a name") -> Token:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            self.fail(f"expected {what}, found {self.describe(t)}")
        return self.advance()

    @staticmethod
    def describe(t: Token) -> str:
        return {"eof": "end of input", "nl": "end of line"}.get(t.kind, repr(t.text))

    def fail(self, message: str, span: Optional[Span] = None):
        raise ParseError([Diagnostic(span or self.tok.span, message)])

    def end_statement(self):
        if self.tok.kind not in ("nl", "eof"):
            self.fail(f"unexpected {self.describe(self.tok)} after statement")
        while self.tok.kind == "nl":
            self.advance()

    # values and domains
    def value(self) -> Value:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return int(t.text)
        if t.kind == "name" and t.text not in KEYWORDS:
            self.advance()
            return t.text
        self.fail(f"expected a value, found {self.describe(t)}")

    def domain(self) -> tuple[Value, ...]:
        if self.at("bool"):
            self.advance()
            return BOOL
        start = self.expect("{").span
        vals = [self.value()]
        while self.at(","):
            self.advance()
            vals.append(self.value())
        self.expect("}")
        if len(set(vals)) != len(vals):
            self.fail("repeated value in domain", start)
        return tuple(vals)

    # expressions
    def expr(self) -> Expr:
        e = self.conj()
        while self.at("|"):
            self.advance()
            e = Or(e, self.conj())
        return e

    def conj(self) -> Expr:
        e = self.cmp()
        while self.at("&"):
            self.advance()
            e = And(e, self.cmp())
        return e

    def cmp(self) -> Expr:
        left = self.unary()
        if self.at("=") or self.at("!="):
            op = self.advance().text
            span = self.tok.span
            right = self.unary()
            self.check_comparison(left, right, span)
            return Cmp(op, left, right)
        return left

    def check_comparison(self, left: Expr, right: Expr, span: Span):
        for a, b in ((left, right), (right, left)):
            if isinstance(a, Ref) and isinstance(b, Lit) and a.name in self.sym.var:
                if b.value not in self.sym.var[a.name].domain:
                    self.diags.append(Diagnostic(span, f"value {b.value!r} is outside the domain of {a.name}"))

    def unary(self) -> Expr:
        if self.at("!"):
            self.advance()
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Lit(int(t.text))
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("ite"):
            self.advance()
            self.expect("(")
            c = self.expr()
            self.expect(",")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return Ite(c, a, b)
        if self.at("min") or self.at("max"):
            op = self.advance().text
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return MinMax(op, a, b)
        name = self.expect_name("an expression")
        if name.text in self.sym.var:
            return Ref(name.text)
        if name.text in self.sym.values:
            return Lit(name.text)
        self.fail(f"unknown variable {name.text}", name.span)

    # events
    def event(self) -> Event:
        e = self.event_conj()
        while self.at("|"):
            self.advance()
            e = EOr(e, self.event_conj())
        return e

    def event_conj(self) -> Event:
        e = self.event_unary()
        while self.at("&"):
            self.advance()
            e = EAnd(e, self.event_unary())
        return e

    def event_unary(self) -> Event:
        if self.at("!"):
            self.advance()
            t = self.tok
            if t.kind == "name" and t.text not in KEYWORDS and not self._followed_by_cmp():
                var = self.event_var()
                if not var.is_bool:
                    self.fail(f"non-boolean variable {var.name} needs an explicit value", t.span)
                return Prim(var.name, 0)
            return ENot(self.event_unary())
        return self.event_atom()

    def _followed_by_cmp(self) -> bool:
        nxt = self.toks[self.i + 1]
        return nxt.kind == "op" and nxt.text in ("=", "!=")

    def event_var(self) -> Variable:
        t = self.expect_name("a variable")
        var = self.sym.var.get(t.text)
        if var is None:
            self.fail(f"unknown variable {t.text}", t.span)
        if var.kind == EXOGENOUS:
            self.fail(f"exogenous variable in event: {t.text}", t.span)
        return var

    def event_atom(self) -> Event:
        if self.at("("):
            self.advance()
            e = self.event()
            self.expect(")")
            return e
        start = self.tok.span
        var = self.event_var()
        if self.at("=") or self.at("!="):
            op = self.advance().text
            vspan = self.tok.span
            v = self.value()
            if v not in var.domain:
                self.fail(f"out-of-domain value {v!r} for {var.name}", vspan)
            prim = Prim(var.name, v)
            return prim if op == "=" else ENot(prim)
        if not var.is_bool:
            self.fail(f"non-boolean variable {var.name} needs an explicit value", start)
        return Prim(var.name, 1)

    # contexts
    def context_tuple(self, exogenous: Mapping[str, Variable]) -> Assignment:
        start = self.expect("(").span
        items: dict[str, Value] = {}
        while True:
            t = self.expect_name("an exogenous variable")
            var = exogenous.get(t.text)
            if var is None:
                self.fail(f"{t.text} is not an exogenous variable", t.span)
            if t.text in items:
                self.fail(f"{t.text} assigned twice", t.span)
            self.expect("=")
            vspan = self.tok.span
            v = self.value()
            if v not in var.domain:
                self.fail(f"out-of-domain value {v!r} for {t.text}", vspan)
            items[t.text] = v
            if not self.at(","):
                break
            self.advance()
        self.expect(")")
        missing = sorted(set(exogenous) - set(items))
        if missing:
            self.fail("context leaves " + ", ".join(missing) + " unset", start)
        return Assignment(items)

    def context_list(self, exogenous: Mapping[str, Variable]) -> tuple[Assignment, ...]:
        self.expect("{")
        out = [self.context_tuple(exogenous)]
        while self.at(","):
            self.advance()
            out.append(self.context_tuple(exogenous))
        self.expect("}")
        return tuple(out)


def _statements(tokens: list[Token]) -> list[list[Token]]:
    out, cur = [], []
    for t in tokens:
        if t.kind in ("nl", "eof"):
            if cur:
                out.append(cur + [Token("eof", "", t.span)])
            cur = []
        else:
            cur.append(t)
    return out


def parse_document(text: str) -> ModelDocument:
    """Parse a model file; raises :class:`ParseError` with every diagnostic found."""
    stmts = _statements(tokenize(text))
    diags: list[Diagnostic] = []
    if not stmts or stmts[0][0].text != "version":
        span = stmts[0][0].span if stmts else Span(1, 1)
        raise ParseError([Diagnostic(span, "missing version header")])

    # pass 1: header and declarations, so equations may refer forward
    variables: dict[str, Variable] = {}
    spans: dict[str, Span] = {}
    version = VERSION
    for stmt in stmts:
        p = _Parser(stmt)
        head = stmt[0]
        try:
            if head.text == "version":
                p.advance()
                t = p.tok
                if t.kind != "int":
                    p.fail("expected a version number")
                version = int(p.advance().text)
                if version != VERSION:
                    p.fail(f"unsupported version {version}", t.span)
                p.end_statement()
            elif head.text in (EXOGENOUS, ENDOGENOUS):
                p.advance()
                name = p.expect_name("a variable name")
                p.expect(":")
                dom = p.domain()
                if name.text in variables:
                    p.fail(f"duplicate variable {name.text}", name.span)
                variables[name.text] = Variable(name.text, head.text, dom)
                spans[name.text] = name.span
        except ParseError as exc:
            diags.extend(exc.diagnostics)
    if diags:
        raise ParseError(diags)

    sym = _Symbols(variables)
    exogenous = {n: v for n, v in variables.items() if v.kind == EXOGENOUS}
    equations: dict[str, Expr] = {}
    forms: dict[str, EpistemicForm] = {}
    events: dict[str, Event] = {}
    contrasts: dict[str, tuple[Event, Event]] = {}
    named: dict[str, Span] = {}

    def claim(t: Token, table: str):
        key = f"{table}:{t.text}"
        if key in named:
            raise ParseError([Diagnostic(t.span, f"duplicate {table} {t.text}")])
        named[key] = t.span

    # pass 2: bodies
    for stmt in stmts:
        p = _Parser(stmt, sym)
        head = stmt[0]
        try:
            if head.text in ("version", EXOGENOUS):
                continue
            if head.text == ENDOGENOUS:
                p.advance()
                name = p.expect_name()
                p.expect(":")
                p.domain()
                p.expect("=")
                equations[name.text] = p.expr()
                p.end_statement()
            elif head.text == "epistemic":
                p.advance()
                name = p.expect_name()
                claim(name, "epistemic")
                p.expect(":")
                if p.at("all"):
                    p.advance()
                    form = EpistemicForm("all")
                elif p.at("{"):
                    form = EpistemicForm("list", contexts=p.context_list(exogenous))
                else:
                    espan = p.tok.span
                    e = p.expr()
                    bad = sorted(r for r in references(e) if variables[r].kind != EXOGENOUS)
                    if bad:
                        p.fail("epistemic constraint mentions endogenous " + ", ".join(bad), espan)
                    form = EpistemicForm("constraint", constraint=e)
                p.end_statement()
                forms[name.text] = form
            elif head.text == "event":
                p.advance()
                name = p.expect_name()
                claim(name, "event")
                p.expect(":")
                events[name.text] = p.event()
                p.end_statement()
            elif head.text == "contrast":
                p.advance()
                name = p.expect_name()
                claim(name, "contrast")
                p.expect(":")
                fact = p.event()
                p.expect("vs")
                foil = p.event()
                p.end_statement()
                contrasts[name.text] = (fact, foil)
            else:
                p.fail(f"unknown statement {head.text!r}", head.span)
        except ParseError as exc:
            diags.extend(exc.diagnostics)
        diags.extend(p.diags)
    spans.update(named)
    if diags:
        raise ParseError(diags)

    model = CausalModel(variables.values(), equations)
    diags.extend(_model_diagnostics(model, spans))
    if diags:
        raise ParseError(diags)
    doc = ModelDocument(model, forms, events, contrasts, version, spans)
    for name, form in forms.items():
        try:
            resolve_epistemic(model, form)
        except (ModelError, EvaluationError) as exc:
            diags.append(Diagnostic(spans[f"epistemic:{name}"], f"epistemic {name}: {exc}"))
    if diags:
        raise ParseError(diags)
    return doc


def _model_diagnostics(model: CausalModel, spans: Mapping[str, Span]) -> list[Diagnostic]:
    report = model.validate()
    if report.ok:
        return []
    cycle = find_cycle(model) if not any("unknown" in v or "missing" in v for v in report.violations) else None
    out = []
    if cycle:
        where = ", ".join(f"{n} at {spans[n]}" for n in sorted(cycle))
        for n in sorted(cycle):
            out.append(Diagnostic(spans[n], f"cyclic dependency through {where}"))
    for v in report.violations:
        if v.startswith("cyclic dependency"):
            continue
        m = re.search(r"\b(?:for|of) (\w+)", v)
        span = spans.get(m.group(1), Span(1, 1)) if m else Span(1, 1)
        out.append(Diagnostic(span, v))
    return out


def parse_model(text: str) -> CausalModel:
    return parse_document(text).model


def _parse_fragment(text: str, model: CausalModel, rule: str):
    p = _Parser(tokenize(text.replace("\n", " ")), _Symbols(model.var))
    out = getattr(p, rule)()
    p.end_statement()
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.describe(p.tok)}")
    if p.diags:
        raise ParseError(p.diags)
    return out


def parse_event(text: str, model: CausalModel) -> Event:
    """Parse a boolean formula over endogenous primitive events."""
    return _parse_fragment(text, model, "event")


def parse_context(text: str, model: CausalModel) -> Assignment:
    """``(U_L=1, U_MD=0)``; the parentheses may be omitted."""
    text = text.strip()
    if not text.startswith("("):
        text = f"({text})"
    exo = {v.name: v for v in model.exogenous}
    p = _Parser(tokenize(text), _Symbols(model.var))
    u = p.context_tuple(exo)
    p.end_statement()
    return u


def parse_epistemic(text: str, model: CausalModel) -> EpistemicForm:
    """``all``, a constraint over exogenous variables, or ``{(..), (..)}``."""
    text = text.strip()
    if text == "all":
        return EpistemicForm("all")
    exo = {v.name: v for v in model.exogenous}
    if text.startswith("{"):
        return EpistemicForm("list", contexts=_list(text, model, exo))
    e = _parse_fragment(text, model, "expr")
    bad = sorted(r for r in references(e) if r not in exo)
    if bad:
        raise ParseError([Diagnostic(Span(1, 1), "epistemic constraint mentions endogenous " + ", ".join(bad))])
    return EpistemicForm("constraint", constraint=e)


def _list(text: str, model: CausalModel, exo) -> tuple[Assignment, ...]:
    p = _Parser(tokenize(text), _Symbols(model.var))
    out = p.context_list(exo)
    p.end_statement()
    return out


# -- canonical text -----------------------------------------------------------------------

_PREC = {Or: 1, And: 2, Cmp: 3, Not: 4}


def format_value(v: Value) -> str:
    return str(v)


def format_domain(domain) -> str:
    if tuple(domain) == BOOL:
        return "bool"
    return "{" + ", ".join(format_value(v) for v in domain) + "}"


def format_expr(e: Expr, prec: int = 0) -> str:
    """DSL text for ``e``; re-parses to the identical tree."""
    if isinstance(e, Lit):
        return format_value(e.value)
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, Ite):
        return f"ite({format_expr(e.cond)}, {format_expr(e.then)}, {format_expr(e.other)})"
    if isinstance(e, MinMax):
        return f"{e.op}({format_expr(e.left)}, {format_expr(e.right)})"
    mine = _PREC[type(e)]
    if isinstance(e, Not):
        text = "!" + format_expr(e.arg, mine)
    elif isinstance(e, Cmp):
        text = f"{format_expr(e.left, mine + 1)} {e.op} {format_expr(e.right, mine + 1)}"
    else:
        sym = "|" if isinstance(e, Or) else "&"
        text = f"{format_expr(e.left, mine)} {sym} {format_expr(e.right, mine + 1)}"
    return f"({text})" if mine < prec else text


def format_event_dsl(ev: Event, model: CausalModel, prec: int = 0) -> str:
    """DSL text for an event; re-parses to the identical tree."""
    if isinstance(ev, Prim):
        if model.var[ev.var].is_bool:
            return ev.var if ev.value == 1 else "!" + ev.var
        return f"{ev.var} = {format_value(ev.value)}"
    if isinstance(ev, ENot):
        inner = ev.arg
        if isinstance(inner, Prim) and not model.var[inner.var].is_bool:
            text = f"{inner.var} != {format_value(inner.value)}"
            return text
        return f"!({format_event_dsl(inner, model)})"
    mine = 1 if isinstance(ev, EOr) else 2
    sym = "|" if mine == 1 else "&"
    text = f"{format_event_dsl(ev.left, model, mine)} {sym} {format_event_dsl(ev.right, model, mine + 1)}"
    return f"({text})" if mine < prec else text


def _format_context(u: Mapping[str, Value]) -> str:
    return "(" + ", ".join(f"{n}={format_value(v)}" for n, v in u.items()) + ")"


def format_document(doc: ModelDocument) -> str:
    m = doc.model
    lines = [f"version {doc.version}"]
    for v in m.exogenous:
        lines.append(f"exogenous {v.name} : {format_domain(v.domain)}")
    for n in m.order:
        lines.append(f"endogenous {n} : {format_domain(m.domain(n))} = {format_expr(m.equation[n])}")
    for name in sorted(doc.epistemic_forms):
        form = doc.epistemic_forms[name]
        if form.kind == "all":
            body = "all"
        elif form.kind == "list":
            body = "{" + ", ".join(_format_context(u) for u in form.contexts) + "}"
        else:
            body = format_expr(form.constraint)
        lines.append(f"epistemic {name} : {body}")
    for name in sorted(doc.events):
        lines.append(f"event {name} : {format_event_dsl(doc.events[name], m)}")
    for name in sorted(doc.contrasts):
        fact, foil = doc.contrasts[name]
        lines.append(f"contrast {name} : {format_event_dsl(fact, m)} vs {format_event_dsl(foil, m)}")
    return "\n".join(lines) + "\n"


# -- human-readable rendering --------------------------------------------------------------


def format_literal(model: Optional[CausalModel], name: str, value: Value) -> str:
    """``X`` / ``¬X`` for boolean variables, ``X=v`` otherwise."""
    if value in (0, 1) and (model is None or model.var[name].is_bool):
        return name if value == 1 else "¬" + name
    return f"{name}={format_value(value)}"


def format_conjunction(c: Mapping[str, Value], model: Optional[CausalModel] = None) -> str:
    if not c:
        return "⊤"
    return " ∧ ".join(format_literal(model, n, c[n]) for n in sorted(c))


def format_pair(pair, model: Optional[CausalModel] = None) -> str:
    return f"<{format_conjunction(pair.fact, model)}, {format_conjunction(pair.foil, model)}>"


def format_event(ev: Event, model: Optional[CausalModel] = None, prec: int = 0) -> str:
    if isinstance(ev, Prim):
        return format_literal(model, ev.var, ev.value)
    if isinstance(ev, ENot):
        inner = format_event(ev.arg, model, 3)
        return "¬" + inner
    mine = 1 if isinstance(ev, EOr) else 2
    sym = " ∨ " if mine == 1 else " ∧ "
    text = format_event(ev.left, model, mine) + sym + format_event(ev.right, model, mine + 1)
    return f"({text})" if mine < prec else text


# -- structured form ---------------------------------------------------------------------

SCHEMA_MODEL = "hpexplain.model"


def document_to_structured(doc: ModelDocument) -> dict:
    m = doc.model
    epi = {}
    for name in sorted(doc.epistemic_forms):
        form = doc.epistemic_forms[name]
        entry: dict = {"form": form.kind}
        if form.kind == "constraint":
            entry["constraint"] = format_expr(form.constraint)
        if form.kind == "list":
            entry["contexts"] = [dict(u) for u in form.contexts]
        epi[name] = entry
    return {
        "schema": SCHEMA_MODEL,
        "version": doc.version,
        "variables": [
            {"name": v.name, "kind": v.kind, "domain": list(v.domain)} for v in m.variables
        ],
        "equations": {n: format_expr(m.equation[n]) for n in m.order},
        "epistemic": epi,
        "events": {n: format_event_dsl(doc.events[n], m) for n in sorted(doc.events)},
        "contrasts": {
            n: {"fact": format_event_dsl(f, m), "foil": format_event_dsl(g, m)}
            for n, (f, g) in sorted(doc.contrasts.items())
        },
    }


def document_from_structured(data: Mapping) -> ModelDocument:
    if data.get("schema") != SCHEMA_MODEL:
        raise ModelError(f"not a {SCHEMA_MODEL} document")
    if data.get("version") != VERSION:
        raise ModelError(f"unsupported version {data.get('version')!r}")
    lines = [f"version {data['version']}"]
    kinds = {v["name"]: v for v in data["variables"]}
    for v in data["variables"]:
        if v["kind"] == EXOGENOUS:
            lines.append(f"exogenous {v['name']} : {format_domain(tuple(v['domain']))}")
    for n, e in data["equations"].items():
        lines.append(f"endogenous {n} : {format_domain(tuple(kinds[n]['domain']))} = {e}")
    for n, entry in data["epistemic"].items():
        if entry["form"] == "all":
            body = "all"
        elif entry["form"] == "list":
            body = "{" + ", ".join(_format_context(u) for u in entry["contexts"]) + "}"
        else:
            body = entry["constraint"]
        lines.append(f"epistemic {n} : {body}")
    for n, e in data["events"].items():
        lines.append(f"event {n} : {e}")
    for n, c in data["contrasts"].items():
        lines.append(f"contrast {n} : {c['fact']} vs {c['foil']}")
    return parse_document("\n".join(lines) + "\n")


def dumps(data) -> str:
    """Stable JSON: sorted keys would scramble the schema's order, so insertion order is kept."""
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def serialize(obj, format: str = "text", model: Optional[CausalModel] = None) -> str:
    """Render a document, model, conjunction, pair or event as text or structured JSON."""
    from .contrastive import ContrastivePair

    if isinstance(obj, CausalModel):
        obj = ModelDocument(obj)
    if isinstance(obj, ModelDocument):
        return format_document(obj) if format == "text" else dumps(document_to_structured(obj))
    if isinstance(obj, ContrastivePair):
        if format == "text":
            return format_pair(obj, model)
        return dumps({"fact": dict(obj.fact), "foil": dict(obj.foil)})
    if isinstance(obj, Conjunction):
        return format_conjunction(obj, model) if format == "text" else dumps(dict(obj))
    if isinstance(obj, (Prim, ENot, EAnd, EOr)):
        return format_event(obj, model)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
