"""Query execution with structured (JSON-ready) results.

The CLI and the golden corpus share these functions, so a golden fixture's
expected block is exactly the ``results`` list a query prints with
``--format structured``, minus witness fields.
"""

from __future__ import annotations

from typing import Optional

from .causes import CauseKind, cause_witness, enumerate_causes
from .contrastive import (
    FactFoil,
    enumerate_borner_contrastive,
    enumerate_miller,
    enumerate_modified_hp_contrastive,
    enumerate_modular,
)
from .dsl import (
    ModelDocument,
    format_conjunction,
    format_event,
    format_pair,
    parse_context,
    parse_epistemic,
    parse_event,
    resolve_epistemic,
)
from .explanations import Base, Definition, enumerate_explanations
from .expr import Event
from .model import Assignment, EpistemicState, ModelError

SCHEMA_RESULT = "hpexplain.result"
WITNESS_FIELDS = ("witness", "side_condition", "intervention", "support")
CONTRAST_DEFINITIONS = ("miller", "modified-hp", "borner") + tuple(f"modular:{b.value}" for b in Base)


def resolve_event(doc: ModelDocument, text: str) -> Event:
    """A named event of the document, or an inline formula."""
    if text in doc.events:
        return doc.events[text]
    return parse_event(text, doc.model)


def resolve_state(doc: ModelDocument, text: str) -> EpistemicState:
    if text in doc.epistemic_forms:
        return doc.epistemic(text)
    return resolve_epistemic(doc.model, parse_epistemic(text, doc.model))


def resolve_context(doc: ModelDocument, text: str) -> Assignment:
    return parse_context(text, doc.model)


def _envelope(query: dict, results: list) -> dict:
    return {"schema": SCHEMA_RESULT, "version": 1, "query": query, "results": results}


def run_causes(doc: ModelDocument, kind: str, context: str, event: str, *, override: bool = False) -> dict:
    m = doc.model
    kind_ = CauseKind.parse(kind)
    u = resolve_context(doc, context)
    ev = resolve_event(doc, event)
    results = []
    for c in enumerate_causes(m, u, ev, kind_, override=override):
        w = cause_witness(m, u, c, ev, kind_)
        entry = {"cause": format_conjunction(c, m)}
        if w.contingency is not None:
            entry["witness"] = {
                "contingency": format_conjunction(w.contingency, m),
                "alternative": format_conjunction(w.alternative, m),
            }
        else:
            entry["witness"] = {"part_of": format_conjunction(w.part_of, m)}
        results.append(entry)
    query = {
        "command": "causes",
        "kind": kind_.value,
        "context": dict(u),
        "event": format_event(ev, m),
    }
    return _envelope(query, results)


def run_explain(doc: ModelDocument, definition: str, epistemic: str, event: str, *, override: bool = False) -> dict:
    m = doc.model
    d = Definition(definition)
    k = resolve_state(doc, epistemic)
    ev = resolve_event(doc, event)
    results = []
    for r in enumerate_explanations(m, k, ev, d, override=override):
        entry: dict = {"explanation": format_conjunction(r.explanation, m)}
        if d is Definition.MODIFIED_HP:
            entry["nontrivial"] = r.nontrivial
        if d is Definition.BORNER:
            entry.update(potential=r.potential, actual=r.actual, parsimonious=r.parsimonious)
            entry["side_condition"] = format_conjunction(r.side_condition, m)
        results.append(entry)
    query = {
        "command": "explain",
        "definition": d.value,
        "epistemic_size": len(k),
        "event": format_event(ev, m),
    }
    return _envelope(query, results)


def run_contrast(doc: ModelDocument, definition: str, epistemic: str, fact: str, foil: str, *, override: bool = False) -> dict:
    m = doc.model
    if definition not in CONTRAST_DEFINITIONS:
        raise ModelError(f"unknown contrastive definition {definition!r}")
    k = resolve_state(doc, epistemic)
    ff = FactFoil(resolve_event(doc, fact), resolve_event(doc, foil))
    if definition == "miller":
        res = enumerate_miller(m, k, ff, override=override)
    elif definition == "modified-hp":
        res = enumerate_modified_hp_contrastive(m, k, ff, override=override)
    elif definition == "borner":
        res = enumerate_borner_contrastive(m, k, ff, override=override)
    else:
        res = enumerate_modular(m, k, ff, Base(definition.split(":", 1)[1]), override=override)
    results = []
    for r in res:
        entry: dict = {"pair": format_pair(r.pair, m)}
        if definition == "modified-hp":
            entry["nontrivial"] = r.nontrivial
        if definition == "borner":
            entry.update(potential=r.potential, actual=r.actual, parsimonious=r.parsimonious)
            s, sp = r.side_condition
            entry["side_condition"] = [format_conjunction(s, m), format_conjunction(sp, m)]
        if r.intervention is not None:
            entry["intervention"] = format_conjunction(r.intervention, m)
        results.append(entry)
    query = {
        "command": "contrast",
        "definition": definition,
        "epistemic_size": len(k),
        "fact": format_event(ff.fact, m),
        "foil": format_event(ff.foil, m),
    }
    return _envelope(query, results)


def strip_witnesses(entries: list) -> list:
    return [{k: v for k, v in e.items() if k not in WITNESS_FIELDS} for e in entries]


def render_text(result: dict) -> str:
    """One line per result: the conjunction or pair, then any set flags."""
    lines = []
    for e in result["results"]:
        head = e.get("cause") or e.get("explanation") or e.get("pair")
        flags = [k for k in ("nontrivial", "potential", "actual", "parsimonious") if e.get(k)]
        if "nontrivial" in e and not e["nontrivial"]:
            flags.append("trivial")
        lines.append(head + (f"  [{', '.join(flags)}]" if flags else ""))
    if not lines:
        lines.append("(none)")
    return "\n".join(lines) + "\n"


def run_query(doc: ModelDocument, query: dict, *, override: bool = False) -> Optional[dict]:
    """Dispatch a golden-corpus query description."""
    cmd = query["command"]
    if cmd == "causes":
        return run_causes(doc, query["kind"], query["context"], query["event"], override=override)
    if cmd == "explain":
        return run_explain(doc, query["definition"], query["epistemic"], query["event"], override=override)
    if cmd == "contrast":
        return run_contrast(doc, query["definition"], query["epistemic"], query["fact"], query["foil"], override=override)
    raise ModelError(f"unknown query command {cmd!r}")
