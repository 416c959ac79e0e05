"""Command-line entry point.

Exit codes: 0 on success, 1 when the theorem verifier finds a counterexample
or a golden fixture differs, 2 on any input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .dsl import ModelDocument, dumps, format_conjunction, parse_document, serialize
from .explanations import Definition
from .golden import run_corpus
from .model import ModelError
from .queries import CONTRAST_DEFINITIONS, render_text, resolve_context, run_causes, run_contrast, run_explain
from .verify import COUNTEREXAMPLE, CONDITION_NOT_MET, EQUAL, RandomModelParams, verify_theorems

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _load(path: str) -> ModelDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc.strerror}") from None
    return parse_document(text)


def _emit(result: dict, fmt: str) -> None:
    sys.stdout.write(dumps(result) if fmt == "structured" else render_text(result))


def cmd_validate(args) -> int:
    doc = _load(args.model)
    if args.format == "structured":
        sys.stdout.write(serialize(doc, "structured"))
    else:
        m = doc.model
        print(f"ok: {len(m.exogenous)} exogenous, {len(m.endogenous)} endogenous, {len(m.contexts())} contexts")
    return EXIT_OK


def cmd_solve(args) -> int:
    doc = _load(args.model)
    m = doc.model
    u = resolve_context(doc, args.context)
    iv = resolve_context_like(doc, args.intervene) if args.intervene else None
    world = m.solve(u, iv)
    if args.format == "structured":
        sys.stdout.write(dumps({n: world[n] for n in m.endogenous_names}))
    else:
        print(format_conjunction({n: world[n] for n in m.endogenous_names}, m))
    return EXIT_OK


def resolve_context_like(doc: ModelDocument, text: str):
    """``X=1, Y=0`` over endogenous variables, for interventions."""
    from .model import Conjunction, check_intervention

    items = {}
    for part in text.split(","):
        name, _, value = part.partition("=")
        name, value = name.strip(), value.strip()
        if not name or not value:
            raise ModelError(f"malformed assignment {part.strip()!r}")
        var = doc.model.var.get(name)
        if var is None:
            raise ModelError(f"unknown variable {name}")
        items[name] = int(value) if value.lstrip("-").isdigit() else value
    iv = Conjunction(items)
    check_intervention(doc.model, iv)
    return iv


def cmd_causes(args) -> int:
    _emit(run_causes(_load(args.model), args.kind, args.context, args.event, override=args.no_limits), args.format)
    return EXIT_OK


def cmd_explain(args) -> int:
    doc = _load(args.model)
    _emit(run_explain(doc, args.definition, args.epistemic, args.event, override=args.no_limits), args.format)
    return EXIT_OK


def cmd_contrast(args) -> int:
    doc = _load(args.model)
    fact, foil = args.fact, args.foil
    if args.contrast:
        if args.contrast not in doc.contrasts:
            raise ModelError(f"no contrast named {args.contrast!r}")
        from .dsl import format_event_dsl

        f, g = doc.contrasts[args.contrast]
        fact, foil = format_event_dsl(f, doc.model), format_event_dsl(g, doc.model)
    if fact is None or foil is None:
        raise ModelError("contrast needs --fact and --foil, or --contrast")
    result = run_contrast(doc, args.definition, args.epistemic, fact, foil, override=args.no_limits)
    _emit(result, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    params = RandomModelParams(seed=args.seed)
    variants = [args.variant] if args.variant else [1, 2, 3]
    failed = False
    reports = []
    for v in variants:
        rep = verify_theorems(params, args.trials, v)
        reports.append(rep.to_structured(include_equal=args.all_trials))
        failed |= bool(rep.counterexamples)
        if args.format == "text":
            print(
                f"variant {v}: {rep.count(EQUAL)} equal, {rep.count(COUNTEREXAMPLE)} counterexamples, "
                f"{rep.count(CONDITION_NOT_MET)} condition-not-met (seed {params.seed}, {args.trials} trials)"
            )
            for t in rep.counterexamples[: args.show]:
                s = t.to_structured()
                print(f"  counterexample: trial {s['trial']} ({s['foil_mode']} foil), model {s['model_digest']}")
                for flag in s["direct"]:
                    print(f"    {flag}: direct {s['direct'][flag]} vs modular {s['modular'][flag]}")
    if args.format == "structured":
        sys.stdout.write(dumps(reports if len(reports) > 1 else reports[0]))
    return EXIT_FAIL if failed else EXIT_OK


def cmd_golden(args) -> int:
    outcomes = run_corpus(Path(args.corpus) if args.corpus else None)
    for o in outcomes:
        status = "PASS" if o.passed else "FAIL"
        print(f"{status} {o.fixture} {o.query}")
        for e in o.missing:
            print(f"    missing:    {e}")
        for e in o.unexpected:
            print(f"    unexpected: {e}")
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hpexplain", description="Causes and (contrastive) explanations in finite causal models.")
    p.add_argument("--no-limits", action="store_true", help="disable the soft size caps")
    sub = p.add_subparsers(dest="command", required=True)

    def with_model(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("model", help="path to a .scm-model file")
        sp.add_argument("--format", choices=("text", "structured"), default="text")
        return sp

    sp = with_model("validate", "parse and validate a model file")
    sp.set_defaults(func=cmd_validate)

    sp = with_model("solve", "print the actual world of a context")
    sp.add_argument("--context", required=True)
    sp.add_argument("--intervene", help="endogenous assignments, e.g. 'L=0,MD=1'")
    sp.set_defaults(func=cmd_solve)

    sp = with_model("causes", "enumerate causes in one context")
    sp.add_argument("--kind", choices=("actual", "weak", "weak-actual", "sufficient"), default="actual")
    sp.add_argument("--context", required=True)
    sp.add_argument("--event", required=True, help="event name from the file or an inline formula")
    sp.set_defaults(func=cmd_causes)

    sp = with_model("explain", "enumerate explanations relative to an epistemic state")
    sp.add_argument("--definition", choices=[d.value for d in Definition], required=True)
    sp.add_argument("--epistemic", required=True, help="name, 'all', a constraint, or a context list")
    sp.add_argument("--event", required=True)
    sp.set_defaults(func=cmd_explain)

    sp = with_model("contrast", "enumerate contrastive explanations")
    sp.add_argument("--definition", choices=CONTRAST_DEFINITIONS, required=True)
    sp.add_argument("--epistemic", required=True)
    sp.add_argument("--fact")
    sp.add_argument("--foil")
    sp.add_argument("--contrast", help="name of a contrast declared in the file")
    sp.set_defaults(func=cmd_contrast)

    sp = sub.add_parser("verify-theorems", help="compare direct and modular contrastive definitions on random models")
    sp.add_argument("--variant", type=int, choices=(1, 2, 3))
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--show", type=int, default=5, help="counterexamples to print per variant")
    sp.add_argument("--all-trials", action="store_true", help="include equal trials in structured output")
    sp.add_argument("--format", choices=("text", "structured"), default="text")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("golden", help="run the golden corpus")
    sp.add_argument("corpus", nargs="?", help="corpus directory (default: the bundled corpus)")
    sp.set_defaults(func=cmd_golden)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "trials", 1) < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (ModelError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
