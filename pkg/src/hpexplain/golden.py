"""Golden-corpus regression: run every shipped fixture and diff against its expectations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .dsl import parse_document
from .model import ModelError
from .queries import run_query, strip_witnesses


@dataclass(frozen=True)
class FixtureOutcome:
    fixture: str
    query: str
    missing: tuple[str, ...]
    unexpected: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.missing and not self.unexpected


def default_corpus() -> Path:
    return Path(str(resources.files("hpexplain") / "corpus"))


def _key(entry: dict) -> str:
    return json.dumps(entry, sort_keys=True, ensure_ascii=False)


def run_fixture(path: Path) -> list[FixtureOutcome]:
    fixture = json.loads(path.read_text(encoding="utf-8"))
    model_path = path.parent / fixture["model"]
    if not model_path.exists():
        raise ModelError(f"{path.name}: missing model file {fixture['model']}")
    doc = parse_document(model_path.read_text(encoding="utf-8"))
    out = []
    for q in fixture["queries"]:
        got = {_key(e) for e in strip_witnesses(run_query(doc, q["query"])["results"])}
        want = {_key(e) for e in q["expected"]}
        out.append(FixtureOutcome(path.name, q["name"], tuple(sorted(want - got)), tuple(sorted(got - want))))
    return out


def run_corpus(directory: Optional[Path] = None) -> list[FixtureOutcome]:
    directory = Path(directory) if directory is not None else default_corpus()
    fixtures = sorted(directory.glob("*.golden.json"))
    if not fixtures:
        raise ModelError(f"no golden fixtures in {directory}")
    out: list[FixtureOutcome] = []
    for f in fixtures:
        out.extend(run_fixture(f))
    return out
