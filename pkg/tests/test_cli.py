import json
import shutil

import pytest

from conftest import CORPUS
from hpexplain.cli import main
from hpexplain.golden import run_corpus


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def path(name):
    return str(CORPUS / f"{name}.scm-model")


def test_explain_text(capsys):
    code, out, _ = run(capsys, "explain", path("example1"), "--definition", "modified-hp", "--epistemic", "K", "--event", "fire")
    assert code == 0
    assert out.splitlines() == ["FF  [trivial]", "L  [nontrivial]", "MD  [nontrivial]"]


def test_causes_structured(capsys):
    code, out, _ = run(
        capsys, "causes", path("example1"), "--kind", "actual", "--context", "U_L=1, U_MD=1", "--event", "FF", "--format", "structured"
    )
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == "hpexplain.result"
    assert [r["cause"] for r in data["results"]] == ["FF", "L ∧ MD"]


def test_structured_output_is_deterministic(capsys):
    argv = ("contrast", path("example5"), "--definition", "modular:borner-potential", "--epistemic", "K", "--contrast", "why", "--format", "structured")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_contrast_with_inline_events(capsys):
    code, out, _ = run(
        capsys, "contrast", path("example5"), "--definition", "modular:modified-hp", "--epistemic", "U_L & (!U_MD | U_B)",
        "--fact", "FF", "--foil", "!FF",
    )
    assert code == 0
    assert set(out.split("\n")) - {""} == {"<FF, ¬FF>", "<L, ¬L>", "<MD, ¬MD>"}


def test_validate_and_solve(capsys):
    assert run(capsys, "validate", path("example4"))[1].startswith("ok: 4 exogenous, 7 endogenous, 16 contexts")
    code, out, _ = run(capsys, "solve", path("example2"), "--context", "U_L=0,U_MD=1,U_B=1", "--intervene", "B=0")
    assert (code, out.strip()) == (0, "¬B ∧ ¬FF ∧ ¬L ∧ MD")


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (("explain", "missing.scm-model", "--definition", "original-hp", "--epistemic", "all", "--event", "FF"), "cannot read"),
        (("explain", path("example1"), "--definition", "original-hp", "--epistemic", "K", "--event", "U_L"), "exogenous variable in event"),
        (("causes", path("example1"), "--context", "U_L=1", "--event", "FF"), "unset"),
        (("contrast", path("example5"), "--definition", "miller", "--epistemic", "K"), "--fact"),
    ],
)
def test_input_errors_exit_2(capsys, argv, fragment):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert fragment in err


def test_unknown_subcommand_exits_2(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_positioned_diagnostic_on_stderr(capsys, tmp_path):
    bad = tmp_path / "cycle.scm-model"
    bad.write_text("version 1\nexogenous U : bool\nendogenous A : bool = B\nendogenous B : bool = A\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert "line 3, column 12" in err and "line 4, column 12" in err


def test_golden_detects_differences(capsys, tmp_path):
    shutil.copy(CORPUS / "example1.scm-model", tmp_path)
    fixture = json.loads((CORPUS / "example1.golden.json").read_text(encoding="utf-8"))
    (tmp_path / "example1.golden.json").write_text(json.dumps(fixture), encoding="utf-8")
    assert run(capsys, "golden", str(tmp_path))[0] == 0
    fixture["queries"][2]["expected"].pop()
    (tmp_path / "example1.golden.json").write_text(json.dumps(fixture), encoding="utf-8")
    code, out, _ = run(capsys, "golden", str(tmp_path))
    assert code == 1
    assert "FAIL example1.golden.json modified-hp" in out and "unexpected" in out


def test_golden_on_empty_directory_is_an_input_error(capsys, tmp_path):
    assert run(capsys, "golden", str(tmp_path))[0] == 2


def test_golden_corpus_covers_every_example():
    names = {p.name for p in CORPUS.glob("*.golden.json")}
    assert names == {f"example{i}.golden.json" for i in range(1, 6)}


def test_bundled_golden_corpus_passes():
    failed = [f"{o.fixture} {o.query}" for o in run_corpus() if not o.passed]
    assert not failed, failed


def test_verify_small_run(capsys):
    code, out, _ = run(capsys, "verify-theorems", "--variant", "3", "--trials", "5", "--seed", "1")
    assert code == 0
    assert out.startswith("variant 3: ")


def test_verify_rejects_zero_trials(capsys):
    assert run(capsys, "verify-theorems", "--trials", "0")[0] == 2
