"""
Command line tests: drive main() in-process and inspect stdout, stderr and exit codes.
"""
import json

import pytest
from pydantic import ValidationError

from src.algebra.braiding import builtin
from src.main import EXIT_INPUT_ERROR, EXIT_OK, main
from src.schemas.documents import BraidingDocument, dumps
from src.utils.settings import Settings


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
    return str(path)


def _entries_doc(N, components):
    return {"version": 1, "context": {"builtin": "sl-exterior", "N": N, "bound": N + 2}, "components": components}


def _identity_one(N):
    return [[[i], [i], "1"] for i in range(1, N + 2)]


def test_profile_json(capsys):
    assert main(["profile", "--N", "1", "--format", "json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["dims"] == [1, 2, 1, 0]
    assert report["top"] == 2
    assert report["hecke_param"]["value"] == "q^-2"
    assert report["expected_dims"] == [1, 2, 1, 0]


def test_profile_text(capsys):
    assert main(["profile", "--braiding", "flip", "--N", "1", "--max-p", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "dims (p = 0..3): 1, 2, 3, 4" in out
    assert "top grade: none observed" in out


def test_trace_of_a_matrix_unit(tmp_path, capsys):
    path = _write(tmp_path, "e22.json", _entries_doc(1, [{"grade": 1, "entries": [[[2], [2], "1"]]}]))
    assert main(["trace", path, "--N", "1", "--kind", "both", "--format", "json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["q_trace"]["value"] == "q^-2"
    assert report["quantum_trace"]["value"] == "q^-1"
    (grade,) = report["grades"]
    assert grade["ratio"]["value"] == "q^-1"
    assert grade["predicted_ratio"]["value"] == "q^-1"


def test_trace_text_with_specialization(tmp_path, capsys):
    path = _write(tmp_path, "id.json", _entries_doc(2, [{"grade": 1, "entries": _identity_one(2)}]))
    assert main(["trace", path, "--N", "2", "--kind", "q", "--q0", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("Tr_q = 1 + q^-2 + q^-4")
    assert "21/16" in out


def test_convolution_product(tmp_path, capsys):
    path = _write(tmp_path, "i1.json", _entries_doc(2, [{"grade": 1, "entries": _identity_one(2)}]))
    assert main(["product", path, path, "--which", "convolve", "--N", "2"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    (component,) = doc["components"]
    assert component["grade"] == 2
    assert component["entries"] == [
        [[1, 2], [1, 2], "1 + q^-2"],
        [[1, 3], [1, 3], "1 + q^-2"],
        [[2, 3], [2, 3], "1 + q^-2"],
    ]


def test_product_output_parses_back(tmp_path, capsys):
    path = _write(tmp_path, "a.json", _entries_doc(1, [{"grade": 1, "entries": [[[1], [2], "q"]]}]))
    assert main(["product", path, path, "--which", "third", "--N", "1"]) == EXIT_OK
    first = capsys.readouterr().out
    again = _write(tmp_path, "b.json", first)
    unit = _write(tmp_path, "unit.json", _entries_doc(1, [{"grade": 0, "entries": [[[], [], "1"]]}]))
    assert main(["product", again, unit, "--which", "third", "--N", "1"]) == EXIT_OK
    assert capsys.readouterr().out == first


def test_products_need_one_context(tmp_path, capsys):
    a = _write(tmp_path, "a.json", _entries_doc(1, [{"grade": 0, "entries": [[[], [], "1"]]}]))
    b = _write(tmp_path, "b.json", _entries_doc(2, [{"grade": 0, "entries": [[[], [], "1"]]}]))
    assert main(["product", a, b, "--which", "compose", "--N", "1"]) == EXIT_INPUT_ERROR
    assert "ContextMismatchError" in capsys.readouterr().err


def test_basis_text(capsys):
    assert main(["basis", "--N", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "grade 2: dim 1" in out
    assert "grade 1: dim 2" in out


def test_verify_suite(capsys):
    assert main(["verify", "--suite", "scalars", "--N", "1", "--format", "json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is True
    assert {r["status"] for r in report["results"]} == {"pass"}


def test_verify_with_a_custom_braiding(tmp_path, capsys):
    path = _write(tmp_path, "flip.json", dumps(BraidingDocument.from_braiding(builtin("flip", 1))))
    assert main(["verify", "--suite", "products", "--braiding", path, "--max-p", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "custom[" in out


def test_malformed_document(tmp_path, capsys):
    path = _write(tmp_path, "bad.json", "{not json")
    assert main(["trace", path, "--N", "1", "--format", "json"]) == EXIT_INPUT_ERROR
    error = json.loads(capsys.readouterr().err)
    assert error["error"] == "DocumentError"
    assert error["exit_code"] == EXIT_INPUT_ERROR


def test_invalid_braiding_document(tmp_path, capsys):
    doc = {"version": 1, "dim": 1, "roots": ["1", "-1"], "entries": [[[1, 1], [1, 1], "2"]]}
    path = _write(tmp_path, "bad-braiding.json", doc)
    assert main(["profile", "--braiding", path, "--format", "json"]) == EXIT_INPUT_ERROR
    error = json.loads(capsys.readouterr().err)
    assert error["error"] == "BraidingValidationError"
    assert "quadratic" in error["failures"]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--suite", "nope"],
        ["profile", "--N", "0"],
        ["profile", "--N", "9"],
        ["verify", "--max-p", "12"],
        ["profile", "--braiding", "flip", "--max-p", "8"],
        ["profile", "--log-level", "loud"],
        ["profile", "--q0", "0"],
        ["profile", "--braiding", "no-such-file.json"],
        ["product", "a.json"],
        [],
    ],
)
def test_input_errors(argv, capsys):
    assert main(argv) == EXIT_INPUT_ERROR


def test_force_lifts_the_rank_bound(capsys):
    argv = ["profile", "--braiding", "flip", "--N", "4", "--max-p", "2", "--force", "--format", "json"]
    assert main(argv) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["dims"] == [1, 5, 15]


def test_force_lifts_the_enumeration_bound(capsys):
    argv = ["profile", "--braiding", "flip", "--N", "1", "--max-p", "8", "--force", "--format", "json"]
    assert main(argv) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["dims"] == list(range(1, 10))
    assert report["expected_dims"] == report["dims"]


def test_log_level_option(capsys):
    assert main(["profile", "--log-level", "info", "--format", "json"]) == EXIT_OK
    captured = capsys.readouterr()
    assert "grade profile -c[N=1]" in captured.err
    assert json.loads(captured.out)["top"] == 2
    # the next command falls back to the configured level
    assert main(["profile", "--format", "json"]) == EXIT_OK
    assert capsys.readouterr().err == ""


def test_settings_log_level():
    assert Settings(log_level="debug").log_level == "DEBUG"
    with pytest.raises(ValidationError):
        Settings(log_level="loud")
