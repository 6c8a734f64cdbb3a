import io
import json
from unittest.mock import patch

import pytest

from app.config import settings
from app.main import main
from app.models import DecompositionReport

K4_MINUS_EDGE = {
    "kind": "graphic",
    "vertices": ["a", "b", "c", "d"],
    "edges": [["a", "b"], ["b", "c"], ["c", "a"], ["c", "d"], ["d", "a"]],
}


@pytest.fixture
def spec_file(tmp_path):
    def write(payload, name="spec.json"):
        path = tmp_path / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
        return str(path)
    return write


def test_info_uniform(spec_file, capsys):
    code = main(["info", spec_file({"kind": "uniform", "r": 2, "n": 4})])
    out = capsys.readouterr().out
    assert code == 0
    assert "3-connected: true" in out
    assert "rank: 2" in out


def test_info_triangle_json(spec_file, capsys):
    spec = {"kind": "graphic", "vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"], ["c", "a"]]}
    assert main(["info", spec_file(spec), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["rank"] == 2


def test_info_disconnected_exits_3(spec_file, capsys):
    code = main(["info", spec_file({"kind": "circuits", "ground": ["a", "b"], "circuits": []})])
    assert code == 3
    assert "connected: false" in capsys.readouterr().out


def test_bad_json_exits_2(spec_file, capsys):
    assert main(["info", spec_file("{not json")]) == 2
    assert "SpecParseError" in capsys.readouterr().err


def test_missing_file_exits_2(tmp_path, capsys):
    assert main(["info", str(tmp_path / "absent.json")]) == 2


def test_reserved_labels_are_rejected(spec_file):
    spec = {"kind": "circuits", "ground": ["a", "@e0"], "circuits": [["a", "@e0"]]}
    assert main(["info", spec_file(spec)]) == 2


def test_non_matroid_exits_2(spec_file, capsys):
    spec = {"kind": "circuits", "ground": ["a", "b", "c", "d"], "circuits": [["a", "b"], ["b", "c"]]}
    assert main(["verify", spec_file(spec)]) == 2
    assert "AxiomViolation" in capsys.readouterr().err


def test_validate_flag_relaxes_ingestion(spec_file):
    spec = {"kind": "circuits", "ground": ["a", "b", "c", "d"], "circuits": [["a", "b"], ["b", "c"]]}
    assert main(["info", "--validate", "antichain", spec_file(spec)]) == 3
    assert settings.CLI_VALIDATION == "antichain"


def test_separations(spec_file, capsys):
    assert main(["separations", spec_file(K4_MINUS_EDGE)]) == 0
    seps = json.loads(capsys.readouterr().out)
    assert len(seps) == 2
    assert all(s["good"] for s in seps)


def test_separations_good_only(spec_file, capsys):
    assert main(["separations", "--good-only", spec_file({"kind": "uniform", "r": 3, "n": 4})]) == 0
    assert json.loads(capsys.readouterr().out) == []
    assert main(["separations", spec_file({"kind": "uniform", "r": 2, "n": 4})]) == 0
    assert json.loads(capsys.readouterr().out) == []


def test_decompose_k4_minus_edge(spec_file, capsys):
    assert main(["decompose", spec_file(K4_MINUS_EDGE)]) == 0
    report = DecompositionReport.model_validate_json(capsys.readouterr().out)
    kinds = {tuple(node.part): node.torso.kind.value for node in report.nodes}
    assert kinds == {("0", "1"): "circuit", ("2",): "cocircuit", ("3", "4"): "circuit"}
    assert len(report.edges) == 2


def test_decompose_is_deterministic(spec_file, capsys):
    path = spec_file(K4_MINUS_EDGE)
    outputs = []
    for _ in range(10):
        assert main(["decompose", path]) == 0
        outputs.append(capsys.readouterr().out)
    assert len(set(outputs)) == 1


def test_decompose_dot(spec_file, capsys):
    assert main(["decompose", "--format", "dot", spec_file(K4_MINUS_EDGE)]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("graph decomposition {")
    assert dot.count(" -- ") == 2


def test_decompose_too_small_exits_4(spec_file):
    assert main(["decompose", spec_file({"kind": "uniform", "r": 1, "n": 2})]) == 4


def test_cap_flag_exits_5(spec_file):
    assert main(["decompose", "--cap", "4", spec_file(K4_MINUS_EDGE)]) == 5


def test_large_uniform_matroid_exits_5(spec_file, capsys):
    assert main(["info", spec_file({"kind": "uniform", "r": 12, "n": 40})]) == 5
    assert "GroundSetTooLarge" in capsys.readouterr().err


def test_decompose_from_stdin(capsys):
    with patch("sys.stdin", io.StringIO(json.dumps({"kind": "uniform", "r": 2, "n": 4}))):
        assert main(["decompose", "-"]) == 0
    report = DecompositionReport.model_validate_json(capsys.readouterr().out)
    assert report.nodes[0].torso.kind.value == "three-connected"


def test_verify_duality(spec_file, capsys):
    assert main(["verify", "--suite", "duality", spec_file(K4_MINUS_EDGE)]) == 0
    out = capsys.readouterr().out
    assert "PASS input / decomposition of the dual" in out
    assert out.strip().endswith("1 of 1 passed")


def test_verify_reports_failures(spec_file, capsys):
    failing = {"fixture": "input", "passed": False}
    with patch("app.commands.verify.run_suite") as run_suite:
        run_suite.return_value.configure_mock(**failing, results=[])
        assert main(["verify", spec_file(K4_MINUS_EDGE)]) == 1
    assert "0 of 1 passed" in capsys.readouterr().out


def test_verify_corpus_uses_every_fixture(capsys):
    with patch("app.commands.verify.run_corpus", return_value=[]) as run_corpus:
        assert main(["verify", "--corpus", "--suite", "lemmas"]) == 0
    run_corpus.assert_called_once_with("lemmas")
