"""End-to-end tests of the command line interface.

Each test drives ``main`` with a real problem document and inspects the
emitted JSON plus the exit code contract: 0 success / verdict true,
1 verdict false, 2 input errors, 3 route disagreement.
"""

from __future__ import annotations

import io
import json

import pytest

from bjapprox.cli import main

POINT_SUBSPACE = {
    "schema": 1,
    "kind": "point-subspace",
    "p": 3.0,
    "point": [1.0, 2.0, 2.0],
    "basis": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
}

FUNCTIONAL_SUBSPACE = {
    "schema": 1,
    "kind": "functional-subspace",
    "q": 2.0,
    "target": [3.0, 4.0],
    "constraints": [[1.0, 0.0]],
}

OPERATOR_1D_EUCLIDEAN = {
    "schema": 1,
    "kind": "operator-1d",
    "t": [[2.0, 0.0], [0.0, 1.0]],
    "a": [[1.0, 0.0], [0.0, 1.0]],
}

OPERATOR_1D_SUP = {
    "schema": 1,
    "kind": "operator-1d",
    "domain_norm": "sup",
    "t": [[1.0, 2.0], [5.0, 5.0]],
    "a": [[1.0, 0.0], [0.0, 0.0]],
}

OPERATOR_ND = {
    "schema": 1,
    "kind": "operator-nd",
    "t": [[3.0, 1.0], [1.0, 1.0]],
    "basis": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]],
}

ORTHOGONAL_VECTORS = {
    "schema": 1,
    "kind": "orthogonality-check",
    "space": "lp-vectors",
    "p": 2.0,
    "x": [1.0, 0.0],
    "y": [0.0, 1.0],
}

INEQUALITY = {
    "schema": 1,
    "kind": "inequality-check",
    "p": 2.0,
    "triple": [1.0, -2.0, 3.0],
    "coefficients": [0.3, -0.4],
}


def _write(tmp_path, document) -> str:
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(document))
    return str(path)


def _run(capsys, argv) -> tuple[int, dict]:
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestDist:
    def test_point_subspace_document(self, tmp_path, capsys):
        # The span of e1, e2 leaves the residual (0, 0, 2) for every p.
        code, doc = _run(capsys, ["dist", _write(tmp_path, POINT_SUBSPACE)])
        assert code == 0
        assert doc["kind"] == "point-subspace"
        assert doc["distance"] == pytest.approx(2.0, rel=1e-8)
        assert [r["name"] for r in doc["routes"]] == ["duality", "classical", "oracle"]
        assert doc["max_rel_disagreement"] <= 1e-6
        assert doc["exit_code"] == 0
        assert doc["options"]["seed"] == 42

    def test_functional_subspace_document(self, tmp_path, capsys):
        code, doc = _run(capsys, ["dist", _write(tmp_path, FUNCTIONAL_SUBSPACE)])
        assert code == 0
        assert doc["distance"] == pytest.approx(4.0, rel=1e-8)
        assert doc["coefficients"] == pytest.approx([3.0], abs=1e-6)

    def test_operator_1d_euclidean_document(self, tmp_path, capsys):
        code, doc = _run(capsys, ["dist", _write(tmp_path, OPERATOR_1D_EUCLIDEAN)])
        assert code == 0
        assert doc["distance"] == pytest.approx(0.5, rel=1e-6)
        assert doc["lambda0"] == pytest.approx(1.5, abs=1e-6)
        assert [r["name"] for r in doc["routes"]] == ["section", "formula", "oracle"]

    def test_operator_1d_sup_document(self, tmp_path, capsys):
        code, doc = _run(capsys, ["dist", _write(tmp_path, OPERATOR_1D_SUP)])
        assert code == 0
        assert doc["distance"] == pytest.approx(10.0, rel=1e-6)
        assert doc["lambda0"] == pytest.approx(3.0, abs=1e-6)
        assert [r["name"] for r in doc["routes"]] == ["section", "oracle"]

    def test_operator_nd_document_carries_certificate(self, tmp_path, capsys):
        code, doc = _run(capsys, ["dist", _write(tmp_path, OPERATOR_ND)])
        assert code == 0
        assert doc["distance"] == pytest.approx(1.0, rel=1e-5)
        assert doc["coefficients"] == pytest.approx([3.0, 1.0], abs=1e-4)
        assert doc["certificate"]["holds"] is True
        assert doc["certificate"]["failures"] == 0

    def test_route_subset_selection(self, tmp_path, capsys):
        path = _write(tmp_path, POINT_SUBSPACE)
        code, doc = _run(capsys, ["dist", path, "--routes", "oracle"])
        assert code == 0
        assert [r["name"] for r in doc["routes"]] == ["oracle"]
        assert doc["options"]["routes"] == ["oracle"]

    def test_unknown_route_is_input_error(self, tmp_path, capsys):
        code = main(["dist", _write(tmp_path, POINT_SUBSPACE), "--routes", "magic"])
        assert code == 2
        assert "unknown routes" in capsys.readouterr().err

    def test_option_overrides_are_echoed(self, tmp_path, capsys):
        path = _write(tmp_path, POINT_SUBSPACE)
        code, doc = _run(
            capsys,
            ["dist", path, "--tol", "1e-7", "--seed", "7", "--restarts", "3"],
        )
        assert code == 0
        assert doc["options"]["tolerance"] == 1e-7
        assert doc["options"]["seed"] == 7
        assert doc["options"]["restarts"] == 3

    def test_stdin_input(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(POINT_SUBSPACE)))
        code, doc = _run(capsys, ["dist", "-"])
        assert code == 0
        assert doc["distance"] == pytest.approx(2.0, rel=1e-8)

    def test_json_out_writes_same_document(self, tmp_path, capsys):
        out_path = tmp_path / "result.json"
        code, doc = _run(
            capsys,
            ["dist", _write(tmp_path, POINT_SUBSPACE), "--json-out", str(out_path)],
        )
        assert code == 0
        assert json.loads(out_path.read_text()) == doc

    def test_route_disagreement_exits_3(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setattr(
            "bjapprox.runner.classical_duality_eval", lambda x, y, **kw: 123.0
        )
        code, doc = _run(capsys, ["dist", _write(tmp_path, POINT_SUBSPACE)])
        assert code == 3
        assert doc["exit_code"] == 3
        assert doc["max_rel_disagreement"] > 1.0


class TestCheck:
    def test_orthogonal_vectors_exit_0(self, tmp_path, capsys):
        code, doc = _run(capsys, ["check", _write(tmp_path, ORTHOGONAL_VECTORS)])
        assert code == 0
        assert doc["verdict"] is True
        assert doc["margin"] >= -1e-9

    def test_non_orthogonal_vectors_exit_1(self, tmp_path, capsys):
        problem = dict(ORTHOGONAL_VECTORS, y=[1.0, 1.0])
        code, doc = _run(capsys, ["check", _write(tmp_path, problem)])
        assert code == 1
        assert doc["verdict"] is False
        assert doc["margin"] < 0.0

    def test_strong_refinement_reports_classification(self, tmp_path, capsys):
        problem = dict(ORTHOGONAL_VECTORS, strong=True, p=3.0)
        code, doc = _run(capsys, ["check", _write(tmp_path, problem)])
        assert code == 0
        assert doc["classification"] == "strong"
        assert doc["certification_radius"] > 0.0

    def test_matrices_space(self, tmp_path, capsys):
        problem = {
            "schema": 1,
            "kind": "orthogonality-check",
            "space": "matrices-hilbert",
            "t": [[0.5, 0.0], [0.0, -0.5]],
            "a": [[1.0, 0.0], [0.0, 1.0]],
        }
        code, doc = _run(capsys, ["check", _write(tmp_path, problem)])
        assert code == 0
        assert doc["verdict"] is True
        assert doc["witness"] is not None

    def test_inequality_check_holds(self, tmp_path, capsys):
        code, doc = _run(capsys, ["check", _write(tmp_path, INEQUALITY)])
        assert code == 0
        assert doc["verdict"] is True
        assert doc["lhs"] >= doc["rhs"] - 1e-12


class TestBench:
    def test_bench_document(self, capsys):
        code, doc = _run(capsys, ["bench", "--seed", "1"])
        assert code == 0
        assert doc["kind"] == "bench"
        assert len(doc["cases"]) == 27
        assert doc["max_accuracy"] <= 1e-5
        assert doc["total_elapsed_s"] > 0.0
        for case in doc["cases"]:
            assert set(case["routes"]) == {"duality", "classical", "oracle"}


class TestInputErrors:
    def test_missing_file(self, capsys):
        assert main(["dist", "/nonexistent/problem.json"]) == 2
        assert "cannot read" in capsys.readouterr().err

    def test_invalid_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["dist", str(path)]) == 2
        assert "invalid JSON" in capsys.readouterr().err

    def test_invalid_document(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"schema": 1, "kind": "nonsense"}))
        assert main(["dist", str(path)]) == 2
        assert "invalid problem document" in capsys.readouterr().err

    def test_mathematical_error_maps_to_2(self, tmp_path, capsys):
        problem = dict(
            FUNCTIONAL_SUBSPACE, constraints=[[1.0, 0.0], [2.0, 0.0]]
        )
        assert main(["dist", _write(tmp_path, problem)]) == 2
        assert "error" in capsys.readouterr().err

    def test_invalid_option_override(self, tmp_path, capsys):
        path = _write(tmp_path, POINT_SUBSPACE)
        assert main(["dist", path, "--tol", "-1.0"]) == 2
        assert "invalid option override" in capsys.readouterr().err
