"""Command-line interface: report documents, exit codes, file outputs."""

import json

import numpy as np
import pytest

from jetcalc import jetpoly
from jetcalc.cli import main
from jetcalc.curvature import tensor_to_doc, validate_tensor
from jetcalc.jetpoly import to_doc, xi, zvar

W12 = xi(1, 1) * xi(2, 2) - xi(1, 2) * xi(2, 1)


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    doc = None
    out_lines = captured.out.splitlines()
    starts = [i for i, line in enumerate(out_lines) if line == "{"]
    if starts:
        doc = json.loads("\n".join(out_lines[starts[-1]:]))
    err_doc = json.loads(captured.err) if captured.err.strip() else None
    return code, captured.out, doc, err_doc


def _write_poly(tmp_path, name, poly):
    path = tmp_path / name
    path.write_text(json.dumps(to_doc(poly)))
    return str(path)


def _write_tensor(tmp_path, name, values):
    r = len(values)
    c = np.zeros((1, 1, r, r), dtype=np.complex128)
    for a, v in enumerate(values):
        c[0, 0, a, a] = v
    path = tmp_path / name
    path.write_text(json.dumps(tensor_to_doc(validate_tensor(c))))
    return str(path)


# ---------------------------------------------------------------------------
# report document shape and simple subcommands
# ---------------------------------------------------------------------------

def test_dim_report_document(capsys):
    argv = ["dim", "--k", "2", "--r", "1", "--m", "2"]
    code, _, doc, err = _run(capsys, argv)
    assert code == 0 and err is None
    assert set(doc) == {"tool", "version", "command", "params", "payload"}
    assert doc["tool"] == "jetcalc"
    assert doc["command"] == argv
    assert doc["params"] == {"k": 2, "r": 1, "m": 2}
    assert doc["payload"] == {"dim": 2}  # xi(1,1)^2 and xi(2,1)


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["dim", "--k", "2"])
    assert info.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2
    capsys.readouterr()


def test_delta_of_first_order_symbol(capsys, tmp_path):
    path = _write_poly(tmp_path, "p.json", xi(1, 1))
    code, _, doc, _ = _run(capsys, ["delta", "--poly", path])
    assert code == 0
    assert doc["payload"]["poly"] == to_doc(jetpoly.delta(xi(1, 1)))
    assert doc["payload"]["poly"] == to_doc(xi(2, 1))


def test_invariant_check_accepts_the_determinant(capsys, tmp_path):
    path = _write_poly(tmp_path, "w.json", W12)
    code, out, doc, _ = _run(capsys, ["invariant-check", "--poly", path])
    assert code == 0
    assert doc["payload"] == {"invariant": True, "weight": 3}
    assert "invariant: yes" in out


def test_invariant_check_witness_for_second_order_symbol(capsys, tmp_path):
    path = _write_poly(tmp_path, "x21.json", xi(2, 1))
    code, out, doc, _ = _run(capsys, ["invariant-check", "--poly", path])
    assert code == 0
    payload = doc["payload"]
    assert payload["invariant"] is False
    w = payload["witness"]
    assert w["jet"] == {"k": 2, "a": [[1, 1, 0, 1], [1, 1, 0, 1]]}
    assert w["pullback_value"] == [2, 1, 0, 1]
    assert w["scaled_value"] == [0, 1, 0, 1]
    assert [entry[:2] for entry in w["xi"]] == [[1, 1], [2, 1]]
    assert "invariant: no" in out


def test_gen_qk_level_two(capsys):
    code, _, doc, _ = _run(capsys, ["gen", "qk", "--k", "2", "--r", "2"])
    assert code == 0
    members = doc["payload"]["members"]
    assert len(members) == 1
    assert members[0]["label"] == "[1,2]"
    assert members[0]["weight"] == 3
    assert members[0]["poly"] == to_doc(W12)


def test_gen_qk_rank_one_is_reported_empty(capsys):
    code, out, doc, _ = _run(capsys, ["gen", "qk", "--k", "2", "--r", "1"])
    assert code == 0
    assert doc["payload"] == {"members": []}
    assert "empty" in out


def test_gen_wronskian_from_component_files(capsys, tmp_path):
    p1 = _write_poly(tmp_path, "f1.json", zvar(1))
    p2 = _write_poly(tmp_path, "f2.json", zvar(2))
    code, _, doc, _ = _run(capsys,
                           ["gen", "wronskian", "--components", p1, p2])
    assert code == 0
    assert doc["payload"]["weight"] == 3
    assert doc["payload"]["poly"] == to_doc(W12)


def test_output_document_feeds_polynomial_input(capsys, tmp_path):
    # --output files carry the full document envelope; polynomial-consuming
    # flags unwrap payload["poly"] so one subcommand's output is the next
    # subcommand's input
    p1 = _write_poly(tmp_path, "f1.json", zvar(1))
    p2 = _write_poly(tmp_path, "f2.json", zvar(2))
    out = str(tmp_path / "w.json")
    code, _, _, _ = _run(capsys, ["gen", "wronskian", "--components",
                                  p1, p2, "--output", out])
    assert code == 0
    code, _, doc, _ = _run(capsys, ["invariant-check", "--poly", out])
    assert code == 0
    assert doc["payload"] == {"invariant": True, "weight": 3}


def test_gen_wronskian_dependent_entries_vanish(capsys, tmp_path):
    p1 = _write_poly(tmp_path, "f1.json", zvar(1))
    code, out, doc, _ = _run(capsys,
                             ["gen", "wronskian", "--components", p1, p1])
    assert code == 0
    assert doc["payload"]["weight"] is None
    assert "vanishes" in out


def test_gen_bracket_from_files(capsys, tmp_path):
    p = _write_poly(tmp_path, "p.json", xi(1, 1))
    q = _write_poly(tmp_path, "q.json", xi(1, 2))
    code, _, doc, _ = _run(capsys, ["gen", "bracket", "--p", p, "--q", q])
    assert code == 0
    assert doc["payload"]["weight"] == 3
    assert doc["payload"]["poly"] == to_doc(W12)


def test_gen_coords_rows(capsys):
    code, _, doc, _ = _run(capsys, ["gen", "coords", "--k", "2", "--r", "2"])
    assert code == 0
    rows = doc["payload"]["rows"]
    by_js = {(row["j"], row["s"]): row for row in rows}
    assert by_js[(2, 1)]["weight"] == 1
    assert by_js[(2, 1)]["den_exponent"] == 1
    assert by_js[(2, 2)]["weight"] == 3
    assert by_js[(2, 2)]["den_exponent"] == 3
    assert by_js[(2, 2)]["numerator"] == to_doc(W12)


def test_sym_coeffs_identity(capsys, tmp_path):
    path = _write_tensor(tmp_path, "c.json", [1.0, 1.0])
    code, _, doc, _ = _run(capsys,
                           ["sym-coeffs", "--curvature", path, "--l", "2"])
    assert code == 0
    payload = doc["payload"]
    assert payload["basis"] == [[2, 0], [1, 1], [0, 2]]
    assert payload["C"] == [[1, 1, 1, 1, 2.0, 0.0],
                            [1, 1, 2, 2, 2.0, 0.0],
                            [1, 1, 3, 3, 2.0, 0.0]]


# ---------------------------------------------------------------------------
# integrate and scaling-report
# ---------------------------------------------------------------------------

def test_integrate_report_and_output_file(capsys, tmp_path):
    tensor = _write_tensor(tmp_path, "c.json", [1.0, -1.0])
    out_path = tmp_path / "report.json"
    argv = ["integrate", "--variant", "gg", "--k", "1", "--n", "1",
            "--r", "2", "--curvature", tensor, "--samples", "2000",
            "--seed", "11", "--output", str(out_path)]
    code, out, doc, _ = _run(capsys, argv)
    assert code == 0
    assert set(doc["payload"]) == {"I", "degenerate", "prefactor", "seed",
                                   "samples"}
    assert doc["params"]["variant"] == "gg"
    assert doc["params"]["p"] == 2 and doc["params"]["eps"] == [0.2]
    assert doc["params"]["backend"] in ("numba", "numpy")
    # the written file is the exact JSON document plus a newline
    text = json.dumps(doc, indent=2)
    assert out_path.read_bytes() == (text + "\n").encode()
    # re-running is byte-stable
    out2 = tmp_path / "report2.json"
    argv2 = argv[:-1] + [str(out2)]
    code2, _, _, _ = _run(capsys, argv2)
    assert code2 == 0
    first = json.loads(out_path.read_text())
    second = json.loads(out2.read_text())
    assert first["payload"] == second["payload"]


def test_integrate_custom_metric_params(capsys, tmp_path):
    tensor = _write_tensor(tmp_path, "c.json", [1.0, -1.0])
    argv = ["integrate", "--variant", "inv", "--k", "2", "--n", "1",
            "--r", "2", "--curvature", tensor, "--samples", "500",
            "--seed", "3", "--p", "8", "--eps", "0.5,0.1"]
    code, _, doc, _ = _run(capsys, argv)
    assert code == 0
    assert doc["params"]["p"] == 8
    assert doc["params"]["eps"] == [0.5, 0.1]
    assert doc["payload"]["prefactor"] == 3


def test_scaling_report_cli(capsys, tmp_path):
    tensor = _write_tensor(tmp_path, "c.json", [-1.0])
    argv = ["scaling-report", "--kmax", "2", "--n", "1", "--r", "1",
            "--curvature", tensor, "--samples", "400", "--seed", "2"]
    code, out, doc, _ = _run(capsys, argv)
    assert code == 0
    assert doc["params"]["kmax"] == 2 and "k" not in doc["params"]
    rows = doc["payload"]["rows"]
    assert [row["k"] for row in rows] == [1, 2]
    assert rows[0]["ratio"] is None
    assert rows[1]["ratio"] is not None
    assert "diagnostic only" in out


# ---------------------------------------------------------------------------
# error paths
# ---------------------------------------------------------------------------

def test_missing_file_exits_three(capsys):
    code, _, doc, err = _run(capsys, ["delta", "--poly", "/no/such/file.json"])
    assert code == 3 and doc is None
    assert err["error"]["kind"] == "input-data"
    assert err["error"]["subcommand"] == "delta"


def test_malformed_json_exits_three(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, _, err = _run(capsys, ["delta", "--poly", str(path)])
    assert code == 3
    assert err["error"]["kind"] == "input-data"


def test_dimension_mismatch_exits_three(capsys, tmp_path):
    tensor = _write_tensor(tmp_path, "c.json", [1.0, -1.0])  # r = 2
    argv = ["integrate", "--variant", "gg", "--k", "1", "--n", "1",
            "--r", "3", "--curvature", tensor, "--samples", "100",
            "--seed", "1"]
    code, _, _, err = _run(capsys, argv)
    assert code == 3
    assert err["error"]["kind"] == "input-data"


def test_bad_eps_exits_three(capsys, tmp_path):
    tensor = _write_tensor(tmp_path, "c.json", [1.0, -1.0])
    argv = ["integrate", "--variant", "gg", "--k", "1", "--n", "1",
            "--r", "2", "--curvature", tensor, "--samples", "100",
            "--seed", "1", "--eps", "0.2,oops"]
    code, _, _, err = _run(capsys, argv)
    assert code == 3
    assert err["error"]["kind"] == "input-data"


def test_degree_error_exits_three(capsys, tmp_path):
    p = _write_poly(tmp_path, "p.json", xi(1, 1) + xi(2, 1))  # inhomogeneous
    q = _write_poly(tmp_path, "q.json", xi(1, 2))
    code, _, _, err = _run(capsys, ["gen", "bracket", "--p", p, "--q", q])
    assert code == 3
    assert err["error"]["kind"] == "input-data"


def test_numeric_overflow_exits_four(capsys, tmp_path):
    # det overflows to infinity for n = 2 with astronomically large curvature
    c = np.zeros((2, 2, 1, 1), dtype=np.complex128)
    c[0, 0, 0, 0] = 1e200
    c[1, 1, 0, 0] = 1e200
    path = tmp_path / "huge.json"
    path.write_text(json.dumps(tensor_to_doc(validate_tensor(c))))
    argv = ["integrate", "--variant", "gg", "--k", "1", "--n", "2",
            "--r", "1", "--curvature", str(path), "--samples", "100",
            "--seed", "1"]
    code, _, _, err = _run(capsys, argv)
    assert code == 4
    assert err["error"]["kind"] == "numeric-domain"
