"""CLI surface: commands, exit codes, JSON schema stability."""

import json
import math

from qgrass.cli import main
from qgrass.serialize import graded_from_dict, graded_to_dict, plain_from_dict, plain_to_dict
from qgrass.algebra import AlgebraContext
from qgrass.qstate import PlainState, coherent_state, tensor


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_construct_pass_exit_code(capsys):
    code, out, _ = run_cli(capsys, "construct", "qutrit_psi_pm", "--sign", "+")
    assert code == 0
    assert "match=exact" in out


def test_construct_flagged_entry_still_exits_zero(capsys):
    code, out, _ = run_cli(capsys, "construct", "ghz_n", "--n", "5")
    assert code == 0
    assert "QUBIT_SIGNS" in out


def test_construct_mismatch_exits_one(capsys):
    code, out, _ = run_cli(capsys, "construct", "qutrit_mixed_02_20")
    assert code == 1
    assert "MIXED_RECIPE" in out


def test_construct_unknown_id_exits_two(capsys):
    code, _, err = run_cli(capsys, "construct", "nosuch")
    assert code == 2
    assert "unknown catalog id" in err


def test_construct_json_payload(capsys):
    code, out, _ = run_cli(
        capsys, "construct", "w_n", "--n", "2", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    item = payload["items"][0]
    assert item["id"] == "w_n"
    state = plain_from_dict(item["computed"])
    amp = 1.0 / math.sqrt(2.0)
    assert abs(abs(state.coefficient((0, 1))) - amp) < 1e-9
    assert abs(abs(state.coefficient((1, 0))) - amp) < 1e-9
    assert "QUBIT_SIGNS" in payload["ledger"]


def test_verify_algebra_single_grade(capsys):
    code, out, _ = run_cli(capsys, "verify", "algebra", "--n", "5", "--seed", "9")
    assert code == 0
    assert "algebra.associativity" in out
    assert "algebra.nilpotency" in out


def test_verify_closure_reports_constants(capsys):
    code, out, _ = run_cli(capsys, "verify", "closure", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    by_id = {item["id"]: item for item in payload["items"]}
    lam = complex(*by_id["closure.su_q2.d3"]["lambda"])
    q = complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))
    assert abs(lam + 3 * q) < 1e-9
    assert by_id["closure.su_q2.d4"]["residual"] > 0.1
    mu = complex(*by_id["closure.squeeze.d3"]["mu"])
    assert abs(mu + 4.0) < 1e-9


def test_verify_all_exits_zero_with_flags(capsys):
    code, out, _ = run_cli(capsys, "verify", "all", "--seed", "1")
    assert code == 0
    assert "0 fail" in out
    assert "ledger:" in out


def test_verify_deterministic_for_fixed_seed(capsys):
    _, out1, _ = run_cli(capsys, "verify", "all", "--seed", "4", "--format", "json")
    _, out2, _ = run_cli(capsys, "verify", "all", "--seed", "4", "--format", "json")
    assert out1 == out2


def test_solve_weight_cli_round_trip(tmp_path, capsys):
    amp = 1.0 / math.sqrt(3.0)
    spec = {
        "grade_n": 3,
        "factors": [
            {"kind": "coherent", "variable": "theta_1", "d": 3},
            {"kind": "coherent", "variable": "theta_2", "d": 3},
        ],
        "differentials": ["theta_1", "theta_2"],
        "target": {
            "sites": [3, 3],
            "terms": [
                {"coeff": [amp, 0], "ket": [0, 0]},
                {"coeff": [amp, 0], "ket": [1, 1]},
                {"coeff": [amp, 0], "ket": [2, 2]},
            ],
        },
        "basis": {"variables": ["theta_1", "theta_2"]},
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run_cli(
        capsys, "solve-weight", "--spec", str(path), "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    item = payload["items"][0]
    assert item["feasible"] is True
    assert item["residual"] < 1e-9
    offdiag = [
        t for t in item["weight"]["terms"] if len(set(t["monomial"].values())) > 1
    ]
    assert offdiag == []


def test_solve_weight_infeasible_single_variable_target(tmp_path, capsys):
    amp = 1.0 / math.sqrt(2.0)
    spec = {
        "grade_n": 3,
        "factors": [
            {"kind": "coherent", "variable": "theta_1", "d": 3},
            {"kind": "coherent", "variable": "theta_1", "d": 3},
        ],
        "differentials": ["theta_1"],
        "target": {
            "sites": [3, 3],
            "terms": [
                {"coeff": [amp, 0], "ket": [0, 2]},
                {"coeff": [amp, 0], "ket": [2, 0]},
            ],
        },
        "basis": {"variables": ["theta_1"]},
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run_cli(capsys, "solve-weight", "--spec", str(path))
    assert code == 0
    assert "feasible=False" in out


def test_solve_weight_combination_spec(tmp_path, capsys):
    # linear combination of products: |t>|t> - |-t>|-t> at grade 2 reaches
    # the antidiagonal signature state (|01> - |10>)/sqrt(2)
    amp = 1.0 / math.sqrt(2.0)
    spec = {
        "grade_n": 2,
        "combination": [
            {"coeff": [1, 0], "factors": [
                {"kind": "coherent", "variable": "theta_1", "d": 2},
                {"kind": "coherent", "variable": "theta_1", "d": 2},
            ]},
            {"coeff": [-1, 0], "factors": [
                {"kind": "coherent", "variable": "theta_1", "d": 2, "scale": [-1, 0]},
                {"kind": "coherent", "variable": "theta_1", "d": 2, "scale": [-1, 0]},
            ]},
        ],
        "differentials": ["theta_1"],
        "target": {
            "sites": [2, 2],
            "terms": [
                {"coeff": [amp, 0], "ket": [0, 1]},
                {"coeff": [-amp, 0], "ket": [1, 0]},
            ],
        },
        "basis": {"variables": ["theta_1"]},
    }
    path = tmp_path / "combo.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run_cli(
        capsys, "solve-weight", "--spec", str(path), "--format", "json"
    )
    assert code == 0
    item = json.loads(out)["items"][0]
    assert item["feasible"] is True


def test_solve_weight_malformed_spec_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{\"grade_n\": 3}")
    code, _, err = run_cli(capsys, "solve-weight", "--spec", str(path))
    assert code == 2
    assert "malformed" in err


def test_report_written_to_file(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys, "verify", "closure", "--format", "json", "--out", str(out_path)
    )
    assert code == 0
    assert out == ""
    payload = json.loads(out_path.read_text())
    assert payload["command"] == "verify"


def test_state_serialization_round_trip():
    ctx = AlgebraContext(3)
    t1, t2 = ctx.theta(1), ctx.theta(2)
    state = tensor([coherent_state(ctx, t1, 3), coherent_state(ctx, t2, 3)])
    data = graded_to_dict(state)
    assert data["grade_n"] == 3 and data["sites"] == [3, 3]
    back = graded_from_dict(data)
    assert back.isclose(state)

    plain = PlainState.from_terms((2, 2), {(0, 1): 0.5j, (1, 0): -0.5})
    assert plain_from_dict(plain_to_dict(plain)).isclose(plain)
