import json
import os
import threading
import time
from dataclasses import replace

import numpy as np
import pytest

from choisense.catalog.registry import list_cases, resolve_case
from choisense.certify.certificate import verify_case
from choisense.cli.main import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, parse_args
from choisense.persistence import load_matrix_csv, load_matrix_json
from choisense.schema import KrausFamilyModel, ReportModel


# ---------------------------------------------------------
# Parsing
# ---------------------------------------------------------
def test_parse_args_verify():
    args = parse_args(["verify", "five_rank7", "ohno_hermitian(4)", "--mode", "float", "--tol", "1e-9"])
    assert args.command == "verify"
    assert args.cases == ["five_rank7", "ohno_hermitian(4)"]
    assert args.mode == "float" and args.tol == "1e-9"


def test_missing_command_is_usage_error(run_cli):
    code, _, err = run_cli()
    assert code == EXIT_USAGE
    assert "usage" in err


# ---------------------------------------------------------
# list / verify
# ---------------------------------------------------------
def test_list(run_cli):
    code, out, _ = run_cli("list")
    assert code == EXIT_OK
    assert "five_rank7" in out and "ohno_hermitian(d)" in out


def test_list_json(run_cli):
    code, out, _ = run_cli("list", "--json")
    assert code == EXIT_OK
    assert json.loads(out) == list_cases()


def test_verify_five_rank7(run_cli):
    code, out, _ = run_cli("verify", "five_rank7", "--mode", "exact")
    assert code == EXIT_OK
    assert "choi_rank" in out
    assert "attains the bound 7" in out
    assert "✅" in out


def test_verify_json(run_cli, tmp_path):
    out_path = str(tmp_path / "verify.json")
    code, out, _ = run_cli("verify", "five_rank6", "--json", "--out", out_path)
    assert code == EXIT_OK
    record = json.loads(out)
    assert record["passed"] is True
    assert record["certificate"]["choi_rank"] == 6
    with open(out_path, encoding="utf-8") as f:
        assert f.read() == out


def test_verify_several_json(run_cli):
    code, out, _ = run_cli("verify", "three_to_four", "ohno_hermitian(3)", "--json", "--workers", "2")
    assert code == EXIT_OK
    records = json.loads(out)
    assert [r["certificate"]["case_id"] for r in records] == ["three_to_four", "ohno_hermitian(3)"]


def test_verify_unknown_case(run_cli):
    code, _, err = run_cli("verify", "nosuch")
    assert code == EXIT_USAGE
    assert "nosuch" in err


def test_verify_bad_tolerance(run_cli):
    code, _, _ = run_cli("verify", "three_to_four", "--tol", "tight")
    assert code == EXIT_USAGE


def test_verify_mismatch_exit_code(run_cli, monkeypatch):
    def wrong_case(case_id):
        case = resolve_case(case_id)
        return replace(case, expected=replace(case.expected, choi_rank=case.expected.choi_rank + 1))

    monkeypatch.setattr("choisense.cli.main.resolve_case", wrong_case)
    code, out, _ = run_cli("verify", "three_to_four")
    assert code == EXIT_MISMATCH
    assert "❌ choi_rank" in out


def test_verify_certification_failure_is_a_failed_case(run_cli, monkeypatch):
    real_verify = verify_case

    def failing_verify(case, **kwargs):
        if case.id == "three_to_four":
            raise ValueError("elimination broke down")
        return real_verify(case, **kwargs)

    monkeypatch.setattr("choisense.cli.main.verify_case", failing_verify)
    code, out, err = run_cli("verify", "three_to_four", "five_rank6", "--json")
    assert code == EXIT_MISMATCH
    assert "three_to_four" in err and "elimination broke down" in err
    records = json.loads(out)
    assert [r["certificate"]["case_id"] for r in records] == ["five_rank6"]

    code, out, _ = run_cli("verify", "three_to_four")
    assert code == EXIT_MISMATCH
    assert out == ""


@pytest.mark.slow
def test_verify_not_extreme_preset(run_cli):
    code, out, _ = run_cli("verify", "tensor:ohno_3x3_rank4×ohno_4x4_rank5")
    assert code == EXIT_OK
    assert "not-extreme-witnessed" in out


# ---------------------------------------------------------
# choi / export
# ---------------------------------------------------------
def test_choi_csv_state(run_cli, tmp_path):
    path = str(tmp_path / "choi.csv")
    code, out, _ = run_cli("choi", "three_to_four", "--format", "csv", "--state", "--out", path)
    assert code == EXIT_OK
    m = load_matrix_csv(path)
    assert m.shape == (12, 12)
    assert abs(np.trace(m) - 1) < 1e-12


def test_choi_json_default_path(run_cli, tmp_path):
    code, out, _ = run_cli("choi", "five_rank6")
    assert code == EXIT_OK
    path = os.path.join(str(tmp_path), "out", "five_rank6_choi.json")
    assert path in out
    assert load_matrix_json(path).shape == (25, 25)


def test_export_to_stdout(run_cli):
    code, out, _ = run_cli("export", "five_rank7")
    assert code == EXIT_OK
    model = KrausFamilyModel.model_validate_json(out)
    assert model.scale == "1/6"
    assert len(model.ops) == 7
    assert model.expected.verdict == "extreme-doubly-constrained"


def test_export_to_file(run_cli, tmp_path):
    path = str(tmp_path / "family.json")
    code, out, _ = run_cli("export", "qubit_to_d(4)", "--out", path)
    assert code == EXIT_OK
    with open(path, encoding="utf-8") as f:
        assert KrausFamilyModel.model_validate_json(f.read()).d_out == 4


# ---------------------------------------------------------
# products / show / report-all
# ---------------------------------------------------------
def test_products_dual(run_cli):
    code, out, _ = run_cli("products", "five_rank7", "--kind", "dual")
    assert code == EXIT_OK
    assert "√2E15+√3E21" in out
    assert "W7W5*" in out


def test_show(run_cli):
    code, out, _ = run_cli("show", "ohno_3x3_rank4")
    assert code == EXIT_OK
    assert "x11+2x22+x33" in out
    assert "1/4" in out


def test_report_all_subset(run_cli, tmp_path):
    path = str(tmp_path / "report.json")
    code, out, _ = run_cli("report-all", "--cases", "three_to_four", "five_rank6", "--json", "--out", path)
    assert code == EXIT_OK
    report = ReportModel.model_validate_json(out)
    assert report.passed
    assert [c.case for c in report.cases] == ["five_rank6", "three_to_four"]
    with open(path, encoding="utf-8") as f:
        assert f.read() == out


def test_report_all_runs_large_cases_one_at_a_time(run_cli, monkeypatch):
    monkeypatch.setenv("CHOISENSE_EXACT_DIM_LIMIT", "10")
    lock = threading.Lock()
    active = {"now": 0, "peak": 0}

    def tracked_verify(case, **kwargs):
        with lock:
            active["now"] += 1
            active["peak"] = max(active["peak"], active["now"])
        time.sleep(0.05)
        with lock:
            active["now"] -= 1
        return verify_case(case)

    monkeypatch.setattr("choisense.cli.main.verify_case", tracked_verify)
    code, out, _ = run_cli(
        "report-all", "--cases", "five_rank6", "five_rank7", "ohno_4x4_rank5", "--workers", "3", "--json"
    )
    assert code == EXIT_OK
    assert ReportModel.model_validate_json(out).passed
    assert active["peak"] == 1


def test_report_all_collects_errors(run_cli):
    code, out, _ = run_cli("report-all", "--cases", "three_to_four", "nosuch", "--json")
    assert code == EXIT_MISMATCH
    report = ReportModel.model_validate_json(out)
    failed = [c for c in report.cases if not c.passed]
    assert [c.case for c in failed] == ["nosuch"]
    assert "UnknownCaseError" in failed[0].error
