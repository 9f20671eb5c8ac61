"""
Tests for the command-line surface.
"""
import json
import math

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from walters_thermo.cli import RunConfig, main, run
from walters_thermo.config import Config
from walters_thermo.db import session as db_session
from walters_thermo.reports import CSV_COLUMNS, CommandReport
from walters_thermo.specs import thm2


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_pressure_zero(capsys):
    code, report, _ = run_json(capsys, "pressure", "--builtin", "zero", "--t", "1")
    assert code == 0
    assert report["rows"][0]["P"] == pytest.approx(math.log(2.0), abs=1e-12)
    assert report["summary"]["P"] == pytest.approx(math.log(2.0), abs=1e-12)


def test_csv_columns(capsys):
    assert main(["pressure", "--builtin", "constant:-0.3", "--t-grid", "1:3:3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS["pressure"])
    assert len(lines) == 4


def test_select_from_spec_file(tmp_path, capsys):
    spec = tmp_path / "thm2.json"
    spec.write_text(json.dumps({"name": "thm2", **thm2().to_dict()}))
    code, report, _ = run_json(capsys, "select", "--spec", str(spec))
    assert code == 0
    assert report["summary"]["verdict"] == "Delta1"
    values = {row["quantity"]: row["value"] for row in report["rows"]}
    assert values["sum_a"] == pytest.approx(-11.0)
    assert values["b+d+sum_c"] == pytest.approx(-4.0)


def test_example_checklist_passes(capsys):
    code, report, _ = run_json(capsys, "example1")
    failed = [row["check"] for row in report["rows"] if row["status"] != "pass"]
    assert failed == []
    assert code == 0
    assert report["summary"]["all_pass"]


def test_example_checklist_other_b1(capsys):
    code, report, _ = run_json(capsys, "example1", "--builtin", "example1:-0.2")
    assert code == 0
    assert report["potential"] == "example1:-0.2"


def test_deterministic_output(capsys):
    argv = ["gibbs", "--builtin", "thm2", "--t-grid", "1:4:4", "--word", "0", "--word", "011", "--format", "json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_json_round_trip(capsys):
    _, _, text = run_json(capsys, "zero-temp", "--builtin", "symmetric", "--q-max", "4")
    report = CommandReport.from_json(text)
    assert report.command == "zero-temp"
    assert report.summary["A"] == pytest.approx(-3.0, abs=1e-12)
    assert report.to_json() + "\n" == text


def test_eigen_and_oracle_commands(capsys):
    code, report, _ = run_json(capsys, "eigen", "--builtin", "example1", "--t", "2", "--q-max", "5")
    assert code == 0
    assert report["summary"]["max_residual"] < 1e-9
    code, report, _ = run_json(capsys, "oracle", "--builtin", "zero", "--t", "1", "--depth", "4", "--word", "01")
    assert code == 0
    assert report["rows"][0]["gap"] == pytest.approx(0.0, abs=1e-12)
    assert report["rows"][0]["oracle_measure"] == pytest.approx(0.25, abs=1e-12)


def test_rates_command(capsys):
    code, report, _ = run_json(capsys, "rates", "--builtin", "thm2", "--t-grid", "10:40:4", "--word", "1")
    assert code == 0
    labels = {row["label"] for row in report["rows"]}
    assert labels == {"epsilon", "1"}
    assert report["summary"]["A"] == pytest.approx(-4.0, abs=1e-12)



def test_rates_without_A_keeps_slopes(capsys):
    code, report, _ = run_json(capsys, "rates", "--builtin", "zero", "--t-grid", "1:3:3", "--word", "01")
    assert code == 0
    summary = report["summary"]
    assert summary["slope[epsilon]"] == pytest.approx(0.0, abs=1e-12)
    assert summary["slope[01]"] == pytest.approx(0.0, abs=1e-12)
    assert "A" not in summary and "psi" not in summary
    assert any(note.startswith("A and psi omitted") for note in report["notes"])
    measures = [row["log_value"] for row in report["rows"] if row["label"] == "01"]
    assert measures == pytest.approx([math.log(0.25)] * 3, abs=1e-12)


def test_oracle_depth_above_maximum_exits_2(capsys, monkeypatch):
    monkeypatch.setattr(Config, "MAX_DEPTH", 8)
    code, report, _ = run_json(capsys, "oracle", "--builtin", "zero", "--t", "1", "--depth", "10")
    assert code == 2
    assert report["summary"]["module"] == "oracle"


def test_oracle_default_depths_note_skipped(capsys, monkeypatch):
    monkeypatch.setattr(Config, "MAX_DEPTH", 8)
    code, report, _ = run_json(capsys, "oracle", "--builtin", "zero", "--t", "1")
    assert code == 0
    assert [row["k"] for row in report["rows"]] == [4, 6, 8]
    skipped = [note for note in report["notes"] if "skipped" in note]
    assert len(skipped) == 2
    assert "default depth 10" in skipped[0] and "default depth 12" in skipped[1]


def test_validate_reports_hypotheses(capsys):
    code, report, _ = run_json(capsys, "validate", "--builtin", "zero")
    assert code == 0
    assert not report["summary"]["hypotheses_hold"]
    code, report, _ = run_json(capsys, "validate", "--builtin", "thm2")
    assert report["summary"]["hypotheses_hold"]
    assert report["summary"]["non_positive"]


@pytest.mark.parametrize(
    "argv,module",
    [
        (["pressure", "--builtin", "nope"], "specs"),
        (["zero-temp", "--builtin", "zero"], "zerotemp"),
        (["gibbs", "--builtin", "zero", "--word", "012"], "cli"),
        (["pressure", "--builtin", "zero", "--t-grid", "3:1:4"], "cli"),
    ],
)
def test_validation_failures_exit_2(capsys, argv, module):
    code, report, _ = run_json(capsys, *argv)
    assert code == 2
    assert report["summary"]["module"] == module


def test_missing_potential_exits_2():
    code, report = run(RunConfig(command="pressure"))
    assert code == 2
    assert report.summary["error"] == "SpecValidationError"


@pytest.fixture
def run_store(tmp_path, monkeypatch):
    engine = create_engine(f"sqlite:///{tmp_path / 'runs.db'}")
    monkeypatch.setattr(db_session, "engine", engine)
    monkeypatch.setattr(db_session, "SessionLocal", sessionmaker(bind=engine, autoflush=False))
    yield engine
    engine.dispose()


def test_store_and_list_runs(run_store, capsys):
    code, _, emitted = run_json(capsys, "pressure", "--builtin", "zero", "--t", "1", "--store")
    assert code == 0
    code, listing, _ = run_json(capsys, "runs")
    assert code == 0
    assert len(listing["rows"]) == 1
    row = listing["rows"][0]
    assert row["command"] == "pressure"
    assert row["potential"] == "zero"
    assert row["config_digest"] == RunConfig(
        command="pressure", builtin="zero", t=1.0, fmt="json"
    ).digest()

    with db_session.get_db_session() as s:
        from walters_thermo.db.crud import get_run
        assert get_run(s, row["id"]).report_json + "\n" == emitted



def test_show_filter_and_delete_runs(run_store, capsys):
    assert main(["pressure", "--builtin", "zero", "--t", "1", "--store"]) == 0
    assert main(["select", "--builtin", "thm2", "--store"]) == 0
    capsys.readouterr()

    _, listing, _ = run_json(capsys, "runs", "--command", "select")
    assert [row["command"] for row in listing["rows"]] == ["select"]
    select_id = listing["rows"][0]["id"]

    code, shown, _ = run_json(capsys, "runs", "--show", str(select_id))
    assert code == 0
    assert shown["rows"][0]["id"] == select_id
    assert shown["summary"]["report"]["summary"]["verdict"] == "Delta1"

    code, deleted, _ = run_json(capsys, "runs", "--delete", str(select_id))
    assert code == 0
    assert deleted["summary"] == {"deleted": select_id}
    _, listing, _ = run_json(capsys, "runs")
    assert [row["command"] for row in listing["rows"]] == ["pressure"]


@pytest.mark.parametrize("flag", ["--show", "--delete"])
def test_unknown_run_id_exits_2(run_store, capsys, flag):
    code, report, _ = run_json(capsys, "runs", flag, "999")
    assert code == 2
    assert report["summary"]["module"] == "store"


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.csv"
    assert main(["select", "--builtin", "symmetric", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text().startswith("quantity,value")
