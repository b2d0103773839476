import json
import shutil
import subprocess
import sys

import pytest

from pipeline import DATES, SMALL, make_settings
from seawatch.harness.cli import main as seawatch_main


def run(*argv, cwd=None):
    exe = shutil.which(argv[0])
    assert exe, f"{argv[0]} is not installed"
    return subprocess.run([exe, *argv[1:]], capture_output=True, text=True, cwd=cwd, timeout=120)


@pytest.fixture
def config(tmp_path):
    make_settings(tmp_path)
    return str(tmp_path / "config.json")


def report_of(proc):
    assert proc.stdout.count("\n") == 1, proc.stdout
    return json.loads(proc.stdout)


def test_processor_with_no_raw_data(config):
    proc = run("seawatch-processor", "--config", config, "--date", "2030-01-01")
    assert proc.returncode == 0, proc.stderr
    doc = report_of(proc)
    assert (doc["records_in"], doc["records_out"]) == (0, 0)


def test_umbrella_run_delegates(config):
    proc = run("seawatch", "run", "processor", "--config", config, "--date", "2030-01-01")
    assert proc.returncode == 0, proc.stderr
    assert report_of(proc)["service"] == "processor"


def test_services_chain_across_processes(config):
    assert run("seawatch-ingestor", "--config", config).returncode == 0
    for d in DATES:
        assert run("seawatch-processor", "--config", config, "--date", d).returncode == 0
        loaded = run("seawatch-loader", "--config", config, "--date", d)
        assert loaded.returncode == 0 and report_of(loaded)["published_count"] == SMALL.n_vessels
    trained = run("seawatch-trainer", "--config", config)
    assert report_of(trained)["model_version"] == "v0001"
    detected = run("seawatch-detector", "--config", config)
    assert detected.returncode == 0, detected.stderr
    assert report_of(detected)["events_by_kind"] == {"ais_gap": 1, "position_jump": 1, "speed_violation": 1}
    assert "INFO" in trained.stderr
    served = run("seawatch-detector", "--config", config, "--serve", "--idle-stop-ms", "100")
    assert served.returncode == 0 and report_of(served)["records_out"] == 0


def test_config_error_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"storage": {"kind": "tape"}}')
    proc = run("seawatch-ingestor", "--config", str(bad))
    assert proc.returncode == 2
    assert "unknown adapter kind: storage.kind" in proc.stderr
    assert proc.stdout == ""


def test_runtime_error_exits_1(config, tmp_path):
    (tmp_path / "lake/raw/x/2024-01-01").mkdir(parents=True)
    (tmp_path / "lake/raw/x/2024-01-01/batch-1-0000.ndjson").write_bytes(b"\xff\n")
    proc = run("seawatch-processor", "--config", config, "--date", "2024-01-01")
    assert proc.returncode == 1
    doc = report_of(proc)
    assert doc["status"] == "error" and "batch-1-0000" in doc["error"]


def test_api_bad_listen_exits_1(config):
    proc = run("seawatch-api", "--config", config, "--listen", "127.0.0.1:notaport")
    assert proc.returncode == 1


def test_bad_date_is_rejected(config):
    assert run("seawatch-loader", "--config", config, "--date", "01/02/2024").returncode == 2


def test_generate_and_score(tmp_path, capsys):
    out = tmp_path / "gen"
    assert seawatch_main(["generate", "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["records"] == (out / "records.ndjson").read_bytes().count(b"\n")
    assert summary["labels"] == (out / "labels.ndjson").read_bytes().count(b"\n") == 15


def test_e2e_then_score_reproduces_report(tmp_path, capsys):
    work = tmp_path / "e2e"
    scenario = tmp_path / "s.json"
    scenario.write_text(json.dumps(SMALL.to_doc()))
    code = seawatch_main(["e2e", "--scenario", str(scenario), "--adapters", "memory", "--workdir", str(work)])
    e2e = json.loads(capsys.readouterr().out)
    assert code == 0 == e2e["exit_code"]
    assert seawatch_main(["score", "--labels", str(work / "labels.ndjson"), "--events", str(work / "events.ndjson")]) == 0
    scored = json.loads(capsys.readouterr().out)
    assert scored == e2e["report"]


def test_e2e_clean_via_subprocess(tmp_path):
    proc = run("seawatch", "e2e", "--clean", "--workdir", str(tmp_path))
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["anomaly_ids"] == [] and doc["report"]["precision"] == 1.0


def test_e2e_failure_exit_code(tmp_path, capsys):
    bad = tmp_path / "s.json"
    bad.write_text(json.dumps({"seed": 1, "n_vessels": 2, "injections": [{"kind": "ais_gap", "count": 1, "gap_s": 60}]}))
    assert seawatch_main(["e2e", "--scenario", str(bad), "--workdir", str(tmp_path / "w")]) == 1
    assert json.loads(capsys.readouterr().out)["failed_stage"] == "detectability"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "seawatch.harness.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "e2e" in proc.stdout
