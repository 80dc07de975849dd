# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

import csv
import json
from pathlib import Path
import pytest
from shadowmit import cli, experiments
from shadowmit.experiments import ExperimentConfig
from shadowmit.experiments.audit import AuditReport, AuditRow

SMALL = {
    "experiment": "estimate",
    "qubits": 2,
    "shots": {"main": 2000, "calibration": 2000, "direct": 2000},
    "batch_size": 1000,
}


def _write(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_estimate_run(tmp_path, capsys):
    config = _write(tmp_path, SMALL)
    out = tmp_path / "out"
    code = cli.main(["estimate", "--config", config, "--out", str(out)])
    assert code == cli.EXIT_OK
    folder = Path(capsys.readouterr().out.strip())
    assert folder.parent == out
    assert folder.name.startswith("estimate-")
    assert {p.name for p in folder.iterdir()} == {
        "estimate.csv",
        "suppression.csv",
        "summary.json",
        "config.json",
    }


def test_runs_are_reproducible(tmp_path, capsys):
    config = _write(tmp_path, SMALL)
    for name in ("a", "b"):
        args = ["estimate", "--config", config, "--out", str(tmp_path / name)]
        assert cli.main(args) == cli.EXIT_OK
    a, b = [Path(line) for line in capsys.readouterr().out.split()]
    assert a.name == b.name
    for file in ("estimate.csv", "summary.json"):
        assert (a / file).read_bytes() == (b / file).read_bytes()


def test_seed_override_changes_folder(tmp_path, capsys):
    config = _write(tmp_path, SMALL)
    out = str(tmp_path)
    cli.main(["estimate", "--config", config, "--out", out])
    cli.main(["estimate", "--config", config, "--out", out, "--seed-override", "3"])
    a, b = capsys.readouterr().out.split()
    assert a != b


def test_dump_frames(tmp_path, capsys):
    config = _write(tmp_path, SMALL)
    args = ["estimate", "--config", config, "--out", str(tmp_path)]
    args += ["--dump-frames", "3"]
    assert cli.main(args) == cli.EXIT_OK
    folder = Path(capsys.readouterr().out.strip())
    with open(folder / "frames.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 1 + 3 * 2
    assert [r[0] for r in rows[1:]] == ["0", "0", "1", "1", "2", "2"]


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        json.dumps({"qubits": 0}),
        json.dumps({"shot": 10}),
        json.dumps({"experiment": "audit"}),
    ],
)
def test_invalid_config(tmp_path, capsys, content):
    path = tmp_path / "cfg.json"
    path.write_text(content)
    code = cli.main(["estimate", "--config", str(path), "--out", str(tmp_path)])
    assert code == cli.EXIT_CONFIG
    assert "Invalid configuration" in capsys.readouterr().err


def test_io_errors(tmp_path, capsys):
    missing = str(tmp_path / "missing.json")
    assert cli.main(["estimate", "--config", missing]) == cli.EXIT_IO
    blocker = tmp_path / "file"
    blocker.write_text("")
    config = _write(tmp_path, SMALL)
    code = cli.main(["estimate", "--config", config, "--out", str(blocker)])
    assert code == cli.EXIT_IO
    assert "I/O error" in capsys.readouterr().err


def test_unmitigable_term(tmp_path, capsys):
    data = dict(
        SMALL,
        qubits=1,
        sampler="direct",
        error_model={"type": "tensor_flip", "p": 0.45},
        floor=0.5,
    )
    config = _write(tmp_path, data)
    code = cli.main(["estimate", "--config", config, "--out", str(tmp_path)])
    assert code == cli.EXIT_UNMITIGABLE
    assert "Mitigation failed" in capsys.readouterr().err


def test_failed_audit(tmp_path, capsys, monkeypatch):
    def fake_audit(cfg: ExperimentConfig):
        return AuditReport([AuditRow("broken", 1.0, 2.0, 0.1)])

    monkeypatch.setitem(experiments.RUNNERS, "audit", fake_audit)
    code = cli.main(["audit", "--out", str(tmp_path)])
    assert code == cli.EXIT_AUDIT
    captured = capsys.readouterr()
    assert "FAILED broken" in captured.err
    folder = Path(captured.out.strip())
    assert (folder / "audit.csv").exists()


def test_unknown_experiment():
    with pytest.raises(SystemExit) as info:
        cli.main(["tomography"])
    assert info.value.code == 2
