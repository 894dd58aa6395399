import json
import subprocess
import sys

import pytest

from picardlab.cli import main
from picardlab.oracle import random_instance
from picardlab.report import dumps

VALID_SPACE = {
    "points": 3,
    "dist": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]],
    "leq": [[1, 1, 1], [0, 1, 1], [0, 0, 1]],
}

BROKEN_TRIANGLE = {
    "points": 3,
    "dist": [["0", "1", "5"], ["1", "0", "1"], ["5", "1", "0"]],
    "leq": [[1, 1, 1], [0, 1, 1], [0, 0, 1]],
}

INTERVAL_INSTANCE = {
    "schema": 1,
    "space": {"interval": [0.0, 1.0], "order": "usual"},
    "map": {"kind": "expr", "body": "(t+1)/2"},
    "certificate": {"kind": "psi", "fn": {"kind": "linear", "alpha": "3/5"}},
    "config": {"theorem": "t3", "x0": 0.0, "trials": 40},
    "seed": 0,
}


def write(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def test_validate_ok(tmp_path, capsys):
    assert main(["validate", write(tmp_path, "s.json", VALID_SPACE)]) == 0
    assert "VALID" in capsys.readouterr().out


def test_validate_broken_triangle(tmp_path, capsys):
    code = main(["validate", write(tmp_path, "s.json", BROKEN_TRIANGLE)])
    out = capsys.readouterr().out
    assert code == 1
    assert "metric/triangle" in out and "(0, 1, 2)" in out


def test_malformed_json_exits_2_with_position(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"points": 3,\n  "dist": [[}')
    code = main(["validate", str(p)])
    err = capsys.readouterr().err
    assert code == 2
    assert "line 2" in err


def test_check_cert_psi_pass(tmp_path, capsys):
    cert = {"kind": "psi", "fn": {"kind": "linear", "alpha": "1/2"}}
    code = main(["check-cert", write(tmp_path, "c.json", cert), "--trials", "16"])
    out = capsys.readouterr().out
    assert code == 0
    assert "boyd-wong" in out


def test_check_cert_identity_fails(tmp_path):
    cert = {"kind": "psi", "fn": {"kind": "linear", "alpha": "1"}}
    assert main(["check-cert", write(tmp_path, "c.json", cert), "--trials", "8"]) == 1


def test_check_cert_implicit_and_sp(tmp_path):
    implicit = {"kind": "from_psi", "psi": {"kind": "linear", "alpha": "1/2"}}
    assert main(["check-cert", write(tmp_path, "f.json", implicit),
                 "--trials", "16"]) == 0
    sp = {"kind": "sp", "P": "nonneg", "F": {"kind": "expr6", "body": "0.5*t2 - t1"},
          "a": {"kind": "linear", "alpha": "1/4"}}
    assert main(["check-cert", write(tmp_path, "sp.json", sp)]) == 0


def test_run_interval_instance(tmp_path, capsys):
    out_json = tmp_path / "verdict.json"
    code = main(["run", write(tmp_path, "i.json", INTERVAL_INSTANCE),
                 "--json", str(out_json)])
    out = capsys.readouterr().out
    assert code == 0
    assert "fixed point: 0.99999999" in out
    payload = json.loads(out_json.read_text())
    assert payload["schema"] == 1
    assert payload["verdict"]["ok"] is True
    assert abs(payload["verdict"]["fixed_point"] - 1.0) < 1e-8


def test_run_rejects_mismatched_certificate(tmp_path, capsys):
    inst = dict(INTERVAL_INSTANCE)
    code = main(["run", write(tmp_path, "i.json", inst), "--theorem", "t5"])
    assert code == 2
    assert "t5" in capsys.readouterr().err


def test_oracle_command(tmp_path, capsys):
    inst = random_instance(6, 0.3, "1/2", seed=3)
    code = main(["oracle", write(tmp_path, "o.json", inst.to_json()), "--compare"])
    out = capsys.readouterr().out
    assert code == 0
    assert "pipeline agreement: True" in out


def test_fuzz_command(tmp_path, capsys):
    out_json = tmp_path / "fuzz.json"
    code = main(["fuzz", "--n", "6", "--count", "20", "--seed", "2",
                 "--json", str(out_json)])
    out = capsys.readouterr().out
    assert code == 0
    assert "agreements: 20/20" in out
    assert json.loads(out_json.read_text())["report"]["count"] == 20


def test_extract_gap_command(tmp_path, capsys):
    seq = {"kind": "walk01", "N": 20000}
    code = main(["extract-gap", write(tmp_path, "w.json", seq),
                 "--theta", "0.3", "--tail-tol", "0.025"])
    out = capsys.readouterr().out
    assert code == 0
    assert "gap level b=0.3" in out


def test_extract_gap_nogap(tmp_path, capsys):
    seq = {"kind": "explicit", "points": [1.0 - 2.0 ** -n for n in range(40)]}
    code = main(["extract-gap", write(tmp_path, "g.json", seq), "--theta", "0.3"])
    assert code == 0
    assert "no gap" in capsys.readouterr().out


def test_seed_env_override(tmp_path, capsys, monkeypatch):
    cert = {"kind": "psi", "fn": {"kind": "linear", "alpha": "1/2"}}
    path = write(tmp_path, "c.json", cert)
    monkeypatch.setenv("PICARDLAB_SEED", "not-an-int")
    assert main(["check-cert", path, "--trials", "4"]) == 2
    monkeypatch.setenv("PICARDLAB_SEED", "123")
    assert main(["check-cert", path, "--trials", "4"]) == 0


def test_json_reports_byte_identical(tmp_path):
    inst = random_instance(7, 0.3, "1/2", seed=11)
    path = write(tmp_path, "i.json", inst.to_json())
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["oracle", path, "--json", str(out)]) in (0, 1)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_module_entrypoint_runs():
    proc = subprocess.run([sys.executable, "-m", "picardlab", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "picardlab" in proc.stdout
