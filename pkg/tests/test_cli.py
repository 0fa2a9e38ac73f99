import json
import subprocess
import sys

import pytest

from thetareg.cli import main, parse_eta, records_digest
from thetareg.fields import parse_field
from thetareg.repro import REPRO


def _read(path):
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


def test_no_arguments_is_usage_error(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_bad_field_and_eta(capsys):
    assert main(["scan", "--field", "cubic", "--eta", "1", "--pmax", "100"]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["scan", "--field", "d6", "--eta", "1,2,3,4,5,6,7", "--pmax", "100"]) == 2
    assert main(["scan", "--field", "d6", "--bogus"]) == 2


def test_parse_eta_forms():
    d6 = parse_field("d6")
    assert parse_eta("1,-3,0,-7,1,-1", d6) == parse_eta("x^5-3x^4-7x^2+x-1", d6) == (-1, 1, -7, 0, -3, 1)
    assert parse_eta("3*x**2 - 2*x + 6", parse_field("shanks:41")) == (6, -2, 3)
    assert parse_eta("5+2x", parse_field("quad:6")) == (5, 2)
    with pytest.raises(ValueError):
        parse_eta("x/2", d6)


def test_scan_writes_records_and_manifest(tmp_path):
    out = tmp_path / "hits.jsonl"
    assert main(["scan", "--field", "quad:6", "--eta", "2,5", "--pmax", "1000", "--out", str(out)]) == 0
    recs = _read(out)
    assert [r["p"] for r in recs] == [7, 523]
    assert set(recs[0]) >= {"p", "char", "residues", "kernel", "alpha_rows"}
    man = json.load(open(str(out) + ".manifest.json"))
    assert man["command"] == "scan" and man["field"] == "quad:6"
    assert man["output_digest"] == records_digest(recs)
    for key in ("argv", "seed", "params", "version", "wall_time"):
        assert key in man


def test_digest_is_stable(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        assert main(["stats", "--field", "c3:11", "--p", "43", "--trials", "20000", "--seed", "42", "--experiment", "rank", "--out", str(path)]) == 0
    ma = json.load(open(str(a) + ".manifest.json"))
    mb = json.load(open(str(b) + ".manifest.json"))
    assert ma["output_digest"] == mb["output_digest"] and ma["seed"] == 42
    assert records_digest([{"b": 1, "a": 2}]) == records_digest([{"a": 2, "b": 1}])


def test_phi_and_fermat_commands(capsys):
    assert main(["phi", "--a", "12", "--m", "35", "--factor"]) == 0
    rec = json.loads(capsys.readouterr().out.splitlines()[0])
    assert rec["phi_tilde"] == "72872404828019704577129461"
    assert main(["fermat-scan", "--a", "659", "--pmax", "100000"]) == 0
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines() if x.startswith("{")]
    assert [r["p"] for r in lines if "p" in r] == [23, 131, 2221, 9161, 65983]
    assert main(["fermat-mean", "--a", "839", "--pmax", "10000"]) == 0
    assert main(["phi", "--a", "1", "--m", "3"]) == 2


def test_indep_and_extra_commands(capsys):
    assert main(["indep", "--field", "d6", "--p", "17", "--trials", "5000", "--constraints", "0=4,1=4,4=1"]) == 0
    assert main(["extra-div", "--p", "101", "--trials", "5000"]) == 0
    out = capsys.readouterr().out
    assert '"inv_p2"' in out


def test_repro_targets_have_anchors(capsys):
    assert main(["repro", "list"]) == 0
    for t in REPRO.values():
        assert t.anchor and t.kind in {"scan", "report", "fermat", "stats", "indep", "extra", "phi", "phi-prod", "mean"}
    assert main(["repro"]) == 2
    assert main(["repro", "nope"]) == 2


def test_repro_run_records_anchor(tmp_path):
    out = tmp_path / "r.jsonl"
    assert main(["repro", "d6-delta2", "--out", str(out)]) == 0
    man = json.load(open(str(out) + ".manifest.json"))
    assert man["anchor"] == REPRO["d6-delta2"].anchor and man["summary"]["ok"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "thetareg", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("thetareg")
