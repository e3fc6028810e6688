import csv
import io
import json
import subprocess
import sys

import pytest

from circhad.audit import AUDIT_REPORT_SCHEMA
from circhad.cli import run
from circhad.hadamard import CATALOG_SCHEMA
from circhad.search import CERTIFICATE_SCHEMA


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_h3(capsys):
    code, out, _ = call(capsys, "verify", "--row", "1,-1,-1,-1")
    assert code == 0
    assert "is_hadamard: true" in out and "h=1" in out
    code, out, _ = call(capsys, "verify", "--row", "+---", "--format", "json")
    data = json.loads(out)
    assert data["is_hadamard"] is True and data["regular_profile"]["h"] == 1
    assert data["pacf"] == [4, 0, 0, 0]


def test_verify_non_hadamard(capsys):
    code, out, _ = call(capsys, "verify", "--row", "1,1,1,1", "--format", "json")
    assert code == 0
    assert json.loads(out)["is_hadamard"] is False


def test_audit_json(capsys):
    jsonschema = pytest.importorskip("jsonschema")
    code, out, _ = call(capsys, "audit", "--row", "-1,1,1,1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, AUDIT_REPORT_SCHEMA)
    verdicts = {s["step_id"]: s["verdict"] for s in data["steps"]}
    for sid in ("acheS", "acheStar", "defH", "SJ", "SstarJ", "JJ", "C1", "C2"):
        assert verdicts[sid] == "holds-exactly"


def test_audit_extended_and_csv(capsys):
    code, out, _ = call(capsys, "audit", "--row", "+---", "--mode", "extended", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["step_id", "verdict", "witness"]
    assert len(rows) == 13


def test_audit_domain_error(capsys):
    code, out, err = call(capsys, "audit", "--row", "1,1,1,1")
    assert code == 1 and out == "" and "error" in err


def test_search_order8(capsys):
    jsonschema = pytest.importorskip("jsonschema")
    code, out, err = call(capsys, "search", "--order", "8", "--format", "json")
    assert code == 0
    cert = json.loads(out)
    jsonschema.validate(cert, CERTIFICATE_SCHEMA)
    assert cert["raw_count"] == 0 and cert["filter_verdict"]["status"] == "excluded-shape"
    assert "duration_ms" not in cert
    assert "duration_ms" in json.loads(err.strip().splitlines()[-1])["metadata"]


def test_search_confirm_and_checkpoint(capsys, tmp_path):
    ck = tmp_path / "ck.json"
    code, out, _ = call(capsys, "search", "--order", "4", "--checkpoint", str(ck), "--format", "json")
    assert code == 0 and ck.exists()
    assert json.loads(out)["raw_count"] == 8
    code, out, _ = call(capsys, "search", "--order", "12", "--confirm-excluded", "--format", "json")
    assert json.loads(out)["confirmed_empirically"] is True


def test_json_bit_identical(capsys):
    outs = [call(capsys, "barker", "--length", "13", "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [call(capsys, "search", "--order", "4", "--workers", "2", "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_barker_csv(capsys):
    code, out, _ = call(capsys, "barker", "--length", "13", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["order", "mode", "survivor"] and len(rows) == 2


def test_catalog(capsys):
    jsonschema = pytest.importorskip("jsonschema")
    code, out, _ = call(capsys, "catalog", "--format", "json")
    data = json.loads(out)
    jsonschema.validate(data, CATALOG_SCHEMA)
    assert code == 0 and len(data) == 10
    code, out, _ = call(capsys, "catalog")
    assert out.count("\n") == 10


def test_filter(capsys):
    code, out, _ = call(capsys, "filter", "--order", "36", "--format", "json")
    assert code == 0 and json.loads(out)["status"] == "candidate"
    code, out, _ = call(capsys, "filter", "--order", "16")
    assert "excluded-parity" in out
    code, _, err = call(capsys, "filter", "--order", "2")
    assert code == 1


@pytest.mark.parametrize("argv", [[], ["bogus"], ["verify"], ["search", "--order", "x"],
                                  ["catalog", "--format", "xml"]])
def test_usage_errors(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2 and "usage" in err


def test_bad_row_is_domain_error(capsys):
    code, _, err = call(capsys, "verify", "--row", "1,0,1")
    assert code == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "circhad", "filter", "--order", "8"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "excluded-shape" in proc.stdout


def test_log_env(monkeypatch, capsys):
    monkeypatch.setenv("CHL_LOG", "debug")
    code, _, _ = call(capsys, "filter", "--order", "9")
    assert code == 0
