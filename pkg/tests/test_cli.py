import csv
import io
import json
import math

import pytest

from starsteer import cli
from starsteer.errors import NoCrossingError


def _write_spec(tmp_path, payload, name="net.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def _werner_spec(tmp_path, p, n=2):
    return _write_spec(tmp_path, {"n": n, "sources": [{"kind": "werner", "p": p}] * n})


def test_evaluate_violation(tmp_path, capsys):
    spec = _werner_spec(tmp_path, 0.8)
    code = cli.main(["evaluate", "--spec", spec, "--inequality", "T1_LINE"])
    assert code == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 1
    row = rows[0]
    assert row["id"] == "T1_LINE"
    assert abs(row["lhs"] - 1.92) < 1e-10
    assert row["bound"] == 1.0
    assert row["violated"] is True
    assert abs(row["margin"] - (row["lhs"] - row["bound"])) < 1e-15


def test_evaluate_no_violation(tmp_path, capsys):
    spec = _werner_spec(tmp_path, 0.5)
    code = cli.main(["evaluate", "--spec", spec, "--inequality", "T1_LINE"])
    assert code == 0
    row = json.loads(capsys.readouterr().out)[0]
    assert row["violated"] is False and abs(row["lhs"] - 0.75) < 1e-10


def test_evaluate_defaults_to_applicable_ids(tmp_path, capsys):
    spec = _werner_spec(tmp_path, 0.9)
    assert cli.main(["evaluate", "--spec", spec]) == 0
    rows = json.loads(capsys.readouterr().out)
    ids = {r["id"] for r in rows}
    assert {"T1_LINE", "T2A_EVEN_SQ", "T2B_EVEN_ROOT", "T3_CHSH"} <= ids


def test_evaluate_psd_violation_exits_2(tmp_path, capsys):
    spec = _write_spec(tmp_path, {"n": 1, "sources": [{"kind": "bell_diagonal", "c": [1, 1, 1]}]})
    code = cli.main(["evaluate", "--spec", spec, "--inequality", "T1_LINE"])
    assert code == 2
    assert "PSD" in capsys.readouterr().err


def test_evaluate_malformed_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert cli.main(["evaluate", "--spec", str(bad), "--inequality", "T1_LINE"]) == 2
    assert "malformed" in capsys.readouterr().err


def test_evaluate_unknown_inequality_exits_2(tmp_path, capsys):
    spec = _werner_spec(tmp_path, 0.5)
    assert cli.main(["evaluate", "--spec", spec, "--inequality", "T9_BOGUS"]) == 2
    assert "unknown inequality" in capsys.readouterr().err


@pytest.mark.parametrize(
    "args,expected",
    [
        (["--n", "3", "--inequality", "T2B_ODD_ROOT"], 0.589),
        (["--n", "3", "--inequality", "T4_GEN_2SET"], 0.7937),
        (["--n", "2", "--inequality", "T3_CHSH"], 0.5774),
    ],
)
def test_threshold_values(args, expected, capsys):
    assert cli.main(["threshold", *args]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert abs(rows[0]["p_star"] - expected) < 1e-3


def test_threshold_settings_form_selection(capsys):
    assert cli.main(["threshold", "--n", "3", "--settings", "3", "--form", "root"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["inequality"] == "T2B_ODD_ROOT"


def test_threshold_no_crossing_exit_3(monkeypatch, capsys):
    def boom(*args, **kwargs):
        raise NoCrossingError("no crossing for test")

    monkeypatch.setattr(cli, "werner_threshold", boom)
    assert cli.main(["threshold", "--n", "2", "--inequality", "T1_LINE"]) == 3
    assert "no crossing" in capsys.readouterr().err


def test_scan_grid(capsys):
    code = cli.main(["scan", "--n", "2", "--grid", "0:1:3", "--inequality", "T1_LINE"])
    assert code == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["p"] for r in rows] == [0.0, 0.5, 1.0]
    assert abs(rows[2]["lhs"] - 3.0) < 1e-10


def test_scan_parallel_matches_serial(capsys):
    assert cli.main(["scan", "--n", "2", "--grid", "0:1:4", "--inequality", "T1_LINE"]) == 0
    serial = capsys.readouterr().out
    assert cli.main(["scan", "--n", "2", "--grid", "0:1:4", "--inequality", "T1_LINE", "--jobs", "2"]) == 0
    parallel = capsys.readouterr().out
    assert serial == parallel


def test_scan_requires_grid(capsys):
    assert cli.main(["scan", "--n", "2", "--inequality", "T1_LINE"]) == 2
    assert cli.main(["scan", "--n", "2", "--grid", "0:1:1", "--inequality", "T1_LINE"]) == 2


def test_lemmas_command(capsys):
    assert cli.main(["lemmas", "--which", "lemma1", "--n", "2"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert abs(rows[0]["max_norm"] - 2 * math.sqrt(2)) < 1e-9


def test_oracle_command(capsys):
    assert cli.main(["oracle", "--n", "2", "--inequality", "T1_LINE", "--restarts", "8", "--seed", "1"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["model"] == "product"
    assert rows[0]["sound"] is True
    assert abs(rows[0]["best"] - 1.0) < 1e-6


def test_report_contains_key_constants(capsys):
    assert cli.main(["report"]) == 0
    rows = json.loads(capsys.readouterr().out)
    p_stars = [r["p_star"] for r in rows]
    for target in (1 / math.sqrt(3), 1 / math.sqrt(2), 0.589, 0.7937, 0.703, 0.769):
        assert any(abs(p - target) < 1e-3 for p in p_stars), target
    cited = {r["p_star"] for r in rows if r["source_tag"] == "paper-cited"}
    assert cited == {0.8660254037844386, 0.741, 0.7154}


def test_json_roundtrip_bitexact(tmp_path):
    out = tmp_path / "rows.json"
    assert cli.main(["threshold", "--n", "2", "--inequality", "T1_LINE", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())
    # JSON numbers serialise at full precision: parse -> dump is stable.
    assert json.loads(json.dumps(rows)) == rows


def test_csv_roundtrip_stable(tmp_path):
    out = tmp_path / "rows.csv"
    assert (
        cli.main(
            ["evaluate", "--spec", _werner_spec(tmp_path, 0.735), "--inequality", "T1_LINE",
             "--format", "csv", "--out", str(out)]
        )
        == 0
    )
    text = out.read_text()
    rows = list(csv.DictReader(io.StringIO(text)))
    # Re-emitting the parsed numbers reproduces the same text (12 significant digits).
    refmt = {k: cli._fmt_value(float(v)) if k in ("lhs", "bound", "margin") else v
             for k, v in rows[0].items()}
    for key in ("lhs", "bound", "margin"):
        assert refmt[key] == rows[0][key]
    assert "." in rows[0]["lhs"] and "," not in rows[0]["lhs"]


def test_missing_spec_file_exits_2(tmp_path, capsys):
    assert cli.main(["evaluate", "--spec", str(tmp_path / "nope.json"), "--inequality", "T1_LINE"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_bad_output_directory_exits_2(tmp_path, capsys):
    out = tmp_path / "missing" / "rows.json"
    assert cli.main(["lemmas", "--which", "lemma1", "--n", "1", "--out", str(out)]) == 2
    assert "output directory" in capsys.readouterr().err
