import csv
import io
import json
import math

import pytest

from pluri import cli
from pluri import verify as V
from pluri.constants import BETA_N_NOTE
from pluri.reports import InequalityReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(text):
    return json.loads(text)


def test_energy_power(capsys):
    code, out, _ = run(capsys, "energy", "--family", "power:alpha=1,k=1", "--p", "1", "--n", "2")
    assert code == 0
    doc = as_json(out)
    assert set(doc) == {"command", "params", "rows", "summary"}
    row = doc["rows"][0]
    assert row["closed_form_delta"] <= 1e-8
    # n (4 pi)^n alpha^n B(2, n) with n = 2, B(2, 2) = 1/6
    assert row["energy"] == pytest.approx(2 * (4 * math.pi) ** 2 / 6, rel=1e-8)
    assert row["p"] == 1.0 and row["n"] == 2 and row["family"] == "power:alpha=1,k=1"


def test_energy_with_chi_and_norm(capsys):
    code, out, _ = run(capsys, "energy", "--family", "truncated-log:c=6,beta=-2", "--q", "2",
                       "--chi", "linear", "--n", "2")
    assert code == 0
    row = as_json(out)["rows"][0]
    assert row["energy_chi"] == pytest.approx(row["energy"], rel=1e-12)
    assert row["lq_norm"] > 0 and row["sup_norm"] == 12.0


def test_optimal_squeeze(capsys):
    code, out, _ = run(capsys, "optimal", "--n", "2")
    assert code == 0
    doc = as_json(out)
    row = doc["rows"][0]
    assert row["upper"] == pytest.approx(row["lower"], rel=1e-12)
    assert row["max_rel_diff"] <= 1e-12
    assert doc["summary"]["agree_1e-12"] is True
    code, out, _ = run(capsys, "optimal")
    assert [r["n"] for r in as_json(out)["rows"]] == [2, 3, 4, 5, 6]


def test_scan_ex1_csv(capsys):
    code, out, _ = run(capsys, "scan", "--which", "ex1", "--p", "1", "--q", "1", "--n", "2",
                       "--j", "1:50", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 50
    assert list(rows[0]) == ["which", "p", "q", "n", "j", "energy", "lq_norm", "ratio"]
    for r in rows:
        assert float(r["energy"]) == pytest.approx((2 * math.pi) ** 2, rel=1e-10)


def test_scan_geometric_range(capsys):
    code, out, _ = run(capsys, "scan", "--which", "ex2", "--j", "1:1e6:geom:4")
    doc = as_json(out)
    assert [r["j"] for r in doc["rows"]] == pytest.approx([1, 100, 1e4, 1e6])
    assert doc["summary"]["trend"] == "diverges"


def test_ratio_limit(capsys):
    code, out, _ = run(capsys, "ratio-limit", "--p", "1", "--n", "2")
    assert code == 0
    s = as_json(out)["summary"]
    assert s["trend"] == "converges_to" and s["monotone"] is True
    assert s["final_rel_error"] <= 1e-3


def test_constants_note(capsys):
    code, out, _ = run(capsys, "constants", "--p", "1", "--q", "2", "--n", "2")
    doc = as_json(out)
    assert doc["summary"]["note"] == BETA_N_NOTE
    row = doc["rows"][0]
    assert row["B_lower"] == pytest.approx(row["B_upper_ball"], rel=1e-13)
    code, out, _ = run(capsys, "constants", "--beta-n", "1.5")
    assert "note" not in as_json(out)["summary"]


@pytest.mark.parametrize("argv", [
    ["mt-check", "--family", "power:alpha=1,k=1"],
    ["mt-check", "--suite"],
    ["sobolev-check", "--family", "quadratic", "--q", "3"],
    ["est-check", "--u", "quadratic", "--v", "power:alpha=1,k=1", "--k", "2"],
    ["holder-check", "--u0", "power:alpha=1,k=1", "--u", "truncated-log:c=1,beta=-1",
     "--u", "truncated-log:c=1,beta=-1"],
    ["chi-check", "--family", "power:alpha=1,k=1", "--chi", "power:p=0.5", "--form", "sobolev", "--q", "2"],
    ["solve-ma", "--family", "truncated-log:c=1,beta=-1", "--t", "1"],
])
def test_checks_exit_zero(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    doc = as_json(out)
    assert doc["rows"]


def test_solve_ma_summary(capsys):
    code, out, _ = run(capsys, "solve-ma", "--family", "power:alpha=1,k=1", "--grid-size", "512")
    s = as_json(out)["summary"]
    assert s["roundtrip_sup_error"] <= 1e-6
    assert s["all_hold"] is True


@pytest.mark.parametrize("argv", [
    ["energy", "--family", "nosuch:x=1"],
    ["energy", "--family", "power:alpha=1,k=1", "--p", "-1"],
    ["energy", "--family", "power:alpha=1,k=1", "--n", "1"],
    ["mt-check", "--family", "power:alpha=1,k=1", "--eps", "1.5"],
    ["ratio-limit", "--beta", "5"],
    ["energy"],
    ["bogus"],
    ["scan", "--which", "ex9"],
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_domain_error_names_parameter(capsys):
    code, _, err = run(capsys, "energy", "--family", "power:alpha=1,k=1", "--p", "-1")
    assert code == 2 and "p" in err


def test_failed_verdict_exits_one(capsys, monkeypatch):
    def fake(u, p, n, **kw):
        return InequalityReport.from_sides("mt", 2.0, 1.0, {"p": p, "n": n})
    monkeypatch.setattr(V, "check_mt", fake)
    code, out, _ = run(capsys, "mt-check", "--family", "power:alpha=1,k=1")
    assert code == 1
    assert as_json(out)["rows"][0]["verdict"] == "fails"


def test_deterministic_bytes(capsys):
    argv = ["sobolev-check", "--suite", "--format", "csv"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    _, parallel, _ = run(capsys, *argv, "--jobs", "2")
    assert parallel == first


def test_rows_carry_parameters(capsys):
    _, out, _ = run(capsys, "sobolev-check", "--family", "power:alpha=1,k=1", "--q", "3", "--p", "2")
    row = as_json(out)["rows"][0]
    for key in ("p", "q", "n", "eps", "beta_n", "form", "family", "lhs", "rhs", "slack", "verdict"):
        assert key in row


def test_float_formatting():
    assert cli._fmt_float(0.1) == "0.10000000000000001"
    assert cli._fmt_float(math.inf) == "inf"
    text = cli.render("x", {}, [{"a": math.inf, "b": 1.5}], {}, "json")
    assert as_json(text)["rows"][0] == {"a": "inf", "b": 1.5}


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\np = 2\nn = 3\nfamily = power:alpha=1,k=1; quadratic\n")
    code, out, _ = run(capsys, "energy", "--config", str(cfg))
    assert code == 0
    doc = as_json(out)
    assert [r["family"] for r in doc["rows"]] == ["power:alpha=1,k=1", "quadratic"]
    assert doc["rows"][0]["p"] == 2.0 and doc["rows"][0]["n"] == 3
    # explicit flags override the file
    code, out, _ = run(capsys, "energy", "--config", str(cfg), "--p", "1")
    assert as_json(out)["rows"][0]["p"] == 1.0


def test_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 1\n")
    code, _, err = run(capsys, "energy", "--config", str(cfg), "--family", "zero")
    assert code == 2 and "nonsense" in err
    cfg.write_text("p = -3\n")
    code, _, _ = run(capsys, "energy", "--config", str(cfg), "--family", "zero")
    assert code == 2
    code, _, _ = run(capsys, "energy", "--config", str(tmp_path / "missing.cfg"), "--family", "zero")
    assert code == 2


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "optimal", "--n", "3", "--output", str(target))
    assert code == 0 and out == ""
    assert as_json(target.read_text())["rows"][0]["n"] == 3


def test_tol_environment(monkeypatch, capsys):
    monkeypatch.setenv("PLURI_TOL", "1e-6")
    _, out, _ = run(capsys, "energy", "--family", "zero")
    assert as_json(out)["params"]["tol"] == 1e-6
