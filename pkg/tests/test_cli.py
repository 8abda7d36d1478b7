import csv
import io
import json
import math
import os

import pytest

from mlfineq import cli, core
from mlfineq.core import Params


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):
    code, out, err = run(argv)
    assert code == 0, err
    rec = json.loads(out)
    assert rec["schema_version"] == "1"
    assert set(rec) == {"schema_version", "command", "params", "summary", "rows"}
    return rec


def test_eval_examples():
    rec = run_json(["eval", "--alpha", "1", "--beta", "1", "--re", "1", "--im", "0"])
    assert rec["command"] == "eval"
    assert rec["rows"][0]["re"] == pytest.approx(math.e, rel=1e-15)
    rec = run_json(["eval", "--alpha", "2", "--beta", "3", "--re", "4"])
    assert rec["rows"][0]["re"] == pytest.approx((math.cosh(2) - 1) / 4, rel=1e-15)
    rec = run_json(["eval", "--alpha", "0.6", "--beta", "0.8", "--re", "1.3", "--im", "0"])
    assert rec["rows"][0]["re"] == pytest.approx(8.499622993183192, rel=1e-14)
    assert rec["rows"][0]["method"] == "series"


@pytest.mark.parametrize("a,b,re,im", [(0.6, 0.8, 1.3, 0.0), (1.5, 1.0, 15.0, 25.98), (2.5, 0.3, -200.0, 13.0)])
def test_eval_round_trip(a, b, re, im):
    rec = run_json(["eval", "--alpha", str(a), "--beta", str(b), "--re", str(re), "--im", str(im)])
    r = core.eval(Params(a, b), complex(re, im))
    row = rec["rows"][0]
    assert row["re"] == r.value.real and row["im"] == r.value.imag
    assert row["abs_err_est"] == r.abs_err_est and row["method"] == r.method.value


def test_seventeen_digits():
    _, out, _ = run(["eval", "--alpha", "1", "--beta", "1", "--re", "1"])
    assert "2.7182818284590451" in out


def test_csv_output():
    code, out, _ = run(["eval", "--alpha", "1", "--beta", "1", "--re", "1", "--format", "csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["schema_version"] == "1" and rows[0]["method"] == "closed_form"
    assert float(rows[0]["re"]) == math.e
    assert out.endswith("\r\n")


def test_exit_codes():
    assert run(["eval", "--alpha", "0", "--beta", "1", "--re", "1"])[0] == 2
    assert run(["eval", "--alpha", "-1", "--beta", "1", "--re", "1"])[0] == 2
    assert run(["eval", "--alpha", "1", "--beta", "1"])[0] == 2
    assert run(["bogus"])[0] == 2
    assert run(["figure", "--which", "3"])[0] == 2
    assert run(["figure", "--which", "1", "--resolution", "10"])[0] == 2
    assert run(["zeros", "--alpha", "2", "--beta", "2"])[0] == 2
    assert run(["cm", "--alpha", "1", "--beta", "1", "--order", "30"])[0] == 2
    assert run(["check", "--alpha", "1.5", "--beta", "3", "--ineq", "two-sided", "--grid", "5"])[0] == 2
    code, out, err = run(["eval", "--alpha", "1", "--beta", "1", "--re", "1000"])
    assert code == 3
    rec = json.loads(out)
    assert rec["summary"]["ok"] is False and "NaN" not in out and rec["rows"] == []


def test_contour_retries_then_exit_4(monkeypatch):
    from mlfineq import zeros
    from mlfineq.errors import ContourThroughZero

    calls = []

    def boom(p, r, n):
        calls.append(r)
        raise ContourThroughZero("on a zero")

    monkeypatch.setattr(zeros, "count_zeros_rect", boom)
    code, out, _ = run(["zeros", "--alpha", "2", "--beta", "2", "--rect", "-20", "-1", "-1", "1"])
    assert code == 4
    assert len(calls) == 4 and len(set(calls)) == 4


def test_contour_perturbation_recovers():
    # the left edge passes through the zero -pi^2; one perturbed retry fixes it
    rec = run_json(["zeros", "--alpha", "2", "--beta", "2", "--rect", str(-math.pi ** 2), "-1", "-1", "1"])
    assert rec["summary"]["rect_count"] == 1
    assert rec["summary"]["rect_used"][0] < -math.pi ** 2


def test_h_command():
    rec = run_json(["h", "--x", "1", "2"])
    assert rec["rows"][0]["h"] == pytest.approx(1.0, abs=1e-10)
    assert rec["rows"][1]["h"] == pytest.approx(4.37228, abs=5e-5)
    assert run(["h", "--x", "-1"])[0] == 2


def test_zeros_command():
    rec = run_json(["zeros", "--alpha", "2", "--beta", "2", "--xmin", "-50"])
    locs = [r["re"] for r in rec["rows"]]
    assert locs == pytest.approx([-4 * math.pi ** 2, -math.pi ** 2], rel=1e-9)
    rec = run_json(["zeros", "--alpha", "2", "--beta", "4", "--rect", "-120", "-1", "-60", "60", "--locate"])
    assert rec["summary"]["rect_count"] == 2 and rec["summary"]["nonreal_count"] == 2
    assert len([r for r in rec["rows"] if r["kind"] == "complex"]) == 2


def test_check_command():
    rec = run_json(["check", "--alpha", "0.5", "--beta", "1", "--ineq", "LE", "--grid", "30"])
    assert rec["summary"] == {"violations": 0, "points": 900}
    rec = run_json(["check", "--alpha", "1.5", "--beta", "1", "--ineq", "LE", "--re-range", "29", "31",
                    "--im-range", "0.5", "0.5", "--grid", "3", "2"])
    assert rec["summary"]["violations"] > 0
    assert set(rec["rows"][0]) == {"re", "im", "lhs", "rhs", "margin", "budget", "kind"}
    rec = run_json(["check", "--alpha", "2", "--beta", "2", "--ineq", "two-sided", "--re-range", "-30", "30",
                    "--im-range", "-30", "30", "--grid", "21"])
    assert rec["summary"]["violations"] == 0


def test_cm_command():
    rec = run_json(["cm", "--alpha", "1.5", "--beta", "1.2", "--target", "reciprocal"])
    assert rec["summary"]["passed"] is True
    assert len(rec["rows"]) == 5 * 13
    rec = run_json(["cm", "--alpha", "2", "--beta", "5", "--target", "reciprocal"])
    assert rec["summary"]["passed"] is False and rec["summary"]["first_failure"]["value"] < 0


def test_figure_command_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    rec = run_json(["figure", "--which", "1", "--resolution", "50", "--out", str(a)])
    run_json(["figure", "--which", "1", "--resolution", "50", "--out", str(b)])
    assert (a / "figure1.csv").read_bytes() == (b / "figure1.csv").read_bytes()
    assert (a / "figure1.svg").read_bytes() == (b / "figure1.svg").read_bytes()
    assert sorted(os.listdir(a)) == ["figure1.csv", "figure1.svg"]
    assert sum(rec["summary"]["label_counts"].values()) == 2500


def test_help_mentions_branch_and_codes(capsys):
    assert cli.main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "principal branch" in out and "Exit codes" in out


def test_json_serialiser():
    assert cli.to_json({"a": float("nan"), "b": [1.5, True, None], "c": "x"}) == \
        '{"a": null, "b": [1.5, true, null], "c": "x"}'
