import json
import math
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eisenzeta.cli import UsageError, coerce, main, parse_complex, split_list, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def strip_times(rep):
    for row in rep["results"]:
        row.pop("wall_time", None)
    return rep


@pytest.mark.parametrize(
    "text, want",
    [("1,0", 1 + 0j), ("0,1", 1j), ("2", 2 + 0j), ("-0.5,2.5", -0.5 + 2.5j), ("1@90", 1j)],
)
def test_parse_complex(text, want):
    assert abs(parse_complex(text) - want) < 1e-15


@given(st.floats(0.01, 100), st.floats(-179, 179))
def test_parse_polar(mod, deg):
    z = parse_complex(f"{mod!r}@{deg!r}")
    assert abs(abs(z) - mod) <= 1e-12 * mod


def test_parse_errors():
    with pytest.raises(UsageError):
        parse_complex("abc")
    with pytest.raises(UsageError):
        coerce("int", "1.5")


def test_split_lists():
    assert split_list("int", "1,2,3") == ["1", "2", "3"]
    assert split_list("complex", "1,0;0,1") == ["1,0", "0,1"]


def test_json_encoding():
    assert to_json(1 + 2j) == [1.0, 2.0]
    assert to_json(float("inf")) == "inf"


def test_eval_zeta_two(capsys):
    code, rep = report(capsys, "eval", "psi_lerch", "--r", "2", "--gamma", "1", "--kappa", "0")
    assert code == 0
    assert rep["schema_version"] == 1
    assert list(rep) == ["schema_version", "command", "results", "summary"]
    re, im = rep["results"][0]["value"]
    assert re == pytest.approx(math.pi ** 2 / 6, rel=1e-15) and im == 0


def test_eval_qform_example(capsys):
    code, rep = report(capsys, "eval", "f_qform", "--s", "6", "--alpha", "0.3", "--beta", "0.7",
                       "--mu", "0.1", "--nu", "0.2", "--tau", "1,0")
    row = rep["results"][0]
    assert code == 0 and row["status"] == "ok" and row["error_estimate"] is not None
    assert len(row["value"]) == 2


def test_eval_e4_at_i(capsys):
    from eisenzeta import E

    code, rep = report(capsys, "eval", "E", "--weight", "4", "--z=0,1")
    assert code == 0
    assert rep["results"][0]["value"][0] == pytest.approx(E(4, 1j).value.real, rel=1e-15)


def test_eval_domain_error_exit_two(capsys):
    code, rep = report(capsys, "eval", "psi_lerch", "--r", "1", "--gamma", "0.3", "--kappa", "0")
    assert code == 2
    assert rep["results"][0]["status"] == "error"
    assert rep["results"][0]["error"]["type"] == "PoleError"


def test_unknown_target_is_usage_error(capsys):
    code, out, err = run(capsys, "verify", "no-such-identity")
    assert code == 2 and out == "" and "unknown verify target" in err
    code, out, err = run(capsys, "eval", "psi_lerch", "--bogus", "1")
    assert code == 2 and "unknown parameter" in err


def test_verify_examples(capsys):
    code, rep = report(capsys, "verify", "euler-2-32", "--k", "3")
    assert code == 0 and rep["results"][0]["report"]["residual"] <= 1e-12
    code, rep = report(capsys, "verify", "ramanujan-2-31", "--k", "2", "--alpha", "0.3", "--beta", "0.7",
                       "--mu", "0", "--nu", "0", "--tau", "1,0")
    assert code == 0
    code, rep = report(capsys, "verify", "legendre", "--z", "0,1")
    r = rep["results"][0]["report"]
    assert code == 0 and r["residual"] <= 1e-12 and r["threshold"] == 1e-11


def test_verify_threshold_breach_exit_one(capsys):
    code, rep = report(capsys, "verify", "euler-2-32", "--k", "10", "--threshold", "1e-300")
    assert code == 1
    assert rep["results"][0]["status"] == "fail"
    assert rep["results"][0]["report"]["lhs"] is not None


def test_scan_inline_lists(capsys):
    code, rep = report(capsys, "scan", "verify", "euler-2-32", "--k", "1,2,3")
    assert code == 0
    assert [r["params"]["k"] for r in rep["results"]] == [1, 2, 3]
    assert rep["summary"]["count"] == 3 and rep["summary"]["max_residual"] <= 1e-12


def test_scan_empty_grid(capsys, tmp_path):
    grid = tmp_path / "g.json"
    grid.write_text(json.dumps({"k": []}))
    code, rep = report(capsys, "scan", "verify", "euler-2-32", "--grid", str(grid))
    assert code == 0 and rep["results"] == [] and rep["summary"]["count"] == 0


def test_scan_grid_file_product(capsys, tmp_path):
    grid = tmp_path / "g.json"
    grid.write_text(json.dumps({"r": [2, 3], "gamma": [1], "kappa": [0, 0.5]}))
    code, rep = report(capsys, "scan", "eval", "psi_lerch", "--grid", str(grid))
    assert code == 0 and len(rep["results"]) == 4
    assert [r["index"] for r in rep["results"]] == [0, 1, 2, 3]


def test_scan_default_grid(capsys):
    code, rep = report(capsys, "scan", "verify", "e-sum-zero", "--grid", "default")
    assert code == 0 and rep["summary"]["count"] == 3


def test_scan_failure_exit_one(capsys):
    code, rep = report(capsys, "scan", "verify", "euler-2-32", "--k", "1,2", "--threshold", "1e-300")
    assert code == 1 and rep["summary"]["failed"] == 2


def test_deterministic_output(capsys):
    argv = ["scan", "verify", "ramanujan-2-33", "--grid", "default"]
    _, a = report(capsys, *argv)
    _, b = report(capsys, *argv)
    assert json.dumps(strip_times(a)) == json.dumps(strip_times(b))


def test_workers_preserve_order(capsys):
    argv = ["scan", "verify", "euler-2-32", "--k", "1,2,3,4,5,6"]
    _, serial = report(capsys, *argv, "--workers", "1")
    _, parallel = report(capsys, *argv, "--workers", "3")
    assert json.dumps(strip_times(serial)) == json.dumps(strip_times(parallel))


def test_workers_env(capsys, monkeypatch):
    monkeypatch.setenv("EISENZETA_WORKERS", "nope")
    code, _, err = run(capsys, "verify", "euler-2-32")
    assert code == 2 and "EISENZETA_WORKERS" in err


def test_csv_and_text(capsys):
    code, out, _ = run(capsys, "scan", "verify", "euler-2-32", "--k", "1,2", "--csv")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("index,target,status") and len(lines) == 3
    code, out, _ = run(capsys, "verify", "euler-2-32", "--text")
    assert "PASS" in out and out.splitlines()[-1].startswith("summary:")


def test_all_rejects_target(capsys):
    code, _, err = run(capsys, "scan", "verify", "thm1", "--all")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "eisenzeta", "eval", "psi_lerch", "--text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "summary" in proc.stdout
