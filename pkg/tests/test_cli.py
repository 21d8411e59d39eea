import json
import subprocess
import sys

import mpmath
import pytest

from gvalues.cli import main
from gvalues.parser import parse_gaussian, series_to_json
from gvalues.series import GSeries

ARCTAN = "(1+X^2)*y'' + 2*X*y' = 0"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def mid(ball):
    return mpmath.mpc(ball["re"], ball["im"])


def test_root(capsys):
    code, out = run(capsys, "root", "--poly", "X^2-2", "--R", "20", "--order", "64", "--verify")
    assert code == 0 and out["schema"] == "gvalues.root/1"
    r = out["result"]
    assert r["u"] == "17/12" and r["radius_exact"] == "289"
    assert abs(mid(r["value_at_1"]) - mpmath.sqrt(2)) < 1e-30
    assert out["config"]["order"] == 64 and out["config"]["R"] == 20.0


def test_log(capsys):
    code, out = run(capsys, "log", "--poly", "X-2", "--R", "10", "--order", "48", "--no-series")
    assert code == 0 and out["result"]["exp_consistent"]
    assert abs(mid(out["result"]["value"]) - mpmath.log(2)) < 1e-20


def test_series_mul(capsys, tmp_path):
    ones = tmp_path / "ones.json"
    oneminus = tmp_path / "oneminus.json"
    ones.write_text(json.dumps(series_to_json(GSeries.from_coeffs([1] * 9))))
    oneminus.write_text(json.dumps(series_to_json(GSeries.from_coeffs([1, -1] + [0] * 7))))
    code, out = run(capsys, "series", "--op", "mul", "--a", str(ones), "--b", str(oneminus))
    assert code == 0
    cs = out["result"]["series"]["coeffs"]
    assert cs[0] == {"re": ["1", "1"], "im": ["0", "1"]}
    assert all(c["re"][0] == "0" for c in cs[1:])


def test_continue_and_connect(capsys):
    code, out = run(capsys, "continue", "--ode", ARCTAN, "--path", "0,1", "--initial", "0,1", "--order", "128")
    assert code == 0
    v = out["result"]["values"][0]
    assert abs(mid(v) - mpmath.pi / 4) < 1e-12 and float(v["err"]) < 1e-12
    code, out = run(capsys, "connect", "--ode", ARCTAN, "--path", "0,1/4", "--initial", "0,1", "--target", "1/2", "--order", "64")
    assert code == 0
    assert abs(mid(out["result"]["constants"][1]) - mpmath.mpf(4) / 5) < 1e-30


def test_wronskian(capsys):
    code, out = run(capsys, "wronskian", "--ode", ARCTAN, "--points", "1/4,1/3", "--order", "128")
    assert code == 0 and out["result"]["abel_identity"] == "exact"
    assert out["result"]["exponents"] == ["1", "1"]


def test_profile(capsys):
    code, out = run(capsys, "profile", "--ode", "(2-2*X)*y' - y = 0", "--initial", "1", "--zeta", "1", "--order", "64")
    assert code == 0 and out["result"]["tau"] == "-1/2" and out["result"]["sigma"] == 0


def test_asymptotics_commands(capsys, tmp_path):
    code, out = run(capsys, "asympredict", "--tau=-1/2", "--n-min", "100", "--n-max", "100")
    assert code == 0 and abs(mid(out["result"]["values"][0]) - 1 / mpmath.sqrt(100 * mpmath.pi)) < 1e-15
    csv = tmp_path / "c.csv"
    csv.write_text("".join(f"{3 ** -n!r}\n" for n in range(600)))
    code, out = run(capsys, "asymfit", "--input", str(csv))
    assert code == 0 and abs(out["result"]["rho"] - 3) < 1e-2 and out["result"]["tau"] == "-1"
    code, out = run(capsys, "amplitudes", "--omegas", "1,-1,i,-i", "--samples", "1,2,3,4", "--start", "5")
    assert code == 0 and out["result"]["exact"] == ["5/2", "1/2", "1/2+1/2*i", "1/2-1/2*i"]
    assert [str(parse_gaussian(k)) for k in out["result"]["exact"]] == out["result"]["exact"]


def test_apery_commands(capsys, tmp_path):
    code, out = run(capsys, "mubound", "--C", "20.0855", "--r", "0.0294373", "--R", "33.9706")
    assert code == 0 and abs(out["result"]["bound"] - 13.4178) < 1e-4
    code, out = run(capsys, "mubound", "--C", "2", "--r", "1", "--R", "2")
    assert code == 0 and out["result"]["bound"] is None and out["result"]["reason"]
    code, out = run(capsys, "apery", "--zeta3", "80")
    assert code == 0 and abs(mpmath.mpf(out["result"]["ratio"]) - mpmath.zeta(3)) < 1e-30
    csv = tmp_path / "d.csv"
    csv.write_text("".join(f"1/{2**n}\n" for n in range(100)))
    code, out = run(capsys, "dengrowth", "--input", str(csv))
    assert code == 0 and abs(out["result"]["slope"] - 0.6931) < 1e-3


@pytest.mark.parametrize(
    "argv, code, err",
    [
        (["root", "--poly", "X^^2"], 2, "syntax_error"),
        (["root", "--poly", "1/X"], 2, "non_polynomial"),
        (["root", "--poly", "X^2-2", "--order", "0"], 2, "usage_error"),
        (["root", "--poly", "X^2-2", "--step-fraction", "1.5"], 2, "usage_error"),
        (["nosuch"], 2, "usage_error"),
        (["series", "--op", "evaluate", "--a", '{"schema": "gvalues.series/1", "coeffs": [{"re": ["1", "1"], "im": ["0", "1"]}]}', "--z", "1"], 1, "tail_unbounded"),
        (["series", "--op", "mul", "--a", '{"schema": "nope"}', "--b", "1"], 2, "schema_error"),
        (["log", "--poly", "X+2", "--order", "16"], 1, "branch_cut"),
        (["dengrowth", "--input", "1\n2\n"], 1, "invalid_input"),
    ],
)
def test_errors(capsys, argv, code, err):
    got, out = run(capsys, *argv)
    assert got == code and out["schema"] == "gvalues.error/1"
    assert out["error"]["code"] == err


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("GVALUES_PRECISION_BITS", "128")
    _, out = run(capsys, "mubound", "--C", "2", "--r", "1", "--R", "4")
    assert out["config"]["precision_bits"] == 128 and out["result"]["bound"] == 2.0


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    assert main(["mubound", "--C", "2", "--r", "1", "--R", "4", "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["result"]["bound"] == 2.0


def test_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "gvalues", "root", "--poly", "X^2-2", "--R", "20", "--order", "24"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["result"]["u"] == "17/12"
