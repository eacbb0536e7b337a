import json
import subprocess
import sys

import pytest

from faccum.cli import dumps, main

BINOMIAL = '{"family":"binomial","params":{"n":100,"p":0.25}}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rational(d):
    return (int(d["num"]), int(d["den"]))


def test_identity_command(capsys):
    code, out, _ = run(capsys, "identity", "--Jmax", "8", "--Imax", "2")
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    assert rep["result"]["checked"] > 0 and rep["result"]["violations"] == []
    assert all(c["value_numerator"] == "0" for c in rep["result"]["cases"])


def test_identity_boundary(capsys):
    code, out, _ = run(capsys, "identity", "--Jmax", "5", "--Imax", "2", "--boundary", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "J,I,s,num,den,in_vanishing_region"


def test_scheme_moments_are_exact(capsys):
    code, out, _ = run(capsys, "scheme", "--spec", BINOMIAL, "--moments", "4")
    res = json.loads(out)["result"]
    assert code == 0
    c = [rational(x) for x in res["factorial_moments"]]
    assert c[:2] == [(25, 1), (2475, 4)]
    assert c[3] == (100 * 99 * 98 * 97, 4**4) or c[3][0] * 4**4 == 100 * 99 * 98 * 97 * c[3][1]


def test_scheme_decomposition(capsys):
    spec = '{"family":"gas-distinct","params":{"n":1000,"N":1000,"r":2}}'
    code, out, _ = run(capsys, "scheme", "--spec", spec, "--moments", "4", "--decomposition", "--jtrunc", "10")
    res = json.loads(out)["result"]
    assert code == 0 and res["decomposition"]["residual"] < 1e-9
    code, _, _ = run(capsys, "scheme", "--spec", spec, "--decomposition", "--jtrunc", "1", "--residual-tol", "1e-12")
    assert code == 2


def test_transform_constant_variable(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"kind": "raw", "values": ["1", "1", "1"]}))
    code, out, _ = run(capsys, "transform", "--input", str(f), "--from", "raw", "--to", "cumulant", "--order", "3")
    vals = [rational(x) for x in json.loads(out)["result"]["values"]]
    assert code == 0 and vals == [(1, 1), (0, 1), (0, 1)]


def test_transform_round_trip(capsys, tmp_path):
    src = tmp_path / "c.json"
    src.write_text(json.dumps({"kind": "factorial", "values": ["3/2", "-7/5", "11", "2/9", "-1/3"]}))
    _, direct, _ = run(capsys, "transform", "--input", str(src), "--from", "factorial", "--to", "cumulant")
    _, raw, _ = run(capsys, "transform", "--input", str(src), "--from", "factorial", "--to", "raw")
    mid = tmp_path / "raw.json"
    mid.write_text(json.dumps(json.loads(raw)["result"]))
    _, two_step, _ = run(capsys, "transform", "--input", str(mid), "--from", "raw", "--to", "cumulant")
    assert json.loads(direct)["result"] == json.loads(two_step)["result"]


def test_deterministic_output_bytes(capsys):
    outs = [run(capsys, "clt-report", "--spec-family", "gas-forest", "--grid", "100,1000,10000", "--Jmax", "4")[1]
            for _ in range(2)]
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["ok"]


def test_clt_report_csv(capsys):
    code, out, _ = run(capsys, "clt-report", "--spec-family", "binomial", "--grid", "100,1000",
                       "--Jmax", "4", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "n,J,mean,variance,kappa,fJc,ln0,war2" and len(lines) == 5


def test_simulate_command(capsys, tmp_path):
    spec = '{"family":"gas-distinct","params":{"n":100,"N":10000,"r":1}}'
    code, out, _ = run(capsys, "simulate", "--spec", spec, "--reps", "3000", "--seed", "5",
                       "--correlations", "0,1;0,2", "--rho-min", "0.9")
    res = json.loads(out)["result"]
    assert code == 0
    assert res["correlations"][0]["value"] < -0.9 and res["correlations"][1]["value"] > 0.9
    path = tmp_path / "reps.csv"
    code, _, _ = run(capsys, "simulate", "--spec", spec, "--reps", "50", "--seed", "5",
                     "--format", "csv", "--output", str(path))
    assert code == 0 and path.read_text().splitlines()[0] == "rep,S0,S1,S2"


def test_simulate_ks_assertion(capsys):
    spec = '{"family":"binomial","params":{"n":1000,"p":"3/10"}}'
    code, out, _ = run(capsys, "simulate", "--spec", spec, "--reps", "5000", "--seed", "1", "--ks", "--ks-max", "0.05")
    assert code == 0 and json.loads(out)["result"]["ks"]["statistic"] < 0.05
    code, _, _ = run(capsys, "simulate", "--spec", spec, "--reps", "5000", "--seed", "1", "--ks", "--ks-max", "0.001")
    assert code == 2


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"Jmax": 4, "Imax": 1}))
    _, out, _ = run(capsys, "identity", "--config", str(cfg))
    eff = json.loads(out)["effective-config"]
    assert eff["Jmax"] == 4 and eff["Imax"] == 1 and eff["boundary"] is False
    _, out, _ = run(capsys, "identity", "--config", str(cfg), "--Jmax", "5")
    eff = json.loads(out)["effective-config"]
    assert eff["Jmax"] == 5 and eff["Imax"] == 1
    cfg.write_text(json.dumps({"Jmaxx": 4}))
    assert run(capsys, "identity", "--config", str(cfg))[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["scheme", "--spec", '{"family":"nope","params":{}}'],
        ["scheme", "--spec", '{"family":"binomial","params":{"n":5,"p":2}}'],
        ["scheme"],
        ["identity", "--bogus"],
        ["identity", "--Jmax", "1"],
        ["transform", "--input", "/nonexistent.json"],
        ["identity", "--output", "/nonexistent-dir/out.json"],
        [],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_dumps_formats():
    from gmpy2 import mpq

    text = dumps({"q": mpq(-3, 7), "x": 0.1, "i": 5, "l": [1.0, None, True]})
    obj = json.loads(text)
    assert obj["q"] == {"num": "-3", "den": "7"}
    assert "0.10000000000000001" in text and obj["x"] == 0.1
    assert obj["l"] == [1.0, None, True]


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "faccum", "scheme", "--spec", BINOMIAL, "--moments", "2"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0 and '"2475"' in out.stdout
