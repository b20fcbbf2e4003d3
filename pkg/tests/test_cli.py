import json
import subprocess
import sys

import pytest

from qperiods.cli import main

CP2 = "x + y + x^-1*y^-1"


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out.strip(), err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    assert code == 0, err
    return json.loads(out)


def test_documented_examples(capsys):
    assert run(capsys, "period", "--poly", CP2, "--d", "3")[:2] == (0, "6")
    assert run(capsys, "descendant", "eval", "--json", '{"n":1,"vectors":[[-2],[1],[1]]}')[:2] == (0, "1")
    assert run(capsys, "mirror-check", "--poly", CP2, "--target", "cp:2", "--max-degree", "9")[:2] == (0, "OK")


def test_mirror_mismatch_is_a_report(capsys):
    code, out, _ = run(capsys, "mirror-check", "--poly", CP2, "--target", "cp:1", "--max-degree", "9")
    assert code == 0 and out.startswith("MISMATCH at d=2")


def test_exit_codes(capsys):
    assert run(capsys, "period", "--poly", "x + ", "--d", "3")[0] == 1
    assert run(capsys, "mutate", "--poly", CP2, "--pivot", "2", "--factor", "1 + x")[0] == 1
    assert run(capsys, "descendant", "eval", "--json", '{"n":1,"vectors":[[0],[1]]}')[0] == 1
    assert run(capsys, "descendant", "reduce", "--json", '{"n":1,"vectors":[[1],[1]]}')[0] == 1
    assert run(capsys, "period", "--d", "3")[0] == 2
    assert run(capsys, "period", "--json", "{not json", "--d", "3")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys)[0] == 2


def test_format_flag_after_subcommand(capsys):
    payload = json.loads(run(capsys, "period", "--poly", CP2, "--d", "3", "--format", "json")[1])
    assert payload["period"] == 6


def test_poly_round_trips(capsys, tmp_path):
    pot = run_json(capsys, "potential", "toric", "--rays", "[[1,0],[0,1],[-1,-1]]")
    assert pot == {"dim": 2, "poly": "x1^-1*x2^-1 + x2 + x1"}
    res = run_json(capsys, "period", "--json", json.dumps(pot), "--d", "3")
    assert res["period"] == 6
    again = run_json(capsys, "period", "--json", json.dumps(res))
    assert again == res
    f = tmp_path / "w.json"
    f.write_text(json.dumps(pot))
    assert run_json(capsys, "period", "--json-file", str(f), "--d", "6")["period"] == 90
    g = tmp_path / "w.txt"
    g.write_text(CP2)
    assert run_json(capsys, "period", "--poly-file", str(g), "--d", "6")["period"] == 90


def test_mutate_and_gl(capsys):
    mut = run_json(capsys, "mutate", "--poly", "x + y + y^-1 + x*y^-1", "--pivot", "2", "--factor", "1 + x")
    assert run(capsys, "period", "--json", json.dumps(mut), "--d", "2")[1] == "2"
    gl = run_json(capsys, "gl", "--json", json.dumps(mut), "--matrix", "[[1,0],[1,1]]")
    assert gl["dim"] == 2
    assert run(capsys, "gl", "--poly", CP2, "--matrix", "[[2,0],[0,1]]")[0] == 1


def test_series_feeds_mirror_check(capsys):
    s = run_json(capsys, "series", "--poly", CP2, "--max-degree", "9")
    assert s["coeffs"][3] == "1" and s["coeffs"][6] == "1/8"
    code, out, _ = run(capsys, "mirror-check", "--poly", CP2, "--series-json", json.dumps(s),
                       "--max-degree", "9")
    assert (code, out) == (0, "OK")
    assert run_json(capsys, "series", "--json", json.dumps(s)) == s


def test_period_numeric(capsys):
    code, out, _ = run(capsys, "period-numeric", "--poly", CP2, "--d", "3", "--grid", "64", "--tol", "1e-6")
    assert code == 0 and out.startswith("6")
    res = run_json(capsys, "period-numeric", "--poly", CP2, "--d", "3", "--grid", "16")
    assert run_json(capsys, "period-numeric", "--json", json.dumps(res)) == res


def test_loop_commands(capsys):
    g = run_json(capsys, "goldman", "--u", "1,1", "--v", "1,-1")
    assert g == [{"subset": [], "exponent": [2, 0], "coeff": "-2"}]
    x = [{"subset": [1, 2], "exponent": [1, 0], "coeff": "1"}]
    dx = run_json(capsys, "bv", "--json", json.dumps(x))
    assert dx == [{"subset": [2], "exponent": [1, 0], "coeff": "1"}]
    y = [{"subset": [], "exponent": [0, 1], "coeff": "1"}]
    b = run_json(capsys, "bracket", "--x", json.dumps(dx), "--y", json.dumps(y))
    assert b == [{"subset": [], "exponent": [1, 1], "coeff": "1"}]
    assert run_json(capsys, "bv", "--json", json.dumps(b)) == []


def test_descendant_commands(capsys):
    sym = '{"n":1,"vectors":[[-2],[1],[1]]}'
    ev = run_json(capsys, "descendant", "eval", "--json", sym)
    assert run_json(capsys, "descendant", "eval", "--json", json.dumps(ev)) == ev
    cert = run_json(capsys, "descendant", "reduce", "--json", sym)
    ver = run_json(capsys, "descendant", "verify", "--json", json.dumps(cert))
    assert ver["value"] == "1"
    assert run_json(capsys, "descendant", "eval", "--json", json.dumps(ver))["value"] == 1
    rel = run_json(capsys, "descendant", "relation", "--json", '{"n":2,"vectors":[[-2,-1],[1,0],[1,0]]}',
                   "--u", "0,1", "--omega", "[[1,2,-1]]")
    assert [t["coeff"] for t in rel["terms"]] == [-2, 1, 1] and rel["residual"] == 0
    assert run_json(capsys, "descendant", "relation", "--json", json.dumps(rel)) == rel
    bs = run_json(capsys, "descendant", "bs-expand", "--poly", CP2, "--d", "3")
    assert bs["value"] == 6
    assert run_json(capsys, "descendant", "bs-expand", "--json", json.dumps(bs), "--ordered") == bs


def test_tampered_certificate_exit_code(capsys):
    cert = run_json(capsys, "descendant", "reduce", "--json", '{"n":1,"vectors":[[-2],[1],[1]]}')
    cert["children"][0]["children"][0]["weight"] = "1/1"
    code, _, err = run(capsys, "descendant", "verify", "--json", json.dumps(cert))
    assert code == 1 and "invalid step" in err


def test_index_commands(capsys):
    assert run(capsys, "index", "stretch", "--n", "4", "--d", "5")[1] == "p=5 mu=[3, 3, 3, 3, 3] index=0"
    assert run(capsys, "index", "factors", "--N", "2", "--d", "2", "--p", "3")[1] == "64 24"
    assert run(capsys, "index", "gluing", "--N", "3", "--d", "5")[1] == "true"
    assert run(capsys, "index", "normalization", "--d", "12")[1] == "true"
    assert run(capsys, "index", "convert", "--value", "1/8", "--d", "6")[1] == "3"
    assert run(capsys, "index", "dims", "--d", "4", "--m", "3")[1] == "0"
    assert run(capsys, "index", "dims", "--m", "1", "--degs", "1,0")[1] == "-1"
    assert run(capsys, "index", "degrees", "--mu", "3", "--n", "4")[1] == "1 0"
    assert run(capsys, "index", "stretch", "--n", "4")[0] == 2
    assert run(capsys, "index", "factors", "--N", "1", "--d", "3", "--p", "9")[0] == 1


def test_output_is_deterministic(capsys):
    argv = ["--format", "json", "descendant", "reduce", "--json", '{"n":2,"vectors":[[2,1],[-1,3],[-1,-4]]}']
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qperiods", "period", "--poly", CP2, "--d", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "6"
