import json
import subprocess
import sys

import pytest

import _corpus
from sdpicodes.cli import dumps, main
from sdpicodes.gf import format_matrix


@pytest.fixture
def hamming_file(tmp_path):
    path = tmp_path / "hamming.txt"
    path.write_text(format_matrix(_corpus.hamming74().generator))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lambda_example(capsys):
    code, out, _ = run(capsys, "lambda", "--q", "2", "--mu-star", "0.5", "--rho", "0.5")
    assert code == 0
    assert out.strip() == "0.321928094887"


def test_lambda_json_inf(capsys):
    code, out, _ = run(capsys, "lambda", "--q", "inf", "--mu-star", "0.25", "--rho", "0.5", "--json")
    d = json.loads(out)
    assert code == 0 and d["q"] == "inf" and 0 < d["lambda"] < 1


def test_verify_tensor_example(capsys):
    code, out, err = run(capsys, "verify", "--suite", "tensor", "--n", "3", "--q", "2",
                         "--rho", "0.6", "--trials", "1000", "--seed", "1")
    assert code == 0
    assert err.startswith("PASS")
    assert json.loads(out)["violations"] == 0


def test_verify_violation_exit_two(capsys):
    code, out, err = run(capsys, "verify", "--suite", "tensor", "--n", "2", "--q", "2",
                         "--rho", "0.6", "--trials", "100", "--seed", "1",
                         "--lambda-override", "0.2")
    assert code == 2 and err.startswith("FAIL")


def test_verify_function_suite(capsys, tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("2\n0\n")
    code, out, _ = run(capsys, "verify", "--suite", "function", "--function", str(path),
                       "--q", "2", "--rho", "0.5")
    assert code == 0
    assert abs(json.loads(out)["min_margin"]) < 1e-12


def test_verify_monotone(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "monotone")
    assert code == 0 and len(json.loads(out)) == 31


def test_curve_example(capsys):
    code, out, _ = run(capsys, "curve", "--k", "2", "--points", "5", "--out", "-")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "c_e,eta_star,g_k"
    assert len(lines) == 6
    assert lines[-1] == "1,0,1"


def test_curve_multi_k_file(capsys, tmp_path):
    path = tmp_path / "fig.csv"
    code, _, _ = run(capsys, "curve", "--k", "2,3", "--points", "4", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and lines[0] == "k,c_e,eta_star,g_k" and len(lines) == 9


def test_bounds_curve_alias(capsys):
    code, out, _ = run(capsys, "bounds", "curve", "--k", "3", "--points", "3")
    assert code == 0 and out.splitlines()[0] == "c_e,eta_star,g_k"


def test_exit_one_on_usage(capsys):
    assert run(capsys, "field", "--p", "4")[0] == 1
    assert run(capsys, "verify", "--suite", "base")[0] == 1  # seed missing
    assert run(capsys, "lambda", "--q", "2")[0] == 1  # argparse error
    assert run(capsys, "nope")[0] == 1
    assert run(capsys, "code", "analyze", "/nonexistent/file.txt")[0] == 1
    assert run(capsys, "simulate", "--code", "x", "--channel", "ksc:2:0.1",
               "--trials", "10")[0] == 1


def test_field(capsys):
    code, out, _ = run(capsys, "field", "--p", "2", "--ell", "2", "--mul", "2", "3", "--inv", "2")
    d = json.loads(out)
    assert code == 0 and d["mul"] == 1 and d["inv"] == 3 and d["modulus"] == [1, 1, 1]


def test_code_analyze(capsys, hamming_file):
    code, out, _ = run(capsys, "code", "analyze", hamming_file, "--lambda", "1", "--mode", "exact")
    d = json.loads(out)
    assert code == 0
    assert d["dim"] == 4 and d["d"] == 3
    assert d["wd"] == [1, 0, 0, 7, 7, 0, 0, 1]
    assert d["dual_wd"] == [1, 0, 0, 0, 7, 0, 0, 0]
    assert d["H_bits"] == 4


def test_code_dual(capsys, hamming_file):
    code, out, _ = run(capsys, "code", "dual", hamming_file)
    assert code == 0 and out.splitlines()[0] == "2 1 3 7"


def test_channel(capsys):
    code, out, _ = run(capsys, "channel", "kec:3:0.25")
    d = json.loads(out)
    assert code == 0 and d["Z"] == 0.25 and d["capacity"] == 0.75


def test_bounds_commands(capsys, hamming_file):
    code, out, _ = run(capsys, "bounds", "blockerr", "--code", hamming_file,
                       "--channel", "ksc:2:0.01", "--lambda", "1")
    d = json.loads(out)
    assert code == 0 and abs(d["bound"] - 0.1574) < 1e-4 and d["union_sum"] < d["bound"]
    code, out, _ = run(capsys, "bounds", "weight", "--code", hamming_file, "--lambda", "0.5")
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run(capsys, "bounds", "pue", "--code", hamming_file, "--eta", "0.5")
    assert code == 0 and all(r["holds"] for r in json.loads(out).values())
    assert run(capsys, "bounds", "blockerr", "--code", hamming_file, "--channel", "ksc:2:0.5")[0] == 1


def test_simulate(capsys, hamming_file):
    argv = ["simulate", "--code", hamming_file, "--channel", "ksc:2:0.01",
            "--trials", "1e4", "--seed", "7"]
    code, out, _ = run(capsys, *argv)
    d = json.loads(out)
    assert code == 0 and d["trials"] == 10000 and d["seed"] == 7
    assert run(capsys, *argv)[1] == out


def test_json_round_trip_byte_identical(capsys, hamming_file):
    cmds = [
        ["lambda", "--q", "3", "--mu-star", "0.2", "--rho", "0.4", "--json"],
        ["sdpi-sup", "--q", "2", "--rho", "0.3", "--alpha", "1", "--grid", "200", "--seed", "1"],
        ["verify", "--suite", "base", "--dist", "0.2,0.8", "--q", "inf", "--trials", "200",
         "--seed", "2"],
        ["code", "analyze", hamming_file, "--lambda", "0.3"],
        ["bounds", "pue", "--code", hamming_file, "--eta", "0.2", "--lambda", "0.5"],
        ["channel", "ksc:3:0.1"],
    ]
    for argv in cmds:
        code, out, _ = run(capsys, *argv)
        assert code == 0, argv
        assert dumps(json.loads(out)) == out.strip()


def test_twelve_significant_digits(capsys):
    _, out, _ = run(capsys, "lambda", "--q", "2", "--mu-star", "0.3", "--rho", "0.7", "--json")
    lam = json.loads(out)["lambda"]
    assert len(repr(lam).replace("0.", "", 1).lstrip("0")) <= 12


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "sdpicodes", "lambda", "--q", "2",
                        "--mu-star", "0.5", "--rho", "0.5"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "0.321928094887"
