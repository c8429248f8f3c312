import json
import subprocess
import sys

import pytest

from dimerlab.cli import EXIT_FILE, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main
from dimerlab.corpus import make_grid
from dimerlab.formats import write_graph


@pytest.fixture
def grid_file(tmp_path):
    p = tmp_path / "grid2x3.dg"
    write_graph(make_grid(2, 3), p)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count(capsys, grid_file):
    code, out, _ = run(capsys, "count", "--graph", grid_file, "--format", "text")
    assert code == EXIT_OK and out == "3\n"
    code, out, _ = run(capsys, "count", "--graph", grid_file)
    assert json.loads(out)["partition_function"] == {"exact": "3", "decimal": 3.0}


def test_probs(capsys, grid_file):
    code, out, _ = run(capsys, "probs", "--graph", grid_file)
    assert json.loads(out)["probabilities"]["v0,0"]["exact"] == "2/3"
    code, out, _ = run(capsys, "probs", "--graph", grid_file, "--format", "csv")
    assert '"v0,0","0,0","0,1",2/3' in out.splitlines()


def test_ddimer_density(capsys):
    code, out, _ = run(capsys, "ddimer", "density", "--area", "1")
    data = json.loads(out)
    assert code == 0 and abs(data["density"] - 0.03125) < 1e-12
    assert data["closed_forms"]["printed"]["expression"] == "1/32"


def test_outputs_are_reproducible(capsys, grid_file):
    for argv in (
        ["sample", "--graph", grid_file, "-n", "5", "--seed", "3"],
        ["walk", "simulate", "--builtin", "grid2x3", "--steps", "20", "--seed", "4"],
        ["walk", "winding", "--torus", "2", "--steps", "30", "--trials", "5", "--format", "csv"],
    ):
        a = run(capsys, *argv)
        b = run(capsys, *argv)
        assert a == b and a[0] == 0


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "count", "--graph", str(tmp_path / "missing.dg"))[0] == EXIT_FILE
    assert run(capsys, "count")[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "count", "--builtin", "C4", "--bogus")[0] == EXIT_USAGE
    bad = tmp_path / "bad.dg"
    bad.write_text("dimergraph v1\nv a b\nv c b\ne x a c\nr a x\nr c x\n")
    code, _, err = run(capsys, "count", "--graph", str(bad))
    assert code == EXIT_VALIDATION and "NotBipartite" in err
    code, _, err = run(capsys, "psi", "--builtin", "degenerate", "--target", str(write_target(tmp_path)))
    assert code == EXIT_VALIDATION and "DegenerateGraph" in err
    assert run(capsys, "walk", "spectrum", "--builtin", "grid4x4", "--cap", "10")[0] == EXIT_VALIDATION


def write_target(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({f"e{i}": "1/2" for i in range(4)}))
    return p


def test_web_and_walk(capsys):
    code, out, _ = run(capsys, "web", "coefficients", "--builtin", "annular_C4")
    assert json.loads(out)["coefficients"] == [2, 1]
    code, out, _ = run(capsys, "web", "reduce", "--builtin", "C4", "--web", "1,2,1,2")
    assert json.loads(out)["terms"] == [{"web": [0, 0, 0, 0], "coefficient": 3, "reduced": True}]
    code, out, _ = run(capsys, "web", "trace", "--builtin", "theta", "-n", "3", "--web", "1,1,1", "--format", "text")
    assert out.strip() in ("6", "-6")
    code, out, _ = run(capsys, "walk", "spectrum", "--builtin", "grid2x3", "--quotient", "x", "--format", "text")
    assert out.split() == ["1", "2/3", "2/3", "0", "0", "-1/3"]
    code, out, _ = run(capsys, "walk", "mixing", "--builtin", "K4", "--horizon", "2", "--format", "csv")
    assert out == "t,tv\n1,1/4\n2,1/12\n"
    code, out, _ = run(capsys, "oracle", "covers", "--builtin", "grid2x3")
    assert json.loads(out)["count"] == 3


def test_psi_round_trip(capsys, tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"e1": "3/4", "e2": "1/4", "e3": "3/4", "e4": "1/4"}))
    code, out, _ = run(capsys, "psi", "--builtin", "C4", "--target", str(p))
    assert code == 0 and json.loads(out)["residual"] <= 1e-10


@pytest.mark.parametrize("cmd", ["graph", "count", "probs", "sample", "psi", "ddimer", "web", "walk", "oracle"])
def test_selftests(capsys, cmd):
    code, out, _ = run(capsys, cmd, "--selftest")
    data = json.loads(out)
    assert code == 0 and data["passed"], [c for c in data["checks"] if not c["passed"]]


def test_console_script(grid_file):
    res = subprocess.run([sys.executable, "-m", "dimerlab.cli", "count", "--graph", grid_file, "--format", "text"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "3\n"
