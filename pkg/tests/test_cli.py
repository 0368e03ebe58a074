import json
import os
import shutil
import subprocess
import sys

import numpy as np
import pytest

from p2dyn.cli import main
from p2dyn.green import read_grid, read_pgm
from p2dyn.projgeom import Slice
from oracles import squaring_green


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def load(path):
    with open(path) as fh:
        return json.load(fh)


def test_analyze_cremona(tmp_path, capsys):
    code, out, _ = run(["analyze", "--map", "[y*z:z*x:x*y]", "--n", "6", "--out", str(tmp_path)], capsys)
    assert code == 0
    rep = load(tmp_path / "analyze.json")
    assert rep["schema"] == "p2dyn-report/1" and rep["kind"] == "analyze"
    assert rep["degrees"] == [2, 1, 2, 1, 2, 1]
    assert rep["as"]["verdict"] == "NotAS" and rep["as"]["witness"] == 2
    assert sorted(p["point"] for p in rep["indeterminacy"]) == ["[0:0:1]", "[0:1:0]", "[1:0:0]"]
    assert [it["lift"] for it in rep["iterates"][:2]] == ["[y*z : x*z : x*y]", "[x : y : z]"]
    assert rep["iterates"][1]["cofactor"] == "x*y*z"
    assert "NotAS (witness n=2)" in out


def test_green_squaring(tmp_path, capsys):
    args = ["green", "--corpus", "squaring", "--chart", "z", "--window", "-2,2,-2,2", "--res", "64",
            "--n", "20", "--out", str(tmp_path)]
    assert run(args, capsys)[0] == 0
    v, spec, meta = read_grid(tmp_path / "green_v.grid")
    s = Slice.chart_slice("z", (-2, 2, -2, 2), (64, 64))
    assert spec == s.spec() and meta["N"] == 20
    exact = squaring_green(s.grid())
    assert np.median(np.abs(v - exact)) < 1e-9
    assert read_pgm(tmp_path / "green_v.pgm").shape == (64, 64)
    rep = load(tmp_path / "green.json")
    assert rep["status_counts"]["OK"] == 64 * 64


def test_classify_non_as_refuses_green(tmp_path, capsys):
    code, out, _ = run(["classify", "--corpus", "cremona", "--res", "32", "--n", "20", "--out", str(tmp_path)],
                       capsys)
    assert code == 0
    rep = load(tmp_path / "classify.json")
    assert "NotAS" in rep["green"]["notice"]
    assert sum(rep["raster"]["counts"].values()) == 32 * 32
    assert (tmp_path / "classify.ppm").exists()


def test_compare_accounting(tmp_path, capsys):
    assert run(["compare", "--corpus", "squaring", "--res", "32", "--n", "20", "--out", str(tmp_path)],
               capsys)[0] == 0
    c = load(tmp_path / "compare.json")["comparison"]
    assert sum(sum(r.values()) for r in c["confusion"].values()) == c["resolved"]


def test_probe_point(tmp_path, capsys):
    code, out, _ = run(["probe", "--corpus", "cremona", "--point", "[1:2:0]", "--out", str(tmp_path)], capsys)
    assert code == 0
    rep = load(tmp_path / "probe.json")
    assert rep["probe"]["verdict"] == "NotRegularWitness" and rep["probe"]["step"] == 1
    assert rep["orbit"]["status"] == "NearIndeterminacy"


def test_corpus_listing(capsys):
    code, out, _ = run(["corpus", "list"], capsys)
    assert code == 0 and "cremona" in out
    code, out, _ = run(["corpus", "show", "henon"], capsys)
    assert json.loads(out)["indeterminacy"] == ["[1:0:0]"]


@pytest.mark.parametrize("args, code, kind", [
    (["analyze", "--map", "[x^2:y^2"], 3, "ParseError"),
    (["analyze", "--map", "[x^2:y:z]"], 4, "InvalidLift"),
    (["green", "--corpus", "cremona", "--res", "8"], 5, "NotAS"),
    (["analyze", "--corpus", "cube-roots", "--n", "5", "--budget", "30"], 6, "BudgetExceeded"),
    (["green", "--corpus", "identity-degenerate", "--res", "8"], 7, "DegreeTooSmall"),
    (["probe", "--corpus", "henon", "--point", "[0:0:0]"], 8, "NotAPoint"),
    (["green", "--corpus", "squaring", "--res", "2048"], 12, "ConfigError"),
    (["green", "--corpus", "squaring", "--tau", "-1"], 12, "ConfigError"),
    (["analyze"], 2, "UsageError"),
])
def test_error_records(tmp_path, capsys, args, code, kind):
    got, _, err = run(args + ["--out", str(tmp_path)], capsys)
    assert got == code
    rec = json.loads(err.strip().splitlines()[-1])
    assert rec["error"] == kind and rec["exit_code"] == code


def test_error_record_details(tmp_path, capsys):
    _, _, err = run(["analyze", "--map", "[x : y $ z]", "--out", str(tmp_path)], capsys)
    assert json.loads(err)["position"] == 6
    _, _, err = run(["analyze", "--corpus", "cube-roots", "--n", "5", "--budget", "30", "--out", str(tmp_path)],
                    capsys)
    assert json.loads(err)["partial"]["degrees"] == [3, 9, 27]


def test_usage_error_from_argparse(capsys):
    assert main(["nosuchcommand"]) == 2
    assert main(["green", "--res", "abc"]) == 2


def test_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(["analyze", "--corpus", "squaring", "--n", "2", "--out", str(blocker / "sub")], capsys)
    assert code == 11
    assert json.loads(err)["path"].startswith(str(blocker))


def test_config_overrides_flags(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[slice]\nres = 8x6\nwindow = -1,1,-1,1\n\n[green]\nn = 7\n")
    code, _, _ = run(["green", "--corpus", "squaring", "--res", "64", "--n", "20", "--config", str(cfg),
                      "--out", str(tmp_path)], capsys)
    assert code == 0
    rep = load(tmp_path / "green.json")
    assert rep["N"] == 7 and rep["slice"]["resolution"] == [8, 6]
    bare = tmp_path / "bare.ini"
    bare.write_text("# plain key = value lines\ntau = 0.3\n")
    run(["green", "--corpus", "squaring", "--res", "8", "--config", str(bare), "--out", str(tmp_path)], capsys)
    assert load(tmp_path / "green.json")["tau"] == 0.3
    bad = tmp_path / "bad.ini"
    bad.write_text("[common]\nbogus = 1\n")
    assert run(["green", "--corpus", "squaring", "--config", str(bad), "--out", str(tmp_path)], capsys)[0] == 12


@pytest.mark.parametrize("cmd", [
    ["analyze", "--corpus", "henon", "--n", "4"],
    ["green", "--corpus", "squaring", "--res", "40", "--n", "15"],
    ["classify", "--corpus", "henon", "--res", "40", "--n", "20"],
    ["compare", "--corpus", "cremona", "--res", "24", "--n", "20"],
    ["probe", "--corpus", "henon", "--dichotomy", "yes", "--res", "24", "--point", "[0:5:1]"],
])
def test_outputs_byte_identical_across_runs_and_workers(tmp_path, capsys, cmd):
    dirs = []
    for k, workers in enumerate(("1", "1", "4")):
        d = tmp_path / f"run{k}"
        assert run(cmd + ["--workers", workers, "--out", str(d)], capsys)[0] == 0
        dirs.append(d)
    names = sorted(os.listdir(dirs[0]))
    assert names
    for d in dirs[1:]:
        assert sorted(os.listdir(d)) == names
        for n in names:
            assert (d / n).read_bytes() == (dirs[0] / n).read_bytes(), n


@pytest.mark.skipif(shutil.which("p2dyn") is None, reason="console script not installed")
def test_console_script(tmp_path):
    proc = subprocess.run(["p2dyn", "analyze", "--map", "[x^2:y^2:z^2]", "--n", "3", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "AS up to 3" in proc.stdout


def test_module_entry(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "p2dyn.cli", "corpus", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "squaring" in proc.stdout
