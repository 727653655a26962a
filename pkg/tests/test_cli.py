import io
import json
import shutil
import subprocess

import pytest

from flagforge.cli import main, run
from flagforge.complexes import koszul
from flagforge.io import loads, write_output
from flagforge.polyring import PolyRing
from flagforge.rigidity import CompleteIntersection


@pytest.fixture()
def files(tmp_path):
    S = PolyRing(["x", "y"])
    kx = tmp_path / "koszul.json"
    write_output(koszul(S, ["x", "y"]), kx)
    ci = tmp_path / "ci.json"
    write_output(CompleteIntersection(ring=PolyRing(["x1", "x2", "x3"]), gens=["x1^2", "x2^2", "x3^3"]), ci)
    bad = tmp_path / "bad.json"
    bad.write_text('{"ring": {"variables": ["x"], "characteristic": 0}, "twists": [[0]], ')
    return {"koszul": str(kx), "ci": str(ci), "bad": str(bad), "dir": tmp_path}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code, rep = run(list(argv), out, err)
    return code, rep, out.getvalue(), err.getvalue()


def test_rigidity_window_command(tmp_path):
    report = tmp_path / "r.json"
    code, rep, out, _ = call("rigidity-window", "--degrees", "2,2,5,7,9", "--thresholds",
                             "--json-out", str(report))
    assert code == 0
    assert "[-16, 16]" in out
    data = json.loads(report.read_text())
    assert data["results"]["nonrigid"] == [-16, 16]
    assert data["results"]["thresholds"]["upper"] == 17


def test_fold_prints_module(files):
    code, _, out, _ = call("fold", "--in", files["koszul"], "--degree", "2")
    assert code == 0
    D = loads(out)
    assert D.degree == 2 and D.rank == 4


def test_deform_and_homology(files):
    code, _, out, _ = call("deform", "--in", files["koszul"], "-a", "2")
    assert code == 0
    mod = files["dir"] / "m.json"
    mod.write_text(out)
    code, rep, out, _ = call("homology", "--in", str(mod), "--window", "0:3")
    assert code == 0
    assert rep.results["homology"] == {"0": 1, "1": 0, "2": 0, "3": 0}


def test_enumerate_and_env_budget(files, monkeypatch):
    code, rep, out, _ = call("enumerate", "--in", files["koszul"], "-a", "2", "--field", "2")
    assert code == 0 and rep.results["classes"] == 2
    monkeypatch.setenv("FLAGFORGE_BUDGET", "1")
    code, rep, _, err = call("enumerate", "--in", files["koszul"], "-a", "2", "--field", "2")
    assert code == 1 and "BudgetExceeded" in err


def test_witness_and_ext_dims(files):
    code, rep, _, _ = call("witness", "--in", files["ci"], "-a", "1")
    assert code == 0
    assert rep.results["monomial"] == "x1*x2*x3" and rep.results["pair"] == [1, 2]
    code, rep, out, _ = call("ext-dims", "--degrees", "1,1", "--window=-2:0")
    assert code == 0
    assert rep.results["dims"]["1"] == {"-2": 0, "-1": 2, "0": 0}


def test_betti_and_dim_bounds(files):
    code, rep, _, _ = call("betti-deficiency", "--degrees", "2,2,3", "--pure", "0,2,3,5")
    assert code == 0
    assert rep.results["complete_intersection"] == [4, 5] and rep.results["pure"] == [3]
    code, rep, _, _ = call("dim-bounds", "--in", files["koszul"], "-a", "2")
    assert code == 0 and (rep.results["lower"], rep.results["upper"]) == (1, 1)


def test_check_and_minimize(files):
    code, rep, out, _ = call("check", "--in", files["koszul"])
    assert code == 0 and rep.results["square_zero"]
    code, _, out, _ = call("minimize", "--in", files["koszul"])
    assert code == 2  # a complex is not a differential module


def test_exit_codes(files):
    assert call("fold", "--in", files["bad"], "-a", "1")[0] == 1
    assert call("fold", "--in", files["koszul"])[0] == 2  # missing degree
    assert call("nonsense")[0] == 2
    assert call("fold", "--in", files["koszul"], "-a", "x")[0] == 2
    assert call("rigidity-window", "--degrees", "2,2", "--vars", "3")[0] == 1
    assert call("homology", "--in", files["koszul"], "--window", "3")[0] == 2


def test_report_is_deterministic(files):
    reps = []
    for _ in range(2):
        _, rep, _, _ = call("enumerate", "--in", files["koszul"], "-a", "2", "--field", "3", "--seed", "5")
        d = json.loads(rep.to_json())
        d.pop("timing")
        reps.append(d)
    assert reps[0] == reps[1]
    assert len(reps[0]["inputs_digest"]) == 64


def test_gallery_subset():
    code, rep, out, _ = call("paper-examples", "--only", "window", "--only", "betti")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_main_returns_code():
    assert main(["rigidity-window", "--degrees", "1,1,1"]) == 0


@pytest.mark.skipif(shutil.which("flagforge") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["flagforge", "rigidity-window", "--degrees", "2,2,3", "-a", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "[0, 5]" in proc.stdout and "not rigid" in proc.stdout
