import json
import re

import pytest

from hanoi_schreier.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_graph_dot(capsys):
    code, out, _ = run(capsys, "graph", "-k", "3", "-n", "3", "--format", "dot")
    assert code == 0
    assert len(re.findall(r'^  "\d{3}";$', out, re.M)) == 27


def test_graph_level_zero(capsys):
    code, out, _ = run(capsys, "graph", "-k", "3", "-n", "0")
    assert code == 0 and out.count('"" -- ""') == 3


def test_graph_json_k4(capsys, tmp_path):
    path = tmp_path / "g.json"
    assert run(capsys, "graph", "-k", "4", "-n", "2", "--format", "json", "-o", str(path))[0] == 0
    doc = json.loads(path.read_text())
    assert doc["schema_version"] == 1 and doc["k"] == 4
    verts = {e["u"] for e in doc["edges"]} | {e["v"] for e in doc["edges"]}
    assert len(verts) == 16


def test_graph_cap(capsys):
    code, _, err = run(capsys, "graph", "-n", "15")
    assert code == 3 and "cap" in err


def test_usage_errors(capsys):
    assert run(capsys, "graph", "-k", "2", "-n", "1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["graph"])
    assert exc.value.code == 2


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "-n", "2")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == 1
    assert len(doc["entries"]) == 5
    assert sum(e["multiplicity"] for e in doc["entries"]) == 9


def test_spectrum_numeric(capsys):
    code, out, _ = run(capsys, "spectrum", "-n", "1", "--numeric")
    assert code == 0 and json.loads(out)["numeric"]["passed"]


def test_spectrum_hecke(capsys):
    code, out, _ = run(capsys, "spectrum", "-n", "3", "--hecke")
    doc = json.loads(out)
    assert code == 0
    for plain, scaled in zip(doc["entries"], doc["hecke"]):
        assert scaled["value"] == pytest.approx(plain["value"] / 3, abs=1e-15)


def test_spectrum_pretty(capsys):
    code, out, _ = run(capsys, "spectrum", "-n", "2", "--pretty")
    assert code == 0 and "5 distinct eigenvalues" in out


def test_spectrum_other_k(capsys):
    code, _, err = run(capsys, "spectrum", "-n", "2", "-k", "4")
    assert code == 2 and "open problem" in err
    code, out, _ = run(capsys, "spectrum", "-n", "2", "-k", "4", "--numeric")
    doc = json.loads(out)
    assert code == 0 and doc["closed_form"] is None
    assert sum(c["count"] for c in doc["numeric"]["clusters"]) == 16


def test_spectrum_cap(capsys, monkeypatch):
    monkeypatch.setenv("HANOI_SCHREIER_MAX_SPECTRUM_ENTRIES", "100")
    assert run(capsys, "spectrum", "-n", "8")[0] == 3


def test_verify_default(capsys):
    code, out, _ = run(capsys, "verify", "--points", "5")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["schema_version"] == 1


def test_verify_seed_changes_points_not_verdicts(capsys):
    a = json.loads(run(capsys, "verify", "--points", "4", "--seed", "7")[1])
    b = json.loads(run(capsys, "verify", "--points", "4", "--seed", "0")[1])
    assert [c["passed"] for c in a["checks"]] == [c["passed"] for c in b["checks"]]
    from hanoi_schreier.decimation import sample_points

    assert sample_points(4, 2, seed=9) != sample_points(4, 2, seed=2)


def test_verify_mutation(capsys):
    code, out, err = run(capsys, "verify", "--points", "3", "--inject-mutation", "semiconjugacy")
    assert code == 1
    assert json.loads(out)["failing"] == ["semiconjugacy"]
    assert "semiconjugacy" in err


def test_plotdata(capsys, tmp_path):
    code, out, _ = run(capsys, "plotdata", "--aux-level", "2", "--julia-depth", "10",
                       "--kns-depth", "4", "--hist-level", "3", "--outdir", str(tmp_path))
    assert code == 0
    files = json.loads(out)["files"]
    assert files["auxiliary_level2.csv"]["curves"] == 4
    assert files["julia.csv"]["rows"] == 1024
    assert files["julia.csv"]["min"] >= -2 and files["julia.csv"]["max"] <= 3
    assert files["kns_atoms.csv"]["total_mass"] == "211/243"
    assert files["histogram_level3.csv"]["rows"] == 11
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted(files)


def test_plotdata_bad_depth(capsys, tmp_path):
    assert run(capsys, "plotdata", "--aux-level", "7", "--outdir", str(tmp_path))[0] == 2


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "hanoi_schreier", "spectrum", "-n", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["n"] == 1
