import json
import subprocess
import sys
from pathlib import Path

import pytest

from simplicial_holonomy.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_chains_text(capsys):
    code, out, _ = run(capsys, "chains", "--n", 2, "--r", 2)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "6 chains [2] x [2]"
    assert len(lines) == 7


def test_chains_json(capsys):
    code, out, _ = run(capsys, "chains", "--n", 3, "--r", 2, "--json")
    obj = json.loads(out)
    assert code == 0 and obj["v"] == 1 and obj["count"] == 10 == len(obj["chains"])


def test_stokes_random(capsys):
    code, out, _ = run(capsys, "stokes", "--random", 100, "--n", 2, "--r", 2, "--seed", 7)
    assert code == 0
    assert "seed 7" in out
    assert out.strip().endswith("residual 0 in 100/100")


def test_stokes_unsigned_reports_failure(capsys):
    code, out, _ = run(capsys, "stokes", "--random", 20, "--n", 1, "--r", 2, "--unsigned")
    assert code == 1 and "nonzero residual" in out


def test_stokes_single_form(capsys):
    code, out, _ = run(capsys, "stokes", "--form", DATA / "x1x2dx1.json", "--n", 1, "--r", 1)
    assert code == 0 and "residual 0 on" in out


def test_stokes_form_needs_shape(capsys):
    code, _, err = run(capsys, "stokes", "--form", DATA / "x1x2dx1.json")
    assert code == 2 and "--n" in err


def test_integrate_chain(capsys):
    code, out, _ = run(capsys, "integrate", "--form", DATA / "x1x2dx1.json",
                       "--chain", DATA / "chain11.json")
    assert code == 0 and json.loads(out)["form"]["n"] == 1


def test_integrate_fiberwise(capsys):
    code, out, _ = run(capsys, "integrate", "--form", DATA / "x1x2dx1.json", "--n", 1, "--r", 1)
    assert code == 0 and json.loads(out)["v"] == 1


@pytest.mark.parametrize("space,conn", [("delta1.json", "const-e.json"),
                                        ("delta1-cells.json", "const-e-cells.json")])
def test_hol_exponential(capsys, space, conn):
    code, out, _ = run(capsys, "hol", "--space", DATA / space, "--conn", DATA / conn,
                       "--order", 4)
    assert code == 0
    rows = json.loads(out)["hol"]
    moving = [r for r in rows if r["source"] != r["target"]]
    assert len(moving) == 1
    # e^r (x) theta^[r] for r = 0..4
    assert [t["bidegree"][0] for t in moving[0]["terms"]] == [0, 1, 2, 3, 4]
    for t in moving[0]["terms"]:
        assert t["value"]["terms"] == [{"c": "1", "e": [t["bidegree"][0]]}]


def test_derham_check(capsys, tmp_path):
    out_file = tmp_path / "c.json"
    code, _, _ = run(capsys, "derham", "--form", DATA / "x1x2dx1.json", "--check",
                     "--output", out_file)
    obj = json.loads(out_file.read_text())
    assert code == 0 and obj["v"] == 1 and obj["chain_map"]["failures"] == []


@pytest.mark.parametrize("builtin", ["simplex:3", "exterior"])
def test_ainfty_builtin(capsys, builtin):
    code, out, _ = run(capsys, "ainfty-check", "--builtin", builtin, "--unitalize")
    obj = json.loads(out)
    assert code == 0 and obj["square_zero"]["failures"] == []


def test_ainfty_json_input(capsys, tmp_path):
    from simplicial_holonomy.ainfty import simplex_category, to_json
    p = tmp_path / "a.json"
    p.write_text(json.dumps(to_json(simplex_category(2))))
    code, out, _ = run(capsys, "ainfty-check", "--input", p, "--max-len", 3)
    assert code == 0


def test_ainfty_json_broken(capsys, tmp_path):
    from simplicial_holonomy.ainfty import simplex_category, to_json
    obj = to_json(simplex_category(2))
    obj["b"][0]["out"][0]["c"] *= 2
    p = tmp_path / "a.json"
    p.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "ainfty-check", "--input", p, "--max-len", 3)
    assert code == 1 and json.loads(out)["square_zero"]["failures"]


def test_missing_version_is_input_error(capsys, tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"simplex": 1}))
    code, _, err = run(capsys, "hol", "--space", p, "--conn", DATA / "const-e.json")
    assert code == 2 and '"v": 1' in err


def test_parse_error_reports_position(capsys, tmp_path):
    p = tmp_path / "f.json"
    p.write_text('{"v": 1,\n  "simplex": }')
    code, _, err = run(capsys, "hol", "--space", p, "--conn", DATA / "const-e.json")
    assert code == 2 and f"{p}:2:" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "integrate", "--form", "/nonexistent.json", "--n", 0, "--r", 0)
    assert code == 2


def test_cap_exhaustion_exit_code(capsys, monkeypatch):
    from simplicial_holonomy import cli
    from simplicial_holonomy.simplicial import CapError

    def exhausted(*a, **k):
        raise CapError("dimension 4 beyond cap 3")
    monkeypatch.setattr(cli, "hol_table", exhausted)
    code, _, err = run(capsys, "hol", "--space", DATA / "delta1.json",
                       "--conn", DATA / "const-e.json")
    assert code == 3 and "cap exhausted" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "simplicial_holonomy", "chains", "--n", "1",
                        "--r", "1"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("2 chains")
