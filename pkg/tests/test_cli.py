from __future__ import annotations

import io
import json
import os
import re
import subprocess
import sys
from pathlib import Path

import pytest

from legendrian_lab.algebra import NCSum
from legendrian_lab.cli import SCHEMA, run

FIXTURES = Path(os.environ.get("LLAB_FIXTURES", Path(__file__).parent / "fixtures"))


def _run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv,golden", [
    (("dga", "2: 1^3"), "cli_dga_trefoil.json"),
    (("rulings", "2: 1^3", "--format", "csv"), "cli_rulings_trefoil.csv"),
    (("dim", "2: 1^3"), "cli_dim_trefoil.json"),
])
def test_golden_outputs_bytewise(argv, golden):
    code, out, _ = _run(*argv)
    assert code == 0
    assert out == (FIXTURES / golden).read_text()


def test_golden_dga_agrees_with_closed_forms():
    data = json.loads((FIXTURES / "cli_dga_trefoil.json").read_text())
    assert data["schema"] == SCHEMA
    assert NCSum.parse(data["differentials"]["c2"]) == NCSum.parse("t2^-1 + a2 + (1 + a2*a3)*t1*(1 + a1*a2)")


def test_dga_text_and_single_mode():
    code, out, _ = _run("dga", "2: 1^3", "--format", "text", "--mode", "single")
    assert code == 0
    assert "dc1 = 1 + a1 + a3 + a1*a2*a3" in out.splitlines()


def test_aug_count():
    code, out, _ = _run("aug-count", "2: 1^3", "--q", "2,3,5")
    data = json.loads(out)
    assert code == 0
    assert [r["mb"] for r in data["counts"]] == [5, 10, 26]
    assert all(r["mb"] == r["predicted_mb"] and r["aug_all_cusps"] == r["predicted_aug"] for r in data["counts"])
    code, out, _ = _run("aug-count", "3: 1 2 1", "--q", "2")
    assert json.loads(out)["counts"] == [{"q": 2, "aug_all_cusps": 3}]
    code, _, err = _run("aug-count", "3: 1 2 1", "--mode", "single")
    assert code == 3 and "connected" in err


def test_strata_csv():
    code, out, _ = _run("strata", "2: 1^3", "--format", "csv")
    rows = out.strip().splitlines()
    assert code == 0
    assert rows[0] == "braid,q,ruling,s,r,predicted,observed"
    assert sorted(r.split(",")[-1] for r in rows[1:]) == ["3", "3", "4"]


def test_dual_boundary_and_sheaf_check():
    code, out, _ = _run("dual-boundary", "2: 1^5")
    assert code == 0 and json.loads(out)["dual_boundary"] == "S^3"
    code, out, _ = _run("sheaf-check", "2: 1^3")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert [(r["oracle"], r["expected"]) for r in data["checks"]] == [(5, 5), (20, 20)]


def test_stokes_and_newton(tmp_path):
    code, out, _ = _run("stokes-braid", "airy:3")
    assert code == 0 and json.loads(out)["word"] == "2: 1 1 1 1 1"
    path = tmp_path / "tau.txt"
    path.write_text("N=2\ng = -2/3,0 t^-3\n")
    code, out, _ = _run("stokes-braid", f"@{path}")
    assert json.loads(out)["word"] == "2: 1 1 1"
    code, out, _ = _run("newton", "d^2 - x^-4")
    assert json.loads(out)["slopes"] == ["2"]


def _count(svg: str, cls: str) -> int:
    return len(re.findall(f'class="{cls}"', svg))


def test_render_front_svg():
    code, svg, _ = _run("render", "2: 1^3")
    assert code == 0 and svg.startswith("<svg")
    assert (_count(svg, "crossing"), _count(svg, "cusp"), _count(svg, "under")) == (3, 4, 6)
    assert _count(svg, "eye") == 0
    _, svg, _ = _run("render", "2: 1^3", "--ruling", "111")
    assert (_count(svg, "eye"), _count(svg, "switch")) == (2, 3)
    code, _, err = _run("render", "2: 1^3", "--ruling", "010")
    assert code == 3 and "010" in err


def test_render_stokes_svg():
    code, svg, _ = _run("render", "airy:1", "--stokes")
    assert code == 0
    assert (_count(svg, "branch"), _count(svg, "stokes-crossing")) == (2, 3)
    _, svg2, _ = _run("stokes-braid", "airy:1", "--format", "svg")
    assert svg == svg2


def test_verify():
    code, out, _ = _run("verify", "2: 1^5", "--q", "2,3")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert data["mb"] == {"2": 21, "3": 91}
    code, out, _ = _run("verify", "3: 1 2 1", "--q", "2")
    assert code == 0 and json.loads(out)["ok"]


@pytest.mark.parametrize("argv", [
    ("verify", "3: 1 2 2 2", "--q", "2,3"),
    ("aug-count", "2: 1^5", "--q", "2,3,4,5"),
    ("render", "2: 1^5", "--ruling", "11100"),
])
def test_threads_do_not_change_output(argv):
    outs = {_run(*argv, "--threads", str(t))[1] for t in (1, 2, 4)}
    outs.add(_run(*argv)[1])
    assert len(outs) == 1


@pytest.mark.parametrize("argv,code", [
    ((), 2),
    (("dga",), 2),
    (("nope", "2: 1"), 2),
    (("aug-count", "2: 1", "--q", "6"), 2),
    (("aug-count", "2: 1", "--q", "x"), 2),
    (("dga", "2: 3"), 3),
    (("dga", "two: 1"), 3),
    (("dim", "3: 1 2 1"), 3),
    (("dual-boundary", "2: 1"), 3),
    (("stokes-braid", "N=1; g = 0,1 t^-1; g = 0,-1 t^-1"), 3),
])
def test_exit_codes(argv, code, capsys):
    assert _run(*argv)[0] == code


def test_console_script_subprocess():
    proc = subprocess.run([sys.executable, "-m", "legendrian_lab", "dim", "2: 1^3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == (FIXTURES / "cli_dim_trefoil.json").read_text()
    proc = subprocess.run([sys.executable, "-m", "legendrian_lab", "dim", "2: 1 1"], capture_output=True, text=True)
    assert proc.returncode == 3
