import json
import subprocess
import sys

import numpy as np
import pytest

from helpers import cube_mesh, octa_mesh
from poise.cli import run
from poise.geom3d import dump_off
from poise.polytoped import cube_hrep, dump_hrep_text

SQUARE_TEXT = "-1 -1\n1 -1\n1 1\n-1 1\n"


@pytest.fixture
def square(tmp_path):
    p = tmp_path / "square.txt"
    p.write_text(SQUARE_TEXT)
    return str(p)


@pytest.fixture
def cube_off(tmp_path):
    p = tmp_path / "cube.off"
    p.write_text(dump_off(cube_mesh()))
    return str(p)


@pytest.fixture
def cube_h(tmp_path):
    p = tmp_path / "cube.hrep"
    p.write_text(dump_hrep_text(cube_hrep(3)))
    return str(p)


def test_balance2d_json_and_check(square, tmp_path):
    out = tmp_path / "c.json"
    res = run(["balance2d", "--polygon", square, "--weights", "3 2 2",
               "--json", str(out)])
    assert res.exit_code == 0
    payload = json.loads(out.read_text())
    assert payload["schema"] == 1
    assert payload["certificate"]["passed"]
    assert payload["certificate"]["residual"] <= payload["certificate"]["eps_bal"]
    assert run(["check", "--json", str(out), "--polygon", square]).exit_code == 0


def test_balance2d_svg_trace(square, tmp_path):
    svg = tmp_path / "fig.svg"
    res = run(["balance2d", "--polygon", square, "--weights", "5 3 2 1",
               "--trace", "--svg", str(svg), "--json", str(tmp_path / "c.json")])
    assert res.exit_code == 0 and res.figure_path == str(svg)
    body = svg.read_text()
    assert body.startswith("<svg") and "polyline" in body


def test_gadget_decide_examples(square, tmp_path):
    assert run(["gadget-decide", "--partition", "2 3 7",
                "--json", str(tmp_path / "no.json")]).exit_code == 1
    out = tmp_path / "yes.json"
    assert run(["gadget-decide", "--partition", "1 1",
                "--json", str(out)]).exit_code == 0
    payload = json.loads(out.read_text())
    assert payload["balanceable"] and payload["witness"] is not None
    assert run(["check", "--json", str(out)]).exit_code == 0


def test_partition_round_trips(tmp_path):
    out = tmp_path / "r.json"
    assert run(["reduce-partition", "--partition", "2 3 7",
                "--json", str(out)]).exit_code == 0
    assert run(["check", "--json", str(out)]).exit_code == 0
    out2 = tmp_path / "s.json"
    assert run(["solve-partition", "--weights", "5 4 3 2 1",
                "--json", str(out2)]).exit_code == 0
    assert run(["check", "--json", str(out2)]).exit_code == 0


def test_tripodal_round_trip_and_artifacts(cube_off, tmp_path):
    out = tmp_path / "t.json"
    svg = tmp_path / "t.svg"
    obj = tmp_path / "t.obj"
    res = run(["tripodal", "--off", cube_off, "--grid", "64x64",
               "--json", str(out), "--svg", str(svg), "--obj", str(obj)])
    assert res.exit_code == 0
    payload = json.loads(out.read_text())
    assert payload["certificate"]["passed"]
    assert svg.read_text().startswith("<svg")
    assert "o markers" in obj.read_text()
    assert run(["check", "--json", str(out), "--off", cube_off]).exit_code == 0


def test_three_on_edges_round_trip(cube_h, tmp_path):
    out = tmp_path / "e.json"
    assert run(["three-on-edges", "--hrep", cube_h,
                "--json", str(out)]).exit_code == 0
    assert run(["check", "--json", str(out), "--hrep", cube_h]).exit_code == 0


def test_four_on_edges_round_trip(tmp_path):
    off = tmp_path / "octa.off"
    off.write_text(dump_off(octa_mesh()))
    out = tmp_path / "f.json"
    assert run(["four-on-edges", "--off", str(off), "--plane", "0 0 1",
                "--json", str(out)]).exit_code == 0
    assert run(["check", "--json", str(out), "--off", str(off)]).exit_code == 0


def test_halving_pow2_compose_round_trips(cube_h, tmp_path):
    for argv, geom in (
            (["halving", "--hrep", cube_h, "--seed", "2"], cube_h),
            (["pow2", "--hrep", cube_h, "--k", "2"], cube_h),
            (["compose", "--hrep", cube_h], cube_h)):
        out = tmp_path / (argv[0] + ".json")
        assert run(argv + ["--json", str(out)]).exit_code == 0
        assert run(["check", "--json", str(out),
                    "--hrep", geom]).exit_code == 0


def test_prop9_commands(tmp_path):
    hout = tmp_path / "p9.hrep"
    jout = tmp_path / "p9.json"
    assert run(["prop9-fixture", "--dim", "4", "--out", str(hout),
                "--json", str(jout)]).exit_code == 0
    assert run(["check", "--json", str(jout), "--hrep", str(hout)]).exit_code == 0
    assert run(["prop9-check", "--hrep", str(hout), "--k", "1",
                "--json", str(tmp_path / "k1.json")]).exit_code == 0
    assert run(["prop9-check", "--hrep", str(hout), "--k", "2",
                "--json", str(tmp_path / "k2.json")]).exit_code == 1


def test_byte_determinism(cube_h, square, tmp_path):
    pairs = []
    for tag in ("a", "b"):
        j1 = tmp_path / f"h_{tag}.json"
        run(["halving", "--hrep", cube_h, "--seed", "3", "--json", str(j1)])
        j2 = tmp_path / f"b_{tag}.json"
        run(["balance2d", "--polygon", square, "--weights", "2 1 1",
             "--json", str(j2)])
        pairs.append((j1.read_bytes(), j2.read_bytes()))
    assert pairs[0] == pairs[1]


def test_exit_codes_for_bad_input(square, tmp_path):
    assert run(["balance2d", "--polygon", str(tmp_path / "missing.txt"),
                "--weights", "1 1"]).exit_code == 2
    assert run(["balance2d", "--polygon", square,
                "--weights", "nope"]).exit_code == 2
    assert run(["balance2d", "--polygon", square,
                "--weights", "9 1 1"]).exit_code == 1  # infeasible
    assert run(["tripodal", "--off", square, "--grid", "8x8"]).exit_code == 2
    assert run(["no-such-command"]).exit_code == 2
    assert run([]).exit_code == 2


def test_compose_dimension_rejection(tmp_path):
    from poise.polytoped import product
    H = product(cube_hrep(4), cube_hrep(5))
    p = tmp_path / "d9.hrep"
    p.write_text(dump_hrep_text(H))
    assert run(["compose", "--hrep", str(p)]).exit_code == 2


def test_check_detects_tampering(square, tmp_path):
    out = tmp_path / "c.json"
    run(["balance2d", "--polygon", square, "--weights", "2 1 1",
         "--json", str(out)])
    payload = json.loads(out.read_text())
    payload["points"][0][0] += 0.2
    out.write_text(json.dumps(payload))
    assert run(["check", "--json", str(out), "--polygon", square]).exit_code == 3


def test_console_entry_point(square, tmp_path):
    out = tmp_path / "c.json"
    proc = subprocess.run(
        [sys.executable, "-m", "poise.cli", "balance2d", "--polygon", square,
         "--weights", "3 2 2", "--json", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(out.read_text())["certificate"]["passed"]


def test_stdout_when_no_json_path(square, capsys):
    res = run(["balance2d", "--polygon", square, "--weights", "1 1"])
    assert res.exit_code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == 1
