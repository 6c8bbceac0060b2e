import json
import subprocess
import sys

import numpy as np
import pytest

from helpers import ODOMETER_TRANSITIONS, circulant_spectrum

from wgraph import (
    ActionSpec,
    CoveringMap,
    GroupAlgebraElement,
    make_graph,
    parse_complex,
    read_covering,
    read_graph,
    voltage_cover,
    write_action,
    write_covering,
    write_element,
    write_graph,
    write_matrix,
    write_voltages,
)
from wgraph.cli import main


def two_cycle_graph():
    return make_graph(["x", "y"], [("x", "y", 1.0), ("y", "x", 1.0)], [1, 0])


def eight_cycle_graph():
    verts = [f"v{i}" for i in range(8)]
    fwd = [(verts[i], verts[(i + 1) % 8], 1.0) for i in range(8)]
    bwd = [(verts[(i + 1) % 8], verts[i], 1.0) for i in range(8)]
    pairing = [8 + i for i in range(8)] + list(range(8))
    return make_graph(verts, fwd + bwd, pairing)


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("clifiles")
    paths = {k: str(d / k) for k in (
        "swap.wg", "cycle8.wg", "nil.mat", "base2.wg", "volt2.volt",
        "good.cov", "bad.cov", "odo.act", "adj.elt",
    )}
    write_graph(two_cycle_graph(), paths["swap.wg"])
    write_graph(eight_cycle_graph(), paths["cycle8.wg"])
    write_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]), paths["nil.mat"])
    base = two_cycle_graph()
    write_graph(base, paths["base2.wg"])
    write_voltages(2, [(1, 0), (1, 0)], paths["volt2.volt"])
    cover, covering = voltage_cover(base, 2, [(1, 0), (1, 0)])
    write_covering(covering, paths["good.cov"])
    arcs = [(a.source, a.target, a.weight) for a in cover.arcs]
    arcs[0] = (arcs[0][0], arcs[0][1], 1.5)
    broken_cover = make_graph(cover.vertices, arcs, list(cover.pairing))
    write_covering(
        CoveringMap(broken_cover, covering.base, covering.vertex_map, covering.arc_map),
        paths["bad.cov"],
    )
    write_action(
        ActionSpec("mealy", transitions=ODOMETER_TRANSITIONS, alphabet=("0", "1")),
        paths["odo.act"],
    )
    write_element(GroupAlgebraElement({("a",): 1.0, ("a'",): 1.0}), paths["adj.elt"])
    return paths


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_graph_op_scale(files, capsys, tmp_path):
    out_path = str(tmp_path / "scaled.wg")
    code, out, _ = run(capsys, [
        "graph-op", "scale", "--graph", files["swap.wg"], "--factor", "2+1i",
        "--out", out_path,
    ])
    assert code == 0
    assert "OPERATION: scale" in out
    assert "SELF-CHECK: ok" in out
    assert read_graph(out_path).arcs[0].weight == 2 + 1j


def test_graph_op_add_and_adjoint(files, capsys):
    for argv in (
        ["graph-op", "add", "--graph", files["swap.wg"], "--factor=-0.5i"],
        ["graph-op", "adjoint", "--graph", files["swap.wg"]],
    ):
        code, out, _ = run(capsys, argv)
        assert code == 0
        assert "SELF-CHECK: ok" in out


def test_graph_op_compose(files, capsys):
    code, out, _ = run(capsys, [
        "graph-op", "compose", "--graph", files["cycle8.wg"], "--other", files["cycle8.wg"],
    ])
    assert code == 0
    assert "OTHER ORDER: 8" in out
    assert "SELF-CHECK: ok" in out


def test_graph_op_deficiency(files, capsys):
    code, out, _ = run(capsys, [
        "graph-op", "deficiency", "--graph", files["cycle8.wg"],
        "--lambda", "0.5", "--R", "4", "--side", "left",
    ])
    assert code == 0
    assert "SIDE: left" in out
    assert "SELF-CHECK: ok" in out


def test_graph_op_missing_factor_is_an_input_error(files, capsys):
    code, out, err = run(capsys, ["graph-op", "scale", "--graph", files["swap.wg"]])
    assert code == 2
    assert out == ""
    assert err.startswith("ERROR:")


def test_spectrum_of_graph(files, capsys):
    code, out, _ = run(capsys, ["spectrum", "--graph", files["swap.wg"]])
    assert code == 0
    assert "SPECTRUM: -1.0 1.0" in out


def test_spectrum_values_match_closed_form(files, capsys):
    code, out, _ = run(capsys, ["spectrum", "--graph", files["cycle8.wg"]])
    assert code == 0
    line = [ln for ln in out.splitlines() if ln.startswith("SPECTRUM: ")][0]
    values = [parse_complex(tok) for tok in line.split(": ")[1].split()]
    assert np.max(np.abs(np.array(values) - circulant_spectrum(8))) <= 1e-10


def test_spectrum_membership_check(files, capsys):
    code, out, _ = run(capsys, [
        "spectrum", "--matrix", files["nil.mat"], "--check-lambda", "0",
    ])
    assert code == 0
    assert "MEMBER: yes" in out
    assert "SIDE: left" in out

    code, out, _ = run(capsys, [
        "spectrum", "--matrix", files["nil.mat"], "--check-lambda", "0.5",
    ])
    assert code == 0
    assert "MEMBER: no" in out


def test_spectrum_needs_exactly_one_source(files, capsys):
    code, _, err = run(capsys, [
        "spectrum", "--graph", files["swap.wg"], "--matrix", files["nil.mat"],
    ])
    assert code == 2 and err.startswith("ERROR:")
    code, _, err = run(capsys, ["spectrum"])
    assert code == 2 and err.startswith("ERROR:")


def test_cover_verify_good_and_bad(files, capsys):
    code, out, _ = run(capsys, ["cover", "verify", "--map", files["good.cov"]])
    assert code == 0
    assert "VIOLATIONS: 0" in out
    assert "VERIFIED: ok" in out

    code, out, _ = run(capsys, ["cover", "verify", "--map", files["bad.cov"]])
    assert code == 1
    assert "VIOLATION: weight" in out
    assert "VERIFIED: FAILED" in out


def test_cover_lift(files, capsys, tmp_path):
    out_path = str(tmp_path / "lifted.cov")
    code, out, _ = run(capsys, [
        "cover", "lift", "--graph", files["base2.wg"], "--volt", files["volt2.volt"],
        "--out", out_path,
    ])
    assert code == 0
    assert "COVER ORDER: 4" in out
    lifted = read_covering(out_path)
    assert lifted.cover.order == 4

    short = str(tmp_path / "short.volt")
    write_voltages(2, [(1, 0)], short)
    code, _, err = run(capsys, [
        "cover", "lift", "--graph", files["base2.wg"], "--volt", short,
    ])
    assert code == 2 and "ERROR:" in err


def test_cover_include(files, capsys):
    code, out, _ = run(capsys, ["cover", "include", "--map", files["good.cov"]])
    assert code == 0
    assert "INCLUDED: ok" in out
    assert "STEP 0:" in out

    code, out, _ = run(capsys, ["cover", "include", "--map", files["bad.cov"]])
    assert code == 1
    assert "INCLUDED: FAILED" in out


def test_cover_include_json_is_valid(files, capsys):
    code, out, _ = run(capsys, ["cover", "include", "--map", files["good.cov"], "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["included"] is True
    assert len(data["route-steps"]) == 2
    assert all(step["ok"] for step in data["route-steps"])


def test_orbital_same_orbit(files, capsys):
    code, out, _ = run(capsys, [
        "orbital", "--action", files["odo.act"], "--element", files["adj.elt"],
        "--x", "000", "--y", "011", "--level", "3",
    ])
    assert code == 0
    assert "HAUSDORFF: 0.0" in out
    assert "LOCAL-ISO SATURATED: yes" in out
    assert "CROSS-MISSES: 0" in out
    assert "TRANSFER: ok" in out


def test_orbital_json_fields(files, capsys):
    code, out, _ = run(capsys, [
        "orbital", "--action", files["odo.act"], "--element", files["adj.elt"],
        "--x", "000", "--y", "011", "--level", "3", "--json",
    ])
    assert code == 0
    data = json.loads(out)
    assert data["orbit-x"]["size"] == 8
    assert data["transfer"] is True
    assert data["hausdorff"] == 0.0


def test_orbital_bad_inputs(files, capsys):
    code, _, err = run(capsys, [
        "orbital", "--action", files["odo.act"], "--element", files["adj.elt"],
        "--x", "000", "--y", "011", "--level", "12",
    ])
    assert code == 2 and "cap" in err

    code, _, err = run(capsys, [
        "orbital", "--action", files["odo.act"], "--element", files["adj.elt"],
        "--x", "000", "--y", "222", "--level", "3",
    ])
    assert code == 2 and "unknown point" in err

    code, _, err = run(capsys, [
        "orbital", "--action", files["odo.act"], "--element", files["adj.elt"],
        "--x", "000", "--y", "011",
    ])
    assert code == 2 and "level" in err


def test_demo_shift(capsys):
    code, out, _ = run(capsys, ["demo-shift", "--depth", "30", "--trials", "20"])
    assert code == 0
    assert "right-product distance of 1 at lambda=0: 0.25" in out
    assert "left-product distance of 1 at lambda=0: 0.0" in out
    assert "one-sided" in out.lower()


def test_demo_shift_json(capsys):
    code, out, _ = run(capsys, ["demo-shift", "--depth", "30", "--trials", "20", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["passed"] is True
    assert data["right-distance"] == 0.25
    assert data["left-distance"] == 0.0


def test_parse_errors_surface_with_location(files, capsys, tmp_path):
    broken = tmp_path / "broken.wg"
    broken.write_text("wgraph 1\nvertices 1\nv\narcs 1\nv v nope 0\n")
    code, _, err = run(capsys, ["spectrum", "--graph", str(broken)])
    assert code == 2
    assert f"{broken}:5:" in err

    code, _, err = run(capsys, ["spectrum", "--graph", str(tmp_path / "missing.wg")])
    assert code == 2 and "ERROR:" in err


def test_missing_required_argument_exits_two(files):
    with pytest.raises(SystemExit) as e:
        main(["cover", "verify"])
    assert e.value.code == 2


def test_repeated_runs_are_identical(files, capsys):
    commands = [
        ["graph-op", "adjoint", "--graph", files["cycle8.wg"]],
        ["graph-op", "deficiency", "--graph", files["cycle8.wg"], "--lambda", "1", "--R", "4"],
        ["spectrum", "--graph", files["cycle8.wg"], "--check-lambda", "2"],
        ["cover", "verify", "--map", files["good.cov"]],
        ["cover", "include", "--map", files["good.cov"]],
        ["orbital", "--action", files["odo.act"], "--element", files["adj.elt"],
         "--x", "000", "--y", "001", "--level", "3"],
        ["demo-shift", "--depth", "20", "--trials", "10"],
    ]
    for argv in commands:
        for flag in ([], ["--json"]):
            first = run(capsys, argv + flag)
            second = run(capsys, argv + flag)
            assert first == second, argv + flag


def test_subprocess_runs_are_byte_identical(files):
    argv = [
        sys.executable, "-m", "wgraph.cli",
        "orbital", "--action", files["odo.act"], "--element", files["adj.elt"],
        "--x", "000", "--y", "011", "--level", "3", "--json",
    ]
    a = subprocess.run(argv, capture_output=True, check=True)
    b = subprocess.run(argv, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.stdout
    assert json.loads(a.stdout.decode())["local-iso-saturated"] is True
