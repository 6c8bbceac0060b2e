"""Acceptance suite: one test per advertised numerical guarantee.

Each test exercises a headline property of the library at its stated
tolerance on seeded finite instances, so ``pytest -v`` prints a pass/fail
line per guarantee.  Oracles are independent of the code under test:
dense matrix arithmetic, singular values, closed-form circulant spectra,
and byte comparison of CLI output.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from helpers import (
    ODOMETER_TRANSITIONS,
    adjacency_element,
    circulant_spectrum,
    odometer_action,
    random_graph,
    unit_disk,
)

from wgraph import (
    ActionSpec,
    FinSuppVector,
    GroupAlgebraElement,
    add_scalar,
    adjoint,
    compose,
    default_radius_bound,
    induced_covering,
    local_iso_check,
    make_graph,
    materialize,
    membership_by_deficiency,
    orbital_graph,
    positive_element_graph,
    pullback_matrix,
    rayleigh_transfer,
    scale,
    shift_counterexample_report,
    spectrum,
    subset_check,
    verify_covering,
    voltage_cover,
    write_action,
    write_covering,
    write_element,
    write_graph,
    write_voltages,
)
from wgraph.cli import main
from wgraph.covering import deficiency_route_check


def test_criterion_1_graph_ops_match_matrix_ops():
    rng = np.random.default_rng(101)
    for _ in range(200):
        n = int(rng.integers(1, 21))
        g = random_graph(rng, n=n)
        h = random_graph(rng, n=n)
        m = materialize(g)
        mh = materialize(h)
        lam = complex(unit_disk(rng))
        checks = [
            ("scale", materialize(scale(g, lam)), lam * m),
            ("add", materialize(add_scalar(g, lam)), m + lam * np.eye(n)),
            ("adjoint", materialize(adjoint(g)), m.conj().T),
            ("compose", materialize(compose(g, h)), m @ mh),
        ]
        for name, got, want in checks:
            ref = max(1.0, float(np.max(np.abs(want))))
            assert np.max(np.abs(got - want)) <= 1e-12 * ref, name


def test_criterion_2_membership_agrees_with_singular_value_oracle(matrix_suite):
    tol = 1e-9
    band = 1e-5
    checked = 0
    skipped = 0
    for m, bound, radius in matrix_suite:
        n = m.shape[0]
        eye = np.eye(n)
        threshold = radius * np.sqrt(tol)
        grid = np.linspace(-2.0 * bound, 2.0 * bound, 21)
        for re in grid:
            for im in grid:
                lam = complex(re, im)
                smin = float(np.linalg.svd(m - lam * eye, compute_uv=False)[-1])
                if abs(smin - threshold) <= band:
                    skipped += 1
                    continue
                verdict = membership_by_deficiency(m, lam, radius, tol=tol)
                assert verdict.member == (smin <= threshold), (lam, smin, threshold)
                checked += 1
    assert checked >= 80_000
    assert skipped <= 2_000


def test_criterion_3_deficiency_spectra_lie_in_unit_interval(matrix_suite):
    for m, bound, radius in matrix_suite:
        n = m.shape[0]
        eye = np.eye(n)
        smax = float(np.linalg.norm(m, 2))
        for lam in (0j, smax / 2 + 0j, -smax / 2 + 0j, smax * np.exp(0.25j * np.pi)):
            a = m - lam * eye
            for product in (a @ a.conj().T, a.conj().T @ a):
                eig = np.linalg.eigvalsh(eye - product / radius**2)
                assert eig.min() >= -1e-9
                assert eig.max() <= 1.0 + 1e-9


def test_criterion_4_shift_identities_hold_exactly():
    report = shift_counterexample_report(depth=100, trials=100, seed=0)
    assert report.isometry_exact
    assert report.corange_kills_origin
    assert report.range_orthogonal_to_origin
    assert report.right_distance == 0.25
    assert report.left_distance == 0.0
    assert report.one_sided_misses_membership
    assert report.passed


def test_criterion_5_induced_coverings_verify_and_intertwine(voltage_suite):
    rng = np.random.default_rng(20260814)
    for base, cover, covering in voltage_suite:
        lam = complex(unit_disk(rng))
        for name, kwargs in (
            ("scale", {"factor": lam}),
            ("add_scalar", {"factor": lam}),
            ("adjoint", {}),
            ("compose", {"other": covering}),
        ):
            out = induced_covering(covering, name, **kwargs)
            assert verify_covering(out) == []
            p = pullback_matrix(out)
            h1 = materialize(out.cover)
            h2 = materialize(out.base)
            assert np.max(np.abs(h1 @ p - p @ h2)) <= 1e-12, name


def test_criterion_6_base_spectrum_embeds_in_cover_spectrum(voltage_suite):
    for base, cover, covering in voltage_suite:
        res = subset_check(
            spectrum(materialize(base)), spectrum(materialize(cover)), 1e-8
        )
        assert res.included, res.worst_point
        route = deficiency_route_check(covering, tol=1e-8)
        assert route.all_ok
        assert len(route.steps) == base.order


def test_criterion_7_odometer_orbitals_circulant_and_transfer():
    elem = adjacency_element()
    radius = default_radius_bound(elem)
    assert radius == 4.0

    graphs = {}
    for level in (3, 4, 5):
        og = orbital_graph(odometer_action(level), "0" * level, elem)
        graphs[level] = og
        m = materialize(og.graph)
        eig = np.linalg.eigvalsh(m)
        assert np.max(np.abs(np.sort(eig) - circulant_spectrum(2**level))) <= 1e-10
        for alpha in eig:
            d = materialize(positive_element_graph(og, elem, alpha, radius))
            assert np.min(np.abs(np.linalg.eigvalsh(d) - 1.0)) <= 1e-9

    rng = np.random.default_rng(707)
    for level in (3, 4):
        gx, gy = graphs[level], graphs[level + 1]
        predicted = 2 ** (level - 1) - 1
        res = local_iso_check(gx, gy, predicted + 1)
        assert res.max_ok_radius == predicted
        support_radius = predicted - 1
        match = res.radii[predicted].x_matches[gx.root]
        support = [v for v, d in gx.distances(gx.root).items() if d <= support_radius]
        builder = lambda g: positive_element_graph(g, elem, 0.5, radius)
        for _ in range(25):
            vec = FinSuppVector(
                {v: complex(rng.normal(), rng.normal()) for v in support}
            )
            vx, vy = rayleigh_transfer(
                gx, gy, builder, vec, support_radius, (gx.root, match)
            )
            assert abs(vx - vy) <= 1e-12


@pytest.fixture(scope="module")
def cli_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("acceptance_cli")
    swap = make_graph(["x", "y"], [("x", "y", 1.0), ("y", "x", 1.0)], [1, 0])
    verts = [f"v{i}" for i in range(8)]
    fwd = [(verts[i], verts[(i + 1) % 8], 1.0) for i in range(8)]
    bwd = [(verts[(i + 1) % 8], verts[i], 1.0) for i in range(8)]
    cycle8 = make_graph(verts, fwd + bwd, [8 + i for i in range(8)] + list(range(8)))

    paths = {
        "swap": str(d / "swap.wg"),
        "cycle8": str(d / "cycle8.wg"),
        "volt": str(d / "double.volt"),
        "cov": str(d / "double.cov"),
        "act": str(d / "odometer.act"),
        "elt": str(d / "adjacency.elt"),
    }
    write_graph(swap, paths["swap"])
    write_graph(cycle8, paths["cycle8"])
    write_voltages(2, [(1, 0), (1, 0)], paths["volt"])
    _, covering = voltage_cover(swap, 2, [(1, 0), (1, 0)])
    write_covering(covering, paths["cov"])
    write_action(
        ActionSpec("mealy", transitions=ODOMETER_TRANSITIONS, alphabet=("0", "1")),
        paths["act"],
    )
    write_element(GroupAlgebraElement({("a",): 1.0, ("a'",): 1.0}), paths["elt"])
    return paths


def test_criterion_8_cli_reports_are_deterministic(cli_files, capsys):
    f = cli_files
    commands = [
        ["graph-op", "scale", "--graph", f["swap"], "--factor", "2+1i"],
        ["graph-op", "add", "--graph", f["swap"], "--factor=-0.5i"],
        ["graph-op", "adjoint", "--graph", f["cycle8"]],
        ["graph-op", "compose", "--graph", f["cycle8"], "--other", f["cycle8"]],
        ["graph-op", "deficiency", "--graph", f["cycle8"], "--lambda", "0.5",
         "--R", "4", "--side", "left"],
        ["spectrum", "--graph", f["cycle8"], "--check-lambda", "2"],
        ["cover", "verify", "--map", f["cov"]],
        ["cover", "lift", "--graph", f["swap"], "--volt", f["volt"]],
        ["cover", "include", "--map", f["cov"]],
        ["orbital", "--action", f["act"], "--element", f["elt"],
         "--x", "000", "--y", "011", "--level", "3"],
        ["demo-shift", "--depth", "50", "--trials", "50", "--seed", "7"],
    ]
    for argv in commands:
        for flags in ([], ["--json"]):
            outputs = []
            for _ in range(2):
                code = main(argv + flags)
                captured = capsys.readouterr()
                assert code == 0, (argv + flags, captured.err)
                assert captured.err == ""
                outputs.append(captured.out)
            assert outputs[0] == outputs[1], argv + flags
            if flags:
                json.loads(outputs[0])

    proc_argv = [
        sys.executable, "-m", "wgraph.cli",
        "cover", "include", "--map", f["cov"], "--json",
    ]
    first = subprocess.run(proc_argv, capture_output=True, check=True)
    second = subprocess.run(proc_argv, capture_output=True, check=True)
    assert first.stdout == second.stdout and first.stdout
