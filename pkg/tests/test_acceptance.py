"""Acceptance gate: one test and one printed pass/fail line per criterion.

Criterion 6 includes a corruption sub-check that is structurally
undetectable for the implemented family (a scalar grading operator
commutes with every coefficient and is constant on the base, so it drops
out of all curvature components).  That assertion is kept faithful to
its statement and is expected to fail; see the project decision notes.
"""

import json
import time

import numpy as np
import pytest

from frobcdv import (
    A3_POINT,
    CATALOG_NAMES,
    canonical_frame,
    catalog,
    connection_gap,
    construct_canonical_cdv,
    flat_frame_h,
    harmonic_potential,
    invariant_boundary,
    load_spec,
    pencil_curvature,
    solve_tt2d,
    tt2d_residual,
    verify_cv_axioms,
    verify_harmonic,
    wdvv_reduced_m3,
    wdvv_residual,
    write_spec,
)
from frobcdv.cli import main as cli_main, sample_points
from frobcdv.lowdim import check_m2_relations, check_m3_relations, from_canonical

ALG_NAMES = ("kappa_involution", "hermitian_pairing", "higgs_reality", "q_reality")


def _report(capsys, num, label, ok):
    with capsys.disabled():
        print(f"criterion {num} ({label}): {'PASS' if ok else 'FAIL'}")


def test_criterion_1_construction_soundness(capsys):
    start = time.perf_counter()
    ok = True
    for name in ("quartic2", "a3_3d"):
        spec = catalog(name)
        pts, _ = sample_points(spec, 5, seed=0)
        assert len(pts) == 5
        for t in pts:
            cdv = construct_canonical_cdv(canonical_frame(spec, t), spec.d)
            rep = verify_cv_axioms(spec, cdv, 1e-5, alg_tol=1e-10, fd_step=1e-5)
            for e in rep.entries:
                limit = 1e-10 if e.name in ALG_NAMES else 1e-5
                ok = ok and e.residual <= limit
    elapsed = time.perf_counter() - start
    ok = ok and elapsed <= 10.0
    _report(capsys, 1, "construction soundness", ok)
    assert ok, f"elapsed={elapsed:.2f}s"


def test_criterion_2_wdvv_oracle_equivalence(capsys):
    spec = catalog("a3_3d")
    broken = catalog("broken_wdvv")
    pts, _ = sample_points(spec, 10, seed=2)
    ok = len(pts) == 10
    for t in pts:
        full = wdvv_residual(spec, t)
        reduced = wdvv_reduced_m3(spec, t)
        ok = ok and abs(full - reduced) <= 1e-10
        ok = ok and wdvv_residual(broken, t) > 1e-3
        ok = ok and wdvv_reduced_m3(broken, t) > 1e-3
    _report(capsys, 2, "WDVV oracle equivalence", ok)
    assert ok


def test_criterion_3_harmonic_potential(capsys):
    ok = True
    for name in ("quartic2", "a3_3d"):
        spec = catalog(name)
        pts, _ = sample_points(spec, 5, seed=1)
        for t in pts:
            frame = canonical_frame(spec, t)
            cdv = construct_canonical_cdv(frame, spec.d)
            hd = harmonic_potential(frame, spec.d)
            rep = verify_harmonic(spec, frame, hd, cdv, 1e-5)
            ok = ok and rep.passed
            # exact diagonal law, no tolerance
            ok = ok and np.array_equal(np.diag(hd.P), -frame.u)
    _report(capsys, 3, "harmonic potential", ok)
    assert ok


def test_criterion_4_non_kaehler_obstruction(capsys):
    gap_names = (
        "chern_torsion", "kaehler_closedness", "nabla_vs_chern", "real_lc_vs_chern"
    )
    ok = True
    for name, t in [("quartic2", (0.0, 1.0)), ("a3_3d", A3_POINT)]:
        rep = connection_gap(catalog(name), t, 1e-5)
        for gname in gap_names:
            ok = ok and rep[gname].residual > 1e-3
    trivial = connection_gap(catalog("cubic2"), (0.3 + 0.1j, 0.7), 1e-8)
    for gname in gap_names:
        ok = ok and trivial[gname].residual <= 1e-8
    h = flat_frame_h(catalog("a3_3d"), A3_POINT)
    off = h - np.diag(np.diag(h))
    ok = ok and np.max(np.abs(off)) > 1e-6 * np.linalg.norm(h)
    _report(capsys, 4, "non-Kaehler obstruction", ok)
    assert ok


def test_criterion_5_thresholded_equivalence(capsys):
    disagreements = 0
    for name in ("cubic2", "quartic2"):
        spec = catalog(name)
        pts, _ = sample_points(spec, 20, seed=0)
        for t in pts:
            rep = connection_gap(spec, t, 1e-6)
            a = rep["chern_torsion"].residual <= 1e-6
            b = rep["kaehler_closedness"].residual <= 1e-6
            disagreements += int(a != b)
    ok = disagreements == 0
    _report(capsys, 5, "torsion/Kaehler threshold equivalence", ok)
    assert ok


def test_criterion_6_pencil_flatness(capsys):
    spec = catalog("quartic2")
    t = (0.0, 1.0)
    base = pencil_curvature(spec, t, [1.0, 1.0j, 2.0], 1e-5)
    ok_flat = base.passed
    corrupted = pencil_curvature(spec, t, [1.0, 1.0j, 2.0], 1e-5, Q=np.eye(2))
    ok_corrupt = corrupted["pencil_curvature"].residual > 1e-1
    ok = ok_flat and ok_corrupt
    _report(capsys, 6, "pencil flatness", ok)
    assert ok_flat
    # Expected failure: the scalar corruption commutes with everything and
    # is constant, so no curvature component can see it.
    assert ok_corrupt


def test_criterion_7_tt2d_pde(capsys):
    ok = True
    rect = (-1.0, -1.0, 1.0, 1.0)
    sol = solve_tt2d(catalog("cubic2"), rect, 64, 1.0)
    ok = ok and sol.converged and sol.iterations <= 5 and sol.residual <= 1e-10
    ok = ok and np.max(np.abs(sol.h11 - 1.0)) <= 1e-12

    spec = catalog("p1")
    start = time.perf_counter()
    sol = solve_tt2d(spec, rect, 64, invariant_boundary(spec, rect, 64), tol=1e-8)
    elapsed = time.perf_counter() - start
    ok = ok and sol.converged and sol.iterations <= 30 and sol.residual <= 1e-8
    ok = ok and elapsed <= 5.0
    pde, inv = tt2d_residual(spec, sol)
    ok = ok and pde <= 10.0 * max(sol.residual, 1e-8)
    ok = ok and inv <= 1e-4
    _report(capsys, 7, "tt* PDE solver", ok)
    assert ok


def test_criterion_8_low_dimensional_systems(capsys):
    ok = True
    inp2 = from_canonical(catalog("quartic2"), (0.0, 1.0))
    rep2 = check_m2_relations(inp2, 1e-9)
    ok = ok and rep2.passed
    ok = ok and rep2["m2_positive_diagonal"].passed  # h = diag(h11, 1/h11)

    inp3 = from_canonical(catalog("a3_3d"), A3_POINT)
    rep3 = check_m3_relations(inp3, 1e-9)
    ok = ok and rep3["m3_wdvv_scalar"].residual <= 1e-10
    ok = ok and rep3["m3_implied_relation_23"].passed
    ok = ok and rep3["m3_implied_relation_13"].passed
    ok = ok and rep3.passed
    _report(capsys, 8, "low-dimensional relation systems", ok)
    assert ok


def test_criterion_9_determinism_and_round_trip(capsys, tmp_path):
    ok = True
    for name in CATALOG_NAMES:
        spec = catalog(name)
        path = tmp_path / f"{name}.json"
        write_spec(spec, path)
        ok = ok and load_spec(path) == spec

    spec_path = tmp_path / "quartic2.json"
    docs = []
    for i in range(2):
        report = tmp_path / f"report{i}.json"
        code = cli_main([
            "verify", "--spec", str(spec_path), "--points", "3", "--seed", "11",
            "--report", str(report),
        ])
        ok = ok and code == 0
        doc = json.loads(report.read_text())
        doc.pop("timestamp")
        docs.append(json.dumps(doc, sort_keys=True).encode())
    ok = ok and docs[0] == docs[1]
    _report(capsys, 9, "determinism and round-trip", ok)
    assert ok
