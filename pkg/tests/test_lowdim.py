"""Tests for the dimension-2/3 relation systems and the 2d PDE solver."""

import dataclasses

import numpy as np
import pytest

from frobcdv import (
    A3_POINT,
    LowDimInput,
    NoConvergence,
    NotNormalForm,
    ValidationError,
    catalog,
    check_euler_degree,
    check_m2_relations,
    check_m3_relations,
    from_canonical,
    invariant_boundary,
    solve_tt2d,
    tt2d_residual,
    write_tt2d_csv,
)

QPT = (0.0, 1.0)


def _inp(m, h, omega=None, C3=None, degrees=None, d=0.0):
    return LowDimInput(
        m=m,
        h=np.asarray(h, dtype=complex),
        omega=np.zeros((m, m, m), dtype=complex) if omega is None else omega,
        C3=np.zeros((m, m, m), dtype=complex) if C3 is None else C3,
        degrees=degrees or tuple([1.0] * m),
        d=d,
    )


def test_m2_positive_diagonal_branch():
    rep = check_m2_relations(_inp(2, np.diag([2.0, 0.5])), 1e-12)
    assert rep.passed
    assert rep["m2_positive_diagonal"].residual == 0.0


def test_m2_antidiagonal_phase():
    theta = 0.7
    h = np.array([[0.0, np.exp(1j * theta)], [np.exp(-1j * theta), 0.0]])
    rep = check_m2_relations(_inp(2, h), 1e-12)
    assert rep.passed
    with pytest.raises(KeyError):  # branch not triggered
        rep["m2_positive_diagonal"]


def test_m2_violating_pairing():
    rep = check_m2_relations(_inp(2, np.diag([2.0, 2.0])), 1e-12)
    assert rep["m2_kappa_relation_1"].residual == pytest.approx(3.0)
    assert not rep.passed


def test_m2_wrong_dimension_rejected():
    with pytest.raises(NotNormalForm):
        check_m2_relations(_inp(3, np.eye(3)), 1e-12)


def test_m2_from_construction():
    spec = catalog("quartic2")
    for t in [QPT, (0.2 + 0.1j, 0.8 - 0.3j)]:
        rep = check_m2_relations(from_canonical(spec, t), 1e-9)
        assert rep.passed, "\n".join(rep.summary_lines())
        assert rep["m2_positive_diagonal"].passed


def test_m3_antidiagonal_identity():
    h = np.fliplr(np.eye(3))
    rep = check_m3_relations(_inp(3, h), 1e-12)
    assert rep.passed


def test_m3_from_construction():
    spec = catalog("a3_3d")
    rep = check_m3_relations(from_canonical(spec, A3_POINT), 1e-9)
    assert rep.passed, "\n".join(rep.summary_lines())


def test_m3_detects_perturbed_pairing():
    inp = from_canonical(catalog("a3_3d"), A3_POINT)
    h_bad = inp.h.copy()
    h_bad[0, 0] *= 1.1
    rep = check_m3_relations(dataclasses.replace(inp, h=h_bad), 1e-9)
    assert not rep.passed
    assert max(e.residual for e in rep.entries) > 0.01


def test_euler_degree_scaling():
    assert check_euler_degree(catalog("quartic2"), QPT, 1e-10).passed
    assert check_euler_degree(catalog("a3_3d"), A3_POINT, 1e-10).passed
    assert check_euler_degree(catalog("p1"), (0.1, 0.4 + 0.2j), 1e-10).passed


def test_normal_form_required():
    spec = dataclasses.replace(catalog("quartic2"), normal_form=False)
    with pytest.raises(NotNormalForm):
        from_canonical(spec, QPT)
    with pytest.raises(NotNormalForm):
        check_euler_degree(spec, QPT, 1e-10)


def test_tt2d_constant_source_exact():
    # f''' is the constant 1, so h_11 = 1 solves the equation exactly and
    # the solver should accept the initial iterate.
    spec = catalog("cubic2")
    sol = solve_tt2d(spec, (-1.0, -1.0, 1.0, 1.0), 33, 1.0)
    assert sol.converged
    assert sol.iterations == 0
    assert sol.residual == 0.0
    assert np.max(np.abs(sol.h11 - 1.0)) == 0.0


def test_tt2d_exponential_source():
    spec = catalog("p1")
    rect = (-1.0, -1.0, 1.0, 1.0)
    sol = solve_tt2d(spec, rect, 33, invariant_boundary(spec, rect, 33))
    assert sol.converged
    assert sol.residual <= 1e-10
    assert sol.invariance_residual <= 1e-4
    pde, inv = tt2d_residual(spec, sol)
    assert pde <= 10.0 * max(sol.residual, 1e-10)
    assert inv <= 1e-4


def test_tt2d_independent_residual_detects_perturbation():
    spec = catalog("cubic2")
    sol = solve_tt2d(spec, (-1.0, -1.0, 1.0, 1.0), 17, 1.0)
    bad = dataclasses.replace(sol, h11=sol.h11 * 1.1)
    pde, _ = tt2d_residual(spec, bad)
    assert pde > 0.01


def test_tt2d_boundary_must_be_positive():
    with pytest.raises(ValidationError):
        solve_tt2d(catalog("cubic2"), (-1.0, -1.0, 1.0, 1.0), 9, -1.0)


def test_tt2d_iteration_cap():
    spec = catalog("p1")
    with pytest.raises(NoConvergence):
        solve_tt2d(spec, (-1.0, -1.0, 1.0, 1.0), 17, 1.0, max_iter=1)
    sol = solve_tt2d(
        spec, (-1.0, -1.0, 1.0, 1.0), 17, 1.0, max_iter=1, raise_on_failure=False
    )
    assert not sol.converged
    assert sol.iterations == 1


def test_tt2d_csv_round_trip(tmp_path):
    spec = catalog("cubic2")
    sol = solve_tt2d(spec, (-1.0, -1.0, 1.0, 1.0), 9, 1.0)
    path = tmp_path / "grid.csv"
    write_tt2d_csv(spec, sol, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "x,y,h11,residual"
    assert len(lines) == 1 + 9 * 9
    x, y, h11, res = (float(v) for v in lines[1].split(","))
    assert (x, y) == (-1.0, -1.0)
    assert h11 == 1.0 and res == 0.0
