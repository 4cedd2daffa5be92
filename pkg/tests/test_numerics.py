"""Tests for the small linear-algebra and Wirtinger-derivative layer."""

import numpy as np
import pytest

from frobcdv.errors import Singular
from frobcdv.numerics import invert, lex_order, solve_eig, wirtinger_fd


def test_eig_identity():
    dec = solve_eig(np.eye(2))
    assert np.allclose(dec.eigenvalues, [1.0, 1.0])
    assert dec.residual <= 1e-14


def test_eig_euler_operator_matrix():
    # [[t1, 16 t2^2], [(2/3) t2, t1]] at (0, 1): eigenvalues are the roots
    # of lambda^2 - 32/3.
    M = np.array([[0.0, 16.0], [2.0 / 3.0, 0.0]])
    dec = solve_eig(M)
    root = np.sqrt(32.0 / 3.0)
    assert np.allclose(dec.eigenvalues, [-root, root], atol=1e-12)
    assert dec.residual <= 1e-12


def test_eig_defective_block_visible_in_residual():
    dec = solve_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.allclose(dec.eigenvalues, [0.0, 0.0])
    # numpy returns two (nearly) parallel eigenvectors; the pair residual
    # stays small but the eigenvector matrix is singular.
    assert abs(np.linalg.det(dec.eigenvectors)) < 1e-8


def test_eig_sorted_deterministically():
    vals = np.array([3.0, -1.0, 2.0 + 1.0j, 2.0 - 1.0j])
    dec = solve_eig(np.diag(vals))
    expected = vals[lex_order(vals)]
    assert np.allclose(dec.eigenvalues, expected)
    assert dec.residual <= 1e-14 * np.max(np.abs(vals))


def test_wirtinger_holomorphic_square():
    wd = wirtinger_fd(lambda z: z[0] ** 2, [1.0 + 0.0j], 0, step=1e-5)
    assert abs(wd.holo - 2.0) <= 1e-9
    assert abs(wd.anti) <= 1e-9


def test_wirtinger_antiholomorphic_identity():
    wd = wirtinger_fd(lambda z: np.conj(z[0]), [0.3 + 0.7j], 0, step=1e-5)
    assert abs(wd.holo) <= 1e-9
    assert abs(wd.anti - 1.0) <= 1e-9


def test_wirtinger_modulus_squared():
    wd = wirtinger_fd(lambda z: z[0] * np.conj(z[0]), [2.0 + 1.0j], 0, step=1e-5)
    assert abs(wd.holo - (2.0 - 1.0j)) <= 1e-8
    assert abs(wd.anti - (2.0 + 1.0j)) <= 1e-8


def test_wirtinger_random_holomorphic_polynomials():
    rng = np.random.default_rng(11)
    for _ in range(5):
        coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
        z0 = rng.normal() + 1j * rng.normal()

        def p(z):
            return sum(c * z[0] ** k for k, c in enumerate(coeffs))

        deriv = sum(k * c * z0 ** (k - 1) for k, c in enumerate(coeffs) if k > 0)
        wd = wirtinger_fd(p, [z0], 0, step=1e-5)
        assert abs(wd.anti) <= 1e-8
        assert abs(wd.holo - deriv) <= 1e-8


def test_invert_antidiagonal_involution():
    M = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(invert(M), M)


def test_invert_diagonal():
    M = np.diag([2.0, 3.0j])
    assert np.allclose(invert(M), np.diag([0.5, -1j / 3.0]))


def test_invert_unitriangular():
    M = np.array([[1.0, 1.0], [0.0, 1.0]])
    assert np.allclose(invert(M), [[1.0, -1.0], [0.0, 1.0]])


def test_invert_rejects_singular():
    with pytest.raises(Singular):
        invert(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_invert_twice_is_identity():
    rng = np.random.default_rng(5)
    for _ in range(5):
        M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert np.max(np.abs(invert(invert(M)) - M)) <= 1e-10 * np.max(np.abs(M))
