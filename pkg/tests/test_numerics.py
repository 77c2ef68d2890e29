import numpy as np
import pytest

from micromorphic.numerics import (AmbiguousNullspace, ComplexPolynomial,
                                   FullRank, SingularSystem, ZeroPolynomial,
                                   cluster_multiplicities, nullspace3,
                                   poly_roots, solve_dense)
from micromorphic.spectral import WaveFamily, char_polynomial_in_k


def sorted_roots(roots):
    return sorted(roots, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def residual_bound(poly: ComplexPolynomial, root: complex) -> float:
    top = np.abs(poly.coefficients).max()
    return 1e-10 * top * max(1.0, abs(root)) ** poly.degree


def test_roots_of_quadratics():
    roots = sorted_roots(poly_roots(np.array([-1.0, 0.0, 1.0])))
    assert roots == pytest.approx([-1.0, 1.0])
    roots = sorted_roots(poly_roots(np.array([1.0, 0.0, 1.0])))
    assert roots == pytest.approx([-1j, 1j])


def test_roots_of_dispersion_quartic(table1_relaxed):
    poly = char_polynomial_in_k(table1_relaxed, WaveFamily.LONGITUDINAL, 1e5)
    assert poly.degree == 4
    roots = poly_roots(poly)
    assert len(roots) == 4
    for r in roots:
        assert abs(poly(r)) <= residual_bound(poly, r)


def test_roots_polynomial_round_trip():
    rng = np.random.default_rng(7)
    true = rng.normal(size=6) + 1j * rng.normal(size=6)
    coeffs = np.array([1.0 + 0j])
    for r in true:
        coeffs = np.convolve(coeffs, np.array([-r, 1.0]))
    got = poly_roots(coeffs)
    assert sorted_roots(got) == pytest.approx(sorted_roots(true), rel=1e-8)


def test_roots_multiplicity_clustered():
    # (z - 1)^2 (z - 2): the double root must come back as equal values.
    coeffs = np.array([-2.0, 5.0, -4.0, 1.0])
    pairs = cluster_multiplicities(poly_roots(coeffs))
    pairs.sort(key=lambda p: p[0].real)
    assert pairs[0][1] == 2 and pairs[0][0] == pytest.approx(1.0, rel=1e-6)
    assert pairs[1][1] == 1 and pairs[1][0] == pytest.approx(2.0, rel=1e-9)


def test_zero_polynomial_rejected():
    with pytest.raises(ZeroPolynomial):
        poly_roots(np.zeros(4))
    with pytest.raises(ValueError):
        poly_roots(np.array([3.0]))


def test_solve_identity():
    b = np.array([1.0, 2.0, 3.0], dtype=complex)
    assert solve_dense(np.eye(3), b) == pytest.approx(b)


def test_solve_requires_pivoting():
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    x = solve_dense(A, np.array([1.0, 2.0]))
    assert x == pytest.approx([2.0, 1.0])


def test_solve_random_well_conditioned():
    rng = np.random.default_rng(3)
    for _ in range(20):
        A = rng.normal(size=(15, 15)) + 1j * rng.normal(size=(15, 15))
        x_known = rng.normal(size=15) + 1j * rng.normal(size=15)
        x = solve_dense(A, A @ x_known)
        assert np.linalg.norm(x - x_known) <= 1e-10 * np.linalg.norm(x_known)


def test_solve_residual_contract():
    rng = np.random.default_rng(4)
    A = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    b = rng.normal(size=12) + 1j * rng.normal(size=12)
    x = solve_dense(A, b)
    denom = (np.linalg.norm(A) * np.linalg.norm(x) + np.linalg.norm(b))
    assert np.linalg.norm(A @ x - b) / denom <= 1e-10


def test_solve_singular_raises():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularSystem):
        solve_dense(A, np.array([1.0, 1.0]))


def test_solve_shape_checks():
    with pytest.raises(ValueError):
        solve_dense(np.zeros((2, 3)), np.zeros(2))
    with pytest.raises(ValueError):
        solve_dense(np.eye(2), np.zeros(3))
    with pytest.raises(ValueError):
        solve_dense(np.eye(40), np.zeros(40))


def test_nullspace_axis_cases():
    assert nullspace3(np.diag([0.0, 1.0, 1.0])) == pytest.approx([1, 0, 0])
    assert nullspace3(np.diag([1.0, 1.0, 0.0])) == pytest.approx([0, 0, 1])


def test_nullspace_phase_is_deterministic():
    rng = np.random.default_rng(9)
    u = rng.normal(size=3) + 1j * rng.normal(size=3)
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    M = np.outer(u, v)  # rank 1: nullspace of M.T @ ... use rows so rank 2
    M = np.vstack([u, v, u + 2 * v])  # rank 2, nullspace dim 1
    h1 = nullspace3(M)
    h2 = nullspace3(M.copy())
    assert np.array_equal(h1, h2)
    lead = np.abs(h1).argmax()
    assert h1[lead].imag == pytest.approx(0.0, abs=1e-15)
    assert h1[lead].real > 0
    assert np.linalg.norm(M @ h1) <= 1e-9 * np.linalg.norm(M, 2)


def test_nullspace_full_rank_raises():
    with pytest.raises(FullRank):
        nullspace3(np.eye(3))


def test_nullspace_ambiguous_raises():
    with pytest.raises(AmbiguousNullspace):
        nullspace3(np.diag([0.0, 0.0, 1.0]))
    h = nullspace3(np.diag([0.0, 0.0, 1.0]), allow_degenerate=True)
    assert np.linalg.norm(np.diag([0.0, 0.0, 1.0]) @ h) <= 1e-12
