import cmath
import math

import numpy as np
import pytest

from micromorphic.materials import (Flavor, MicromorphicMaterial,
                                    characteristic_quantities)
from micromorphic.spectral import (ALL_FAMILIES, COUPLED_FAMILIES, BandGap,
                                   BranchKind, UncoupledFamily, WaveFamily,
                                   ZeroSpeed, asymptotes_numeric, band_gap,
                                   cauchy_wavenumbers, char_polynomial_in_k,
                                   dispersion_matrix, omega_of_k,
                                   roots_k_of_omega, system_matrices)

from conftest import TABLE1, random_micromorphic

L, TY, TZ = (WaveFamily.LONGITUDINAL, WaveFamily.TRANSVERSE_Y,
             WaveFamily.TRANSVERSE_Z)
U4, U5, U6 = (WaveFamily.UNCOUPLED_SYM23, WaveFamily.UNCOUPLED_SKEW23,
              WaveFamily.UNCOUPLED_VOLDIFF)


# -- system matrices --------------------------------------------------------

def test_longitudinal_matrix_entries(table1_relaxed):
    sm = system_matrices(table1_relaxed, L)
    assert sm.A[0][0] == pytest.approx(4e5)
    assert sm.B[1][0] == pytest.approx(8e10 / 3)
    assert sm.C[1][1] == pytest.approx(-6e10)


def test_uncoupled_skew_entries(table1_relaxed):
    sm = system_matrices(table1_relaxed, U5)
    assert sm.A == pytest.approx(2e6)
    assert sm.C == pytest.approx(-4e11)


def test_relaxed_coupled_blocks_are_singular():
    # The micro rows are exactly proportional, so det A vanishes exactly.
    rng = np.random.default_rng(12)
    for _ in range(10):
        m = random_micromorphic(rng)
        A_long = np.asarray(system_matrices(m, L).A)
        assert np.array_equal(A_long[2], -A_long[1])
        A_trans = np.asarray(system_matrices(m, TY).A)
        assert np.array_equal(A_trans[2], A_trans[1])
        for A in (A_long, A_trans):
            assert A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1] == 0.0


def test_transverse_families_share_matrices(table1_relaxed):
    sy = system_matrices(table1_relaxed, TY)
    sz = system_matrices(table1_relaxed, TZ)
    assert np.array_equal(sy.A, sz.A)
    assert np.array_equal(sy.B, sz.B)
    assert np.array_equal(sy.C, sz.C)


def test_mindlin_block_is_diagonal_nonsingular(table1_mindlin):
    A = np.asarray(system_matrices(table1_mindlin, L).A)
    assert np.allclose(A, np.diag(np.diag(A)))
    assert np.linalg.det(A) != 0.0


# -- dispersion matrix ------------------------------------------------------

def test_dispersion_matrix_at_zero_wavenumber(table1_relaxed):
    cq = characteristic_quantities(table1_relaxed)
    omega = 1.3e5
    M = dispersion_matrix(table1_relaxed, L, 0.0, omega)
    expected = np.diag([-omega**2, cq.omega_s**2 - omega**2,
                        cq.omega_p**2 - omega**2])
    assert M == pytest.approx(expected)


def test_dispersion_matrix_singular_at_root(table1_relaxed):
    omega = 1e5
    for branch in roots_k_of_omega(table1_relaxed, L, omega):
        M = dispersion_matrix(table1_relaxed, L, branch.k, omega)
        norm = np.linalg.norm(M, 2)
        assert abs(np.linalg.det(M)) <= 1e-9 * norm**3


def test_dispersion_matrix_rejects_uncoupled(table1_relaxed):
    with pytest.raises(UncoupledFamily):
        dispersion_matrix(table1_relaxed, U4, 1.0, 1.0)


def test_mindlin_large_k_acoustic_entry_small(table1_mindlin):
    cq = characteristic_quantities(table1_mindlin)
    k = 1e6
    M = dispersion_matrix(table1_mindlin, L, k, cq.c_p * k)
    assert abs(M[0, 0]) < 1e-6 * min(abs(M[1, 1]), abs(M[2, 2]))


# -- characteristic polynomial ----------------------------------------------

def test_polynomial_degrees(table1_relaxed, table1_mindlin, table1_internal):
    assert char_polynomial_in_k(table1_relaxed, L, 2e5).degree == 4
    assert char_polynomial_in_k(table1_mindlin, L, 2e5).degree == 6
    assert char_polynomial_in_k(table1_internal, L, 2e5).degree == 2


def test_polynomial_parity_random_materials():
    rng = np.random.default_rng(42)
    for _ in range(100):
        flavor = rng.choice([Flavor.RELAXED, Flavor.MINDLIN,
                             Flavor.INTERNAL_VARIABLE])
        m = random_micromorphic(rng, flavor)
        omega = float(10 ** rng.uniform(3.0, 6.5))
        family = (L, TY)[int(rng.integers(2))]
        poly = char_polynomial_in_k(m, family, omega)
        assert np.all(poly.coefficients[1::2] == 0)


def test_polynomial_root_set_symmetric(table1_relaxed):
    poly = char_polynomial_in_k(table1_relaxed, TY, 3e5)
    top = np.abs(poly.coefficients).max()
    for branch in roots_k_of_omega(table1_relaxed, TY, 3e5):
        assert abs(poly(-branch.k)) <= 1e-8 * top * max(
            1.0, abs(branch.k))**4


# -- k(omega) ---------------------------------------------------------------

def test_uncoupled_sym_at_cutoff_is_propagating(table1_relaxed):
    cq = characteristic_quantities(table1_relaxed)
    (branch,) = roots_k_of_omega(table1_relaxed, U4, cq.omega_s)
    assert branch.k == 0
    assert branch.kind is BranchKind.PROPAGATING


def test_uncoupled_skew_low_frequency_evanescent(table1_relaxed):
    cq = characteristic_quantities(table1_relaxed)
    (branch,) = roots_k_of_omega(table1_relaxed, U5, 1e3)
    expected = 1j * math.sqrt(cq.omega_r**2 - 1e3**2) / cq.c_m
    assert branch.k == pytest.approx(expected, rel=1e-12)
    assert branch.k.imag == pytest.approx(447.21, rel=1e-4)
    assert branch.kind is BranchKind.EVANESCENT


def test_in_gap_roots_all_evanescent(table1_relaxed):
    for family in COUPLED_FAMILIES:
        for branch in roots_k_of_omega(table1_relaxed, family, 2.0e5):
            assert branch.kind is BranchKind.EVANESCENT
            assert branch.k.imag > 0


def test_branch_counts(table1_relaxed, table1_mindlin, table1_internal):
    for omega in (2.7e4, 1.9e5, 5.1e5):
        assert len(roots_k_of_omega(table1_relaxed, L, omega)) == 2
        assert len(roots_k_of_omega(table1_mindlin, L, omega)) == 3
        assert len(roots_k_of_omega(table1_internal, L, omega)) == 1


def test_eigvec_residual(table1_relaxed, table1_mindlin):
    for material in (table1_relaxed, table1_mindlin):
        for family in COUPLED_FAMILIES:
            for omega in (5e4, 2.0e5, 3.3e5, 7e5):
                for b in roots_k_of_omega(material, family, omega):
                    M = dispersion_matrix(material, family, b.k, omega)
                    res = np.linalg.norm(M @ b.eigvec)
                    assert res <= 1e-9 * np.linalg.norm(M, 2)


def test_k_omega_round_trip(table1_relaxed):
    omega0 = 3.1e5
    for family in COUPLED_FAMILIES:
        for b in roots_k_of_omega(table1_relaxed, family, omega0):
            if b.kind is BranchKind.PROPAGATING:
                omegas = omega_of_k(table1_relaxed, family, b.k.real)
                assert min(abs(w - omega0) for w in omegas) <= 1e-8 * omega0


def test_internal_variable_uncoupled_oscillators(table1_internal):
    cq = characteristic_quantities(table1_internal)
    assert roots_k_of_omega(table1_internal, U4, 1.7e5) == []
    (osc,) = roots_k_of_omega(table1_internal, U4, cq.omega_s)
    assert osc.k == 0 and osc.kind is BranchKind.PROPAGATING


def test_transmitted_selection_positive_flux(table1_relaxed):
    from micromorphic.energetics import flux_micromorphic_avg
    for family in COUPLED_FAMILIES:
        for omega in (1e5, 3e5, 8e5):
            for b in roots_k_of_omega(table1_relaxed, family, omega):
                if b.kind is BranchKind.PROPAGATING:
                    flux = flux_micromorphic_avg([(b, 1.0)], table1_relaxed,
                                                 omega, 0.0)
                    assert flux >= 0.0


# -- omega(k) ---------------------------------------------------------------

def test_cutoffs_longitudinal(table1_relaxed):
    cq = characteristic_quantities(table1_relaxed)
    got = omega_of_k(table1_relaxed, L, 0.0)
    assert got == pytest.approx([0.0, cq.omega_s, cq.omega_p], rel=1e-9,
                                abs=1e-9)


def test_cutoffs_transverse(table1_relaxed):
    cq = characteristic_quantities(table1_relaxed)
    got = omega_of_k(table1_relaxed, TY, 0.0)
    assert got == pytest.approx([0.0, cq.omega_s, cq.omega_r], rel=1e-9,
                                abs=1e-9)


def test_uncoupled_omega_of_k(table1_relaxed):
    cq = characteristic_quantities(table1_relaxed)
    (w,) = omega_of_k(table1_relaxed, U4, 100.0)
    assert w == pytest.approx(math.sqrt(cq.omega_s**2 + cq.c_m**2 * 1e4),
                              rel=1e-12)


# -- Cauchy wavenumbers -----------------------------------------------------

def test_cauchy_wavenumbers_table1(table1_cauchy):
    k1, k2, k3 = cauchy_wavenumbers(table1_cauchy, 632.456)
    assert k1 == pytest.approx(1.0, rel=1e-4)
    assert k2 == k3 == pytest.approx(2.0, rel=1e-4)


def test_cauchy_wavenumbers_zero_and_linear(table1_cauchy):
    assert cauchy_wavenumbers(table1_cauchy, 0.0) == (0.0, 0.0, 0.0)
    base = cauchy_wavenumbers(table1_cauchy, 1e4)
    double = cauchy_wavenumbers(table1_cauchy, 2e4)
    assert double == pytest.approx(tuple(2 * k for k in base), rel=1e-14)


def test_cauchy_wavenumbers_zero_speed():
    from micromorphic.materials import CauchyMaterial
    with pytest.raises(ZeroSpeed):
        cauchy_wavenumbers(CauchyMaterial(2000.0, 1e8, 0.0), 1e3)


# -- band gaps --------------------------------------------------------------

def test_band_gap_table1(table1_relaxed):
    cq = characteristic_quantities(table1_relaxed)
    grid = np.linspace(1e4, 1e6, 300)
    (gap,) = band_gap(table1_relaxed, grid)
    assert gap.lower == pytest.approx(cq.omega_l, rel=1e-4)
    assert gap.upper == pytest.approx(cq.omega_s, rel=1e-4)


def test_band_gap_mindlin_empty(table1_mindlin):
    assert band_gap(table1_mindlin, np.linspace(1e4, 1e6, 200)) == []


def test_band_gap_small_couple_modulus_empty():
    m = MicromorphicMaterial(**{**TABLE1, "mu_c": 1e3}, char_length=1e-2)
    assert band_gap(m, np.linspace(1e4, 1e6, 200)) == []


def test_band_gap_grid_validation(table1_relaxed):
    with pytest.raises(ValueError):
        band_gap(table1_relaxed, [1e5])
    with pytest.raises(ValueError):
        band_gap(table1_relaxed, [2e5, 1e5])


# -- asymptotes -------------------------------------------------------------

def test_asymptotes_relaxed_longitudinal(table1_relaxed):
    cq = characteristic_quantities(table1_relaxed)
    a = asymptotes_numeric(table1_relaxed, L)
    assert sorted(a.slopes) == pytest.approx(
        sorted([cq.c_p, cq.c_m]), rel=1e-3)
    assert a.horizontals == pytest.approx([cq.omega_l], rel=1e-6)


def test_asymptotes_relaxed_transverse(table1_relaxed):
    cq = characteristic_quantities(table1_relaxed)
    a = asymptotes_numeric(table1_relaxed, TY)
    assert sorted(a.slopes) == pytest.approx(
        sorted([cq.c_s, cq.c_m]), rel=1e-3)
    # The exact large-k limit agrees with the sqrt(mu_micro/eta) closed
    # form, not with the sqrt(2 mu_micro/eta) variant.
    (horizontal,) = a.horizontals
    assert horizontal == pytest.approx(cq.omega_t_sec623, rel=1e-9)
    assert abs(horizontal - cq.omega_t_eq56) > 0.2 * cq.omega_t_eq56


def test_asymptotes_mindlin_no_horizontal(table1_mindlin):
    cq = characteristic_quantities(table1_mindlin)
    for family, c_macro in ((L, cq.c_p), (TY, cq.c_s)):
        a = asymptotes_numeric(table1_mindlin, family)
        assert sorted(a.slopes) == pytest.approx(
            sorted([c_macro, cq.c_m, cq.c_m]), rel=1e-3)
        assert a.horizontals == ()


def test_large_k_branch_approaches_horizontal(table1_relaxed):
    # The bounded branch evaluated at a large finite k sits close to the
    # exact limit (precision-limited, hence the loose tolerance).
    cq = characteristic_quantities(table1_relaxed)
    omegas = omega_of_k(table1_relaxed, L, 1e6 / table1_relaxed.char_length)
    assert omegas[0] == pytest.approx(cq.omega_l, rel=1e-4)
