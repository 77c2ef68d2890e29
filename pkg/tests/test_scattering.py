import numpy as np
import pytest

from micromorphic.materials import CauchyMaterial
from micromorphic.scattering import (ConnectionType, DeadModeError,
                                     IncidentWave, ScatteringSolution,
                                     UnsupportedPair, assemble_system,
                                     boundary_residual, solve_scattering,
                                     trivially_reflecting)
from micromorphic.spectral import BranchKind, WaveFamily

FIXED = ConnectionType.MACRO_CLAMP_FIXED_MICRO
FREE = ConnectionType.MACRO_CLAMP_FREE_MICRO


def test_trivially_reflecting_table():
    assert trivially_reflecting(ConnectionType.FREE_BOUNDARY)
    assert trivially_reflecting(ConnectionType.FIXED_BOUNDARY)
    assert trivially_reflecting(ConnectionType.FREE_MACRO_FIXED_MICRO)
    assert trivially_reflecting(ConnectionType.FIXED_MACRO_FREE_MICRO)
    assert not trivially_reflecting(FIXED)
    assert not trivially_reflecting(FREE)


def test_assemble_shapes(table1_cauchy, table1_relaxed, table1_mindlin):
    inc = IncidentWave.ps_wave(3e5)
    system = assemble_system(table1_cauchy, table1_relaxed, FIXED, inc)
    assert system.matrix.shape == (12, 12)
    assert len(system.unknowns) == 12
    assert system.unknowns[:3] == ("reflected:L", "reflected:TY",
                                   "reflected:TZ")
    system = assemble_system(table1_cauchy, table1_mindlin, FREE, inc)
    assert system.matrix.shape == (15, 15)


def test_assemble_internal_variable(table1_cauchy, table1_internal):
    system = assemble_system(table1_cauchy, table1_internal, FIXED,
                             IncidentWave.ps_wave(3e5))
    assert system.matrix.shape == (6, 6)


def test_unsupported_pair(table1_relaxed, table1_cauchy):
    inc = IncidentWave.p_wave(1e5)
    with pytest.raises(UnsupportedPair):
        assemble_system(table1_relaxed, table1_cauchy, FIXED, inc)
    with pytest.raises(UnsupportedPair):
        solve_scattering(table1_relaxed, table1_relaxed, FIXED, inc)


def test_free_boundary_no_transmission(table1_cauchy, table1_relaxed):
    solution = solve_scattering(table1_cauchy, table1_relaxed,
                                ConnectionType.FREE_BOUNDARY,
                                IncidentWave.ps_wave(2.2e5))
    assert solution.reflected == pytest.approx([1.0, 1.0, 1.0])
    for _, amp in solution.transmitted:
        assert amp == 0.0


def test_fixed_boundary_sign_flip(table1_cauchy, table1_relaxed):
    solution = solve_scattering(table1_cauchy, table1_relaxed,
                                ConnectionType.FIXED_BOUNDARY,
                                IncidentWave.p_wave(2.2e5))
    assert solution.reflected[0] == pytest.approx(-1.0)
    for _, amp in solution.transmitted:
        assert amp == 0.0


def test_identical_cauchy_clamp_transmits_everything(table1_cauchy):
    other = CauchyMaterial(rho=table1_cauchy.rho,
                           lambda_macro=table1_cauchy.lambda_macro,
                           mu_macro=table1_cauchy.mu_macro)
    solution = solve_scattering(table1_cauchy, other, FIXED,
                                IncidentWave.ps_wave(1e5))
    assert np.abs(solution.reflected).max() <= 1e-12
    assert solution.transmitted_cauchy == pytest.approx([1.0, 1.0, 1.0])


def test_mismatched_cauchy_clamp_matches_impedance_formula(table1_cauchy):
    right = CauchyMaterial(rho=4000.0, lambda_macro=9e8, mu_macro=3e8)
    solution = solve_scattering(table1_cauchy, right, FIXED,
                                IncidentWave.p_wave(1e5))
    z_left = table1_cauchy.rho * np.sqrt(
        (table1_cauchy.lambda_macro + 2 * table1_cauchy.mu_macro)
        / table1_cauchy.rho)
    z_right = right.rho * np.sqrt(
        (right.lambda_macro + 2 * right.mu_macro) / right.rho)
    expected = (z_left - z_right) / (z_left + z_right)
    assert solution.reflected[0] == pytest.approx(expected, rel=1e-12)


def test_in_gap_complete_reflection(table1_cauchy, table1_relaxed):
    for connection in (FIXED, FREE):
        solution = solve_scattering(table1_cauchy, table1_relaxed,
                                    connection, IncidentWave.ps_wave(2.0e5))
        for branch, _ in solution.transmitted:
            assert branch.kind is BranchKind.EVANESCENT
        assert solution.residual <= 1e-9


def test_dead_modes(table1_cauchy, table1_relaxed, table1_mindlin):
    rng = np.random.default_rng(21)
    for _ in range(10):
        omega = float(10 ** rng.uniform(4.0, 6.0))
        for micro in (table1_relaxed, table1_mindlin):
            for connection in (FIXED, FREE):
                solution = solve_scattering(table1_cauchy, micro, connection,
                                            IncidentWave.ps_wave(omega))
                scale = max(np.abs(solution.reflected).max(),
                            max(abs(a) for _, a in solution.transmitted))
                for branch, amp in solution.transmitted:
                    if branch.family in (WaveFamily.UNCOUPLED_SYM23,
                                         WaveFamily.UNCOUPLED_SKEW23):
                        assert abs(amp) <= 1e-12 * scale


def test_residual_sweep(table1_cauchy, table1_relaxed, table1_mindlin):
    omegas = np.geomspace(1e4, 1e6, 200)
    for micro in (table1_relaxed, table1_mindlin):
        for connection in (FIXED, FREE):
            for omega in omegas[::10]:
                solution = solve_scattering(table1_cauchy, micro, connection,
                                            IncidentWave.ps_wave(float(omega)))
                assert solution.residual <= 1e-9


def test_residual_sensitivity(table1_cauchy, table1_relaxed):
    inc = IncidentWave.p_wave(3e5)
    solution = solve_scattering(table1_cauchy, table1_relaxed, FIXED, inc)
    assert solution.residual <= 1e-10
    perturbed_reflected = solution.reflected.copy()
    perturbed_reflected[0] += 1e-3
    perturbed = ScatteringSolution(
        connection=solution.connection, omega=solution.omega,
        reflected=perturbed_reflected, transmitted=solution.transmitted,
        residual=0.0)
    res = boundary_residual(perturbed, table1_cauchy, table1_relaxed,
                            FIXED, inc)
    assert res >= 1e-4


def test_residual_of_zero_solution(table1_cauchy, table1_relaxed):
    inc = IncidentWave.p_wave(3e5)
    solution = solve_scattering(table1_cauchy, table1_relaxed, FIXED, inc)
    zero = ScatteringSolution(
        connection=FIXED, omega=inc.omega,
        reflected=np.zeros(3, dtype=complex),
        transmitted=tuple((b, 0.0) for b, _ in solution.transmitted),
        residual=0.0)
    res = boundary_residual(zero, table1_cauchy, table1_relaxed, FIXED, inc)
    assert res >= 0.5


def test_linearity(table1_cauchy, table1_relaxed):
    one = solve_scattering(table1_cauchy, table1_relaxed, FREE,
                           IncidentWave((1.0, 1.0, 1.0), 4.2e5))
    two = solve_scattering(table1_cauchy, table1_relaxed, FREE,
                           IncidentWave((2.0, 2.0, 2.0), 4.2e5))
    assert two.reflected == pytest.approx(2 * one.reflected, rel=1e-12)
    for (_, a1), (_, a2) in zip(one.transmitted, two.transmitted):
        assert a2 == pytest.approx(2 * a1, rel=1e-12, abs=1e-20)


def test_longitudinal_transverse_decoupling(table1_cauchy, table1_relaxed):
    solution = solve_scattering(table1_cauchy, table1_relaxed, FIXED,
                                IncidentWave.p_wave(3.7e5))
    scale = np.abs(solution.reflected).max()
    assert abs(solution.reflected[1]) <= 1e-12 * scale
    assert abs(solution.reflected[2]) <= 1e-12 * scale
    for branch, amp in solution.transmitted:
        if branch.family in (WaveFamily.TRANSVERSE_Y,
                             WaveFamily.TRANSVERSE_Z,
                             WaveFamily.UNCOUPLED_SYM23,
                             WaveFamily.UNCOUPLED_SKEW23):
            assert abs(amp) <= 1e-12 * scale


def test_internal_variable_clamps_coincide(table1_cauchy, table1_internal):
    # With a vanishing characteristic length no condition can act on the
    # micro-distortion, so the two clamp connections solve identically.
    inc = IncidentWave.ps_wave(2.4e5)
    fixed = solve_scattering(table1_cauchy, table1_internal, FIXED, inc)
    free = solve_scattering(table1_cauchy, table1_internal, FREE, inc)
    assert fixed.reflected == pytest.approx(free.reflected, rel=1e-12)


def test_solution_amplitude_accessor(table1_cauchy, table1_relaxed):
    solution = solve_scattering(table1_cauchy, table1_relaxed, FIXED,
                                IncidentWave.p_wave(3e5))
    amp = solution.transmitted_amplitude(WaveFamily.LONGITUDINAL, 0)
    assert amp == solution.transmitted[0][1]
