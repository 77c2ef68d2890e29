"""Energy fluxes, reflection/transmission coefficients, conservation checks.

Time averages of products of harmonic real fields are evaluated with the
half-real-part rule <Re(a e^{-iwt}) Re(b e^{-iwt})> = Re(a conj(b)) / 2,
including every cross term between branches of one family.  Instantaneous
fluxes and energy densities are evaluated from the real tensor fields
(stress, hyper-stress) and serve as the independent oracle for the
averaged forms and for the pointwise conservation law E_t + H' = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import modes, scattering
from .materials import CauchyMaterial, Flavor, MicromorphicMaterial
from .modes import MixedFrequency, VState
from .spectral import (COUPLED_FAMILIES, BranchRoot, WaveFamily,
                       cauchy_wavenumbers)


@dataclass(frozen=True)
class EnergyBudget:
    """Time-averaged fluxes through x1 = 0 and the derived coefficients.

    R is |J_r| / J_i (the reflected flux itself is negative, flowing in
    -x1); T is J_t / J_i.  For a conservative interface R + T = 1.
    """

    J_i: float
    J_r: float
    J_t: float
    R: float
    T: float


def _flux_blocks(material: MicromorphicMaterial,
                 family: WaveFamily) -> tuple[np.ndarray, np.ndarray] | float:
    """Coefficient blocks of the 1D flux H1 = sum over families of
    v_t . (M v' + N v); scalar families return the single coefficient m
    of H1 = m v' v_t."""
    me, le, mc = material.mu_e, material.lambda_e, material.mu_c
    kappa = me * material.char_length**2
    mindlin = material.flavor is Flavor.MINDLIN
    if family is WaveFamily.UNCOUPLED_VOLDIFF:
        return -0.5 * kappa
    if family in (WaveFamily.UNCOUPLED_SYM23, WaveFamily.UNCOUPLED_SKEW23):
        return -2.0 * kappa
    if family is WaveFamily.LONGITUDINAL:
        if mindlin:
            M = np.diag([-(le + 2 * me), -1.5 * kappa, -3.0 * kappa])
        else:
            M = np.array([[-(le + 2 * me), 0.0, 0.0],
                          [0.0, -0.5 * kappa, kappa],
                          [0.0, kappa, -2.0 * kappa]])
        N = np.array([[0.0, 2 * me, 3 * le + 2 * me],
                      [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    else:
        if mindlin:
            M = np.diag([-(me + mc), -2.0 * kappa, -2.0 * kappa])
        else:
            M = np.array([[-(me + mc), 0.0, 0.0],
                          [0.0, -kappa, -kappa],
                          [0.0, -kappa, -kappa]])
        N = np.array([[0.0, 2 * me, -2 * mc],
                      [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    return M, N


_FAMILY_SLOT = {WaveFamily.LONGITUDINAL: "v1", WaveFamily.TRANSVERSE_Y: "v2",
                WaveFamily.TRANSVERSE_Z: "v3",
                WaveFamily.UNCOUPLED_SYM23: "v4",
                WaveFamily.UNCOUPLED_SKEW23: "v5",
                WaveFamily.UNCOUPLED_VOLDIFF: "v6"}


def flux_micromorphic_avg(branches: Iterable[tuple[BranchRoot, complex]],
                          material: MicromorphicMaterial, omega: float,
                          x1: float) -> float:
    """Time-averaged micromorphic energy flux through a plane at x1."""
    branches = list(branches)
    for b, _ in branches:
        if abs(b.omega - omega) > 1e-12 * max(abs(omega), 1.0):
            raise MixedFrequency(
                f"branch at {b.omega!r} in an average at omega={omega!r}")
    state = modes.evaluate_vstate(branches, x1, t=0.0)
    total = 0.0
    for family in COUPLED_FAMILIES:
        M, N = _flux_blocks(material, family)
        v = getattr(state, _FAMILY_SLOT[family])
        v_x = getattr(state, _FAMILY_SLOT[family] + "_x")
        b = M @ v_x + N @ v
        total += 0.5 * np.real(np.sum(-1j * omega * v * np.conj(b)))
    for family in (WaveFamily.UNCOUPLED_SYM23, WaveFamily.UNCOUPLED_SKEW23,
                   WaveFamily.UNCOUPLED_VOLDIFF):
        m = _flux_blocks(material, family)
        v = getattr(state, _FAMILY_SLOT[family])
        v_x = getattr(state, _FAMILY_SLOT[family] + "_x")
        total += 0.5 * np.real(-1j * omega * v * np.conj(m * v_x))
    return float(total)


def flux_cauchy_avg(amplitudes: Sequence[complex],
                    wavenumbers: Sequence[complex],
                    material: CauchyMaterial, omega: float,
                    x1: float) -> float:
    """Time-averaged Cauchy energy flux of u_j = a_j exp(i k_j x1)."""
    lam, mu = material.lambda_macro, material.mu_macro
    stiff = (lam + 2 * mu, mu, mu)
    total = 0.0
    for a, k, c in zip(amplitudes, wavenumbers, stiff):
        u = a * np.exp(1j * k * x1)
        du = 1j * k * u
        total += 0.5 * np.real((-1j * omega * u) * np.conj(-c * du))
    return float(total)


# ---------------------------------------------------------------------------
# Instantaneous real-field quantities (oracle path, tensor formulas).

def _real_fields(state_fields: modes.FieldState, omega: float, t: float):
    """Real u, grad u, u_t, P, P_x, P_t at time t from complex envelopes."""
    phase = np.exp(-1j * omega * t)
    u = np.real(state_fields.u * phase)
    u_x = np.real(state_fields.u_x * phase)
    u_t = np.real(-1j * omega * state_fields.u * phase)
    P = np.real(state_fields.P * phase)
    P_x = np.real(state_fields.P_x * phase)
    P_t = np.real(-1j * omega * state_fields.P * phase)
    grad_u = np.zeros((3, 3))
    grad_u[:, 0] = u_x
    return u, grad_u, u_t, P, P_x, P_t


def _micromorphic_stress(material: MicromorphicMaterial, grad_u: np.ndarray,
                         P: np.ndarray) -> np.ndarray:
    me, le, mc = material.mu_e, material.lambda_e, material.mu_c
    rel = grad_u - P
    sym = 0.5 * (rel + rel.T)
    skew = 0.5 * (rel - rel.T)
    return 2 * me * sym + le * np.trace(rel) * np.eye(3) + 2 * mc * skew


def instantaneous_flux_micromorphic(
        branches: Iterable[tuple[BranchRoot, complex]],
        material: MicromorphicMaterial, x1: float, t: float) -> float:
    """H1 at (x1, t) from the real stress and hyper-stress fields."""
    branches = list(branches)
    omega = branches[0][0].omega
    fs = modes.evaluate_fields(branches, x1, t=0.0)
    _, grad_u, u_t, P, P_x, P_t = _real_fields(fs, omega, t)
    sigma = _micromorphic_stress(material, grad_u, P)
    flux = -float(u_t @ sigma[:, 0])
    kappa = material.mu_e * material.char_length**2
    if kappa != 0.0:
        if material.flavor is Flavor.MINDLIN:
            flux -= kappa * float(np.sum(P_t * P_x))
        else:
            # Curl-based hyper-stress: only the tangential columns transport.
            flux -= kappa * float(np.sum(P_t[:, 1] * P_x[:, 1])
                                  + np.sum(P_t[:, 2] * P_x[:, 2]))
    return flux


def energy_density_micromorphic(
        branches: Iterable[tuple[BranchRoot, complex]],
        material: MicromorphicMaterial, x1: float, t: float) -> float:
    """Total energy density E = kinetic + strain at (x1, t), real fields."""
    branches = list(branches)
    omega = branches[0][0].omega
    fs = modes.evaluate_fields(branches, x1, t=0.0)
    _, grad_u, u_t, P, P_x, P_t = _real_fields(fs, omega, t)
    m = material
    rel = grad_u - P
    sym = 0.5 * (rel + rel.T)
    skew = 0.5 * (rel - rel.T)
    symP = 0.5 * (P + P.T)
    W = (m.mu_e * np.sum(sym * sym)
         + 0.5 * m.lambda_e * np.trace(rel)**2
         + m.mu_c * np.sum(skew * skew)
         + m.mu_micro * np.sum(symP * symP)
         + 0.5 * m.lambda_micro * np.trace(P)**2)
    kappa_half = 0.5 * m.mu_e * m.char_length**2
    if kappa_half != 0.0:
        if m.flavor is Flavor.MINDLIN:
            W += kappa_half * np.sum(P_x * P_x)
        else:
            W += kappa_half * (np.sum(P_x[:, 1]**2) + np.sum(P_x[:, 2]**2))
    J = 0.5 * m.rho * float(u_t @ u_t) + 0.5 * m.eta * float(np.sum(P_t**2))
    return float(J + W)


def instantaneous_flux_cauchy(amplitudes: Sequence[complex],
                              wavenumbers: Sequence[complex],
                              material: CauchyMaterial, omega: float,
                              x1: float, t: float) -> float:
    """H1 at (x1, t) of a superposition of Cauchy plane waves."""
    lam, mu = material.lambda_macro, material.mu_macro
    stiff = (lam + 2 * mu, mu, mu)
    flux = 0.0
    for a, k, c in zip(amplitudes, wavenumbers, stiff):
        env = a * np.exp(1j * (k * x1 - omega * t))
        u_t = np.real(-1j * omega * env)
        du = np.real(1j * k * env)
        flux += -u_t * c * du
    return float(flux)


def energy_density_cauchy(amplitudes: Sequence[complex],
                          wavenumbers: Sequence[complex],
                          material: CauchyMaterial, omega: float,
                          x1: float, t: float) -> float:
    lam, mu = material.lambda_macro, material.mu_macro
    u_t = np.zeros(3)
    u_x = np.zeros(3)
    for j, (a, k) in enumerate(zip(amplitudes, wavenumbers)):
        env = a * np.exp(1j * (k * x1 - omega * t))
        u_t[j] = np.real(-1j * omega * env)
        u_x[j] = np.real(1j * k * env)
    grad_u = np.zeros((3, 3))
    grad_u[:, 0] = u_x
    sym = 0.5 * (grad_u + grad_u.T)
    W = mu * np.sum(sym * sym) + 0.5 * lam * np.trace(grad_u)**2
    return float(0.5 * material.rho * u_t @ u_t + W)


@dataclass(frozen=True)
class CauchyWaveSet:
    """Plane-wave bundle in a Cauchy medium, for conservation checks."""

    amplitudes: np.ndarray
    wavenumbers: np.ndarray
    omega: float


def pointwise_conservation(waves, material, x1: float, t: float,
                           h_x: float, h_t: float) -> float:
    """Central-difference residual of E_t + dH1/dx1 = 0 at (x1, t).

    ``waves`` is a list of (BranchRoot, amplitude) pairs for a micromorphic
    material or a CauchyWaveSet for a Cauchy one.  The residual is
    normalized by the larger of the two derivative magnitudes (with a
    floor), so a zero field reports exactly 0.
    """
    if isinstance(material, CauchyMaterial):
        ws = waves
        E = lambda xx, tt: energy_density_cauchy(     # noqa: E731
            ws.amplitudes, ws.wavenumbers, material, ws.omega, xx, tt)
        H = lambda xx, tt: instantaneous_flux_cauchy(  # noqa: E731
            ws.amplitudes, ws.wavenumbers, material, ws.omega, xx, tt)
    else:
        pairs = list(waves)
        E = lambda xx, tt: energy_density_micromorphic(  # noqa: E731
            pairs, material, xx, tt)
        H = lambda xx, tt: instantaneous_flux_micromorphic(  # noqa: E731
            pairs, material, xx, tt)
    dE_dt = (E(x1, t + h_t) - E(x1, t - h_t)) / (2 * h_t)
    dH_dx = (H(x1 + h_x, t) - H(x1 - h_x, t)) / (2 * h_x)
    denom = max(abs(dE_dt), abs(dH_dx), 1e-300)
    return abs(dE_dt + dH_dx) / denom


def budget_from_solution(solution: "scattering.ScatteringSolution",
                         cauchy: CauchyMaterial, micro,
                         incident: "scattering.IncidentWave"
                         ) -> EnergyBudget:
    """Energy budget of an already-solved interface problem at x1 = 0."""
    omega = incident.omega
    k_left = np.asarray(cauchy_wavenumbers(cauchy, omega))
    J_i = flux_cauchy_avg(incident.alpha_bar, k_left, cauchy, omega, 0.0)
    J_r = flux_cauchy_avg(solution.reflected, -k_left, cauchy, omega, 0.0)
    if isinstance(micro, CauchyMaterial):
        k_t = np.asarray(cauchy_wavenumbers(micro, omega))
        J_t = flux_cauchy_avg(solution.transmitted_cauchy, k_t, micro,
                              omega, 0.0)
    else:
        J_t = flux_micromorphic_avg(solution.transmitted, micro, omega, 0.0)
    if J_i == 0.0:
        raise ValueError("incident wave carries no energy flux")
    return EnergyBudget(J_i=J_i, J_r=J_r, J_t=J_t,
                        R=abs(J_r) / J_i, T=J_t / J_i)


def reflection_transmission(cauchy: CauchyMaterial,
                            micro,
                            connection: "scattering.ConnectionType",
                            incident: "scattering.IncidentWave"
                            ) -> EnergyBudget:
    """Solve the interface problem and form the energy budget at x1 = 0."""
    solution = scattering.solve_scattering(cauchy, micro, connection,
                                           incident)
    return budget_from_solution(solution, cauchy, micro, incident)
