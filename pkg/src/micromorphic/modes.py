"""Field reconstruction and interface force quantities.

The 1D reduction works in collected variables

    v1 = (u1, dev-11 part of P, spherical part of P)
    v2 = (u2, sym(P)_12, skew(P)_12)
    v3 = (u3, sym(P)_13, skew(P)_13)
    v4 = sym(P)_23,  v5 = skew(P)_23,  v6 = P_22 - P_33

This module maps between those variables and the physical fields (u, P),
superposes branch solutions into point values, and evaluates the surface
force (traction) and double force dual to u and P at an interface with
normal along +x1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .materials import CauchyMaterial, Flavor, MicromorphicMaterial
from .spectral import BranchRoot, WaveFamily


class MixedFrequency(ValueError):
    """Branches with different frequencies cannot be superposed."""


@dataclass
class VState:
    """Complex collected variables and their x1-derivatives at one point."""

    v1: np.ndarray
    v2: np.ndarray
    v3: np.ndarray
    v4: complex
    v5: complex
    v6: complex
    v1_x: np.ndarray
    v2_x: np.ndarray
    v3_x: np.ndarray
    v4_x: complex
    v5_x: complex
    v6_x: complex

    @classmethod
    def zero(cls) -> "VState":
        z3 = np.zeros(3, dtype=complex)
        return cls(z3.copy(), z3.copy(), z3.copy(), 0.0, 0.0, 0.0,
                   z3.copy(), z3.copy(), z3.copy(), 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class FieldState:
    """Physical fields at one point: displacement, micro-distortion and
    their x1-derivatives."""

    u: np.ndarray
    P: np.ndarray
    u_x: np.ndarray
    P_x: np.ndarray


def reconstruct_P(v1: Sequence[complex], v2: Sequence[complex],
                  v3: Sequence[complex], v4: complex, v5: complex,
                  v6: complex) -> np.ndarray:
    """Micro-distortion tensor P from the collected variables.

    Only the micro slots (indices 1 and 2) of v1..v3 are read; the
    displacement slot 0 is ignored.
    """
    dev11, sph = v1[1], v1[2]
    P = np.zeros((3, 3), dtype=complex)
    P[0, 0] = sph + dev11
    P[1, 1] = 0.5 * (v6 + 2 * sph - dev11)
    P[2, 2] = 0.5 * (2 * sph - v6 - dev11)
    P[1, 2] = v4 + v5
    P[2, 1] = v4 - v5
    P[0, 1] = v2[1] + v2[2]
    P[1, 0] = v2[1] - v2[2]
    P[0, 2] = v3[1] + v3[2]
    P[2, 0] = v3[1] - v3[2]
    return P


def decompose_P(P: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray,
                                        complex, complex, complex]:
    """Inverse of reconstruct_P; the displacement slots come back as 0."""
    P = np.asarray(P, dtype=complex)
    sph = np.trace(P) / 3
    v1 = np.array([0.0, P[0, 0] - sph, sph], dtype=complex)
    v2 = np.array([0.0, (P[0, 1] + P[1, 0]) / 2, (P[0, 1] - P[1, 0]) / 2],
                  dtype=complex)
    v3 = np.array([0.0, (P[0, 2] + P[2, 0]) / 2, (P[0, 2] - P[2, 0]) / 2],
                  dtype=complex)
    v4 = (P[1, 2] + P[2, 1]) / 2
    v5 = (P[1, 2] - P[2, 1]) / 2
    v6 = P[1, 1] - P[2, 2]
    return v1, v2, v3, v4, v5, v6


_COUPLED_SLOT = {WaveFamily.LONGITUDINAL: "v1", WaveFamily.TRANSVERSE_Y: "v2",
                 WaveFamily.TRANSVERSE_Z: "v3"}
_SCALAR_SLOT = {WaveFamily.UNCOUPLED_SYM23: "v4",
                WaveFamily.UNCOUPLED_SKEW23: "v5",
                WaveFamily.UNCOUPLED_VOLDIFF: "v6"}


def evaluate_vstate(branches: Iterable[tuple[BranchRoot, complex]],
                    x1: float, t: float = 0.0) -> VState:
    """Superpose branch solutions into the collected variables at (x1, t).

    Every branch must share one frequency; each contributes
    amplitude * eigvec * exp(i (k x1 - w t)) to its family slot and the
    analytic derivative (multiplication by i k) to the derivative slot.
    """
    state = VState.zero()
    omega = None
    for branch, amplitude in branches:
        if omega is None:
            omega = branch.omega
        elif abs(branch.omega - omega) > 1e-12 * max(abs(omega), 1.0):
            raise MixedFrequency(
                f"branch at omega={branch.omega!r} mixed into a "
                f"superposition at omega={omega!r}")
        phase = amplitude * np.exp(1j * (branch.k * x1 - branch.omega * t))
        if branch.family in _COUPLED_SLOT:
            slot = _COUPLED_SLOT[branch.family]
            vec = np.asarray(branch.eigvec, dtype=complex)
            contrib = vec * phase
            getattr(state, slot)[:] += contrib
            getattr(state, slot + "_x")[:] += 1j * branch.k * contrib
        else:
            slot = _SCALAR_SLOT[branch.family]
            contrib = complex(branch.eigvec) * phase
            setattr(state, slot, getattr(state, slot) + contrib)
            setattr(state, slot + "_x",
                    getattr(state, slot + "_x") + 1j * branch.k * contrib)
    return state


def fields_from_vstate(state: VState) -> FieldState:
    u = np.array([state.v1[0], state.v2[0], state.v3[0]])
    u_x = np.array([state.v1_x[0], state.v2_x[0], state.v3_x[0]])
    P = reconstruct_P(state.v1, state.v2, state.v3,
                      state.v4, state.v5, state.v6)
    P_x = reconstruct_P(state.v1_x, state.v2_x, state.v3_x,
                        state.v4_x, state.v5_x, state.v6_x)
    return FieldState(u=u, P=P, u_x=u_x, P_x=P_x)


def evaluate_fields(branches: Iterable[tuple[BranchRoot, complex]],
                    x1: float, t: float = 0.0) -> FieldState:
    """Physical (u, P) and x1-derivatives of a branch superposition."""
    return fields_from_vstate(evaluate_vstate(branches, x1, t))


def traction_micromorphic(state: VState,
                          material: MicromorphicMaterial) -> np.ndarray:
    """Surface force t dual to u on a surface with normal +x1.

    The same constitutive expression holds for the relaxed, Mindlin and
    internal-variable models.
    """
    me, le, mc = material.mu_e, material.lambda_e, material.mu_c
    t1 = ((le + 2 * me) * state.v1_x[0]
          - 2 * me * state.v1[1] - (3 * le + 2 * me) * state.v1[2])
    t2 = ((me + mc) * state.v2_x[0]
          - 2 * me * state.v2[1] + 2 * mc * state.v2[2])
    t3 = ((me + mc) * state.v3_x[0]
          - 2 * me * state.v3[1] + 2 * mc * state.v3[2])
    return np.array([t1, t2, t3])


def double_force(state: VState,
                 material: MicromorphicMaterial) -> np.ndarray:
    """Double force (dual to P) on a surface with normal +x1.

    For the relaxed model the whole first column vanishes identically; the
    Mindlin model has all nine components; the internal-variable model has
    none (it scales with the squared characteristic length).
    """
    kappa = material.mu_e * material.char_length**2
    tau = np.zeros((3, 3), dtype=complex)
    if kappa == 0.0:
        return tau
    tau[0, 1] = kappa * (state.v2_x[1] + state.v2_x[2])
    tau[0, 2] = kappa * (state.v3_x[1] + state.v3_x[2])
    tau[1, 1] = (-0.5 * kappa * state.v1_x[1] + kappa * state.v1_x[2]
                 + 0.5 * kappa * state.v6_x)
    tau[2, 2] = (-0.5 * kappa * state.v1_x[1] + kappa * state.v1_x[2]
                 - 0.5 * kappa * state.v6_x)
    tau[1, 2] = kappa * (state.v4_x + state.v5_x)
    tau[2, 1] = kappa * (state.v4_x - state.v5_x)
    if material.flavor is Flavor.MINDLIN:
        tau[0, 0] = kappa * (state.v1_x[1] + state.v1_x[2])
        tau[1, 0] = kappa * (state.v2_x[1] - state.v2_x[2])
        tau[2, 0] = kappa * (state.v3_x[1] - state.v3_x[2])
    return tau


def cauchy_traction(u_x: Sequence[complex],
                    material: CauchyMaterial) -> np.ndarray:
    """Surface force f of a Cauchy medium on a surface with normal +x1."""
    lam, mu = material.lambda_macro, material.mu_macro
    return np.array([(lam + 2 * mu) * u_x[0], mu * u_x[1], mu * u_x[2]])
