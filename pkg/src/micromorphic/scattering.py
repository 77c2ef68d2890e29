"""Interface scattering: a Cauchy half-space joined to a micromorphic one.

The Cauchy medium occupies x1 < 0 and carries the known incident waves
plus three reflected ones; the micromorphic medium occupies x1 > 0 and
carries the transmitted branches (two per coupled family for the relaxed
model, three for Mindlin, one for the internal-variable model, plus one
per scalar family where those exist).  Each connection type contributes
one scalar jump condition per unknown, so the assembled system is square:
12 unknowns for a relaxed half-space and 15 for a Mindlin one.

A Cauchy/Cauchy pair is supported as a degenerate test path; every
connection then reduces to its macroscopic conditions.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import modes, numerics
from .materials import (CauchyMaterial, Flavor, MicromorphicMaterial,
                        validate)
from .modes import VState
from .spectral import (BranchRoot, UNCOUPLED_FAMILIES, WaveFamily,
                       cauchy_wavenumbers, roots_k_of_omega)


class ScatteringError(Exception):
    """Base class for interface-solve failures."""


class UnsupportedPair(ScatteringError):
    """Media combination other than Cauchy (left) / micromorphic (right)."""


class ResidualTooLarge(ScatteringError):
    """The solved amplitudes do not satisfy the jump conditions."""


class DeadModeError(ScatteringError):
    """A mode that cannot be activated by this connection came out nonzero."""


class ConnectionType(str, Enum):
    """The six Cauchy/micromorphic interface constraints.

    The two macro-clamp variants transmit energy; the remaining four
    decouple the half-spaces and reflect everything.
    """

    MACRO_CLAMP_FIXED_MICRO = "fixed-micro"
    MACRO_CLAMP_FREE_MICRO = "free-micro"
    FREE_BOUNDARY = "free"
    FIXED_BOUNDARY = "fixed"
    FREE_MACRO_FIXED_MICRO = "free-macro-fixed-micro"
    FIXED_MACRO_FREE_MICRO = "fixed-macro-free-micro"


_CLAMPS = (ConnectionType.MACRO_CLAMP_FIXED_MICRO,
           ConnectionType.MACRO_CLAMP_FREE_MICRO)


def trivially_reflecting(connection: ConnectionType) -> bool:
    """True for the four connections that always reflect completely."""
    return connection not in _CLAMPS


@dataclass(frozen=True)
class IncidentWave:
    """Known incident amplitudes (longitudinal, transverse y, transverse z)
    and the driving frequency."""

    alpha_bar: tuple[complex, complex, complex]
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega!r}")

    @classmethod
    def p_wave(cls, omega: float, amplitude: complex = 1.0) -> "IncidentWave":
        return cls((amplitude, 0.0, 0.0), omega)

    @classmethod
    def s_wave(cls, omega: float, amplitude: complex = 1.0) -> "IncidentWave":
        return cls((0.0, amplitude, 0.0), omega)

    @classmethod
    def ps_wave(cls, omega: float,
                amplitude: complex = 1.0) -> "IncidentWave":
        return cls((amplitude, amplitude, amplitude), omega)


@dataclass(frozen=True)
class ScatteringSolution:
    """Solved amplitudes of one interface problem.

    ``reflected`` holds the three Cauchy-side amplitudes; ``transmitted``
    pairs each micromorphic branch with its amplitude (empty for the
    Cauchy/Cauchy test path, which fills ``transmitted_cauchy`` instead).
    ``residual`` is the worst normalized jump-condition violation,
    re-evaluated from the reconstructed fields.
    """

    connection: ConnectionType
    omega: float
    reflected: np.ndarray
    transmitted: tuple[tuple[BranchRoot, complex], ...]
    residual: float
    transmitted_cauchy: np.ndarray | None = None

    def transmitted_amplitude(self, family: WaveFamily,
                              index: int = 0) -> complex:
        """Amplitude of the index-th branch of a family (sorted order)."""
        hits = [amp for b, amp in self.transmitted if b.family is family]
        return hits[index]


@dataclass(frozen=True)
class AssembledSystem:
    """Square jump-condition system M x = b with its unknown layout."""

    matrix: np.ndarray
    rhs: np.ndarray
    unknowns: tuple[str, ...]
    basis: tuple[BranchRoot, ...]


@functools.lru_cache(maxsize=4096)
def _transmitted_basis(micro: MicromorphicMaterial,
                       omega: float) -> tuple[BranchRoot, ...]:
    """Rightward branches in fixed unknown order: coupled families first
    (ascending branch order within each), then the scalar families."""
    basis: list[BranchRoot] = []
    for family in (WaveFamily.LONGITUDINAL, WaveFamily.TRANSVERSE_Y,
                   WaveFamily.TRANSVERSE_Z):
        basis.extend(roots_k_of_omega(micro, family, omega))
    if micro.flavor is not Flavor.INTERNAL_VARIABLE:
        for family in UNCOUPLED_FAMILIES:
            basis.extend(roots_k_of_omega(micro, family, omega))
    return tuple(basis)


def _micro_rows(connection: ConnectionType, left: CauchyMaterial,
                right: MicromorphicMaterial, U: np.ndarray, Ux: np.ndarray,
                state: VState) -> np.ndarray:
    """All scalar jump conditions for one elementary field contribution."""
    u_plus = np.array([state.v1[0], state.v2[0], state.v3[0]])
    f = modes.cauchy_traction(Ux, left)
    t = modes.traction_micromorphic(state, right)

    if connection in _CLAMPS:
        macro = [u_plus - U, t - f]
    elif connection is ConnectionType.FREE_BOUNDARY:
        macro = [f, t]
    elif connection is ConnectionType.FIXED_BOUNDARY:
        macro = [U, u_plus]
    elif connection is ConnectionType.FREE_MACRO_FIXED_MICRO:
        macro = [f, t]
    elif connection is ConnectionType.FIXED_MACRO_FREE_MICRO:
        macro = [U, u_plus]
    else:
        raise ValueError(f"unknown connection {connection!r}")

    fixed_micro = connection in (ConnectionType.MACRO_CLAMP_FIXED_MICRO,
                                 ConnectionType.FIXED_BOUNDARY,
                                 ConnectionType.FREE_MACRO_FIXED_MICRO)
    if right.flavor is Flavor.INTERNAL_VARIABLE:
        # No boundary conditions can act on P when the characteristic
        # length vanishes: the double force is identically zero, so the
        # duality conditions on P hold for arbitrary micro-distortion.
        micro_rows = np.zeros(0, dtype=complex)
    elif fixed_micro:
        P = modes.reconstruct_P(state.v1, state.v2, state.v3,
                                state.v4, state.v5, state.v6)
        micro_rows = [P[1, 1], P[1, 2], P[2, 1], P[2, 2], P[0, 1], P[0, 2]]
        if right.flavor is Flavor.MINDLIN:
            micro_rows += [P[0, 0], P[1, 0], P[2, 0]]
        micro_rows = np.array(micro_rows)
    else:
        tau = modes.double_force(state, right)
        micro_rows = [tau[1, 1], tau[1, 2], tau[2, 1], tau[2, 2],
                      tau[0, 1], tau[0, 2]]
        if right.flavor is Flavor.MINDLIN:
            micro_rows += [tau[0, 0], tau[1, 0], tau[2, 0]]
        micro_rows = np.array(micro_rows)
    return np.concatenate([np.concatenate(macro), micro_rows])


def _cauchy_rows(connection: ConnectionType, left: CauchyMaterial,
                 right: CauchyMaterial, U: np.ndarray, Ux: np.ndarray,
                 Ut: np.ndarray, Utx: np.ndarray) -> np.ndarray:
    """Jump conditions for the Cauchy/Cauchy degenerate path."""
    f = modes.cauchy_traction(Ux, left)
    g = modes.cauchy_traction(Utx, right)
    if connection in _CLAMPS:
        rows = [Ut - U, g - f]
    elif connection in (ConnectionType.FREE_BOUNDARY,
                        ConnectionType.FREE_MACRO_FIXED_MICRO):
        rows = [f, g]
    elif connection in (ConnectionType.FIXED_BOUNDARY,
                        ConnectionType.FIXED_MACRO_FREE_MICRO):
        rows = [U, Ut]
    else:
        raise ValueError(f"unknown connection {connection!r}")
    return np.concatenate(rows)


def _elementary_waves(left: CauchyMaterial, micro, incident: IncidentWave,
                      basis: tuple[BranchRoot, ...],
                      reflected: Sequence[complex] | None,
                      transmitted: Sequence[complex] | None):
    """Per-wave (U, Ux, state-or-(Ut, Utx)) field contributions at x1 = 0.

    With ``reflected``/``transmitted`` None, unit amplitudes are used and
    the incident wave is omitted (the assembly layout); otherwise every
    elementary wave of the full solution is produced, incident included
    (the residual decomposition).
    """
    omega = incident.omega
    k_c = cauchy_wavenumbers(left, omega)
    zeros3 = np.zeros(3, dtype=complex)
    waves = []
    include_incident = reflected is not None
    if include_incident:
        for j in range(3):
            U = zeros3.copy()
            Ux = zeros3.copy()
            U[j] = incident.alpha_bar[j]
            Ux[j] = 1j * k_c[j] * incident.alpha_bar[j]
            waves.append((U, Ux, None))
    for j in range(3):
        amp = 1.0 if reflected is None else reflected[j]
        U = zeros3.copy()
        Ux = zeros3.copy()
        U[j] = amp
        Ux[j] = -1j * k_c[j] * amp
        waves.append((U, Ux, None))
    if isinstance(micro, CauchyMaterial):
        k_t = cauchy_wavenumbers(micro, omega)
        for j in range(3):
            amp = 1.0 if transmitted is None else transmitted[j]
            Ut = zeros3.copy()
            Utx = zeros3.copy()
            Ut[j] = amp
            Utx[j] = 1j * k_t[j] * amp
            waves.append((zeros3, zeros3, (Ut, Utx)))
    else:
        for idx, branch in enumerate(basis):
            amp = 1.0 if transmitted is None else transmitted[idx]
            state = modes.evaluate_vstate([(branch, amp)], 0.0, 0.0)
            waves.append((zeros3, zeros3, state))
    return waves


def _rows_for_wave(connection, left, micro, wave) -> np.ndarray:
    U, Ux, extra = wave
    if isinstance(micro, CauchyMaterial):
        if extra is None:
            Ut = Utx = np.zeros(3, dtype=complex)
        else:
            Ut, Utx = extra
        return _cauchy_rows(connection, left, micro, U, Ux, Ut, Utx)
    state = VState.zero() if extra is None else extra
    return _micro_rows(connection, left, micro, U, Ux, state)


def _check_pair(cauchy, micro) -> None:
    if not isinstance(cauchy, CauchyMaterial):
        raise UnsupportedPair(
            "the left (x1 < 0) half-space must be a Cauchy material, got "
            f"{type(cauchy).__name__}")
    if not isinstance(micro, (CauchyMaterial, MicromorphicMaterial)):
        raise UnsupportedPair(
            f"unsupported right half-space: {type(micro).__name__}")


def assemble_system(cauchy: CauchyMaterial, micro,
                    connection: ConnectionType,
                    incident: IncidentWave) -> AssembledSystem:
    """Build the square jump-condition system at x1 = 0.

    Columns follow the fixed unknown order: 3 reflected amplitudes, then
    the transmitted basis.  The incident contribution sits on the right
    hand side.  Each row is normalized by its largest coefficient to tame
    the Pa versus Pa*m magnitude spread.
    """
    validate(cauchy)
    _check_pair(cauchy, micro)
    validate(micro)
    if isinstance(micro, CauchyMaterial):
        basis: tuple[BranchRoot, ...] = ()
        labels = (["reflected:L", "reflected:TY", "reflected:TZ"]
                  + ["transmitted:L", "transmitted:TY", "transmitted:TZ"])
    else:
        basis = _transmitted_basis(micro, incident.omega)
        labels = ["reflected:L", "reflected:TY", "reflected:TZ"]
        counts: dict[WaveFamily, int] = {}
        for b in basis:
            counts[b.family] = counts.get(b.family, 0)
            labels.append(f"transmitted:{b.family.value}{counts[b.family]}")
            counts[b.family] += 1

    unit_waves = _elementary_waves(cauchy, micro, incident, basis,
                                   reflected=None, transmitted=None)
    columns = [_rows_for_wave(connection, cauchy, micro, w)
               for w in unit_waves]
    n = len(columns)
    matrix = np.column_stack(columns)
    if matrix.shape[0] != n:
        raise ScatteringError(
            f"{matrix.shape[0]} conditions for {n} unknowns "
            f"({connection.value}); the constraint catalog is inconsistent")

    zero_state = (None if isinstance(micro, CauchyMaterial)
                  else VState.zero())
    k_c = cauchy_wavenumbers(cauchy, incident.omega)
    U_inc = np.asarray(incident.alpha_bar, dtype=complex)
    Ux_inc = 1j * np.asarray(k_c) * U_inc
    rhs = -_rows_for_wave(connection, cauchy, micro,
                          (U_inc, Ux_inc,
                           (np.zeros(3, complex), np.zeros(3, complex))
                           if isinstance(micro, CauchyMaterial)
                           else zero_state))

    scale = np.abs(matrix).max(axis=1)
    scale[scale == 0.0] = 1.0
    matrix = matrix / scale[:, None]
    rhs = rhs / scale
    return AssembledSystem(matrix=matrix, rhs=rhs, unknowns=tuple(labels),
                           basis=basis)


#: Boundary-condition residual beyond this fails the solve.
RESIDUAL_TOL = 1e-9
#: Dead-mode amplitude bound, relative to the largest solved amplitude.
DEAD_MODE_RTOL = 1e-12


def solve_scattering(cauchy: CauchyMaterial, micro,
                     connection: ConnectionType,
                     incident: IncidentWave) -> ScatteringSolution:
    """Solve one interface problem and verify it.

    The boundary residual is recomputed from the reconstructed fields (not
    from the assembled matrix); for the two macro-clamp connections the
    amplitudes of the sym/skew 23 modes are checked to vanish.
    """
    system = assemble_system(cauchy, micro, connection, incident)
    x = numerics.solve_dense(system.matrix, system.rhs)
    reflected = x[:3]
    if isinstance(micro, CauchyMaterial):
        solution = ScatteringSolution(
            connection=connection, omega=incident.omega, reflected=reflected,
            transmitted=(), residual=0.0, transmitted_cauchy=x[3:])
    else:
        solution = ScatteringSolution(
            connection=connection, omega=incident.omega, reflected=reflected,
            transmitted=tuple(zip(system.basis, x[3:])), residual=0.0)
    residual = boundary_residual(solution, cauchy, micro, connection,
                                 incident)
    solution = ScatteringSolution(
        connection=solution.connection, omega=solution.omega,
        reflected=solution.reflected, transmitted=solution.transmitted,
        residual=residual, transmitted_cauchy=solution.transmitted_cauchy)
    if residual > RESIDUAL_TOL:
        raise ResidualTooLarge(
            f"boundary residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e} "
            f"({connection.value}, omega={incident.omega!r})")

    if connection in _CLAMPS and not isinstance(micro, CauchyMaterial):
        amp_scale = np.abs(x).max()
        for branch, amp in solution.transmitted:
            if branch.family in (WaveFamily.UNCOUPLED_SYM23,
                                 WaveFamily.UNCOUPLED_SKEW23):
                if abs(amp) > DEAD_MODE_RTOL * amp_scale:
                    raise DeadModeError(
                        f"{branch.family.value} amplitude {abs(amp):.3e} "
                        f"should vanish for {connection.value}")
    return solution


def boundary_residual(solution: ScatteringSolution, cauchy: CauchyMaterial,
                      micro, connection: ConnectionType,
                      incident: IncidentWave) -> float:
    """Worst normalized violation of the scalar jump conditions.

    Every elementary wave (incident components, reflected waves,
    transmitted branches) is evaluated separately through the constitutive
    formulas; each condition's violation is its summed value divided by
    the largest single-wave magnitude appearing in it.
    """
    _check_pair(cauchy, micro)
    if isinstance(micro, CauchyMaterial):
        transmitted = solution.transmitted_cauchy
        basis: tuple[BranchRoot, ...] = ()
    else:
        transmitted = [amp for _, amp in solution.transmitted]
        basis = tuple(b for b, _ in solution.transmitted)
    waves = _elementary_waves(cauchy, micro, incident, basis,
                              reflected=solution.reflected,
                              transmitted=transmitted)
    per_wave = np.array([_rows_for_wave(connection, cauchy, micro, w)
                         for w in waves])
    totals = np.abs(per_wave.sum(axis=0))
    scales = np.abs(per_wave).max(axis=0)
    worst = 0.0
    for total, scale in zip(totals, scales):
        if scale > 0.0:
            worst = max(worst, total / scale)
    return float(worst)
