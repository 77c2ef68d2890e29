"""Dispersion analysis: 1D system matrices, branch solving, band gaps.

Under the plane-wave reduction every field depends on (x1, t) only and the
twelve scalar unknowns split into six independent wave families: three
coupled 3-component families (longitudinal and two transverse) and three
scalar ones carrying pure micro-distortion modes.  Each coupled family
obeys

    v_tt = A v'' + B v' + C v,

so a harmonic wave exp(i(k x1 - w t)) exists exactly when

    det(k^2 A - w^2 I - i k B - C) = 0.

The determinant is even in k: degree 4 in k for the relaxed model (A is
singular), 6 for the Mindlin model, and 2 for the internal-variable model.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import numerics
from .materials import (CauchyMaterial, Flavor, MicromorphicMaterial,
                        cauchy_speeds, characteristic_quantities, validate)


class SpectralError(Exception):
    """Base class for dispersion-analysis failures."""


class UncoupledFamily(SpectralError):
    """A matrix operation was requested for a scalar family."""


class ParityViolation(SpectralError):
    """An odd-in-k coefficient survived; the assembly is inconsistent."""


class BranchCountMismatch(SpectralError):
    """The number of selected rightward branches is not the expected one."""


class ComplexFrequency(SpectralError):
    """A frequency-squared root came out significantly complex."""


class ZeroSpeed(SpectralError):
    """A wavenumber was requested for a medium with zero wave speed."""


class WaveFamily(Enum):
    """The six 1D wave families.

    The first three are coupled 3-component families; their component
    layout is (u_i, micro slot, micro slot) as produced by the variable
    change (see modes).  The last three are scalar micro-only families.
    """

    LONGITUDINAL = "L"
    TRANSVERSE_Y = "TY"
    TRANSVERSE_Z = "TZ"
    UNCOUPLED_SYM23 = "U4"
    UNCOUPLED_SKEW23 = "U5"
    UNCOUPLED_VOLDIFF = "U6"

    @property
    def is_coupled(self) -> bool:
        return self in COUPLED_FAMILIES


COUPLED_FAMILIES = (WaveFamily.LONGITUDINAL, WaveFamily.TRANSVERSE_Y,
                    WaveFamily.TRANSVERSE_Z)
UNCOUPLED_FAMILIES = (WaveFamily.UNCOUPLED_SYM23, WaveFamily.UNCOUPLED_SKEW23,
                      WaveFamily.UNCOUPLED_VOLDIFF)
ALL_FAMILIES = COUPLED_FAMILIES + UNCOUPLED_FAMILIES


class BranchKind(Enum):
    PROPAGATING = "propagating"
    EVANESCENT = "evanescent"


@dataclass(frozen=True)
class SystemMatrices:
    """Reduced 1D system for one family: coupled (3x3 A,B,C) or scalar."""

    family: WaveFamily
    flavor: Flavor
    A: np.ndarray | float
    B: np.ndarray | float
    C: np.ndarray | float

    @property
    def coupled(self) -> bool:
        return self.family.is_coupled


@dataclass(frozen=True)
class BranchRoot:
    """One rightward wavenumber root k(omega) of a single family.

    ``eigvec`` is the unit polarization vector for coupled families and
    1.0 for the scalar families.
    """

    family: WaveFamily
    omega: float
    k: complex
    kind: BranchKind
    eigvec: np.ndarray | float

    @property
    def propagating(self) -> bool:
        return self.kind is BranchKind.PROPAGATING


@dataclass(frozen=True)
class BandGap:
    """A frequency interval with no propagating branch in any family."""

    lower: float
    upper: float


def _expected_k_degree(flavor: Flavor) -> int:
    return {Flavor.RELAXED: 4, Flavor.MINDLIN: 6,
            Flavor.INTERNAL_VARIABLE: 2}[flavor]


def system_matrices(material: MicromorphicMaterial,
                    family: WaveFamily) -> SystemMatrices:
    """The exact A, B, C blocks of the reduced 1D equations of motion."""
    m = validate(material)
    assert isinstance(m, MicromorphicMaterial)
    rho, eta = m.rho, m.eta
    me, le = m.mu_e, m.lambda_e
    mc, mm, lm = m.mu_c, m.mu_micro, m.lambda_micro
    g = me * m.char_length**2 / eta

    if family in UNCOUPLED_FAMILIES:
        c = (-2 * mc / eta if family is WaveFamily.UNCOUPLED_SKEW23
             else -2 * (me + mm) / eta)
        return SystemMatrices(family, m.flavor, A=g, B=0.0, C=c)

    if family is WaveFamily.LONGITUDINAL:
        if m.flavor is Flavor.MINDLIN:
            A = np.diag([(le + 2 * me) / rho, g, g])
        else:
            A = np.array([[(le + 2 * me) / rho, 0.0, 0.0],
                          [0.0, g / 3, -2 * g / 3],
                          [0.0, -g / 3, 2 * g / 3]])
        B = np.array([[0.0, -2 * me / rho, -(3 * le + 2 * me) / rho],
                      [4 * me / (3 * eta), 0.0, 0.0],
                      [(3 * le + 2 * me) / (3 * eta), 0.0, 0.0]])
        C = np.diag([0.0, -2 * (me + mm) / eta,
                     -((3 * le + 2 * me) + (3 * lm + 2 * mm)) / eta])
    else:
        if m.flavor is Flavor.MINDLIN:
            A = np.diag([(me + mc) / rho, g, g])
        else:
            A = np.array([[(me + mc) / rho, 0.0, 0.0],
                          [0.0, g / 2, g / 2],
                          [0.0, g / 2, g / 2]])
        B = np.array([[0.0, -2 * me / rho, 2 * mc / rho],
                      [me / eta, 0.0, 0.0],
                      [-mc / eta, 0.0, 0.0]])
        C = np.diag([0.0, -2 * (me + mm) / eta, -2 * mc / eta])
    return SystemMatrices(family, m.flavor, A=A, B=B, C=C)


def dispersion_matrix(material: MicromorphicMaterial, family: WaveFamily,
                      k: complex, omega: float) -> np.ndarray:
    """k^2 A - w^2 I - i k B - C for a coupled family."""
    if family in UNCOUPLED_FAMILIES:
        raise UncoupledFamily(f"{family.value} is scalar; no 3x3 matrix")
    sm = system_matrices(material, family)
    return (k * k * sm.A - omega**2 * np.eye(3)
            - 1j * k * sm.B - sm.C).astype(complex)


_PERMUTATIONS = (((0, 1, 2), 1.0), ((1, 2, 0), 1.0), ((2, 0, 1), 1.0),
                 ((0, 2, 1), -1.0), ((2, 1, 0), -1.0), ((1, 0, 2), -1.0))

#: Odd-in-k coefficients above this (relative) indicate an assembly bug.
PARITY_RTOL = 1e-12


def char_polynomial_in_k(material: MicromorphicMaterial, family: WaveFamily,
                         omega: float) -> numerics.ComplexPolynomial:
    """det of the dispersion matrix, expanded as a polynomial in k.

    Only even powers of k survive; the odd coefficients are checked to be
    negligible and zeroed.  The degree is 4 (relaxed), 6 (Mindlin) or 2
    (internal variable); trailing coefficients that vanish exactly (the
    singular-A structure of the relaxed model) are trimmed.
    """
    if family in UNCOUPLED_FAMILIES:
        raise UncoupledFamily(f"{family.value} is scalar; use the closed "
                              "form of roots_k_of_omega")
    sm = system_matrices(material, family)
    F = -(np.asarray(sm.C) + omega**2 * np.eye(3))
    A, B = np.asarray(sm.A), np.asarray(sm.B)
    entry = [[np.array([F[i, j], -1j * B[i, j], A[i, j]]) for j in range(3)]
             for i in range(3)]
    det = np.zeros(7, dtype=complex)
    for perm, sign in _PERMUTATIONS:
        term = npoly.polymul(npoly.polymul(entry[0][perm[0]],
                                           entry[1][perm[1]]),
                             entry[2][perm[2]])
        det[:len(term)] += sign * term

    top = np.abs(det).max()
    odd = np.abs(det[1::2]).max()
    if odd > PARITY_RTOL * top:
        raise ParityViolation(
            f"odd-in-k coefficient of relative size {odd / top:.3e} for "
            f"{family.value} at omega={omega!r}")
    det[1::2] = 0.0
    return numerics.ComplexPolynomial.from_coefficients(det)


def _uncoupled_cutoff(material: MicromorphicMaterial,
                      family: WaveFamily) -> float:
    sm = system_matrices(material, family)
    return math.sqrt(-sm.C)


def _propagating_tol(material: MicromorphicMaterial, k: complex) -> float:
    scale = (1.0 / material.char_length if material.char_length > 0 else 1.0)
    return 1e-9 * max(abs(k.real), scale)


def _classify(material: MicromorphicMaterial, k: complex) -> BranchKind:
    if abs(k.imag) <= _propagating_tol(material, k):
        return BranchKind.PROPAGATING
    return BranchKind.EVANESCENT


def _single_branch_flux(material, branch) -> float:
    # Deferred import: energetics needs the types defined in this module.
    from .energetics import flux_micromorphic_avg
    return flux_micromorphic_avg([(branch, 1.0)], material, branch.omega, 0.0)


def roots_k_of_omega(material: MicromorphicMaterial, family: WaveFamily,
                     omega: float) -> list[BranchRoot]:
    """The rightward (transmitted-side) branches of one family at omega.

    Selection: evanescent roots keep Im k > 0 (decay toward +x1); real
    roots keep Re k > 0 and are sign-flipped if their single-branch energy
    flux is negative.  Coupled families carry their unit polarization
    vector.  Expected counts are 2 (relaxed), 3 (Mindlin) and 1 (internal
    variable) per coupled family and 1 per scalar family; the scalar
    families of the internal-variable model reduce to fixed-frequency
    oscillators and only return a (k = 0) branch at exact resonance.
    """
    m = validate(material)
    assert isinstance(m, MicromorphicMaterial)
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega!r}")

    if family in UNCOUPLED_FAMILIES:
        cutoff = _uncoupled_cutoff(m, family)
        if m.flavor is Flavor.INTERNAL_VARIABLE:
            if abs(omega - cutoff) <= 1e-9 * cutoff:
                return [BranchRoot(family, omega, 0.0 + 0.0j,
                                   BranchKind.PROPAGATING, 1.0)]
            return []
        c_m = math.sqrt(m.mu_e) * m.char_length / math.sqrt(m.eta)
        if omega >= cutoff:
            k = complex(math.sqrt(omega**2 - cutoff**2) / c_m)
        else:
            k = 1j * math.sqrt(cutoff**2 - omega**2) / c_m
        return [BranchRoot(family, omega, k, _classify(m, k), 1.0)]

    poly = char_polynomial_in_k(m, family, omega)
    expected = _expected_k_degree(m.flavor) // 2
    if poly.degree % 2 != 0 or poly.degree // 2 != expected:
        raise BranchCountMismatch(
            f"characteristic polynomial degree {poly.degree} for "
            f"{family.value} (flavor {m.flavor.value}) at omega={omega!r}; "
            f"expected {2 * expected}")
    z_poly = poly.coefficients[0::2]
    z_roots = numerics.poly_roots(numerics.ComplexPolynomial(z_poly))
    clusters = numerics.cluster_multiplicities(z_roots)
    if len(clusters) != expected:
        raise numerics.AmbiguousNullspace(
            f"repeated k^2 root for {family.value} at omega={omega!r}: "
            f"{clusters}")

    dpoly = poly.derivative()
    branches = []
    for z, _ in clusters:
        k = cmath.sqrt(z)
        if abs(k.imag) <= _propagating_tol(m, k):
            k = complex(abs(k))          # rightward propagating candidate
        elif k.imag < 0:
            k = -k                       # decay toward +x1
        k = numerics._newton_polish(poly.coefficients, dpoly.coefficients, k)
        if k.imag < 0:
            k = -k
        kind = _classify(m, k)
        if kind is BranchKind.PROPAGATING:
            k = complex(abs(k.real), k.imag)
        eigvec = numerics.nullspace3(dispersion_matrix(m, family, k, omega))
        branch = BranchRoot(family, omega, k, kind, eigvec)
        if kind is BranchKind.PROPAGATING and k.real > 0:
            if _single_branch_flux(m, branch) < 0:
                k = -k.conjugate()
                eigvec = numerics.nullspace3(
                    dispersion_matrix(m, family, k, omega))
                branch = BranchRoot(family, omega, k, kind, eigvec)
        branches.append(branch)

    if len(branches) != expected:
        raise BranchCountMismatch(
            f"selected {len(branches)} rightward branches for "
            f"{family.value} at omega={omega!r}, expected {expected}")
    return branches


def omega_of_k(material: MicromorphicMaterial, family: WaveFamily,
               k: float) -> list[float]:
    """All real frequency branches at a real wavenumber, sorted ascending.

    For coupled families the squared frequencies are the eigenvalues of
    k^2 A - i k B - C, computed through the cubic characteristic
    polynomial; they are real and nonnegative for admissible materials.
    """
    m = validate(material)
    assert isinstance(m, MicromorphicMaterial)
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k!r}")
    if family in UNCOUPLED_FAMILIES:
        sm = system_matrices(m, family)
        return [math.sqrt(sm.A * k * k - sm.C)]

    sm = system_matrices(m, family)
    X = (k * k * np.asarray(sm.A) - 1j * k * np.asarray(sm.B)
         - np.asarray(sm.C)).astype(complex)
    # det(X - lam I) = -lam^3 + tr(X) lam^2 - m2(X) lam + det(X)
    tr = np.trace(X)
    m2 = (X[0, 0] * X[1, 1] - X[0, 1] * X[1, 0]
          + X[0, 0] * X[2, 2] - X[0, 2] * X[2, 0]
          + X[1, 1] * X[2, 2] - X[1, 2] * X[2, 1])
    detX = (X[0, 0] * (X[1, 1] * X[2, 2] - X[1, 2] * X[2, 1])
            - X[0, 1] * (X[1, 0] * X[2, 2] - X[1, 2] * X[2, 0])
            + X[0, 2] * (X[1, 0] * X[2, 1] - X[1, 1] * X[2, 0]))
    lams = numerics.poly_roots(
        numerics.ComplexPolynomial(np.array([detX, -m2, tr, -1.0])))
    out = []
    for lam in lams:
        scale = max(abs(lam), 1e-30)
        if abs(lam.imag) > 1e-8 * scale:
            raise ComplexFrequency(
                f"omega^2 root {lam!r} for {family.value} at k={k!r}")
        val = lam.real
        if val < 0:
            if -val > 1e-8 * max(abs(l) for l in lams):
                raise ComplexFrequency(
                    f"negative omega^2 root {val!r} for {family.value} "
                    f"at k={k!r}")
            val = 0.0
        out.append(math.sqrt(val))
    return sorted(out)


def cauchy_wavenumbers(material: CauchyMaterial,
                       omega: float) -> tuple[float, float, float]:
    """Rightward wavenumbers (k1, k2, k3) = (w/c_l, w/c_t, w/c_t)."""
    c_l, c_t = cauchy_speeds(material)
    if omega == 0:
        return (0.0, 0.0, 0.0)
    if c_l == 0 or c_t == 0:
        raise ZeroSpeed(f"zero wave speed: c_l={c_l}, c_t={c_t}")
    return (omega / c_l, omega / c_t, omega / c_t)


def _coupled_z_roots(material: MicromorphicMaterial, family: WaveFamily,
                     omega: float) -> np.ndarray:
    poly = char_polynomial_in_k(material, family, omega)
    return numerics.poly_roots(numerics.ComplexPolynomial(
        poly.coefficients[0::2]))


def has_propagating_branch(material: MicromorphicMaterial,
                           omega: float) -> bool:
    """True when any of the six families carries a real-k wave at omega.

    Cheap test used by the band-gap scan: eigenvector and flux work is
    skipped, only the k^2 roots are inspected.
    """
    m = validate(material)
    assert isinstance(m, MicromorphicMaterial)
    for family in UNCOUPLED_FAMILIES:
        cutoff = _uncoupled_cutoff(m, family)
        if m.flavor is Flavor.INTERNAL_VARIABLE:
            if abs(omega - cutoff) <= 1e-9 * cutoff:
                return True
            continue
        if omega >= cutoff:
            return True
    for family in (WaveFamily.LONGITUDINAL, WaveFamily.TRANSVERSE_Y):
        for z in _coupled_z_roots(m, family, omega):
            k = cmath.sqrt(z)
            if abs(k.imag) <= _propagating_tol(m, k):
                return True
    return False


def band_gap(material: MicromorphicMaterial,
             omega_grid: Sequence[float]) -> list[BandGap]:
    """Complete band gaps detected on a frequency grid.

    Maximal runs of grid points at which no family propagates, with both
    edges refined by bisection to a relative width of 1e-6.  The grid must
    be strictly increasing and positive.
    """
    m = validate(material)
    assert isinstance(m, MicromorphicMaterial)
    grid = np.asarray(omega_grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("omega grid must hold at least two points")
    if not (np.all(np.diff(grid) > 0) and grid[0] > 0):
        raise ValueError("omega grid must be strictly increasing and > 0")

    blocked = np.array([not has_propagating_branch(m, w) for w in grid])
    gaps: list[BandGap] = []
    i = 0
    n = len(grid)
    while i < n:
        if not blocked[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and blocked[j + 1]:
            j += 1
        lower = _bisect_edge(m, grid[i - 1], grid[i]) if i > 0 else grid[0]
        upper = (_bisect_edge(m, grid[j + 1], grid[j])
                 if j + 1 < n else grid[-1])
        if lower < upper:
            gaps.append(BandGap(lower, upper))
        i = j + 1
    return gaps


def _bisect_edge(material: MicromorphicMaterial, w_prop: float,
                 w_blocked: float) -> float:
    """Refine a gap edge between a propagating and a blocked frequency."""
    a, b = w_prop, w_blocked
    while abs(b - a) > 1e-6 * 0.5 * (abs(a) + abs(b)):
        mid = 0.5 * (a + b)
        if has_propagating_branch(material, mid):
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


#: Probe wavenumber for slope extraction: k * length_scale = LARGE_K_FACTOR.
LARGE_K_FACTOR = 1e6


@dataclass(frozen=True)
class Asymptotes:
    """Numerically determined large-k behavior of one coupled family."""

    slopes: tuple[float, ...]
    horizontals: tuple[float, ...]


def asymptotes_numeric(material: MicromorphicMaterial,
                       family: WaveFamily) -> Asymptotes:
    """Oblique slopes and horizontal limits of a coupled family.

    Slopes are omega/k of the unbounded branches at a probe wavenumber far
    past every dispersion knee.  Horizontal limits are computed exactly as
    the frequencies at which the leading k-power coefficient of the
    characteristic polynomial vanishes (the k -> infinity limit), rather
    than by evaluating at a large finite k, which would lose precision.
    """
    m = validate(material)
    assert isinstance(m, MicromorphicMaterial)
    if family in UNCOUPLED_FAMILIES:
        raise UncoupledFamily(f"{family.value} is scalar")
    scale = m.char_length if m.char_length > 0 else 1.0
    k_probe = LARGE_K_FACTOR / scale

    deg = _expected_k_degree(m.flavor)
    n_unbounded = deg // 2
    omegas = omega_of_k(m, family, k_probe)
    slopes = tuple(w / k_probe for w in omegas[3 - n_unbounded:])

    horizontals = tuple(_leading_coefficient_roots(m, family, deg))
    return Asymptotes(slopes=slopes, horizontals=horizontals)


def _leading_coefficient_roots(material: MicromorphicMaterial,
                               family: WaveFamily, deg: int) -> list[float]:
    """Real positive roots (in omega) of the leading k-power coefficient.

    The coefficient is a polynomial of degree (3 - deg/2) in omega^2; it
    is recovered exactly by interpolation through that many samples.
    """
    n_w2 = 3 - deg // 2
    if n_w2 <= 0:
        return []
    cq = characteristic_quantities(material)
    w_ref2 = max(cq.omega_s, cq.omega_p, cq.omega_r, cq.omega_l) ** 2
    # Interpolate in the dimensionless variable y = omega^2 / w_ref2 so the
    # Vandermonde system is well scaled.
    y_samples = np.linspace(0.25, 2.0, n_w2 + 1)
    lead = np.array([
        char_polynomial_in_k(material, family, math.sqrt(y * w_ref2))
        .coefficients[deg].real
        for y in y_samples])
    vander = np.vander(y_samples, n_w2 + 1, increasing=True)
    coeffs = numerics.solve_dense(vander.astype(complex),
                                  lead.astype(complex))
    roots = numerics.poly_roots(numerics.ComplexPolynomial(coeffs))
    out = [math.sqrt(r.real * w_ref2) for r in roots
           if abs(r.imag) <= 1e-8 * abs(r) and r.real > 0]
    return sorted(out)
