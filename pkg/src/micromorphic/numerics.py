"""Small complex numerical kernels.

Three self-contained pieces used throughout the dispersion and scattering
code: polynomial root extraction with Newton polishing, a dense complex
linear solver with partial pivoting, and 3x3 nullspace extraction with a
deterministic phase convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NumericsError(Exception):
    """Base class for numerical-kernel failures."""


class ZeroPolynomial(NumericsError):
    """All polynomial coefficients vanish."""


class SingularSystem(NumericsError):
    """A pivot fell below the singularity threshold."""


class FullRank(NumericsError):
    """No direction of a 3x3 matrix reaches the nullspace residual bound."""


class AmbiguousNullspace(NumericsError):
    """Two independent directions both qualify as nullspace."""


#: Roots closer than this (relative) are treated as one multiple root.
ROOT_CLUSTER_RTOL = 1e-7


@dataclass(frozen=True)
class ComplexPolynomial:
    """Dense polynomial with complex coefficients, lowest degree first."""

    coefficients: np.ndarray

    @classmethod
    def from_coefficients(cls, coeffs, trim_rtol: float = 0.0
                          ) -> "ComplexPolynomial":
        """Build from a coefficient sequence, trimming the trailing zeros.

        With ``trim_rtol > 0``, trailing coefficients of magnitude at most
        ``trim_rtol * max|c|`` are dropped as numerical noise.
        """
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        mags = np.abs(c)
        top = mags.max(initial=0.0)
        if top == 0.0:
            return cls(np.zeros(1, dtype=complex))
        cut = trim_rtol * top
        last = len(c) - 1
        while last > 0 and mags[last] <= cut:
            last -= 1
        return cls(c[:last + 1].copy())

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z) -> complex | np.ndarray:
        return np.polynomial.polynomial.polyval(z, self.coefficients)

    def derivative(self) -> "ComplexPolynomial":
        return ComplexPolynomial(
            np.polynomial.polynomial.polyder(self.coefficients))

    def is_zero(self) -> bool:
        return bool(np.all(self.coefficients == 0))


def _newton_polish(coeffs: np.ndarray, dcoeffs: np.ndarray, root: complex,
                   iterations: int = 8) -> complex:
    """Newton-polish one root; keep the best residual seen."""
    polyval = np.polynomial.polynomial.polyval
    best = root
    best_res = abs(polyval(root, coeffs))
    z = root
    for _ in range(iterations):
        dp = polyval(z, dcoeffs)
        if dp == 0:
            break
        z = z - polyval(z, coeffs) / dp
        res = abs(polyval(z, coeffs))
        if res < best_res:
            best, best_res = z, res
        if res == 0.0:
            break
    return best


def poly_roots(p: ComplexPolynomial | np.ndarray) -> np.ndarray:
    """All roots of a polynomial, with multiplicity.

    Companion-matrix eigenvalues followed by Newton polishing.  Roots
    closer than ROOT_CLUSTER_RTOL (relative) are clustered and each member
    is replaced by the cluster mean, so multiple roots compare equal.

    Raises:
        ZeroPolynomial: every coefficient vanishes.
        ValueError: the (trimmed) polynomial is a nonzero constant.
    """
    if not isinstance(p, ComplexPolynomial):
        p = ComplexPolynomial.from_coefficients(p)
    if p.is_zero():
        raise ZeroPolynomial("cannot take roots of the zero polynomial")
    trimmed = ComplexPolynomial.from_coefficients(p.coefficients)
    if trimmed.degree < 1:
        raise ValueError("polynomial has degree 0 after trimming")
    coeffs = trimmed.coefficients / trimmed.coefficients[-1]
    if trimmed.degree == 1:
        roots = np.array([-coeffs[0]], dtype=complex)
    else:
        # np.roots expects highest degree first and uses the companion matrix.
        roots = np.roots(coeffs[::-1])
    dcoeffs = np.polynomial.polynomial.polyder(coeffs)
    roots = np.array([_newton_polish(coeffs, dcoeffs, r) for r in roots])
    return _cluster(roots)


def _cluster(roots: np.ndarray) -> np.ndarray:
    """Replace near-coincident roots by their cluster mean."""
    order = np.lexsort((roots.imag, roots.real))
    out = roots.astype(complex).copy()
    used = np.zeros(len(roots), dtype=bool)
    for idx in order:
        if used[idx]:
            continue
        scale = max(1.0, abs(out[idx]))
        members = [j for j in range(len(out))
                   if not used[j]
                   and abs(out[j] - out[idx]) <= ROOT_CLUSTER_RTOL * scale]
        if len(members) > 1:
            mean = np.mean([out[j] for j in members])
            for j in members:
                out[j] = mean
                used[j] = True
        else:
            used[idx] = True
    return out


def cluster_multiplicities(roots: np.ndarray) -> list[tuple[complex, int]]:
    """Group a clustered root array into (root, multiplicity) pairs."""
    pairs: list[tuple[complex, int]] = []
    for r in roots:
        for i, (val, mult) in enumerate(pairs):
            if r == val:
                pairs[i] = (val, mult + 1)
                break
        else:
            pairs.append((complex(r), 1))
    return pairs


def solve_dense(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b by LU elimination with partial (row) pivoting.

    Intended for the small (n <= 32) interface systems.

    Raises:
        SingularSystem: a pivot magnitude falls below
            1e-14 * (largest entry of the initial matrix).
    """
    A = np.array(A, dtype=complex)
    b = np.array(b, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"matrix must be square, got {A.shape}")
    if b.shape != (n,):
        raise ValueError(f"rhs shape {b.shape} does not match n={n}")
    if n > 32:
        raise ValueError(f"solver is meant for n <= 32, got n={n}")
    threshold = 1e-14 * np.abs(A).max(initial=0.0)

    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(A[col:, col])))
        pivot = A[pivot_row, col]
        if abs(pivot) <= threshold:
            raise SingularSystem(
                f"pivot {abs(pivot):.3e} at column {col} below threshold "
                f"{threshold:.3e}")
        if pivot_row != col:
            A[[col, pivot_row]] = A[[pivot_row, col]]
            b[[col, pivot_row]] = b[[pivot_row, col]]
        if col + 1 < n:
            factors = A[col + 1:, col] / pivot
            A[col + 1:, col + 1:] -= np.outer(factors, A[col, col + 1:])
            b[col + 1:] -= factors * b[col]

    x = np.zeros(n, dtype=complex)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - A[row, row + 1:] @ x[row + 1:]) / A[row, row]
    return x


#: A direction counts as nullspace when its residual is below this.
NULLSPACE_ACCEPT_RTOL = 1e-6
#: Cross products weaker than this (relative to row norms) trigger the
#: smallest-singular-direction fallback.
CROSS_FALLBACK_RTOL = 1e-8


def nullspace3(M: np.ndarray, allow_degenerate: bool = False) -> np.ndarray:
    """Unit vector spanning the (numerical) nullspace of a 3x3 matrix.

    The direction comes from the cross product of the two most independent
    rows, falling back to the smallest singular direction when every cross
    product is tiny.  The phase is fixed by making the largest-magnitude
    entry real and positive, so repeated calls are bit-for-bit identical.

    Raises:
        FullRank: no direction reaches residual <= 1e-6 * ||M||.
        AmbiguousNullspace: two directions qualify and ``allow_degenerate``
            is False.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {M.shape}")
    s = np.linalg.svd(M, compute_uv=False)
    norm = s[0]
    if norm == 0.0:
        raise AmbiguousNullspace("zero matrix: nullspace is all of C^3")
    if s[2] > NULLSPACE_ACCEPT_RTOL * norm:
        raise FullRank(
            f"smallest singular value {s[2]:.3e} exceeds "
            f"{NULLSPACE_ACCEPT_RTOL:.0e} * ||M|| = "
            f"{NULLSPACE_ACCEPT_RTOL * norm:.3e}")
    if s[1] <= NULLSPACE_ACCEPT_RTOL * norm and not allow_degenerate:
        raise AmbiguousNullspace(
            f"two singular values ({s[2]:.3e}, {s[1]:.3e}) are below the "
            "nullspace threshold")

    rows = M
    row_norms = np.linalg.norm(rows, axis=1)
    best_vec = None
    best_score = -1.0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        c = np.cross(rows[i], rows[j])
        denom = row_norms[i] * row_norms[j]
        score = np.linalg.norm(c) / denom if denom > 0 else 0.0
        if score > best_score:
            best_score = score
            best_vec = c
    if best_vec is None or best_score < CROSS_FALLBACK_RTOL:
        _, _, vh = np.linalg.svd(M)
        best_vec = np.conj(vh[2])

    h = best_vec / np.linalg.norm(best_vec)
    lead = int(np.argmax(np.abs(h)))
    h = h * (np.conj(h[lead]) / abs(h[lead]))
    return h
