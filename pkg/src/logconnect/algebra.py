"""Dense complex linear algebra kernels.

Thin, contract-enforcing wrappers over LAPACK via numpy/scipy: Schur-based
eigendecomposition, matrix exponential, the branch-normalized matrix
logarithm (eigenvalue real parts in [0, 1)), a spectrum-guarded Sylvester
solver and a commutation test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    NonConvergence,
    ResonantSpectrum,
    SingularMatrix,
)

__all__ = [
    "Spectrum",
    "as_matrix",
    "eigen_decompose",
    "mat_exp",
    "mat_log_normalized",
    "sylvester_solve",
    "commuting",
]

TWO_PI = 2.0 * np.pi


def as_matrix(M) -> np.ndarray:
    """Coerce to a square complex ndarray with finite entries."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicity plus a basis conjugating to triangular form.

    ``basis @ triangular @ basis^{-1}`` reconstructs the input matrix.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray
    triangular: np.ndarray

    @property
    def m(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        return self.basis @ self.triangular @ np.linalg.inv(self.basis)


def eigen_decompose(M, tol: float = 1e-10) -> Spectrum:
    """Schur decomposition with a reconstruction-residual guarantee."""
    A = as_matrix(M)
    try:
        T, Q = scipy.linalg.schur(A, output="complex")
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise NonConvergence(str(exc)) from exc
    spec = Spectrum(eigenvalues=np.diag(T).copy(), basis=Q, triangular=T)
    scale = max(np.linalg.norm(A), 1.0)
    if np.linalg.norm(spec.reconstruct() - A) > tol * scale:
        raise NonConvergence("Schur reconstruction residual above tolerance")
    return spec


def mat_exp(A) -> np.ndarray:
    """Matrix exponential (scaling and squaring, via scipy)."""
    E = scipy.linalg.expm(as_matrix(A))
    if not np.all(np.isfinite(E)):
        raise OverflowError("matrix exponential overflowed")
    return E


def mat_log_normalized(M, tol: float = 1e-12) -> np.ndarray:
    """Return A with exp(2*pi*i*A) = M and eigenvalues of A in the strip 0 <= Re < 1.

    The branch is chosen by rotating the plane so that a single logarithm cut
    sits in the argument gap between max(arg(lambda)) and 2*pi; every
    eigenvalue lambda then maps to log(lambda)/(2*pi*i) with arg taken
    in [0, 2*pi), i.e. Re(mu) = arg(lambda)/(2*pi) in [0, 1).  Works for
    non-diagonalizable M since it is a single analytic matrix function.
    """
    A = as_matrix(M)
    m = A.shape[0]
    det = np.linalg.det(A)
    scale = max(np.linalg.norm(A), 1.0)
    if abs(det) < tol * scale ** m:
        raise SingularMatrix("matrix is singular; no logarithm exists")
    eig = np.linalg.eigvals(A)
    args = np.mod(np.angle(eig), TWO_PI)
    # cut direction: midway between the largest eigenvalue argument and 2*pi
    cut = (np.max(args) + TWO_PI) / 2.0
    psi = cut - np.pi
    L = scipy.linalg.logm(A * np.exp(-1j * psi)) + 1j * psi * np.eye(m)
    return L / (2j * np.pi)


def _spectra_disjoint(ea, eb, tol: float) -> bool:
    scale = max(np.max(np.abs(ea)), np.max(np.abs(eb)), 1.0)
    gap = np.min(np.abs(ea[:, None] - eb[None, :]))
    return gap > tol * scale


def sylvester_solve(A, B, C, tol: float = 1e-9) -> np.ndarray:
    """Solve A X - X B = C; requires spec(A) and spec(B) disjoint within tol."""
    A = as_matrix(A)
    B = as_matrix(B)
    C = np.asarray(C, dtype=complex)
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatch("Sylvester operands must have equal size")
    if C.shape != A.shape:
        raise DimensionMismatch("right-hand side shape mismatch")
    if not _spectra_disjoint(np.linalg.eigvals(A), np.linalg.eigvals(B), tol):
        raise ResonantSpectrum("spec(A) and spec(B) intersect within tolerance")
    # scipy solves A X + X B = C
    return scipy.linalg.solve_sylvester(A, -B, C)


def commuting(family, tol: float = 1e-10) -> bool:
    """True iff every pair in the family commutes to relative tolerance."""
    mats = [as_matrix(M) for M in family]
    if len({M.shape for M in mats}) > 1:
        raise DimensionMismatch("family members have different dimensions")
    for i, Mi in enumerate(mats):
        for Mj in mats[i + 1:]:
            bound = tol * max(np.linalg.norm(Mi), 1e-300) * max(np.linalg.norm(Mj), 1e-300)
            if np.linalg.norm(Mi @ Mj - Mj @ Mi) > bound:
                return False
    return True
