"""Riccati projectivization of linear systems and the two spectral predicates.

The projectivization of dy = omega y in the affine chart z_i = y_i / y_m is
the quadratic system

    dz_i = omega_{i,m} + z_i (omega_{i,i} - omega_{m,m})
           + sum_{k != i} omega_{i,k} z_k - sum_k omega_{m,k} z_i z_k,

whose coefficients determine omega up to a scalar form; fixing the trace
recovers omega uniquely.
"""

from __future__ import annotations

import numpy as np

from . import algebra
from .connections import LogConnection, flatness_check, _as_connection
from .errors import DimensionMismatch, NonIntegrable, SingularMatrix
from .ratfunc import RationalFunction

__all__ = [
    "RiccatiSystem",
    "ProjectiveClass",
    "projectivize",
    "reconstruct",
    "trace_free_lift",
    "property_Pm",
    "nonresonant",
    "proj_equal",
]

TWO_PI = 2.0 * np.pi


class RiccatiSystem:
    """Coefficient 1-forms of the projectivized system in the chart y_m != 0.

    Each coefficient is a tuple of n :class:`RationalFunction` components
    (one per chart variable dx_j).
    """

    def __init__(self, m, gens, divisor, b, delta, offdiag, c, exact=True):
        self.m = int(m)
        self.gens = tuple(gens)
        self.n = len(self.gens)
        self.divisor = tuple(divisor)
        self.b = tuple(tuple(f) for f in b)
        self.delta = tuple(tuple(f) for f in delta)
        self.offdiag = {k: tuple(f) for k, f in offdiag.items()}
        self.c = tuple(tuple(f) for f in c)
        self.exact = bool(exact)
        if len(self.b) != m - 1 or len(self.delta) != m - 1 or len(self.c) != m - 1:
            raise DimensionMismatch("coefficient index ranges inconsistent with rank")

    def equals(self, other: "RiccatiSystem", tol: float = 1e-12) -> bool:
        if self.m != other.m or self.n != other.n:
            return False
        def eq(fa, fb):
            return all(a.equals(b, tol) for a, b in zip(fa, fb))
        return (
            all(eq(a, b) for a, b in zip(self.b, other.b))
            and all(eq(a, b) for a, b in zip(self.delta, other.delta))
            and all(eq(a, b) for a, b in zip(self.c, other.c))
            and set(self.offdiag) == set(other.offdiag)
            and all(eq(self.offdiag[k], other.offdiag[k]) for k in self.offdiag)
        )


def projectivize(C) -> RiccatiSystem:
    """Extract the Riccati coefficients of a linear connection."""
    conn = _as_connection(C)
    m, n = conn.m, conn.n
    def one_form(i, j):
        return tuple(conn.entry(v, i, j) for v in range(n))
    def diff_form(i):
        return tuple(
            conn.entry(v, i, i) - conn.entry(v, m - 1, m - 1) for v in range(n)
        )
    b = [one_form(i, m - 1) for i in range(m - 1)]
    delta = [diff_form(i) for i in range(m - 1)]
    offdiag = {
        (i, k): one_form(i, k)
        for i in range(m - 1)
        for k in range(m - 1)
        if i != k
    }
    c = [one_form(m - 1, k) for k in range(m - 1)]
    return RiccatiSystem(m, conn.gens, conn.divisor, b, delta, offdiag, c,
                         exact=conn.exact)


def _zero_form(gens, n):
    return tuple(RationalFunction.zero(gens) for _ in range(n))


def reconstruct(R: RiccatiSystem, trace=None) -> LogConnection:
    """The unique omega with the given Riccati data and trace.

    ``trace`` is a 1-form (tuple of components) or None for the zero form;
    m * omega_{m,m} = trace - sum_i Delta_i.
    """
    m, n, gens = R.m, R.n, R.gens
    if trace is None:
        trace = _zero_form(gens, n)
    omega_mm = tuple(
        (trace[v] - sum(
            (R.delta[i][v] for i in range(m - 1)),
            start=RationalFunction.zero(gens),
        )) / m
        for v in range(n)
    )
    comps = []
    for v in range(n):
        rows = []
        for i in range(m):
            row = []
            for j in range(m):
                if i == m - 1 and j == m - 1:
                    row.append(omega_mm[v])
                elif i == j:
                    row.append(R.delta[i][v] + omega_mm[v])
                elif j == m - 1:
                    row.append(R.b[i][v])
                elif i == m - 1:
                    row.append(R.c[j][v])
                else:
                    row.append(R.offdiag[(i, j)][v])
            rows.append(tuple(row))
        comps.append(tuple(rows))
    exact = R.exact and all(f.exact for f in trace)
    return LogConnection(m, gens, R.divisor, tuple(comps), exact=exact)


def trace_free_lift(R: RiccatiSystem) -> LogConnection:
    """The unique trace-free linear connection projecting to R; verified flat."""
    conn = reconstruct(R, None)
    if not flatness_check(conn):
        raise NonIntegrable(
            "trace-free reconstruction is not flat: input is not the "
            "projectivization of a flat connection on the trivial bundle"
        )
    return conn


def property_Pm(M, m: int | None = None, tol: float = 1e-9) -> bool:
    """Eigenvalue separation predicate on PGL classes.

    True iff for any pair of eigenvalues of a (hence any) lift,
    lambda_1^m = lambda_2^m implies lambda_1 = lambda_2.
    """
    A = algebra.as_matrix(M)
    if m is None:
        m = A.shape[0]
    scale = np.max(np.abs(A))
    if scale == 0.0 or abs(np.linalg.det(A)) < (1e-10 * scale) ** A.shape[0]:
        raise SingularMatrix("predicate defined on invertible classes only")
    eig = np.linalg.eigvals(A)
    for i in range(len(eig)):
        for j in range(i + 1, len(eig)):
            s = max(abs(eig[i]), abs(eig[j]))
            powers_equal = abs(eig[i] ** m - eig[j] ** m) < tol * s ** m
            values_equal = abs(eig[i] - eig[j]) < tol * s
            if powers_equal and not values_equal:
                return False
    return True


def nonresonant(A, tol: float = 1e-9) -> bool:
    """True iff no eigenvalue difference lies within tol of a positive integer."""
    M = algebra.as_matrix(A)
    eig = np.linalg.eigvals(M)
    scale = max(np.max(np.abs(eig)), 1.0)
    spread = int(np.ceil(np.max(np.abs(eig[:, None] - eig[None, :])))) + 1
    for i in range(len(eig)):
        for j in range(len(eig)):
            if i == j:
                continue
            d = eig[i] - eig[j]
            for k in range(1, spread + 1):
                if abs(d - k) < tol * scale:
                    return False
    return True


class ProjectiveClass:
    """A GL matrix modulo nonzero scalars, with a canonical representative.

    The canonical form has determinant 1 and the first nonzero entry in
    row-major order has argument in [0, 2*pi/m); this fixes the m-th root of
    unity ambiguity deterministically.
    """

    def __init__(self, rep, tol: float = 1e-10):
        A = algebra.as_matrix(rep)
        m = A.shape[0]
        det = np.linalg.det(A)
        scale = np.max(np.abs(A))
        # scale-invariant singularity test: det is homogeneous of degree m
        if scale == 0.0 or abs(det) < (tol * scale) ** m:
            raise SingularMatrix("projective classes need invertible representatives")
        self.rep = A
        self.m = m
        M1 = A * det ** (-1.0 / m)
        flat = M1.ravel()
        lead = flat[np.argmax(np.abs(flat) > 1e-12 * np.max(np.abs(flat)))]
        theta = np.angle(lead) % TWO_PI
        sector = TWO_PI / m
        k = int(theta // sector) % m
        self.canonical = M1 * np.exp(-1j * sector * k)

    def matrix(self) -> np.ndarray:
        return self.canonical

    def power(self, nu: int) -> "ProjectiveClass":
        return ProjectiveClass(np.linalg.matrix_power(self.canonical, nu))

    def __matmul__(self, other: "ProjectiveClass") -> "ProjectiveClass":
        return ProjectiveClass(self.canonical @ other.canonical)

    def inverse(self) -> "ProjectiveClass":
        return ProjectiveClass(np.linalg.inv(self.canonical))

    def equals(self, other: "ProjectiveClass", tol: float = 1e-9) -> bool:
        return proj_equal(self, other, tol)

    def __repr__(self):
        return f"ProjectiveClass({np.array2string(self.canonical, precision=4)})"


def proj_equal(a, b, tol: float = 1e-9) -> bool:
    """Scalar-equivalence of representatives via the least-squares scalar."""
    A = a.rep if isinstance(a, ProjectiveClass) else algebra.as_matrix(a)
    B = b.rep if isinstance(b, ProjectiveClass) else algebra.as_matrix(b)
    if A.shape != B.shape:
        raise DimensionMismatch("projective classes of different rank")
    lam = np.vdot(B, A) / np.vdot(B, B)
    return np.linalg.norm(A - lam * B) < tol * max(np.linalg.norm(A), 1e-300)
