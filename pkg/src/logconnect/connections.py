"""Flat logarithmic connections on trivial bundles over desk-scale charts.

Two concrete models — global one-variable Fuchsian systems on the sphere and
polydisk local models with coordinate-hyperplane divisors — both embed into
the general ``LogConnection``, whose entries are exact rational functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import sympy as sp
from sympy.polys.domains import QQ_I

from . import algebra
from .errors import (
    NonConstantResidue,
    ResonantResidue,
    ToleranceNotMet,
    UnsupportedBranch,
)
from .ratfunc import RationalFunction, is_exact_input, to_exact_scalar

__all__ = [
    "FuchsianSystem",
    "LocalModel",
    "LogConnection",
    "GaugeSeries",
    "flatness_check",
    "residue",
    "pullback_power",
    "poincare_normalize",
    "poincare_defect",
]


def _scalar_matrix(M):
    """Nested tuple of exact sympy scalars from any matrix-like input."""
    A = [[to_exact_scalar(e) for e in row] for row in np.asarray(M, dtype=object)]
    return tuple(tuple(row) for row in A)


def _matrix_is_exact(M) -> bool:
    return all(is_exact_input(e) for row in np.asarray(M, dtype=object) for e in row)


def matrix_array(M) -> np.ndarray:
    """Numeric complex ndarray view of a stored scalar matrix."""
    return np.array([[complex(e) for e in row] for row in M], dtype=complex)


@dataclass(frozen=True)
class FuchsianSystem:
    """Global rank-m system on the sphere: omega = sum_i A_i dx/(x - p_i).

    The residue at infinity is always implied (-sum A_i), never stored.
    """

    m: int
    poles: tuple
    residues: tuple
    exact: bool = field(default=True)

    def __init__(self, m, poles, residues):
        if len(poles) != len(residues):
            raise ValueError("one residue matrix per pole required")
        exact = all(is_exact_input(p) for p in poles) and all(
            _matrix_is_exact(A) for A in residues
        )
        poles_t = tuple(to_exact_scalar(p) for p in poles)
        pts = [complex(p) for p in poles_t]
        for i, a in enumerate(pts):
            for b in pts[i + 1:]:
                if abs(a - b) <= 1e-9:
                    raise ValueError("poles must be pairwise distinct (separation > 1e-9)")
        res_t = tuple(_scalar_matrix(A) for A in residues)
        for A in res_t:
            if len(A) != m or any(len(row) != m for row in A):
                raise ValueError(f"residues must be {m}x{m}")
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "poles", poles_t)
        object.__setattr__(self, "residues", res_t)
        object.__setattr__(self, "exact", exact)

    @property
    def k(self) -> int:
        return len(self.poles)

    def residue_array(self, i: int) -> np.ndarray:
        return matrix_array(self.residues[i])

    def residue_at_infinity(self) -> np.ndarray:
        return -sum(self.residue_array(i) for i in range(self.k))

    def to_log_connection(self) -> "LogConnection":
        cached = getattr(self, "_log_connection", None)
        if cached is not None:
            return cached
        x = sp.Symbol("x")
        gens = (x,)
        dens = [sp.Poly(x - p, x, domain=QQ_I) for p in self.poles]
        comps = []
        for i in range(self.m):
            row_forms = []
            for j in range(self.m):
                f = RationalFunction.zero(gens)
                for A, den in zip(self.residues, dens):
                    if A[i][j] == 0:
                        continue
                    num = sp.Poly(A[i][j], x, domain=QQ_I)
                    f = f + RationalFunction(num, den, exact=self.exact,
                                             _normalized=True)
                row_forms.append(f)
            comps.append(tuple(row_forms))
        divisor = tuple((0, p) for p in self.poles)
        conn = LogConnection(self.m, gens, divisor, (tuple(comps),), exact=self.exact)
        object.__setattr__(self, "_log_connection", conn)
        return conn


@dataclass(frozen=True)
class LocalModel:
    """Local model D_A: omega = sum_i A_i dx_i / x_i on a polydisk chart.

    Flatness is exactly pairwise commutation of the residues; the model does
    not enforce it at construction so that the flatness check stays meaningful
    on negative examples.
    """

    m: int
    n: int
    residues: tuple
    exact: bool = field(default=True)

    def __init__(self, m, residues, n=None):
        residues = tuple(residues)
        k = len(residues)
        if n is None:
            n = k
        if k > n:
            raise ValueError("need at least as many chart variables as divisor branches")
        exact = all(_matrix_is_exact(A) for A in residues)
        res_t = tuple(_scalar_matrix(A) for A in residues)
        for A in res_t:
            if len(A) != m or any(len(row) != m for row in A):
                raise ValueError(f"residues must be {m}x{m}")
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "residues", res_t)
        object.__setattr__(self, "exact", exact)

    @property
    def k(self) -> int:
        return len(self.residues)

    def residue_array(self, i: int) -> np.ndarray:
        return matrix_array(self.residues[i])

    def to_log_connection(self) -> "LogConnection":
        gens = sp.symbols(f"x1:{self.n + 1}") if self.n > 1 else (sp.Symbol("x1"),)
        comps = []
        for j in range(self.n):
            rows = []
            for i in range(self.m):
                row = []
                for l in range(self.m):
                    if j < self.k:
                        num = sp.Poly(self.residues[j][i][l], *gens, domain=QQ_I)
                        den = sp.Poly(gens[j], *gens, domain=QQ_I)
                        row.append(RationalFunction(num, den, exact=self.exact))
                    else:
                        row.append(RationalFunction.zero(gens))
                rows.append(tuple(row))
            comps.append(tuple(rows))
        divisor = tuple((j, sp.Integer(0)) for j in range(self.k))
        return LogConnection(self.m, gens, divisor, tuple(comps), exact=self.exact)


class LogConnection:
    """omega = sum_j Omega_j dx_j with first-order poles along coordinate branches.

    ``divisor`` is a tuple of (variable index, value) pairs, each standing for
    the branch x_var = value.  ``components`` holds the n matrices Omega_j as
    nested tuples of :class:`RationalFunction`.
    """

    def __init__(self, m, gens, divisor, components, exact=True):
        self.m = int(m)
        self.gens = tuple(gens)
        self.n = len(self.gens)
        self.divisor = tuple((int(v), to_exact_scalar(c)) for v, c in divisor)
        self.components = tuple(
            tuple(tuple(row) for row in comp) for comp in components
        )
        self.exact = bool(exact)
        if len(self.components) != self.n:
            raise ValueError("one matrix component per chart variable required")

    def entry(self, var: int, i: int, j: int) -> RationalFunction:
        return self.components[var][i][j]

    def component_callable(self, var: int):
        """Compiled numeric evaluator x -> Omega_var(x) (ndarray)."""
        cache = getattr(self, "_callables", None)
        if cache is None:
            cache = {}
            self._callables = cache
        if var not in cache:
            exprs = sp.Matrix(
                [[self.entry(var, i, j).as_expr() for j in range(self.m)]
                 for i in range(self.m)]
            )
            fn = sp.lambdify(self.gens, exprs, modules="numpy")
            cache[var] = lambda *xs: np.asarray(fn(*xs), dtype=complex)
        return cache[var]

    def map_entries(self, func) -> "LogConnection":
        comps = tuple(
            tuple(tuple(func(f) for f in row) for row in comp)
            for comp in self.components
        )
        exact = all(f.exact for comp in comps for row in comp for f in row)
        return LogConnection(self.m, self.gens, self.divisor, comps, exact=exact)

    def equals(self, other: "LogConnection", tol: float = 1e-12) -> bool:
        if self.m != other.m or self.n != other.n:
            return False
        return all(
            self.entry(v, i, j).equals(other.entry(v, i, j), tol)
            for v in range(self.n)
            for i in range(self.m)
            for j in range(self.m)
        )

    def to_log_connection(self) -> "LogConnection":
        return self


@dataclass(frozen=True)
class GaugeSeries:
    """Truncated gauge power series G(x) = I + G_1 x + ... + G_N x^N."""

    coefficients: tuple
    order: int

    def __init__(self, coefficients):
        coeffs = tuple(np.asarray(G, dtype=complex) for G in coefficients)
        m = coeffs[0].shape[0]
        if np.linalg.norm(coeffs[0] - np.eye(m)) > 1e-12:
            raise ValueError("gauge series must start at the identity")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "order", len(coeffs) - 1)

    @property
    def m(self) -> int:
        return self.coefficients[0].shape[0]


def _as_connection(C) -> LogConnection:
    return C.to_log_connection()


def flatness_check(C, tol: float = 1e-12) -> bool:
    """Symbolic integrability test: the 2-form d(omega) - omega ^ omega vanishes."""
    conn = _as_connection(C)
    if conn.n == 1:
        return True
    m = conn.m
    for a in range(conn.n):
        for b in range(a + 1, conn.n):
            Oa, Ob = conn.components[a], conn.components[b]
            for i in range(m):
                for j in range(m):
                    # coefficient of dx_a ^ dx_b in d(omega) - omega ^ omega
                    term = Ob[i][j].diff(conn.gens[a]) - Oa[i][j].diff(conn.gens[b])
                    for l in range(m):
                        term = term - (Oa[i][l] * Ob[l][j] - Ob[i][l] * Oa[l][j])
                    vanishes = term.is_zero if term.exact else term.is_zero_within(tol)
                    if not vanishes:
                        return False
    return True


def residue(C, branch, tol: float = 1e-10) -> np.ndarray:
    """Residue matrix along a divisor branch; ``branch='inf'`` for Fuchsian infinity."""
    if isinstance(C, FuchsianSystem):
        if branch == "inf" or branch == C.k:
            return C.residue_at_infinity()
        return C.residue_array(branch)
    if isinstance(C, LocalModel):
        return C.residue_array(branch)
    conn = _as_connection(C)
    var, value = conn.divisor[branch]
    x = conn.gens[var]
    out = np.zeros((conn.m, conn.m), dtype=complex)
    others = [g for g in conn.gens if g is not x]
    # three sample points along the branch guard against non-constant residues
    samples = [0.37 + 0.21j, -0.52 + 0.8j, 1.13 - 0.44j]
    results = []
    for s in samples if others else samples[:1]:
        vals = {g: s + 0.1 * idx for idx, g in enumerate(others)}
        R = np.zeros((conn.m, conn.m), dtype=complex)
        for i in range(conn.m):
            for j in range(conn.m):
                f = conn.entry(var, i, j) * RationalFunction.from_expr(x - value, conn.gens)
                R[i, j] = f.eval({**vals, x: complex(value)})
        results.append(R)
    scale = max(np.linalg.norm(results[0]), 1.0)
    for R in results[1:]:
        if np.linalg.norm(R - results[0]) > tol * scale:
            raise NonConstantResidue("residue varies along the branch beyond tolerance")
    return results[0]


def pullback_power(C, var: int, nu: int):
    """Pull back along x_var -> x_var**nu (the nu-fold covering substitution).

    The substituted variable's branch must be x_var = 0 and must be the only
    branch in that variable; its residue multiplies by nu, all other branches
    are untouched.
    """
    if nu < 1 or int(nu) != nu:
        raise ValueError("nu must be a positive integer")
    if isinstance(C, FuchsianSystem):
        if C.k != 1:
            conn = C.to_log_connection()
            return pullback_power(conn, var, nu)
        if complex(C.poles[0]) != 0:
            raise UnsupportedBranch("pullback branch must pass through the origin")
        scaled = [[sp.Integer(nu) * e for e in row] for row in C.residues[0]]
        return FuchsianSystem(C.m, (0,), (scaled,))
    if isinstance(C, LocalModel):
        scaled = list(C.residues)
        A = [[sp.Integer(nu) * e for e in row] for row in C.residues[var]]
        scaled[var] = A
        return LocalModel(C.m, scaled, n=C.n)
    conn = _as_connection(C)
    branches = [b for b in conn.divisor if b[0] == var]
    if any(complex(c) != 0 for _, c in branches):
        raise UnsupportedBranch(
            "pullback branch must be of the form x_var = 0 (translate first)"
        )
    if nu == 1:
        return conn
    x = conn.gens[var]
    chain = RationalFunction.from_expr(nu * x ** (nu - 1), conn.gens)
    comps = []
    for j in range(conn.n):
        rows = []
        for i in range(conn.m):
            row = []
            for l in range(conn.m):
                f = conn.entry(j, i, l).subst_power(x, nu)
                if j == var:
                    f = f * chain
                row.append(f)
            rows.append(tuple(row))
        comps.append(tuple(rows))
    return LogConnection(conn.m, conn.gens, conn.divisor, tuple(comps), exact=conn.exact)


def _polynomial_part(conn: LogConnection, A: np.ndarray):
    """Coefficients tau_0, tau_1, ... of the holomorphic part of a one-variable system."""
    x = conn.gens[0]
    m = conn.m
    coeffs = []
    max_deg = 0
    polys = []
    for i in range(m):
        prow = []
        for j in range(m):
            f = conn.entry(0, i, j) - RationalFunction.from_expr(
                to_exact_scalar(A[i, j]) / x, conn.gens
            )
            if f.den.degree() > 0:
                raise ValueError(
                    "connection is not of the form A dx/x + tau(x) dx with polynomial tau"
                )
            p = f.num
            max_deg = max(max_deg, p.degree() if not p.is_zero else 0)
            prow.append(p)
        polys.append(prow)
    for d in range(max_deg + 1):
        T = np.zeros((m, m), dtype=complex)
        for i in range(m):
            for j in range(m):
                T[i, j] = complex(polys[i][j].as_expr().coeff(x, d))
        coeffs.append(T)
    return coeffs


def _is_resonant(A: np.ndarray, tol: float = 1e-9) -> bool:
    eig = np.linalg.eigvals(np.asarray(A, dtype=complex))
    scale = max(np.max(np.abs(eig)), 1.0)
    spread = int(np.ceil(np.max(np.abs(eig[:, None] - eig[None, :]).real))) + 1
    for i in range(len(eig)):
        for j in range(len(eig)):
            if i == j:
                continue
            d = eig[i] - eig[j]
            for k in range(1, spread + 1):
                if abs(d - k) < tol * scale:
                    return True
    return False


def poincare_normalize(C, order: int = 10, tol: float = 1e-8) -> GaugeSeries:
    """Gauge series trivializing the holomorphic part of a one-variable system.

    For omega = A dx/x + tau(x) dx with nonresonant A, solves the Sylvester
    recursion A G_k - G_k (A + k I) = -[x^{k-1}](tau(x) G(x)) for k = 1..order,
    so that the gauge transform of the connection is A dx/x + O(x^order).
    """
    conn = _as_connection(C)
    if conn.n != 1 or len(conn.divisor) != 1 or complex(conn.divisor[0][1]) != 0:
        raise ValueError("normalization needs a one-variable system with single branch x = 0")
    A = residue(conn, 0)
    if _is_resonant(A):
        raise ResonantResidue(
            "residue has an eigenvalue pair differing by a positive integer"
        )
    taus = _polynomial_part(conn, A)
    m = conn.m
    G = [np.eye(m, dtype=complex)]
    for k in range(1, order + 1):
        # coefficient of x^{k-1} in tau(x) G(x)
        rhs = np.zeros((m, m), dtype=complex)
        for d, T in enumerate(taus):
            if k - 1 - d >= 0 and k - 1 - d < len(G):
                rhs += T @ G[k - 1 - d]
        G.append(algebra.sylvester_solve(A, A + k * np.eye(m), -rhs))
    gauge = GaugeSeries(G)
    defect = poincare_defect(conn, gauge)
    if defect > tol:
        raise ToleranceNotMet(f"normalization defect {defect:.3e} above {tol:.1e}")
    return gauge


def poincare_defect(C, gauge: GaugeSeries) -> float:
    """Max norm of the series coefficients x^0..x^{N-1} of G^{-1}(omega G - dG) - A dx/x.

    Zero (to rounding) certifies the gauge reduces the system to its local
    model through the truncation order.
    """
    conn = _as_connection(C)
    A = residue(conn, 0)
    taus = _polynomial_part(conn, A)
    m, N = conn.m, gauge.order
    G = list(gauge.coefficients)
    # series inverse H = G^{-1}: H_0 = I, H_k = -sum_{j<k} H_j G_{k-j}
    H = [np.eye(m, dtype=complex)]
    for k in range(1, N + 1):
        acc = np.zeros((m, m), dtype=complex)
        for j in range(k):
            if k - j <= N:
                acc += H[j] @ G[k - j]
        H.append(-acc)
    # Laurent coefficients of P = (A/x + tau) G - G': p_{-1} = A, then
    # p_k = A G_{k+1} + [x^k](tau G) - (k+1) G_{k+1}
    top = N + len(taus)
    P = {-1: A @ G[0]}
    for k in range(0, top):
        acc = np.zeros((m, m), dtype=complex)
        if k + 1 <= N:
            acc += A @ G[k + 1] - (k + 1) * G[k + 1]
        for d, T in enumerate(taus):
            if 0 <= k - d <= N:
                acc += T @ G[k - d]
        P[k] = acc
    # W~ = H P ; its x^{-1} coefficient must be A, x^0..x^{N-1} must vanish
    defect = 0.0
    for k in range(-1, N):
        acc = np.zeros((m, m), dtype=complex)
        for j in range(0, N + 1):
            if -1 <= k - j <= top - 1:
                acc += H[j] @ P[k - j]
        if k == -1:
            defect = max(defect, float(np.linalg.norm(acc - A)))
        else:
            defect = max(defect, float(np.linalg.norm(acc)))
    return defect
