import numpy as np
import pytest
import sympy as sp

from logconnect import (
    FuchsianSystem,
    LocalModel,
    circle_loop,
    flatness_check,
    mat_exp,
    poincare_defect,
    poincare_normalize,
    pullback_power,
    residue,
    sylvester_solve,
    transport,
)
from logconnect.connections import LogConnection
from logconnect.errors import ResonantResidue, UnsupportedBranch
from logconnect.ratfunc import RationalFunction

from conftest import random_fuchsian, rational_matrix


def make_log_connection(entries, gens, divisor):
    m = len(entries[0])
    comps = []
    for comp in entries:
        comps.append(tuple(
            tuple(RationalFunction.from_expr(e, gens) for e in row) for row in comp
        ))
    return LogConnection(m, gens, divisor, tuple(comps))


class TestFlatness:
    def test_one_variable_always_flat(self, rng):
        assert flatness_check(random_fuchsian(rng))

    def test_noncommuting_local_model_not_flat(self):
        A1 = [[0, 1], [0, 0]]
        A2 = [[0, 0], [1, 0]]
        assert not flatness_check(LocalModel(2, [A1, A2]))

    def test_repeated_residue_flat(self):
        A = [[1, 2], [3, 4]]
        assert flatness_check(LocalModel(2, [A, A]))

    def test_random_commuting_families(self, nprng, rng):
        for _ in range(10):
            m = int(nprng.integers(2, 5))
            D1 = np.diag(nprng.integers(-3, 4, size=m).astype(float))
            D2 = np.diag(nprng.integers(-3, 4, size=m).astype(float))
            P = np.eye(m) + np.triu(np.ones((m, m)), 1)  # exact integer conjugation
            Pinv = np.linalg.inv(P)
            A1 = P @ D1 @ Pinv
            A2 = P @ D2 @ Pinv
            assert flatness_check(LocalModel(m, [A1, A2]))

    def test_random_noncommuting_families(self, rng):
        found_noncommuting = 0
        for _ in range(10):
            A1 = rational_matrix(rng, 3)
            A2 = rational_matrix(rng, 3)
            model = LocalModel(3, [A1, A2])
            a1 = model.residue_array(0)
            a2 = model.residue_array(1)
            expected = np.linalg.norm(a1 @ a2 - a2 @ a1) < 1e-10
            assert flatness_check(model) == expected
            found_noncommuting += not expected
        assert found_noncommuting > 0


class TestResidue:
    def test_fuchsian_branches(self, rng):
        F = random_fuchsian(rng, m=3, max_poles=3)
        for i in range(F.k):
            assert np.allclose(residue(F, i), F.residue_array(i))

    def test_infinity_branch(self, rng):
        F = random_fuchsian(rng, m=2, max_poles=3)
        total = sum(residue(F, i) for i in range(F.k)) + residue(F, "inf")
        assert np.allclose(total, 0.0, atol=1e-12)

    def test_local_model_branch(self):
        A1 = [[1, 0], [0, 2]]
        A2 = [[3, 0], [0, 4]]
        model = LocalModel(2, [A1, A2])
        assert np.allclose(residue(model, 1), np.diag([3.0, 4.0]))

    def test_log_connection_residue_symbolic(self):
        x = sp.Symbol("x")
        conn = make_log_connection(
            [[[1 / x, 2 / x], [0, sp.Rational(1, 2) / x]]], (x,), [(0, 0)]
        )
        assert np.allclose(residue(conn, 0), [[1.0, 2.0], [0.0, 0.5]])


class TestPullback:
    def test_single_branch_scales_residue(self):
        A = [[sp.Rational(1, 4), 0], [0, 0]]
        F = FuchsianSystem(2, [0], [A])
        out = pullback_power(F, 0, 4)
        assert np.allclose(out.residue_array(0), np.diag([1.0, 0.0]))

    def test_nu_one_is_identity(self, rng):
        F = FuchsianSystem(2, [0], [rational_matrix(rng, 2)])
        out = pullback_power(F, 0, 1)
        assert np.allclose(out.residue_array(0), F.residue_array(0))

    def test_composition(self):
        x = sp.Symbol("x")
        conn = make_log_connection(
            [[[sp.Rational(1, 3) / x, 1 / x], [0, 2 / x]]], (x,), [(0, 0)]
        )
        one_step = pullback_power(conn, 0, 6)
        two_step = pullback_power(pullback_power(conn, 0, 2), 0, 3)
        assert one_step.equals(two_step)

    def test_monodromy_power(self, nprng):
        # transported monodromy of the pullback = nu-th power of the original
        A = 0.5 * (nprng.normal(size=(2, 2)) + 1j * nprng.normal(size=(2, 2)))
        F = FuchsianSystem(2, [0], [A])
        M = transport(F, circle_loop(0, 1.0), tol=1e-12)
        for nu in (2, 3, 4):
            Mnu = transport(pullback_power(F, 0, nu), circle_loop(0, 1.0), tol=1e-12)
            assert np.linalg.norm(Mnu - np.linalg.matrix_power(M, nu)) < 1e-7

    def test_off_origin_branch_rejected(self):
        F = FuchsianSystem(2, [1], [[[1, 0], [0, 1]]])
        with pytest.raises(UnsupportedBranch):
            pullback_power(F.to_log_connection(), 0, 2)

    def test_local_model_other_branches_unchanged(self):
        model = LocalModel(2, [np.diag([1.0, 2.0]), np.diag([3.0, 4.0])])
        out = pullback_power(model, 0, 3)
        assert np.allclose(out.residue_array(0), np.diag([3.0, 6.0]))
        assert np.allclose(out.residue_array(1), np.diag([3.0, 4.0]))


def one_var_system(A, tau_coeffs):
    """omega = A dx/x + tau(x) dx as a LogConnection."""
    x = sp.Symbol("x")
    m = len(A)
    entries = [[sp.sympify(A[i][j]) / x for j in range(m)] for i in range(m)]
    for d, T in enumerate(tau_coeffs):
        for i in range(m):
            for j in range(m):
                entries[i][j] += sp.sympify(T[i][j]) * x ** d
    return make_log_connection([entries], (x,), [(0, 0)])


class TestPoincareNormalize:
    def test_zero_tau_gives_identity_gauge(self):
        conn = one_var_system([[0, 0], [0, sp.Rational(1, 2)]], [])
        gauge = poincare_normalize(conn, order=5)
        assert all(np.allclose(G, 0) for G in gauge.coefficients[1:])

    def test_first_coefficient_matches_sylvester(self):
        A = np.diag([0.0, 0.5])
        tau0 = np.array([[0.0, 1.0], [0.0, 0.0]])
        conn = one_var_system([[0, 0], [0, sp.Rational(1, 2)]], [[[0, 1], [0, 0]]])
        gauge = poincare_normalize(conn, order=3)
        G1 = sylvester_solve(A, A + np.eye(2), -tau0)
        assert np.allclose(gauge.coefficients[1], G1, atol=1e-10)
        assert poincare_defect(conn, gauge) < 1e-9

    def test_resonant_rejected(self):
        conn = one_var_system([[0, 0], [0, 1]], [[[0, 1], [0, 0]]])
        with pytest.raises(ResonantResidue):
            poincare_normalize(conn, order=3)

    def test_defect_order_random(self, nprng):
        for _ in range(5):
            m = 3
            A = np.diag(nprng.uniform(0.1, 0.7, size=m)) \
                + 0.05j * nprng.normal(size=(m, m))
            tau = [nprng.normal(size=(m, m)) * 0.5 for _ in range(3)]
            conn = one_var_system(A.tolist(), [T.tolist() for T in tau])
            gauge = poincare_normalize(conn, order=8)
            assert poincare_defect(conn, gauge) < 1e-7


class TestInvariants:
    def test_residue_sum_zero_after_pullback(self, rng):
        F = FuchsianSystem(2, [0], [rational_matrix(rng, 2)])
        out = pullback_power(F, 0, 3)
        total = residue(out, 0) + residue(out, "inf")
        assert np.allclose(total, 0.0, atol=1e-12)

    def test_embedding_lossless(self, rng):
        F = random_fuchsian(rng, m=2, max_poles=2)
        conn = F.to_log_connection()
        for i in range(F.k):
            assert np.allclose(residue(conn, i), F.residue_array(i))
