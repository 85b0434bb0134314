"""Exact matrix algebra: elimination, factorizations, and the simplex method."""

import random
from fractions import Fraction

import pytest

from mathpar import matrix as mx
from mathpar.domains import Complex, Space
from mathpar.errors import NotSquare, Singular, UnsupportedCarrier
from mathpar.matrix import MatrixValue
from mathpar.polynomial import Poly

from conftest import brute_force_lp


def rand_matrix(rng, n, m=None, lo=-9, hi=9, density=1.0):
    m = m or n
    return MatrixValue([[rng.randint(lo, hi) if rng.random() < density else 0
                         for _ in range(m)] for _ in range(n)])


def frac_matrix(rng, n, m=None):
    m = m or n
    return MatrixValue([[Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                         for _ in range(m)] for _ in range(n)])


def naive_det(A):
    """Cofactor expansion, the slow reference."""
    n = A.rows
    if n == 1:
        return A[0, 0]
    total = 0
    for j in range(n):
        minor = MatrixValue([[A[i, k] for k in range(n) if k != j]
                             for i in range(1, n)])
        total += (-1) ** j * A[0, j] * naive_det(minor)
    return total


class TestBasics:
    def test_det_2x2(self):
        assert mx.det(MatrixValue([[1, 2], [3, 4]])) == -2

    def test_det_vs_cofactor(self, rng):
        for n in range(1, 6):
            A = rand_matrix(rng, n)
            assert mx.det(A) == naive_det(A)

    def test_det_requires_square(self):
        with pytest.raises(NotSquare):
            mx.det(MatrixValue([[1, 2, 3], [4, 5, 6]]))

    def test_rank(self, rng):
        A = MatrixValue([[1, 2], [2, 4]])
        assert mx.rank(A) == 1
        assert mx.rank(MatrixValue([[0, 0], [0, 0]])) == 0
        assert mx.rank(MatrixValue([[1, 0], [0, 1]])) == 2

    def test_echelon_preserves_rank(self, rng):
        for _ in range(10):
            A = rand_matrix(rng, 4, 5, density=0.7)
            E = mx.to_echelon_form(A)
            assert mx.rank(E) == mx.rank(A)

    def test_inverse(self, rng):
        for _ in range(10):
            A = rand_matrix(rng, 4)
            if mx.det(A) == 0:
                continue
            I = MatrixValue.identity(4)
            assert mx.inverse(A) * A == I.map(Fraction) or mx.inverse(A) * A == I

    def test_inverse_singular(self):
        with pytest.raises(Singular):
            mx.inverse(MatrixValue([[1, 2], [2, 4]]))

    def test_adjoint_identity(self, rng):
        for _ in range(10):
            A = rand_matrix(rng, 4)
            d = mx.det(A)
            prod = mx.adjoint(A) * A
            assert prod == MatrixValue.identity(4).scale(d)

    def test_kernel(self):
        A = MatrixValue([[1, 2], [2, 4]])
        K = mx.kernel(A)
        assert K.cols == 1
        prod = A * K
        assert all(prod[i, 0] == 0 for i in range(2))

    def test_conjugate_transpose(self):
        z = Complex(Fraction(1), Fraction(2))
        A = MatrixValue([[z, 0], [0, 1]])
        C = mx.conjugate(A)
        assert C[0, 0] == Complex(Fraction(1), Fraction(-2))

    def test_char_polynom_trace_det(self, rng):
        A = rand_matrix(rng, 3)
        p = mx.char_polynom(A)
        # lambda^3 - tr*lambda^2 + ... - det has constant term -det for n=3? sign: det(lI-A) at l=0 is det(-A) = -det(A)
        const = p.evaluate({"lambda": 0})
        assert const == -mx.det(A)

    def test_closure_exact(self):
        A = MatrixValue([[Fraction(1, 2), 0], [0, Fraction(1, 3)]])
        C = mx.closure(A)
        assert C[0, 0] == 2 and C[1, 1] == Fraction(3, 2)


class TestSymbolicDet:
    def test_small_symbolic(self):
        a, b, c, d = (Poly.variable(v) for v in "abcd")
        A = MatrixValue([[a, b], [c, d]])
        assert mx.det(A) == a * d - b * c

    def test_sparse_symbolic_matches_substitution(self, rng):
        names = iter(f"s{i}" for i in range(100))
        entries = [[Poly.variable(next(names)) if rng.random() < 0.4 else 0
                    for _ in range(5)] for _ in range(5)]
        A = MatrixValue(entries)
        d = mx.det(A)
        subs = {}
        for row in entries:
            for e in row:
                if isinstance(e, Poly):
                    subs[e.free_vars()[0] if isinstance(e.free_vars(), list)
                         else next(iter(e.free_vars()))] = rng.randint(-5, 5)
        num = MatrixValue([[e.evaluate(subs) if isinstance(e, Poly) else 0
                            for e in row] for row in entries])
        want = mx.det(num)
        got = d.evaluate(subs) if isinstance(d, Poly) else d
        assert got == want


class TestGenInverse:
    def test_penrose_on_rank_deficient(self, rng):
        for _ in range(15):
            n, m, r = rng.randint(1, 4), rng.randint(1, 4), 0
            B = frac_matrix(rng, n, rng.randint(1, min(n, m)))
            C = frac_matrix(rng, B.cols, m)
            A = B * C
            P = mx.gen_inverse(A)
            assert A * P * A == A
            assert P * A * P == P
            assert mx.transpose(A * P) == A * P
            assert mx.transpose(P * A) == P * A

    def test_rejects_symbolic(self):
        A = MatrixValue([[Poly.variable("x")]])
        with pytest.raises(UnsupportedCarrier):
            mx.gen_inverse(A)


class TestLSU:
    def test_contract(self, rng):
        for _ in range(25):
            n = rng.randint(1, 6)
            A = rand_matrix(rng, n, density=0.8)
            f = mx.lsu_factorization(A)
            assert f.L * f.S * f.U == A.map(Fraction)
            P = f.pseudo_inverse
            assert A * P * A == A.map(Fraction)
            assert P * A * P == P
            if mx.det(A) != 0:
                assert P * A == MatrixValue.identity(n).map(Fraction)
                assert f.det == mx.det(A)

    def test_triangularity(self, rng):
        for _ in range(10):
            A = rand_matrix(rng, 5)
            f = mx.lsu_factorization(A)
            for i in range(5):
                for j in range(5):
                    if j > i:
                        assert f.L[i, j] == 0
                    if j < i:
                        assert f.U[i, j] == 0


class TestBruhat:
    def test_contract(self, rng):
        for _ in range(25):
            n = rng.randint(1, 6)
            A = rand_matrix(rng, n, density=0.8)
            f = mx.bruhat_decomposition(A)
            assert f.V * f.w * f.U == A.map(Fraction)
            for i in range(n):
                for j in range(i):
                    assert f.V[i, j] == 0
                    assert f.U[i, j] == 0
            # w is a permutation matrix scaled by nonzero entries
            for i in range(n):
                nz = [j for j in range(n) if f.w[i, j] != 0]
                assert len(nz) <= 1


class TestSimplex:
    def test_known_optimum(self):
        # max x + y st x <= 2, y <= 3, x + y <= 4
        A = MatrixValue([[1, 0], [0, 1], [1, 1]])
        b = MatrixValue.column([2, 3, 4])
        c = MatrixValue.column([1, 1])
        out = mx.simplex("max", A, b, c)
        assert out.status == "optimal" and out.optimum == 4

    def test_infeasible(self):
        A = MatrixValue([[1], [-1]])
        b = MatrixValue.column([-2, -2])
        c = MatrixValue.column([1])
        assert mx.simplex("max", A, b, c).status == "infeasible"

    def test_unbounded(self):
        A = MatrixValue([[-1]])
        b = MatrixValue.column([0])
        c = MatrixValue.column([1])
        assert mx.simplex("max", A, b, c).status == "unbounded"

    def test_vs_brute_force(self, rng):
        for _ in range(25):
            nvars = rng.randint(1, 3)
            ncons = rng.randint(1, 5)
            A = [[Fraction(rng.randint(-4, 4)) for _ in range(nvars)]
                 for _ in range(ncons)]
            b = [Fraction(rng.randint(-4, 8)) for _ in range(ncons)]
            c = [Fraction(rng.randint(-4, 4)) for _ in range(nvars)]
            direction = rng.choice(["max", "min"])
            got = mx.simplex(direction, MatrixValue(A),
                             MatrixValue.column(b), MatrixValue.column(c))
            want_status, want_val = brute_force_lp(direction, A, b, c)
            assert got.status == want_status
            if want_status == "optimal":
                assert got.optimum == want_val
                point = got.point.column_values()
                assert all(sum(r[j] * point[j] for j in range(nvars)) <= bi
                           for r, bi in zip(A, b))
