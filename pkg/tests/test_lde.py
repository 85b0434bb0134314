"""Laplace-method solving of constant-coefficient linear ODE systems."""

import math
from fractions import Fraction

import pytest

from mathpar import lde
from mathpar.errors import (
    DuplicateCondition,
    ImproperFraction,
    IncompleteConditions,
    NonzeroPoint,
    SingularSystem,
)
from mathpar.lde import (
    DerivativeTerm,
    ForcingTerm,
    TimeExpression,
    inverse_laplace,
    laplace_transform,
    make_conditions,
    make_system,
    solve_lde,
    verify_solution,
)
from mathpar.polynomial import Poly, RationalFunction

from conftest import rk4


def TE(*terms):
    return TimeExpression([ForcingTerm(*t) for t in terms])


def s_poly(coeffs):
    p = Poly.zero(("s",))
    s = Poly.variable("s")
    for k, c in enumerate(coeffs):
        p = p + c * s ** k
    return p


class TestTimeExpression:
    def test_merge(self):
        a = TE((Fraction(1), 0))
        b = TE((Fraction(2), 0))
        assert (a + b) == TE((Fraction(3), 0))

    def test_diff_exp(self):
        e = TE((Fraction(1), 0, Fraction(2)))       # e^{2t}
        assert e.diff() == TE((Fraction(2), 0, Fraction(2)))

    def test_diff_t_cos(self):
        # d/dt [t cos t] = cos t - t sin t
        e = TE((Fraction(1), 1, Fraction(0), "cos", Fraction(1)))
        d = e.diff()
        vals = [d.value(t) for t in (0.3, 1.1)]
        want = [math.cos(t) - t * math.sin(t) for t in (0.3, 1.1)]
        assert all(abs(a - b) < 1e-12 for a, b in zip(vals, want))


class TestLaplaceTable:
    def test_constant(self):
        F = laplace_transform(TE((Fraction(1), 0)))
        assert F == RationalFunction(Poly.const(1, ("s",)), Poly.variable("s"))

    def test_t_power(self):
        # L[t^2] = 2/s^3
        F = laplace_transform(TE((Fraction(1), 2)))
        s = Poly.variable("s")
        assert F == RationalFunction(Poly.const(2, ("s",)), s ** 3)

    def test_exponential(self):
        F = laplace_transform(TE((Fraction(1), 0, Fraction(3))))
        s = Poly.variable("s")
        assert F == RationalFunction(Poly.const(1, ("s",)), s - 3)

    def test_cos_sin(self):
        s = Poly.variable("s")
        Fc = laplace_transform(TE((Fraction(1), 0, Fraction(0), "cos", Fraction(2))))
        assert Fc == RationalFunction(s, s * s + 4)
        Fs = laplace_transform(TE((Fraction(1), 0, Fraction(0), "sin", Fraction(2))))
        assert Fs == RationalFunction(Poly.const(2, ("s",)), s * s + 4)

    def test_round_trip_table(self):
        cases = [
            TE((Fraction(1), 0)),
            TE((Fraction(3), 2)),
            TE((Fraction(1), 0, Fraction(-2))),
            TE((Fraction(1), 1, Fraction(1))),
            TE((Fraction(2), 0, Fraction(0), "cos", Fraction(3))),
            TE((Fraction(1), 0, Fraction(-1), "sin", Fraction(2))),
        ]
        for e in cases:
            assert inverse_laplace(laplace_transform(e)) == e

    def test_round_trip_random_combination(self, rng):
        for _ in range(10):
            terms = []
            for _ in range(rng.randint(1, 3)):
                terms.append(ForcingTerm(
                    Fraction(rng.randint(1, 5)), rng.randint(0, 2),
                    Fraction(rng.randint(-2, 2))))
            e = TimeExpression(terms)
            assert inverse_laplace(laplace_transform(e)) == e


class TestInverseLaplace:
    def test_one_over_s_squared_is_t(self):
        s = Poly.variable("s")
        assert inverse_laplace(RationalFunction(Poly.const(1, ("s",)), s * s)) \
            == TE((Fraction(1), 1))

    def test_improper_rejected(self):
        s = Poly.variable("s")
        with pytest.raises(ImproperFraction):
            inverse_laplace(RationalFunction(s * s, s + 1))

    def test_repeated_complex_pair(self):
        # 1/(s^2+1)^2 = (sin t - t cos t)/2
        s = Poly.variable("s")
        F = RationalFunction(Poly.const(1, ("s",)), (s * s + 1) ** 2)
        e = inverse_laplace(F)
        for t in (0.2, 0.7, 1.9):
            want = (math.sin(t) - t * math.cos(t)) / 2
            assert abs(e.value(t) - want) < 1e-9


class TestSystemBuilding:
    def test_duplicate_condition(self):
        with pytest.raises(DuplicateCondition):
            make_conditions([
                (DerivativeTerm("x", "t", 0, Fraction(0)), Fraction(0)),
                (DerivativeTerm("x", "t", 0, Fraction(0)), Fraction(1)),
            ])

    def test_nonzero_point(self):
        with pytest.raises(NonzeroPoint):
            make_conditions([
                (DerivativeTerm("x", "t", 0, Fraction(1)), Fraction(0))])

    def test_incomplete_conditions(self):
        system = make_system([({("x", 1): Fraction(1)}, TimeExpression.zero())])
        with pytest.raises(IncompleteConditions):
            solve_lde(system, make_conditions([]))

    def test_singular_system(self):
        # x' + y' = 0 and x' + y' = 1 is inconsistent
        eqs = [({("x", 1): Fraction(1), ("y", 1): Fraction(1)},
                TimeExpression.zero()),
               ({("x", 1): Fraction(1), ("y", 1): Fraction(1)},
                TimeExpression.constant(Fraction(1)))]
        system = make_system(eqs)
        conds = make_conditions([
            (DerivativeTerm("x", "t", 0, Fraction(0)), Fraction(0)),
            (DerivativeTerm("y", "t", 0, Fraction(0)), Fraction(0))])
        with pytest.raises(SingularSystem):
            solve_lde(system, conds)


class TestSolve:
    def paper_system(self):
        eqs = [
            ({("y", 1): Fraction(1), ("x", 1): Fraction(1),
              ("x", 0): Fraction(-1)},
             TE((Fraction(1), 0, Fraction(1)))),                 # e^t
            ({("y", 1): Fraction(2), ("x", 1): Fraction(1),
              ("x", 0): Fraction(2)},
             TE((Fraction(1), 0, Fraction(0), "cos", Fraction(1)))),  # cos t
        ]
        system = make_system(eqs)
        conds = make_conditions([
            (DerivativeTerm("x", "t", 0, Fraction(0)), Fraction(0)),
            (DerivativeTerm("y", "t", 0, Fraction(0)), Fraction(0))])
        return system, conds

    def test_paper_system_vs_rk4(self):
        system, conds = self.paper_system()
        sol = solve_lde(system, conds)
        assert verify_solution(system, conds, sol)

        # x' = 4x + 2e^t - cos t ; y' = -3x + cos t - e^t
        def f(t, v):
            xv = v[0]
            return [4 * xv + 2 * math.exp(t) - math.cos(t),
                    -3 * xv + math.cos(t) - math.exp(t)]

        for t_end in (0.1, 0.5, 1.0, 2.0):
            want = rk4(f, [0.0, 0.0], t_end, 4000)
            got = [sol.components["x"].value(t_end),
                   sol.components["y"].value(t_end)]
            for g, w in zip(got, want):
                assert abs(g - w) <= 1e-8 * max(1.0, abs(w))

    def test_single_equation_decay(self):
        # x' + x = 0, x(0)=1 -> e^{-t}
        system = make_system([({("x", 1): Fraction(1), ("x", 0): Fraction(1)},
                               TimeExpression.zero())])
        conds = make_conditions([
            (DerivativeTerm("x", "t", 0, Fraction(0)), Fraction(1))])
        sol = solve_lde(system, conds)
        assert sol.components["x"] == TE((Fraction(1), 0, Fraction(-1)))

    def test_second_order_oscillator(self):
        # x'' + x = 0, x(0)=0, x'(0)=1 -> sin t
        system = make_system([({("x", 2): Fraction(1), ("x", 0): Fraction(1)},
                               TimeExpression.zero())])
        conds = make_conditions([
            (DerivativeTerm("x", "t", 0, Fraction(0)), Fraction(0)),
            (DerivativeTerm("x", "t", 1, Fraction(0)), Fraction(1))])
        sol = solve_lde(system, conds)
        assert sol.components["x"] == TE(
            (Fraction(1), 0, Fraction(0), "sin", Fraction(1)))

    def test_random_first_order_systems_vs_rk4(self, rng):
        for _ in range(8):
            n = rng.randint(1, 3)
            A = [[Fraction(rng.randint(-2, 2)) for _ in range(n)]
                 for _ in range(n)]
            forcing = []
            for _ in range(n):
                forcing.append(TE((Fraction(rng.randint(-3, 3)), 0,
                                   Fraction(rng.randint(-1, 1)))))
            eqs = []
            for i in range(n):
                coeffs = {(f"x{j}", 0): -A[i][j] for j in range(n)}
                coeffs[(f"x{i}", 1)] = Fraction(1)
                eqs.append((coeffs, forcing[i]))
            system = make_system(eqs)
            x0 = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
            conds = make_conditions([
                (DerivativeTerm(f"x{i}", "t", 0, Fraction(0)), x0[i])
                for i in range(n)])
            sol = solve_lde(system, conds)
            assert verify_solution(system, conds, sol, tol=1e-8)

            def f(t, v, A=A, forcing=forcing):
                return [sum(float(A[i][j]) * v[j] for j in range(len(v)))
                        + forcing[i].value(t) for i in range(len(v))]

            want = rk4(f, [float(v) for v in x0], 1.0, 4000)
            got = [sol.components[f"x{i}"].value(1.0) for i in range(n)]
            for g, w in zip(got, want):
                assert abs(g - w) <= 1e-7 * max(1.0, abs(w))

    def test_superposition(self):
        def solve_with(forcing):
            system = make_system([({("x", 1): Fraction(1)}, forcing)])
            conds = make_conditions([
                (DerivativeTerm("x", "t", 0, Fraction(0)), Fraction(0))])
            return solve_lde(system, conds).components["x"]

        f1 = TE((Fraction(1), 0))
        f2 = TE((Fraction(1), 0, Fraction(1)))
        combined = solve_with(f1 + f2)
        assert combined == solve_with(f1) + solve_with(f2)
