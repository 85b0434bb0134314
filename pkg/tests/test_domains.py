"""Number sets, environment spaces, intervals, randoms, and functions."""

import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mathpar import domains
from mathpar.domains import Complex, IntervalSet, Mod, Space
from mathpar.errors import (
    BadModulus,
    DivisionByZero,
    NonInvertible,
    Overflow,
    UnknownSpace,
    Unordered,
)
from mathpar.tropical import TropicalScalar


class TestSpaces:
    def test_default_space(self):
        sp = domains.default_space()
        assert sp.number_set == "R64"
        assert sp.variables == ("x", "y", "z", "t")

    def test_unknown_tag(self):
        with pytest.raises(UnknownSpace):
            Space("Banana", ())

    def test_zp_requires_modulus(self):
        with pytest.raises(BadModulus):
            Space("Zp", ())
        with pytest.raises(BadModulus):
            Space("Zp", (), {"MOD": 10})
        assert Space("Zp", (), {"MOD": 7}).modulus == 7

    def test_all_scalar_tags_construct(self):
        for tag in ("Z", "Z64", "Q", "R", "R64", "R128",
                    "C", "CZ", "C64", "CZ64", "CQ", "C128"):
            Space(tag, ("x",), {"MOD": 7, "MOD32": 101})

    def test_tropical_tags(self):
        for tag in ("ZMaxPlus", "ZMinPlus", "RMaxPlus", "RMinPlus",
                    "RMaxMult", "RMinMult", "R64MaxPlus", "R64MinPlus",
                    "R64MaxMult", "R64MinMult", "ZMaxMin", "ZMinMax",
                    "ZMaxMult", "ZMinMult", "RMaxMin", "RMinMax",
                    "R64MaxMin", "R64MinMax"):
            sp = Space(tag, ())
            assert sp.is_tropical


class TestArithmetic:
    def test_zp7(self):
        sp = Space("Zp", (), {"MOD": 7})
        a, b = sp.from_number(5), sp.from_number(4)
        assert domains.arith("*", a, b, sp).value == 6

    def test_z_inexact_division(self):
        sp = Space("Z", ())
        with pytest.raises(NonInvertible):
            domains.arith("/", 7, 2, sp)
        assert domains.arith("/", 8, 2, sp) == 4

    def test_q_division_gives_fraction(self):
        sp = Space("Q", ())
        assert domains.arith("/", 7, 2, sp) == Fraction(7, 2)

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            domains.arith("/", 1, 0, Space("Q", ()))

    def test_z64_overflow(self):
        sp = Space("Z64", ())
        with pytest.raises(Overflow):
            domains.arith("*", 2 ** 62, 4, sp)

    def test_r64_overflow(self):
        sp = Space("R64", ())
        with pytest.raises(Overflow):
            domains.arith("^", 10.0, 400, sp)

    def test_r128_huge(self):
        sp = Space("R128", ())
        big = domains.arith("^", sp.from_number(10), 400, sp)
        back = domains.arith("/", big, domains.arith("^", sp.from_number(10), 399, sp), sp)
        assert domains.to_float(back) == 10.0

    def test_tropical_maxplus(self):
        sp = Space("ZMaxPlus", ())
        a, b = sp.from_number(2), sp.from_number(9)
        assert domains.arith("+", a, b, sp).value == 9
        assert domains.arith("*", a, b, sp).value == 11

    def test_tropical_division_is_otimes_inverse(self):
        sp = Space("ZMaxPlus", ())
        a, b = sp.from_number(9), sp.from_number(2)
        assert domains.arith("/", a, b, sp).value == 7

    def test_complex(self):
        sp = Space("CQ", ())
        z = Complex(Fraction(1), Fraction(2))
        w = domains.arith("*", z, z, sp)
        assert (w.re, w.im) == (Fraction(-3), Fraction(4))

    def test_promotion_int_fraction_float(self):
        sp = Space("R64", ())
        assert domains.arith("+", 1, Fraction(1, 2), sp) == 1.5


class TestComparison:
    def test_exact_order(self):
        sp = Space("Q", ())
        assert domains.compare("<", Fraction(1, 3), Fraction(1, 2), sp)
        assert not domains.compare(">=", 1, 2, sp)

    def test_epsilon_equality_in_r64(self):
        sp = Space("R64", ())
        assert domains.compare("==", 0.1 + 0.2, 0.3, sp)

    def test_complex_unordered(self):
        sp = Space("CQ", ())
        with pytest.raises(Unordered):
            domains.compare("<", Complex(Fraction(0), Fraction(1)), 0, sp)


class TestIntervals:
    def test_cap(self):
        a = IntervalSet.interval(1, 5)
        b = IntervalSet.interval(3, 8)
        out = domains.set_ops("cap", a, b)
        assert out == IntervalSet.interval(3, 5)

    def test_cup_disjoint(self):
        a = IntervalSet.interval(0, 1)
        b = IntervalSet.interval(2, 3)
        out = domains.set_ops("cup", a, b)
        assert not out.is_empty()
        assert out != IntervalSet.interval(0, 3)

    def test_setminus(self):
        a = IntervalSet.interval(0, 10)
        b = IntervalSet.interval(2, 3)
        out = domains.set_ops("setminus", a, b)
        inter = domains.set_ops("cap", out, b)
        assert inter.is_empty()

    def test_triangle_symmetric_difference(self):
        a = IntervalSet.interval(0, 4)
        b = IntervalSet.interval(2, 6)
        out = domains.set_ops("triangle", a, b)
        mid = domains.set_ops("cap", out, IntervalSet.interval(2, 4))
        assert mid.is_empty() or mid == IntervalSet.empty()

    def test_empty_identity(self):
        a = IntervalSet.interval(1, 2)
        assert domains.set_ops("cup", a, IntervalSet.empty()) == a
        assert domains.set_ops("cap", a, IntervalSet.empty()).is_empty()


class TestRandomObjects:
    def test_number_in_carrier(self):
        sp = Space("Zp", (), {"MOD": 7})
        rng = random.Random(5)
        for _ in range(20):
            v = domains.random_number(sp, rng)
            assert isinstance(v, Mod) and 0 <= v.value < 7

    def test_polynomial_degree(self):
        sp = Space("Z", ("x", "y"))
        rng = random.Random(1)
        p = domains.random_polynomial(sp, 4, rng)
        assert p.total_degree() <= 4

    def test_matrix_shape(self):
        sp = Space("Q", ())
        m = domains.random_matrix(sp, 3, 2, random.Random(2))
        assert m.rows == 3 and m.cols == 2

    def test_seed_determinism(self):
        sp = Space("Z", ("x",))
        a = domains.random_object("polynomial", {"degree": 3}, 99, sp)
        b = domains.random_object("polynomial", {"degree": 3}, 99, sp)
        assert a == b


class TestFunctions:
    def test_exact_special_points(self):
        sp = Space("Q", ())
        assert domains.eval_function("sin", [domains.PI], sp) == 0
        assert domains.eval_function("cos", [domains.PI], sp) == -1
        assert domains.eval_function("ln", [domains.E], sp) == 1
        assert domains.eval_function("sqrt", [4], sp) == 2
        assert domains.eval_function("exp", [0], sp) == 1

    def test_approximate_values(self):
        sp = Space("R64", ())
        assert abs(domains.eval_function("sin", [1.0], sp) - math.sin(1)) < 1e-15
        assert abs(domains.eval_function("arctg", [1.0], sp) - math.pi / 4) < 1e-15

    def test_r_uses_accuracy(self):
        sp = Space("R", (), {"ACCURACY": 40})
        v = domains.eval_function("sqrt", [sp.from_number(2)], sp)
        assert isinstance(v, mpmath.mpf)
        assert abs(v * v - 2) < mpmath.mpf(10) ** (-35)

    def test_abs(self):
        sp = Space("Q", ())
        assert domains.eval_function("abs", [Fraction(-3, 2)], sp) == Fraction(3, 2)


@settings(max_examples=80, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50))
def test_zp_arith_matches_int_mod(a, b):
    sp = Space("Zp", (), {"MOD": 101})
    ma, mb = sp.from_number(a), sp.from_number(b)
    assert domains.arith("+", ma, mb, sp).value == (a + b) % 101
    assert domains.arith("*", ma, mb, sp).value == (a * b) % 101


@settings(max_examples=60, deadline=None)
@given(st.integers(-20, 20))
def test_tropical_closure_sign(a):
    sp = Space("ZMaxPlus", ())
    from mathpar import tropical
    s = sp.from_number(a)
    if a <= 0:
        assert tropical.closure(s).value == 0
    else:
        from mathpar.errors import DivergentClosure
        with pytest.raises(DivergentClosure):
            tropical.closure(s)
