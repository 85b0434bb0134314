"""Algebraic environments (spaces) and scalar arithmetic for every carrier.

A Space fixes how number literals are read, how arithmetic behaves, and which
comparison semantics apply (exact vs epsilon-thresholded).  Values are plain
Python objects: int, Fraction, float, mpmath.mpf, bool, plus the Mod, Complex,
TropicalScalar and IntervalSet classes.
"""

import math
from fractions import Fraction

import mpmath

from . import tropical
from .errors import (
    BadModulus,
    BadParams,
    DivisionByZero,
    DomainError,
    NonInvertible,
    Overflow,
    UnknownFunction,
    UnknownSpace,
    Unordered,
)

EXACT_SETS = ("Z", "Zp", "Zp32", "Z64", "Q")
APPROX_SETS = ("R", "R64", "R128")
COMPLEX_SETS = ("CZ", "CZp", "CZp32", "CZ64", "CQ", "C", "C64", "C128")
NUMBER_SETS = EXACT_SETS + APPROX_SETS + COMPLEX_SETS + tuple(tropical.ALGEBRAS)

Z64_MIN = -(2 ** 63)
Z64_MAX = 2 ** 63  # exclusive

DEFAULT_CONSTANTS = {
    "MOD": None,
    "MOD32": None,
    "ACCURACY": 20,
    "MachineEpsilonR": 18,
    "MachineEpsilonR64": 12,
}


def _is_probable_prime(n, rounds=30):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    import random as _random
    rng = _random.Random(0xC0FFEE ^ n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Mod:
    """Residue class modulo a fixed odd prime."""

    __slots__ = ("value", "modulus")

    def __init__(self, value, modulus):
        self.value = value % modulus
        self.modulus = modulus

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.modulus != self.modulus:
                raise DomainError("mixed moduli")
            return other
        if isinstance(other, bool):
            return Mod(int(other), self.modulus)
        if isinstance(other, int):
            return Mod(other, self.modulus)
        if isinstance(other, Fraction):
            inv = pow(other.denominator % self.modulus, -1, self.modulus)
            return Mod(other.numerator * inv, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Mod(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Mod(self.value - other.value, self.modulus)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Mod(other.value - self.value, self.modulus)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Mod(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def inverse(self):
        if self.value == 0:
            raise DivisionByZero(f"0 is not invertible mod {self.modulus}")
        return Mod(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def exact_div(self, other):
        return self.__truediv__(other)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return Mod(pow(self.inverse().value, -n, self.modulus), self.modulus)
        return Mod(pow(self.value, n, self.modulus), self.modulus)

    def __neg__(self):
        return Mod(-self.value, self.modulus)

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.modulus == 0
        if isinstance(other, Fraction):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(("Mod", self.value, self.modulus))

    def __repr__(self):
        return f"Mod({self.value}, {self.modulus})"

    def __str__(self):
        return str(self.value)


class Complex:
    """Complex number with components of any one real carrier."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re
        self.im = im

    def _coerce(self, other):
        if isinstance(other, Complex):
            return other
        if isinstance(other, (int, Fraction, float, mpmath.mpf)):
            return Complex(other, 0 * other if not isinstance(other, int) else 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Complex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Complex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Complex(self.re * other.re - self.im * other.im,
                       self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise DivisionByZero("complex division by zero")
        if isinstance(d, int):
            d = Fraction(d)
        return Complex((self.re * other.re + self.im * other.im) / d,
                       (self.im * other.re - self.re * other.im) / d)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    def exact_div(self, other):
        return self.__truediv__(other)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return Complex(1, 0).__truediv__(self.__pow__(-n))
        out = Complex(1, 0)
        base = self
        e = n
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __neg__(self):
        return Complex(-self.re, -self.im)

    def conjugate(self):
        return Complex(self.re, -self.im)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash(("Complex", self.re, self.im))

    def __abs__(self):
        return math.hypot(float(self.re), float(self.im))

    def __repr__(self):
        return f"Complex({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i" if self.im != 1 else "i"
        sign = "+" if self.im > 0 else "-"
        imag = abs(self.im)
        istr = "i" if imag == 1 else f"{imag}*i"
        return f"{self.re}{sign}{istr}"


class NamedConstant:
    """pi / e / infinity: kept symbolic so special points stay exact."""

    __slots__ = ("name",)

    VALUES = {"pi": math.pi, "e": math.e, "infinity": math.inf}

    def __init__(self, name):
        self.name = name

    def numeric(self, space=None):
        if space is not None and space.number_set in ("R", "R128", "C", "C128"):
            with mpmath.workprec(space.precision_bits):
                if self.name == "pi":
                    return +mpmath.pi
                if self.name == "e":
                    return +mpmath.e
                return mpmath.inf
        return self.VALUES[self.name]

    def __float__(self):
        return float(self.VALUES[self.name])

    def __eq__(self, other):
        if isinstance(other, NamedConstant):
            return self.name == other.name
        return NotImplemented

    def __hash__(self):
        return hash(("NamedConstant", self.name))

    def __repr__(self):
        return f"NamedConstant({self.name})"


PI = NamedConstant("pi")
E = NamedConstant("e")
INFINITY = NamedConstant("infinity")
IMAGINARY_UNIT = Complex(Fraction(0), Fraction(1))


class Space:
    """The active algebraic environment: number set, ranked variables, constants."""

    def __init__(self, number_set, variables=(), constants=None):
        if number_set not in NUMBER_SETS:
            raise UnknownSpace(f"unknown number set {number_set!r}")
        self.number_set = number_set
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise UnknownSpace("variable names must be distinct")
        self.constants = dict(DEFAULT_CONSTANTS)
        if constants:
            self.constants.update(constants)
        if number_set in ("Zp", "CZp"):
            mod = self.constants.get("MOD")
            if not isinstance(mod, int) or mod <= 2 or not _is_probable_prime(mod):
                raise BadModulus(f"MOD must be an odd prime > 2, got {mod!r}")
        if number_set in ("Zp32", "CZp32"):
            mod = self.constants.get("MOD32")
            if (not isinstance(mod, int) or mod <= 2 or mod >= 2 ** 31
                    or not _is_probable_prime(mod)):
                raise BadModulus(f"MOD32 must be a prime in (2, 2^31), got {mod!r}")

    def __repr__(self):
        return f"Space({self.number_set}{list(self.variables)})"

    @property
    def is_tropical(self):
        return self.number_set in tropical.ALGEBRAS

    @property
    def algebra(self):
        return tropical.ALGEBRAS[self.number_set]

    @property
    def is_complex(self):
        return self.number_set in COMPLEX_SETS

    @property
    def base_set(self):
        """The real carrier underlying a complex set, else the set itself."""
        if self.is_complex:
            return self.number_set[1:] if self.number_set.startswith("CZ") or \
                self.number_set == "CQ" else {"C": "R", "C64": "R64", "C128": "R128"}[self.number_set]
        return self.number_set

    @property
    def is_exact(self):
        return self.base_set in EXACT_SETS

    @property
    def is_approx(self):
        return self.base_set in APPROX_SETS

    @property
    def precision_bits(self):
        if self.base_set == "R128":
            return 128
        return max(4, math.ceil(self.constants["ACCURACY"] * math.log2(10)))

    @property
    def epsilon(self):
        """Zero threshold for approximate comparisons."""
        if self.base_set == "R64":
            return Fraction(1, 10 ** self.constants["MachineEpsilonR64"])
        return Fraction(1, 10 ** self.constants["MachineEpsilonR"])

    @property
    def modulus(self):
        if self.base_set == "Zp":
            return self.constants["MOD"]
        if self.base_set == "Zp32":
            return self.constants["MOD32"]
        return None

    def variable_rank(self, name):
        return self.variables.index(name)

    # -- literals -------------------------------------------------------------

    def from_number(self, value):
        """Interpret a raw int/Fraction/float literal in this space."""
        if self.is_tropical:
            return self.algebra.coerce(value)
        base = self.base_set
        if base in ("Z", "Z64"):
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise DomainError(f"{value} is not an integer in {self.number_set}")
                value = value.numerator
            if isinstance(value, float):
                if not value.is_integer():
                    raise DomainError(f"{value} is not an integer in {self.number_set}")
                value = int(value)
            if base == "Z64" and not (Z64_MIN <= value < Z64_MAX):
                raise Overflow(f"{value} exceeds the Z64 range")
            return value
        if base in ("Zp", "Zp32"):
            if isinstance(value, Fraction):
                return Mod(value.numerator, self.modulus) / value.denominator
            return Mod(int(value), self.modulus)
        if base == "Q":
            return Fraction(value)
        if base == "R64":
            out = float(value)
            if math.isinf(out):
                raise Overflow(f"{value} does not fit an R64 double")
            return out
        # R / R128 big floats
        with mpmath.workprec(self.precision_bits):
            if isinstance(value, Fraction):
                return mpmath.mpf(value.numerator) / value.denominator
            return +mpmath.mpf(value)

    def parse_decimal(self, text):
        """Read a decimal literal exactly, then coerce; R64 overflow detected here."""
        if "e" in text.lower() or "." in text:
            return self.from_number(Fraction(text))
        return self.from_number(int(text))


def default_space():
    return Space("R64", ("x", "y", "z", "t"))


def set_space(tag, variables=(), constants=None):
    return Space(tag, variables, constants)


# -- arithmetic ---------------------------------------------------------------

def _numeric(x, space):
    if isinstance(x, NamedConstant):
        v = x.numeric(space)
        if space is not None and space.base_set == "R64" and not space.is_complex:
            return float(v)
        return v
    return x


def _level(x):
    if isinstance(x, bool):
        return 0
    if isinstance(x, int):
        return 1
    if isinstance(x, Fraction):
        return 2
    if isinstance(x, float):
        return 3
    if isinstance(x, mpmath.mpf):
        return 4
    if isinstance(x, Complex):
        return 5
    if isinstance(x, Mod):
        return 6
    if isinstance(x, tropical.TropicalScalar):
        return 7
    return -1


def promote(a, b, space=None):
    """Coerce two scalars to a common carrier (tower Z < Q < R < C; Zp apart)."""
    a = _numeric(a, space)
    b = _numeric(b, space)
    la, lb = _level(a), _level(b)
    if la < 0 or lb < 0:
        raise DomainError(f"not scalar operands: {a!r}, {b!r}")
    if la == 7 or lb == 7:
        if la != lb:
            if space is not None and space.is_tropical:
                if la != 7:
                    a = space.algebra.coerce(a)
                if lb != 7:
                    b = space.algebra.coerce(b)
                return a, b
            raise DomainError("cannot mix tropical and non-tropical values")
        return a, b
    if la == 6 or lb == 6:
        mod = a.modulus if la == 6 else b.modulus
        if la != 6:
            a = Mod(a, mod) if isinstance(a, int) else Mod(0, mod)._coerce(a)
        if lb != 6:
            b = Mod(b, mod) if isinstance(b, int) else Mod(0, mod)._coerce(b)
        return a, b
    if la == 5 or lb == 5:
        ca = a if la == 5 else Complex(a)
        cb = b if lb == 5 else Complex(b)
        return ca, cb
    if la == lb:
        return a, b
    hi = max(la, lb)
    if hi == 4:
        conv = lambda x: x if isinstance(x, mpmath.mpf) else (
            mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x))
        return conv(a), conv(b)
    if hi == 3:
        return float(a), float(b)
    if hi == 2:
        return Fraction(a), Fraction(b)
    return int(a), int(b)


def _check_range(space, value):
    if space is None:
        return value
    if space.base_set == "Z64" and isinstance(value, int) and not isinstance(value, bool):
        if not (Z64_MIN <= value < Z64_MAX):
            raise Overflow(f"Z64 overflow: {value}")
    if space.base_set == "R64" and isinstance(value, float) and math.isinf(value):
        raise Overflow("R64 overflow")
    return value


def arith(op, a, b, space=None):
    """Scalar arithmetic under the active space's rules."""
    a, b = promote(a, b, space)
    if space is not None and any(
            isinstance(x, mpmath.mpf) or
            (isinstance(x, Complex) and isinstance(x.re, mpmath.mpf))
            for x in (a, b)):
        with mpmath.workprec(space.precision_bits):
            return _arith_core(op, a, b, space)
    return _arith_core(op, a, b, space)


def _arith_core(op, a, b, space):
    if op == "+":
        return _check_range(space, a + b)
    if op == "-":
        return _check_range(space, a - b)
    if op == "*":
        return _check_range(space, a * b)
    if op == "/":
        if isinstance(b, tropical.TropicalScalar):
            alg = b.algebra
            inv = alg.otimes_inverse(b.value)
            return a * tropical.TropicalScalar(inv, alg)
        if isinstance(b, (int, Fraction)) and b == 0:
            raise DivisionByZero("division by zero")
        if isinstance(b, float) and b == 0.0:
            raise DivisionByZero("division by zero")
        if isinstance(b, mpmath.mpf) and b == 0:
            raise DivisionByZero("division by zero")
        if isinstance(a, int) and isinstance(b, int):
            if space is not None and space.base_set in ("Z", "Z64"):
                q, r = divmod(a, b)
                if r != 0:
                    raise NonInvertible(f"{a}/{b} is not an integer")
                return _check_range(space, q)
            return Fraction(a, b)
        return _check_range(space, a / b)
    if op == "^":
        if isinstance(a, tropical.TropicalScalar):
            if isinstance(b, tropical.TropicalScalar):
                if isinstance(b.value, int):
                    b = b.value
                else:
                    raise DomainError("tropical exponent must be an integer")
            return a ** b
        if isinstance(b, Fraction) and b.denominator == 1:
            b = b.numerator
        if isinstance(b, float) and b.is_integer():
            b = int(b)
        if isinstance(b, mpmath.mpf) and b == int(b):
            b = int(b)
        if isinstance(b, int):
            if b < 0 and isinstance(a, int):
                if a == 0:
                    raise DivisionByZero("0 to a negative power")
                return Fraction(1, a ** (-b)) if abs(a) != 1 else a ** b
            if b < 0 and isinstance(a, (Fraction, Mod, Complex)):
                return (Fraction(1) / a) ** (-b) if isinstance(a, Fraction) else a ** b
            if isinstance(a, mpmath.mpf) or (isinstance(a, Complex) and
                                             isinstance(a.re, mpmath.mpf)):
                with mpmath.workprec(space.precision_bits if space else 53):
                    return _check_range(space, a ** b)
            try:
                out = a ** b
            except OverflowError:
                raise Overflow("R64 overflow")
            return _check_range(space, out)
        # non-integer exponent: approximate power
        fa, fb = float(a) if not isinstance(a, Complex) else complex(float(a.re), float(a.im)), float(b)
        try:
            out = fa ** fb
        except (OverflowError, ValueError) as exc:
            raise DomainError(str(exc))
        if isinstance(out, complex):
            return Complex(out.real, out.imag)
        return _check_range(space, out)
    raise DomainError(f"unknown arithmetic operator {op!r}")


def negate(a, space=None):
    if isinstance(a, tropical.TropicalScalar):
        # unary minus acts on the carrier value (paper graphs use negative weights)
        return tropical.TropicalScalar(-a.value, a.algebra)
    a = _numeric(a, space)
    return -a


def compare(op, a, b, space=None):
    """Comparison with epsilon-equality in approximate carriers."""
    a, b = promote(a, b, space)
    if isinstance(a, tropical.TropicalScalar):
        if op in ("=", "=="):
            return a == b
        if op in ("!=", "<>"):
            return a != b
        table = {"<": lambda: a.value < b.value, "<=": lambda: a.value <= b.value,
                 ">": lambda: a.value > b.value, ">=": lambda: a.value >= b.value}
        return table[op]()
    if isinstance(a, Mod):
        if op in ("=", "=="):
            return a == b
        if op in ("!=", "<>"):
            return a != b
        raise Unordered("residue classes are unordered")
    eps = space.epsilon if (space is not None and space.is_approx) else 0
    if isinstance(a, Complex):
        da = a - b
        near = (abs(float(da.re)) <= eps and abs(float(da.im)) <= eps) if eps else (da.re == 0 and da.im == 0)
        if op in ("=", "=="):
            return near
        if op in ("!=", "<>"):
            return not near
        raise Unordered("complex numbers admit only = and !=")
    if eps and isinstance(a, (float, mpmath.mpf)) or eps and isinstance(b, (float, mpmath.mpf)):
        diff = a - b
        near = abs(diff) <= float(eps) if isinstance(diff, float) else abs(diff) <= mpmath.mpf(eps.numerator) / eps.denominator
        if op in ("=", "=="):
            return near
        if op in ("!=", "<>"):
            return not near
        if near:
            return op in ("<=", ">=")
    if op in ("=", "=="):
        return a == b
    if op in ("!=", "<>"):
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise DomainError(f"unknown comparison {op!r}")


# -- interval sets ------------------------------------------------------------

NEG_INF = float("-inf")
POS_INF = float("inf")


class IntervalSet:
    """Finite union of disjoint real intervals with open/closed endpoints."""

    __slots__ = ("intervals",)

    def __init__(self, intervals=()):
        self.intervals = self._normalize(intervals)

    @staticmethod
    def _normalize(raw):
        items = []
        for lo, lo_c, hi, hi_c in raw:
            if lo == NEG_INF:
                lo_c = False
            if hi == POS_INF:
                hi_c = False
            if lo > hi or (lo == hi and not (lo_c and hi_c)):
                continue
            items.append((lo, lo_c, hi, hi_c))
        items.sort(key=lambda t: (t[0], not t[1]))
        merged = []
        for iv in items:
            if not merged:
                merged.append(list(iv))
                continue
            cur = merged[-1]
            lo, lo_c, hi, hi_c = iv
            # overlap or touching (one side closed) merges
            if lo < cur[2] or (lo == cur[2] and (lo_c or cur[3])):
                if hi > cur[2] or (hi == cur[2] and hi_c and not cur[3]):
                    cur[2], cur[3] = hi, hi_c
            else:
                merged.append(list(iv))
        return tuple(tuple(iv) for iv in merged)

    @classmethod
    def interval(cls, lo, hi, lo_closed=True, hi_closed=True):
        return cls([(lo, lo_closed, hi, hi_closed)])

    @classmethod
    def empty(cls):
        return cls([])

    @classmethod
    def full_line(cls):
        return cls([(NEG_INF, False, POS_INF, False)])

    def is_empty(self):
        return not self.intervals

    def contains(self, x):
        for lo, lo_c, hi, hi_c in self.intervals:
            if (lo < x or (lo == x and lo_c)) and (x < hi or (x == hi and hi_c)):
                return True
        return False

    def complement(self):
        out = []
        cursor = (NEG_INF, False)
        for lo, lo_c, hi, hi_c in self.intervals:
            out.append((cursor[0], cursor[1], lo, not lo_c))
            cursor = (hi, not hi_c)
        out.append((cursor[0], cursor[1], POS_INF, False))
        return IntervalSet(out)

    def union(self, other):
        return IntervalSet(self.intervals + other.intervals)

    def intersection(self, other):
        out = []
        for a_lo, a_lc, a_hi, a_hc in self.intervals:
            for b_lo, b_lc, b_hi, b_hc in other.intervals:
                if a_lo > b_lo:
                    lo, lo_c = a_lo, a_lc
                elif b_lo > a_lo:
                    lo, lo_c = b_lo, b_lc
                else:
                    lo, lo_c = a_lo, a_lc and b_lc
                if a_hi < b_hi:
                    hi, hi_c = a_hi, a_hc
                elif b_hi < a_hi:
                    hi, hi_c = b_hi, b_hc
                else:
                    hi, hi_c = a_hi, a_hc and b_hc
                out.append((lo, lo_c, hi, hi_c))
        return IntervalSet(out)

    def difference(self, other):
        return self.intersection(other.complement())

    def symmetric_difference(self, other):
        return self.difference(other).union(other.difference(self))

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        return f"IntervalSet({list(self.intervals)})"

    def __str__(self):
        if not self.intervals:
            return "\\emptyset"
        parts = []
        for lo, lo_c, hi, hi_c in self.intervals:
            lb = "[" if lo_c else "("
            rb = "]" if hi_c else ")"
            los = "-\\infty" if lo == NEG_INF else str(lo)
            his = "\\infty" if hi == POS_INF else str(hi)
            parts.append(f"{lb}{los}, {his}{rb}")
        return " \\cup ".join(parts)


def set_ops(op, a, b=None):
    """Dispatch for the subset-algebra operators."""
    if op == "complement":
        return a.complement()
    if op in ("cap", "intersection"):
        return a.intersection(b)
    if op in ("cup", "union"):
        return a.union(b)
    if op in ("setminus", "difference"):
        return a.difference(b)
    if op in ("triangle", "symmdiff"):
        return a.symmetric_difference(b)
    raise DomainError(f"unknown set operator {op!r}")


# -- random objects -----------------------------------------------------------

def random_number(space, rng, bound=100):
    if space.is_tropical:
        return space.algebra.coerce(rng.randint(-bound // 10, bound // 10))
    base = space.base_set
    value = rng.randint(-bound, bound)
    if base in ("Zp", "Zp32"):
        out = Mod(rng.randrange(space.modulus), space.modulus)
    elif base == "Q":
        out = Fraction(value, rng.randint(1, 12))
    elif base in APPROX_SETS:
        out = space.from_number(Fraction(rng.randint(-bound * 100, bound * 100), 100))
    else:
        out = value
    if space.is_complex:
        im = random_number(Space(base, space.variables, space.constants), rng, bound)
        return Complex(out, im)
    return out


def random_polynomial(space, degree, rng, nvars=None, terms=None):
    from .polynomial import Poly
    if degree < 0:
        raise BadParams("degree must be nonnegative")
    variables = space.variables[:nvars] if nvars else space.variables
    if not variables:
        raise BadParams("the space declares no variables")
    nv = len(variables)
    tcount = terms or max(2, degree + 1)
    poly = Poly.zero(variables, space)
    for _ in range(tcount):
        exps = [0] * nv
        total = rng.randint(0, degree)
        for _ in range(total):
            exps[rng.randrange(nv)] += 1
        coeff = random_number(space, rng, 9)
        poly = poly + Poly.term(coeff, tuple(exps), variables, space)
    return poly


def random_matrix(space, rows, cols, rng, entries="number", degree=2):
    from .matrix import MatrixValue
    if rows <= 0 or cols <= 0:
        raise BadParams("matrix dimensions must be positive")
    grid = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            if entries == "polynomial":
                row.append(random_polynomial(space, degree, rng))
            else:
                row.append(random_number(space, rng))
        grid.append(row)
    return MatrixValue(grid)


def random_object(kind, params, seed, space):
    """Deterministic random object constructor; same seed, same object."""
    import random as _random
    rng = _random.Random(seed)
    if kind == "number":
        return random_number(space, rng)
    if kind == "polynomial":
        return random_polynomial(space, params.get("degree", 3), rng,
                                 params.get("nvars"), params.get("terms"))
    if kind == "matrix":
        return random_matrix(space, params.get("rows", 2), params.get("cols", 2),
                             rng, params.get("entries", "number"),
                             params.get("degree", 2))
    raise BadParams(f"unknown random object kind {kind!r}")


# -- elementary functions -----------------------------------------------------

_REAL_FUNCS = {
    "sin": math.sin, "cos": math.cos, "tg": math.tan, "exp": math.exp,
    "ln": math.log, "sqrt": math.sqrt, "abs": abs,
    "arcsin": math.asin, "arccos": math.acos, "arctg": math.atan,
}
_MP_FUNCS = {
    "sin": mpmath.sin, "cos": mpmath.cos, "tg": mpmath.tan, "exp": mpmath.exp,
    "ln": mpmath.log, "sqrt": mpmath.sqrt, "abs": abs,
    "arcsin": mpmath.asin, "arccos": mpmath.acos, "arctg": mpmath.atan,
}


def _exact_special(name, arg):
    """Exact values at exactly-known points; None when not special."""
    if isinstance(arg, NamedConstant):
        if arg.name == "pi":
            return {"sin": 0, "cos": -1, "tg": 0}.get(name)
        if arg.name == "e" and name == "ln":
            return 1
        return None
    if isinstance(arg, (int, Fraction)) and not isinstance(arg, bool):
        if arg == 0:
            return {"sin": 0, "tg": 0, "arcsin": 0, "arctg": 0,
                    "cos": 1, "exp": 1, "sqrt": 0, "abs": 0}.get(name)
        if arg == 1:
            return {"ln": 0, "sqrt": 1, "arccos": 0, "abs": 1}.get(name)
        if name == "abs":
            return abs(arg)
        if name == "sqrt" and arg > 0:
            num, den = Fraction(arg).numerator, Fraction(arg).denominator
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn == num and rd * rd == den:
                return Fraction(rn, rd) if rd != 1 else rn
    return None


def eval_function(name, args, space):
    """Evaluate an elementary function to the space's precision."""
    name = name.lstrip("\\")
    if name not in _REAL_FUNCS:
        raise UnknownFunction(f"unknown function \\{name}")
    if len(args) != 1:
        raise DomainError(f"\\{name} takes one argument")
    arg = args[0]
    special = _exact_special(name, arg)
    if special is not None:
        return special
    arg = _numeric(arg, space)
    if isinstance(arg, Complex):
        z = complex(float(arg.re), float(arg.im))
        import cmath
        table = {"sin": cmath.sin, "cos": cmath.cos, "tg": cmath.tan,
                 "exp": cmath.exp, "ln": cmath.log, "sqrt": cmath.sqrt,
                 "arcsin": cmath.asin, "arccos": cmath.acos, "arctg": cmath.atan,
                 "abs": abs}
        out = table[name](z)
        if isinstance(out, complex):
            return Complex(out.real, out.imag)
        return out
    value = arg
    if name == "ln" and float(value) <= 0:
        if space.is_complex:
            return eval_function(name, [Complex(value)], space)
        raise DomainError("\\ln needs a positive real argument here")
    if name == "sqrt" and float(value) < 0:
        if space.is_complex:
            return eval_function(name, [Complex(value)], space)
        raise DomainError("\\sqrt of a negative number in a real carrier")
    if space.base_set in ("R", "R128", "C", "C128") or isinstance(value, mpmath.mpf):
        with mpmath.workprec(space.precision_bits):
            if isinstance(value, Fraction):
                value = mpmath.mpf(value.numerator) / value.denominator
            return +_MP_FUNCS[name](mpmath.mpf(value) if not isinstance(value, mpmath.mpf) else value)
    try:
        return _REAL_FUNCS[name](float(value))
    except ValueError as exc:
        raise DomainError(str(exc))


def to_float(x):
    """Best-effort float view of any real scalar (plots, oracles)."""
    if isinstance(x, NamedConstant):
        return float(x)
    if isinstance(x, Complex):
        if x.im == 0:
            return float(x.re)
        raise DomainError("complex value has no float form")
    if isinstance(x, tropical.TropicalScalar):
        return float(x.value)
    if isinstance(x, Mod):
        return float(x.value)
    return float(x)
