"""Linear constant-coefficient ODE systems solved by the Laplace transform.

Forcing terms and solutions live in the class  c * t^k * e^{a t} * {1, cos bt,
sin bt}; the class is closed under the transform, differentiation, and the
inverse transform, which keeps the whole pipeline exact whenever the poles of
the transformed system are rational or Gaussian-rational.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import matrix as matrix_mod
from .errors import (
    DomainError,
    DuplicateCondition,
    ImproperFraction,
    IncompleteConditions,
    NonzeroPoint,
    Singular,
    SingularSystem,
    UnsupportedRHS,
)
from .domains import Complex
from .polynomial import Poly, RationalFunction, aberth_roots, _rational_roots_with_mult


def _num(x):
    """Coerce a coefficient to Fraction when possible, float otherwise."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, float):
        return x
    raise UnsupportedRHS(f"unsupported coefficient {x!r}")


@dataclass(frozen=True)
class ForcingTerm:
    """c * t^k * e^{a t} * trig(b t), trig in {none, cos, sin}."""
    c: object
    k: int = 0
    a: object = Fraction(0)
    trig: str = "none"
    b: object = Fraction(0)

    def key(self):
        return (self.k, self.a, self.trig, self.b)

    def value(self, t):
        v = float(self.c) * t ** self.k * math.exp(float(self.a) * t)
        if self.trig == "cos":
            v *= math.cos(float(self.b) * t)
        elif self.trig == "sin":
            v *= math.sin(float(self.b) * t)
        return v

    def diff_terms(self):
        out = []
        if self.k:
            out.append(ForcingTerm(self.c * self.k, self.k - 1, self.a, self.trig, self.b))
        if self.a:
            out.append(ForcingTerm(self.c * self.a, self.k, self.a, self.trig, self.b))
        if self.trig == "cos" and self.b:
            out.append(ForcingTerm(-self.c * self.b, self.k, self.a, "sin", self.b))
        elif self.trig == "sin" and self.b:
            out.append(ForcingTerm(self.c * self.b, self.k, self.a, "cos", self.b))
        return out


class TimeExpression:
    """Canonicalized sum of ForcingTerms."""

    def __init__(self, terms=()):
        merged = {}
        for t in terms:
            key = t.key()
            merged[key] = merged.get(key, 0) + t.c
        self.terms = tuple(
            ForcingTerm(c, k, a, trig, b)
            for (k, a, trig, b), c in sorted(
                merged.items(), key=lambda kv: (kv[0][0], str(kv[0][1]), kv[0][2], str(kv[0][3])))
            if c != 0)

    @classmethod
    def constant(cls, c):
        return cls([ForcingTerm(_num(c))])

    @classmethod
    def zero(cls):
        return cls([])

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        return TimeExpression(self.terms + other.terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return TimeExpression([ForcingTerm(t.c * c, t.k, t.a, t.trig, t.b)
                               for t in self.terms])

    def diff(self):
        out = []
        for t in self.terms:
            out.extend(t.diff_terms())
        return TimeExpression(out)

    def value(self, t):
        return sum(term.value(t) for term in self.terms)

    def value_at_zero(self):
        acc = 0
        for t in self.terms:
            if t.k == 0 and t.trig != "sin":
                acc += t.c
        return acc

    def __eq__(self, other):
        return isinstance(other, TimeExpression) and self.terms == other.terms

    def __repr__(self):
        return f"TimeExpression({list(self.terms)!r})"

    def __str__(self):
        from .syntax import render_value
        return render_value(self, "plain")


@dataclass(frozen=True)
class DerivativeTerm:
    func: str
    var: str
    order: int = 1
    point: object = None


class LDESystem:
    """Equations sum(coeff * d^k f) = forcing, constant rational coefficients."""

    def __init__(self, unknowns, var, equations):
        self.unknowns = tuple(unknowns)
        self.var = var
        self.equations = list(equations)   # ({(func, order): coeff}, TimeExpression)

    def max_order(self, func):
        top = 0
        for lhs, _ in self.equations:
            for (f, k) in lhs:
                if f == func:
                    top = max(top, k)
        return top

    def __repr__(self):
        return f"LDESystem(unknowns={self.unknowns}, var={self.var!r})"

    def __str__(self):
        from .syntax import render_value
        return render_value(self, "plain")


class InitialConditions:
    def __init__(self, values):
        self.values = {}
        for (func, order), v in values:
            if (func, order) in self.values:
                raise DuplicateCondition(f"condition on d^{order} {func} given twice")
            self.values[(func, order)] = _num(v)

    def get(self, func, order):
        return self.values.get((func, order))

    def __repr__(self):
        return f"InitialConditions({self.values!r})"

    def __str__(self):
        from .syntax import render_value
        return render_value(self, "plain")


class LDESolution:
    def __init__(self, var, components):
        self.var = var
        self.components = dict(components)   # func -> TimeExpression

    def value(self, func, t):
        return self.components[func].value(t)

    def __repr__(self):
        return f"LDESolution({self.components!r})"

    def __str__(self):
        from .syntax import render_value
        return render_value(self, "plain")


def make_system(equations, var="t"):
    """Build an LDESystem from ({(func, order): coeff}, TimeExpression) pairs."""
    unknowns = []
    for lhs, rhs in equations:
        if rhs is not None and not isinstance(rhs, TimeExpression):
            raise UnsupportedRHS("right-hand side outside the supported class")
        for (f, _k), c in lhs.items():
            _num(c)
            if f not in unknowns:
                unknowns.append(f)
    eqs = [(dict(lhs), rhs if rhs is not None else TimeExpression.zero())
           for lhs, rhs in equations]
    return LDESystem(unknowns, var, eqs)


def make_conditions(conditions):
    """conditions: iterable of (DerivativeTerm, value)."""
    pairs = []
    for term, value in conditions:
        if term.point not in (0, Fraction(0)):
            raise NonzeroPoint("initial conditions are only supported at 0")
        pairs.append(((term.func, term.order), value))
    return InitialConditions(pairs)


# -- forward transform --------------------------------------------------------

_S = "s"


def _s_poly(coeffs):
    """Dense coefficient list (low to high) -> Poly in s."""
    return Poly((_S,), {(i,): Fraction(c) for i, c in enumerate(coeffs) if c != 0})


def laplace_transform(expr):
    """Transform of a TimeExpression: an exact RationalFunction in s."""
    if isinstance(expr, ForcingTerm):
        expr = TimeExpression([expr])
    total = RationalFunction.from_poly(_s_poly([0]))
    for t in expr.terms:
        a = Fraction(t.a)
        b = Fraction(t.b)
        if t.trig == "none":
            base = RationalFunction(_s_poly([1]), _s_poly([-a, 1]))
        elif t.trig == "cos":
            base = RationalFunction(_s_poly([-a, 1]), _s_poly([a * a + b * b, -2 * a, 1]))
        elif t.trig == "sin":
            base = RationalFunction(_s_poly([b]), _s_poly([a * a + b * b, -2 * a, 1]))
        else:
            raise UnsupportedRHS(f"unknown oscillator {t.trig}")
        for _ in range(t.k):
            base = -base.diff(_S)
        total = total + base * Fraction(t.c)
    return total


def transform_derivative(order, func_symbol, initial_values):
    """s^k F - s^{k-1} f(0) - ... - f^{(k-1)}(0), the shifted derivative rule.

    Returns (Poly multiplier of F, RationalFunction constant part).
    """
    mult = Poly((_S,), {(order,): Fraction(1)})
    const = _s_poly([0])
    for j in range(order):
        const = const - Poly((_S,), {(order - 1 - j,): Fraction(initial_values[j])})
    return mult, RationalFunction.from_poly(const)


# -- inverse transform --------------------------------------------------------

def _poly_coeffs(p):
    """Univariate Poly in s -> dense Fraction list, low to high."""
    if p.is_zero_element():
        return [Fraction(0)]
    deg = p.degree(_S)
    out = [Fraction(0)] * (deg + 1)
    for exps, c in p.terms.items():
        idx = exps[p.vars.index(_S)] if _S in p.vars else 0
        out[idx] += Fraction(c)
    return out


def _dense_div(a, b):
    """Dense univariate division over Q: (quotient, remainder), low to high."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    while b and b[-1] == 0:
        b.pop()
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = a[:]
    while len(r) >= len(b) and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(b):
            break
        shift = len(r) - len(b)
        c = r[-1] / b[-1]
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
    while r and r[-1] == 0:
        r.pop()
    return q, r


def _dense_gcd(a, b):
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    while any(b):
        _, r = _dense_div(a, b)
        a, b = b, r if r else [Fraction(0)]
    if not any(a):
        return [Fraction(1)]
    lead = a[-1]
    return [x / lead for x in a]


def _dense_diff(a):
    return [Fraction(i) * c for i, c in enumerate(a)][1:] or [Fraction(0)]


def _squarefree_factors(coeffs):
    """Yun's algorithm: [(squarefree factor, multiplicity)] over Q."""
    a = [Fraction(x) for x in coeffs]
    out = []
    g = _dense_gcd(a, _dense_diff(a))
    if len(g) == 1:
        return [(a, 1)]
    w, _ = _dense_div(a, g)
    y, _ = _dense_div(_dense_diff(a), g)
    m = 1
    while len(w) > 1:
        dw = _dense_diff(w)
        width = max(len(y), len(dw))
        z = [(y[i] if i < len(y) else Fraction(0)) - (dw[i] if i < len(dw) else Fraction(0))
             for i in range(width)]
        while z and z[-1] == 0:
            z.pop()
        if not z:
            z = [Fraction(0)]
        g = _dense_gcd(w, z)
        if len(g) > 1:
            out.append((g, m))
        w, _ = _dense_div(w, g)
        y, _ = _dense_div(z, g)
        m += 1
    return out


def _roots_of_squarefree(coeffs):
    """Roots of a square-free polynomial over Q: (roots, exact)."""
    rational, rest = _rational_roots_with_mult(list(coeffs))
    roots = [Fraction(r) for r in rational]
    deg_rest = len(rest) - 1
    if deg_rest == 0:
        return roots, True
    if deg_rest == 2:
        c0, c1, c2 = (Fraction(x) for x in rest)
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            root = _fraction_sqrt(-disc)
            if root is not None:
                re = -c1 / (2 * c2)
                im = abs(root / (2 * c2))
                return roots + [Complex(re, im), Complex(re, -im)], True
    numeric = []
    for z in aberth_roots([complex(c) for c in rest]):
        if abs(z.imag) < 1e-9:
            z = complex(z.real, 0.0)
        numeric.append(z)
    # snap conjugate pairs exactly together
    for i, z in enumerate(numeric):
        if z.imag < 0:
            for q in numeric:
                if q.imag > 0 and abs(q.conjugate() - z) < 1e-6:
                    numeric[i] = q.conjugate()
                    break
    return roots + numeric, False


def _find_poles(den_coeffs):
    """Return (poles, exact) where poles is a list of (pole, multiplicity).

    Square-free decomposition first, so numeric root finding only ever sees
    simple roots; exact poles are Fractions or Gaussian-rational Complex.
    """
    poles = []
    exact = True
    for factor, mult in _squarefree_factors(den_coeffs):
        roots, factor_exact = _roots_of_squarefree(factor)
        exact = exact and factor_exact
        poles.extend((r, mult) for r in roots)
    return poles, exact


def _fraction_sqrt(q):
    q = Fraction(q)
    n = math.isqrt(q.numerator)
    d = math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _lift(x, exact):
    if exact:
        if isinstance(x, Complex):
            return x
        return Complex(Fraction(x), Fraction(0))
    if isinstance(x, Complex):
        return complex(float(x.re), float(x.im))
    return complex(x)


def _taylor_at(coeffs, p, count, exact):
    """First `count` Taylor coefficients of the polynomial at the point p."""
    work = [_lift(c, exact) for c in coeffs]
    point = _lift(p, exact)
    out = []
    for _ in range(count):
        # synthetic division by (s - p): remainder is the value, quotient shifts
        rem = work[-1]
        quo = [rem]
        for c in reversed(work[:-1]):
            rem = rem * point + c
            quo.append(rem)
        out.append(rem)
        work = list(reversed(quo[:-1]))
        if not work:
            work = [_lift(0, exact)]
    return out


def _series_div(num, den, count):
    """Leading `count` coefficients of num/den as formal power series."""
    out = []
    num = list(num) + [num[0] * 0] * count
    for i in range(count):
        c = num[i] / den[0]
        out.append(c)
        for j in range(1, min(len(den), count - i)):
            num[i + j] = num[i + j] - c * den[j]
    return out


def inverse_laplace(F):
    """Partial fractions + table inversion of a proper rational function."""
    if isinstance(F, Poly):
        F = RationalFunction.from_poly(F)
    num = _poly_coeffs(F.num)
    den = _poly_coeffs(F.den)
    if F.num.is_zero_element():
        return TimeExpression.zero()
    if len(num) >= len(den):
        raise ImproperFraction("numerator degree must be below denominator degree")
    poles, exact = _find_poles(den)
    terms = []
    seen_conjugates = set()
    for p, m in poles:
        im = p.im if isinstance(p, Complex) else (p.imag if isinstance(p, complex) else 0)
        re = p.re if isinstance(p, Complex) else (p.real if isinstance(p, complex) else p)
        if im:
            if isinstance(p, Complex):
                conj_key = (str(re), str(abs(im)))
            else:
                conj_key = (round(re, 7), round(abs(im), 7))
            if conj_key in seen_conjugates:
                continue
            seen_conjugates.add(conj_key)
        # deflate the denominator by (s - p)^m
        dwork = [_lift(c, exact) for c in den]
        point = _lift(p, exact)
        for _ in range(m):
            quo = []
            rem = dwork[-1]
            for c in reversed(dwork[:-1]):
                quo.append(rem)
                rem = rem * point + c
            dwork = list(reversed(quo))
        n_taylor = _taylor_at(num, p, m, exact)
        d_taylor = _taylor_at(dwork, p, m, exact)
        coeffs = _series_div(n_taylor, d_taylor, m)
        for j, cj in enumerate(coeffs):
            # Taylor coefficient h_j pairs with (s-p)^{m-j}: h/(s-p)^{q+1} -> h t^q e^{pt}/q!
            power = m - j
            tdeg = power - 1
            scale = Fraction(1, math.factorial(tdeg))
            if not im:
                c_real = cj.re if isinstance(cj, Complex) else cj.real
                a_val = re if exact else float(re)
                terms.append(ForcingTerm(c_real * scale, tdeg, a_val))
            else:
                c_re = cj.re if isinstance(cj, Complex) else cj.real
                c_im = cj.im if isinstance(cj, Complex) else cj.imag
                b_val = abs(im)
                sign = 1 if (im > 0) else -1
                # pole a+ib plus its conjugate: 2 Re[c e^{(a+ib)t}]
                terms.append(ForcingTerm(2 * c_re * scale, tdeg, re, "cos", b_val))
                terms.append(ForcingTerm(-2 * sign * c_im * scale, tdeg, re, "sin", b_val))
    return TimeExpression(terms)


# -- the solver ---------------------------------------------------------------

def solve_lde(system, conditions):
    unknowns = system.unknowns
    if not unknowns:
        raise DomainError("empty system")
    ic = {}
    for f in unknowns:
        top = system.max_order(f)
        vals = []
        for j in range(top):
            v = conditions.get(f, j)
            if v is None:
                raise IncompleteConditions(
                    f"missing initial value for derivative {j} of {f}")
            vals.append(v)
        ic[f] = vals
    for (f, order) in conditions.values:
        if f not in unknowns or order >= system.max_order(f):
            raise IncompleteConditions(
                f"condition on derivative {order} of {f} does not match the system")
    n = len(unknowns)
    zero_rf = RationalFunction.from_poly(_s_poly([0]))
    A = [[Poly.const(Fraction(0), (_S,)) for _ in range(n)] for _ in range(n)]
    rhs = []
    if len(system.equations) != n:
        raise SingularSystem(
            f"{len(system.equations)} equations for {n} unknowns")
    for i, (lhs, forcing) in enumerate(system.equations):
        b = laplace_transform(forcing)
        for (f, order), coeff in lhs.items():
            j = unknowns.index(f)
            mult, const = transform_derivative(order, f, ic[f])
            A[i][j] = A[i][j] + mult * Fraction(coeff)
            b = b - const * Fraction(coeff)
        rhs.append(b)
    Am = matrix_mod.MatrixValue(A)
    bm = matrix_mod.MatrixValue.column(rhs)
    try:
        X = matrix_mod.inverse(Am) * bm.map(
            lambda r: r if isinstance(r, RationalFunction) else zero_rf + r)
    except Singular:
        raise SingularSystem("transformed system is singular over Q(s)")
    components = {}
    for f, x in zip(unknowns, X.column_values()):
        if isinstance(x, Poly):
            x = RationalFunction.from_poly(x)
        components[f] = inverse_laplace(x)
    return LDESolution(system.var, components)


def verify_solution(system, conditions, solution, tol=None):
    """Symbolic check: residual of each equation is the zero TimeExpression
    (exact) or has terms below tol (numeric poles)."""
    derivs = {}
    for f in system.unknowns:
        expr = solution.components[f]
        ladder = [expr]
        for _ in range(system.max_order(f)):
            ladder.append(ladder[-1].diff())
        derivs[f] = ladder
    for lhs, forcing in system.equations:
        residual = forcing.scale(-1)
        for (f, order), coeff in lhs.items():
            residual = residual + derivs[f][order].scale(coeff)
        if tol is None:
            if not residual.is_zero():
                return False
        else:
            # float-keyed and exact-keyed terms never merge, so sample instead
            if any(abs(residual.value(t)) > tol for t in
                   (0.0, 0.17, 0.51, 0.93, 1.38, 1.77)):
                return False
    for (f, order), value in conditions.values.items():
        v = derivs[f][order].value_at_zero()
        if tol is None:
            if v != value:
                return False
        else:
            if abs(float(v) - float(value)) > tol:
                return False
    return True
