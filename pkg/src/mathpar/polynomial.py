"""Sparse multivariate polynomials, rational functions, noncommutative words,
Groebner bases, and polynomial-system solving.

A Poly owns an ordered variable tuple (ascending rank: the last variable is
the most significant under lex).  Binary operations align variable tuples on
the fly, so polynomials over different symbol sets mix freely.
"""

import math
from fractions import Fraction

import mpmath

from .errors import (
    DivisionByZero,
    DomainError,
    NoSolution,
    NotZeroDimensional,
    UnsupportedCarrier,
    ZeroPolynomial,
)


def lex_key(exps):
    """Sort key for pure lex: the highest-ranked (last) variable dominates."""
    return tuple(reversed(exps))


def grevlex_key(exps):
    return (sum(exps), tuple(-e for e in exps))


ORDERS = {"lex": lex_key, "grevlex": grevlex_key}


def _merge_vars(a, b):
    if a == b:
        return a
    out = list(a)
    seen = set(a)
    for v in b:
        if v not in seen:
            out.append(v)
            seen.add(v)
    return tuple(out)


class Poly:
    """Sparse multivariate polynomial: {exponent tuple: nonzero coefficient}."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms):
        self.vars = tuple(variables)
        self.terms = {e: c for e, c in terms.items() if not (c == 0)}

    # -- construction ---------------------------------------------------------

    @classmethod
    def zero(cls, variables, space=None):
        return cls(variables, {})

    @classmethod
    def const(cls, value, variables=()):
        if value == 0:
            return cls(variables, {})
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def term(cls, coeff, exps, variables, space=None):
        return cls(variables, {tuple(exps): coeff})

    @classmethod
    def variable(cls, name, variables=None):
        variables = tuple(variables) if variables else (name,)
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: 1})

    # -- basic structure ------------------------------------------------------

    def is_zero_element(self):
        return not self.terms

    def ring_zero(self):
        return Poly(self.vars, {})

    def ring_one(self):
        return Poly.const(1, self.vars)

    def is_constant(self):
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self):
        if not self.terms:
            return 0
        if not self.is_constant():
            raise DomainError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var):
        if var not in self.vars or not self.terms:
            return 0 if self.terms else -1
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def free_vars(self):
        used = set()
        for exps in self.terms:
            for v, e in zip(self.vars, exps):
                if e:
                    used.add(v)
        return used

    def leading(self, key=lex_key):
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        exps = max(self.terms, key=key)
        return exps, self.terms[exps]

    def sorted_terms(self, key=lex_key):
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def with_vars(self, variables):
        """Re-express over a superset/reordering of the variable tuple."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        missing = self.free_vars() - set(variables)
        if missing:
            raise DomainError(f"cannot drop live variables {missing}")
        index = {v: i for i, v in enumerate(variables)}
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.vars, exps):
                if e:
                    new[index[v]] = e
            terms[tuple(new)] = terms.get(tuple(new), 0) + c
        return Poly(variables, terms)

    def _align(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other, self.vars)
        merged = _merge_vars(self.vars, other.vars)
        return self.with_vars(merged), other.with_vars(merged)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (NCValue, RationalFunction)):
            return NotImplemented
        a, b = self._align(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Poly(a.vars, terms)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (NCValue, RationalFunction)):
            return NotImplemented
        if isinstance(other, Poly):
            return self + (-other)
        return self + (-1 * other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (NCValue, RationalFunction)):
            return NotImplemented
        a, b = self._align(other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                prod = c1 * c2
                if e in terms:
                    terms[e] = terms[e] + prod
                else:
                    terms[e] = prod
        return Poly(a.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("polynomial powers take nonnegative integer exponents")
        out = Poly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            if n > 1:
                base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if other.is_constant():
                other = other.constant_value()
            else:
                return RationalFunction(self, other)
        if other == 0:
            raise DivisionByZero("division by zero")
        inv_able = isinstance(other, (Fraction, float, mpmath.mpf)) or hasattr(other, "inverse")
        if isinstance(other, int) and not inv_able:
            return Poly(self.vars, {e: _div_coeff(c, other) for e, c in self.terms.items()})
        return Poly(self.vars, {e: c / other for e, c in self.terms.items()})

    def exact_div(self, other):
        """Exact polynomial division; raises if the quotient leaves the ring."""
        if not isinstance(other, Poly):
            other = Poly.const(other, self.vars)
        a, b = self._align(other)
        q, r = divmod_poly(a, [b])
        if not r.is_zero_element():
            raise DomainError("inexact polynomial division")
        return q[0]

    def __eq__(self, other):
        if isinstance(other, Poly):
            a, b = self._align(other)
            return a.terms == b.terms
        if isinstance(other, (int, Fraction, float)):
            if other == 0:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        merged = self.with_vars(tuple(sorted(self.free_vars())))
        return hash((merged.vars, frozenset(merged.terms.items())))

    # -- calculus and evaluation ---------------------------------------------

    def diff(self, var):
        if var not in self.vars:
            return Poly(self.vars, {})
        i = self.vars.index(var)
        terms = {}
        for exps, c in self.terms.items():
            if exps[i] == 0:
                continue
            new = list(exps)
            new[i] -= 1
            terms[tuple(new)] = c * exps[i]
        return Poly(self.vars, terms)

    def evaluate(self, mapping):
        """Substitute values (scalars or Polys) for variables; Horner-free but fine."""
        out = None
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(self.vars, exps):
                if e == 0:
                    continue
                if v not in mapping:
                    raise DomainError(f"no value supplied for {v}")
                val = mapping[v]
                term = term * (val ** e if not isinstance(val, Poly) else val ** e)
            out = term if out is None else out + term
        if out is None:
            return 0
        return out

    def substitute(self, var, value):
        """Partial substitution of one variable; result may keep other vars."""
        if var not in self.vars:
            return self
        i = self.vars.index(var)
        rest = tuple(v for v in self.vars if v != var)
        out = Poly(rest, {})
        for exps, c in self.terms.items():
            rest_e = tuple(e for j, e in enumerate(exps) if j != i)
            base = Poly(rest, {rest_e: c})
            if exps[i]:
                base = base * (value ** exps[i])
            out = out + base
        return out

    def map_coeffs(self, fn):
        return Poly(self.vars, {e: fn(c) for e, c in self.terms.items()})

    def as_univariate(self, var):
        """View as univariate in var with Poly coefficients: {deg: Poly}."""
        i = self.vars.index(var)
        rest = tuple(v for j, v in enumerate(self.vars) if j != i)
        out = {}
        for exps, c in self.terms.items():
            d = exps[i]
            rest_e = tuple(e for j, e in enumerate(exps) if j != i)
            cur = out.setdefault(d, Poly(rest, {}))
            out[d] = cur + Poly(rest, {rest_e: c})
        return {d: p for d, p in out.items() if not p.is_zero_element()}

    @staticmethod
    def from_univariate(coeffs, var, variables):
        out = Poly(variables, {})
        xv = Poly.variable(var, variables)
        for d, p in coeffs.items():
            out = out + p.with_vars(variables) * xv ** d
        return out

    def univariate_coeff_list(self, var):
        """Dense scalar coefficient list [a0, a1, ...]; requires one live var."""
        live = self.free_vars()
        if live - {var}:
            raise DomainError(f"polynomial is not univariate in {var}: {live}")
        n = self.degree(var)
        out = [0] * (max(n, 0) + 1)
        i = self.vars.index(var)
        for exps, c in self.terms.items():
            out[exps[i]] = c
        return out

    def __repr__(self):
        return f"Poly({self.vars}, {self.terms})"

    def __str__(self):
        from .syntax import render_value
        return render_value(self, "plain")


def _div_coeff(c, k):
    if isinstance(c, int):
        q, r = divmod(c, k)
        if r != 0:
            return Fraction(c, k)
        return q
    return c / k


def poly_from_scalar(value, variables=()):
    return Poly.const(value, variables)


# -- division and gcd ---------------------------------------------------------

def _mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def divmod_poly(f, divisors, key=lex_key):
    """Multivariate division of f by an ordered divisor list.

    Returns (quotients, remainder) with f = sum(q_i d_i) + r and no remainder
    term divisible by any divisor's leading monomial.
    """
    divisors = [d if isinstance(d, Poly) else Poly.const(d, f.vars) for d in divisors]
    merged = f.vars
    for d in divisors:
        merged = _merge_vars(merged, d.vars)
    f = f.with_vars(merged)
    divisors = [d.with_vars(merged) for d in divisors]
    leads = [d.leading(key) for d in divisors]
    quotients = [Poly(merged, {}) for _ in divisors]
    remainder = Poly(merged, {})
    work = f
    while not work.is_zero_element():
        exps, coeff = work.leading(key)
        for i, (dexps, dcoeff) in enumerate(leads):
            if _mono_divides(dexps, exps):
                qe = tuple(a - b for a, b in zip(exps, dexps))
                qc = _field_div(coeff, dcoeff)
                qterm = Poly(merged, {qe: qc})
                quotients[i] = quotients[i] + qterm
                work = work - qterm * divisors[i]
                break
        else:
            tmono = Poly(merged, {exps: coeff})
            remainder = remainder + tmono
            work = work - tmono
    return quotients, remainder


def _field_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
        return Fraction(a, b)
    return a / b


def content_int(p):
    """Integer/rational content of a Poly with int or Fraction coefficients."""
    coeffs = list(p.terms.values())
    if not coeffs:
        return 0
    if all(isinstance(c, int) for c in coeffs):
        g = 0
        for c in coeffs:
            g = math.gcd(g, abs(c))
        return g
    num = 0
    den = 1
    for c in coeffs:
        fc = Fraction(c)
        num = math.gcd(num, abs(fc.numerator))
        den = den * fc.denominator // math.gcd(den, fc.denominator)
    return Fraction(num, den)


def gcd_poly(f, g):
    """GCD over Z, Q, or Zp coefficients, normalized.

    Recursive primitive-PRS: univariate in the highest live variable with
    polynomial coefficients, pseudo-division Euclid on primitive parts.
    """
    if not isinstance(f, Poly) or not isinstance(g, Poly):
        raise DomainError("gcd_poly expects Poly operands")
    sample = next(iter(f.terms.values()), next(iter(g.terms.values()), 0))
    if isinstance(sample, (float, mpmath.mpf)):
        raise UnsupportedCarrier("gcd over approximate coefficients is not defined")
    if f.is_zero_element():
        return _normalize_gcd(g)
    if g.is_zero_element():
        return _normalize_gcd(f)
    f, g = f._align(g)
    live = sorted(f.free_vars() | g.free_vars(), key=lambda v: f.vars.index(v))
    if not live:
        return _scalar_gcd_poly(f, g)
    var = live[-1]
    fu = f.as_univariate(var)
    gu = g.as_univariate(var)
    if f.degree(var) == 0 or g.degree(var) == 0:
        # one operand is free of the main variable: gcd of it and the content
        flat = f if f.degree(var) == 0 else g
        other = g if f.degree(var) == 0 else f
        cont = None
        for p in other.as_univariate(var).values():
            cont = p if cont is None else gcd_poly(cont, p)
        return _normalize_gcd(gcd_poly(flat.substitute(var, Poly.const(0)), cont).with_vars(f.vars))
    fc = _poly_content(fu)
    gc = _poly_content(gu)
    fp = {d: p.exact_div(fc) for d, p in fu.items()}
    gp = {d: p.exact_div(gc) for d, p in gu.items()}
    a, b = (fp, gp) if max(fp) >= max(gp) else (gp, fp)
    while b:
        r = _pseudo_rem(a, b)
        if not r:
            a = b
            break
        rc = _poly_content(r)
        a, b = b, {d: p.exact_div(rc) for d, p in r.items()}
    else:
        pass
    cont_gcd = gcd_poly(fc, gc)
    rest_vars = tuple(v for v in f.vars if v != var)
    prim = Poly.from_univariate({d: p for d, p in a.items()}, var,
                               _merge_vars(rest_vars, (var,)))
    return _normalize_gcd((cont_gcd * prim).with_vars(f.vars))


def _scalar_gcd_poly(f, g):
    a = f.constant_value()
    b = g.constant_value()
    if isinstance(a, int) and isinstance(b, int):
        return Poly.const(math.gcd(a, b), f.vars)
    return Poly.const(1, f.vars)


def _poly_content(univ):
    cont = None
    for p in univ.values():
        cont = p if cont is None else gcd_poly(cont, p)
    return cont


def _pseudo_rem(a, b):
    """Pseudo-remainder of univariate-with-Poly-coefficient dicts."""
    da, db = max(a), max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        # multiply r by lb, subtract lr * x^(dr-db) * b
        r = {d: p * lb for d, p in r.items()}
        for d, p in b.items():
            shifted = d + dr - db
            cur = r.get(shifted)
            val = (cur - lr * p) if cur is not None else -(lr * p)
            if val.is_zero_element():
                r.pop(shifted, None)
            else:
                r[shifted] = val
        r = {d: p for d, p in r.items() if not p.is_zero_element()}
    return r


def _normalize_gcd(p):
    """Positive integer leading coefficient over Z; monic over a field."""
    if p.is_zero_element():
        return p
    _, lc = p.leading()
    if isinstance(lc, int):
        c = content_int(p)
        if c and c != 1:
            p = p.map_coeffs(lambda x: x // c if isinstance(c, int) else x / c)
        _, lc = p.leading()
        if (lc < 0) if isinstance(lc, (int, Fraction)) else False:
            p = -p
        return p
    return p.map_coeffs(lambda x: x / lc)


# -- rational functions -------------------------------------------------------

class RationalFunction:
    """Reduced quotient of two polynomials."""

    __slots__ = ("num", "den")

    def __init__(self, num, den, reduce=True):
        if not isinstance(num, Poly):
            num = Poly.const(num, den.vars if isinstance(den, Poly) else ())
        if not isinstance(den, Poly):
            den = Poly.const(den, num.vars)
        if den.is_zero_element():
            raise DivisionByZero("rational function with zero denominator")
        num, den = num._align(den)
        if reduce and not num.is_zero_element():
            try:
                g = gcd_poly(num, den)
                if not g.is_constant() or g.constant_value() not in (0, 1):
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            except UnsupportedCarrier:
                pass
        _, lc = den.leading()
        if isinstance(lc, (int, Fraction)):
            if lc < 0:
                num, den = -num, -den
            if isinstance(lc, Fraction) or den.is_constant():
                _, lc2 = den.leading()
                if lc2 != 1 and not isinstance(lc2, int):
                    num = num / lc2
                    den = den / lc2
        elif hasattr(lc, "inverse"):
            inv = lc.inverse()
            num = num.map_coeffs(lambda c: c * inv)
            den = den.map_coeffs(lambda c: c * inv)
        self.num = num
        self.den = den

    def is_zero_element(self):
        return self.num.is_zero_element()

    def ring_zero(self):
        return RationalFunction(Poly(self.num.vars, {}), Poly.const(1, self.num.vars), reduce=False)

    def ring_one(self):
        one = Poly.const(1, self.num.vars)
        return RationalFunction(one, one, reduce=False)

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        n = self.num.constant_value()
        d = self.den.constant_value()
        return _field_div(n, d)

    @classmethod
    def from_poly(cls, p):
        return cls(p, Poly.const(1, p.vars), reduce=False)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction.from_poly(other)
        if isinstance(other, NCValue):
            return NotImplemented
        return RationalFunction(Poly.const(other, self.num.vars),
                                Poly.const(1, self.num.vars), reduce=False)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den - other.num * self.den,
                                self.den * other.den)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero_element():
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other.__truediv__(self)

    def exact_div(self, other):
        return self.__truediv__(other)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise DomainError("rational function powers take integer exponents")
        if n < 0:
            return (self.ring_one() / self) ** (-n)
        out = self.ring_one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        return hash(("RationalFunction", self.num, self.den))

    def diff(self, var):
        n = self.num.diff(var) * self.den - self.num * self.den.diff(var)
        return RationalFunction(n, self.den * self.den)

    def evaluate(self, mapping):
        n = self.num.evaluate(mapping)
        d = self.den.evaluate(mapping)
        if d == 0:
            raise DivisionByZero("denominator vanishes at the point")
        return _field_div(n, d) if not isinstance(n, Poly) else n / d

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self):
        from .syntax import render_value
        return render_value(self, "plain")


def diff_value(value, var):
    """Formal derivative for Poly and RationalFunction alike."""
    if isinstance(value, (Poly, RationalFunction)):
        return value.diff(var)
    return Poly((), {})  # constants


# -- noncommutative words -----------------------------------------------------

class NCValue:
    """Sum of noncommutative words, each with a commutative cofactor.

    terms: {tuple of NC symbol names: Poly or scalar coefficient}.  The empty
    word holds the purely commutative part.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        clean = {}
        for word, coeff in terms.items():
            if isinstance(coeff, Poly) and coeff.is_zero_element():
                continue
            if not isinstance(coeff, Poly) and coeff == 0:
                continue
            clean[tuple(word)] = coeff
        self.terms = clean

    @classmethod
    def symbol(cls, name):
        return cls({(name,): 1})

    @classmethod
    def from_commutative(cls, value):
        return cls({(): value})

    def is_zero_element(self):
        return not self.terms

    def is_commutative(self):
        return all(w == () for w in self.terms)

    def commutative_part(self):
        return self.terms.get((), 0)

    def _coerce(self, other):
        if isinstance(other, NCValue):
            return other
        return NCValue.from_commutative(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            if w in out:
                out[w] = out[w] + c
            else:
                out[w] = c
        return NCValue(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return NCValue({w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                if w in out:
                    out[w] = out[w] + c
                else:
                    out[w] = c
        return NCValue(out)

    def __rmul__(self, other):
        # commutative scalars commute past every word
        return self.__mul__(other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("NC powers take nonnegative integer exponents")
        out = NCValue.from_commutative(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[w] == other.terms[w] for w in self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __repr__(self):
        return f"NCValue({self.terms!r})"

    def __str__(self):
        from .syntax import render_value
        return render_value(self, "plain")


# -- Groebner bases -----------------------------------------------------------

def _require_field(polys):
    for p in polys:
        for c in p.terms.values():
            if isinstance(c, (float, mpmath.mpf)):
                raise UnsupportedCarrier("Groebner bases need exact field coefficients")
            if isinstance(c, int) and not isinstance(c, bool):
                continue
    return [p.map_coeffs(lambda c: Fraction(c) if isinstance(c, int) else c)
            for p in polys]


def _monic(p, key):
    _, lc = p.leading(key)
    if hasattr(lc, "inverse"):
        inv = lc.inverse()
        return p.map_coeffs(lambda c: c * inv)
    return p.map_coeffs(lambda c: c / lc)


def _mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def s_polynomial(f, g, key=lex_key):
    f, g = f._align(g)
    ef, cf = f.leading(key)
    eg, cg = g.leading(key)
    lcm = _mono_lcm(ef, eg)
    mf = Poly(f.vars, {tuple(l - e for l, e in zip(lcm, ef)): 1})
    mg = Poly(g.vars, {tuple(l - e for l, e in zip(lcm, eg)): 1})
    return mf * f * _inv_coeff(cf) - mg * g * _inv_coeff(cg)


def _inv_coeff(c):
    if hasattr(c, "inverse"):
        return c.inverse()
    return 1 / Fraction(c) if isinstance(c, int) else 1 / c


def groebner(generators, order="lex"):
    """Reduced Groebner basis by Buchberger with product and chain criteria."""
    key = ORDERS[order]
    basis = [p for p in _require_field(generators) if not p.is_zero_element()]
    if not basis:
        raise DomainError("no nonzero generators")
    merged = basis[0].vars
    for p in basis[1:]:
        merged = _merge_vars(merged, p.vars)
    basis = [_monic(p.with_vars(merged), key) for p in basis]
    # drop duplicates
    uniq = []
    for p in basis:
        if all(p.terms != q.terms for q in uniq):
            uniq.append(p)
    basis = uniq
    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    while pairs:
        # normal strategy: smallest lcm of leading monomials first
        def pair_measure(ij):
            i, j = ij
            return key(_mono_lcm(basis[i].leading(key)[0], basis[j].leading(key)[0]))
        i, j = min(pairs, key=pair_measure)
        pairs.discard((i, j))
        ei = basis[i].leading(key)[0]
        ej = basis[j].leading(key)[0]
        lcm = _mono_lcm(ei, ej)
        # product criterion: coprime leading monomials reduce to zero
        if all(a + b == l for a, b, l in zip(ei, ej, lcm)):
            continue
        s = s_polynomial(basis[i], basis[j], key)
        _, r = divmod_poly(s, basis, key)
        if not r.is_zero_element():
            r = _monic(r, key)
            new_index = len(basis)
            basis.append(r)
            for k in range(new_index):
                pairs.add((k, new_index))
    return _reduce_basis(basis, key)


def _reduce_basis(basis, key):
    # remove generators whose leading monomial another one divides
    leads = [p.leading(key)[0] for p in basis]
    keep = []
    for i, p in enumerate(basis):
        redundant = False
        for j in range(len(basis)):
            if j == i:
                continue
            if _mono_divides(leads[j], leads[i]) and (leads[j] != leads[i] or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(p)
    # fully reduce each survivor against the others
    out = []
    for i, p in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        if others:
            _, r = divmod_poly(p, others, key)
        else:
            r = p
        if not r.is_zero_element():
            out.append(_monic(r, key))
    out.sort(key=lambda p: key(p.leading(key)[0]), reverse=True)
    return out


def reduce_by_gb(g, basis, order="lex"):
    """Remainder of multivariate division of g by the list, in list order."""
    key = ORDERS[order]
    basis = _require_field([b for b in basis if not (isinstance(b, Poly) and b.is_zero_element())])
    if not basis:
        raise DomainError("empty reduction basis")
    g = _require_field([g])[0]
    _, r = divmod_poly(g, basis, key)
    return r


# -- univariate solving -------------------------------------------------------

class QuadraticSurd:
    """Exact a + b*sqrt(r) with rational a, b and a fixed nonsquare radicand."""

    __slots__ = ("a", "b", "r")

    def __init__(self, a, b, r):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.r = Fraction(r)

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if other.r != self.r and other.b != 0 and self.b != 0:
                raise DomainError("mixed radicands")
            r = self.r if self.b != 0 else other.r
            return QuadraticSurd(other.a, other.b, r)
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd(other, 0, self.r)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticSurd(self.a + o.a, self.b + o.b, self.r)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticSurd(self.a - o.a, self.b - o.b, self.r)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.r)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticSurd(self.a * o.a + self.b * o.b * self.r,
                             self.a * o.b + self.b * o.a, self.r)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = o.a * o.a - o.b * o.b * self.r
        if d == 0:
            raise DivisionByZero("division by zero surd")
        conj = QuadraticSurd(o.a, -o.b, self.r)
        n = self * conj
        return QuadraticSurd(n.a / d, n.b / d, self.r)

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __pow__(self, n):
        out = QuadraticSurd(1, 0, self.r)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.a == other.a and self.b == other.b and self.r == other.r
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(("QuadraticSurd", self.a, self.b, self.r))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(float(self.r))

    def __repr__(self):
        return f"QuadraticSurd({self.a}, {self.b}, {self.r})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        core = f"\\sqrt{{{self.r}}}"
        bs = "" if self.b == 1 else ("-" if self.b == -1 else f"{self.b}*")
        if self.a == 0:
            return f"{bs}{core}"
        sign = "+" if self.b > 0 else ""
        return f"{self.a}{sign}{bs}{core}"


class RadicalRoot:
    """A root kept as a radical/numeric pair: exact display, numeric value."""

    __slots__ = ("display", "value")

    def __init__(self, display, value):
        self.display = display
        self.value = value  # complex (python) at high precision

    def __float__(self):
        if abs(self.value.imag) > 1e-12:
            raise DomainError("complex radical has no float form")
        return self.value.real

    def __repr__(self):
        return f"RadicalRoot({self.display})"

    def __str__(self):
        return self.display


class UnresolvedFactor:
    """Reported when an exact-space quintic-or-higher factor resists radicals."""

    __slots__ = ("poly",)

    def __init__(self, poly):
        self.poly = poly

    def __repr__(self):
        return f"UnresolvedFactor({self.poly!r})"

    def __str__(self):
        return f"unresolved factor: {self.poly}"


def aberth_roots(coeffs, precision=53, tol=None):
    """All complex roots of a dense coefficient list [a0..an], an != 0.

    Simultaneous Aberth-Ehrlich iteration; returns python complex values.
    """
    coeffs = [complex(c) if not isinstance(c, complex) else c for c in map(_to_complex, coeffs)]
    while coeffs and abs(coeffs[-1]) == 0:
        coeffs.pop()
    n = len(coeffs) - 1
    if n <= 0:
        return []
    if tol is None:
        tol = 10.0 ** (-max(12, precision // 4))
    an = coeffs[-1]
    radius = 1.0 + max(abs(c / an) for c in coeffs[:-1]) if n else 1.0
    import cmath
    roots = [radius * cmath.exp(2j * math.pi * (k + 0.25) / n) for k in range(n)]
    deriv = [coeffs[k] * k for k in range(1, n + 1)]

    def peval(cs, z):
        out = 0j
        for c in reversed(cs):
            out = out * z + c
        return out

    for _ in range(400):
        moved = 0.0
        for k in range(n):
            z = roots[k]
            pv = peval(coeffs, z)
            if pv == 0:
                continue
            dv = peval(deriv, z)
            if dv == 0:
                roots[k] = z + tol
                moved = max(moved, tol)
                continue
            ratio = pv / dv
            s = sum(1.0 / (z - roots[j]) for j in range(n) if j != k and z != roots[j])
            denom = 1.0 - ratio * s
            step = ratio / denom if denom != 0 else ratio
            roots[k] = z - step
            moved = max(moved, abs(step))
        if moved < tol:
            break
    return roots


def _to_complex(c):
    from .domains import Complex as DComplex
    if isinstance(c, DComplex):
        return complex(float(c.re), float(c.im))
    if isinstance(c, Fraction):
        return complex(c)
    if isinstance(c, mpmath.mpf):
        return complex(float(c), 0.0)
    return complex(c)


def _rational_roots_with_mult(coeffs):
    """All rational roots of an integer coefficient list, with multiplicity."""
    roots = []
    work = list(coeffs)
    # factor out x = 0
    while work and work[0] == 0:
        roots.append(Fraction(0))
        work = work[1:]
    while len(work) > 1:
        found = None
        a0 = abs(work[0].numerator if isinstance(work[0], Fraction) else work[0])
        an = abs(work[-1].numerator if isinstance(work[-1], Fraction) else work[-1])
        den_l = work[-1].denominator if isinstance(work[-1], Fraction) else 1
        num_l = work[0].denominator if isinstance(work[0], Fraction) else 1
        a0 *= num_l
        an *= den_l
        for p in _divisors(a0):
            for q in _divisors(an):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if _eval_dense(work, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        work = _deflate(work, found)
    return roots, work


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _eval_dense(coeffs, x):
    out = 0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _deflate(coeffs, root):
    n = len(coeffs) - 1
    out = [0] * n
    acc = coeffs[n]
    for k in range(n - 1, -1, -1):
        out[k] = acc
        acc = coeffs[k] + acc * root
    return out


def solve_univariate(p, space, var=None):
    """Roots of a univariate polynomial under the active space's carrier."""
    if isinstance(p, Poly):
        if p.is_zero_element():
            raise ZeroPolynomial("cannot solve the zero polynomial")
        live = p.free_vars()
        if var is None:
            if len(live) != 1:
                raise DomainError(f"polynomial is not univariate: {sorted(live)}")
            var = next(iter(live))
        coeffs = p.univariate_coeff_list(var)
    else:
        coeffs = list(p)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        if coeffs and coeffs[0] == 0:
            raise ZeroPolynomial("cannot solve the zero polynomial")
        return []
    if space.is_complex and space.is_approx:
        prec = space.precision_bits
        return [_as_space_complex(r, space) for r in aberth_roots(coeffs, prec)]
    if space.is_approx:
        eps = float(space.epsilon)
        roots = aberth_roots(coeffs, space.precision_bits)
        real = [r.real for r in roots if abs(r.imag) <= max(eps, 1e-9)]
        real.sort()
        # merge conjugate-split duplicates
        out = []
        for r in real:
            if out and abs(out[-1] - r) <= max(eps, 1e-9):
                continue
            out.append(space.from_number(r))
        return out
    # exact carrier: rational roots first, then radicals for low degree
    exact = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
    if not all(isinstance(c, Fraction) for c in exact):
        raise UnsupportedCarrier("exact solving needs rational coefficients")
    rational, rest = _rational_roots_with_mult(exact)
    roots = list(rational)
    deg = len(rest) - 1
    if deg >= 1:
        if deg == 1:
            roots.append(-rest[0] / rest[1])
        elif deg == 2:
            roots.extend(_quadratic_roots(rest))
        elif deg in (3, 4):
            roots.extend(_radical_roots_numeric(rest))
        else:
            roots.append(UnresolvedFactor(Poly.from_univariate(
                {d: Poly.const(c) for d, c in enumerate(rest)}, var or "x", (var or "x",))))
    return roots


def _as_space_complex(z, space):
    from .domains import Complex as DComplex
    base = {"C64": "R64"}.get(space.number_set)
    if base == "R64":
        return DComplex(z.real, z.imag)
    with mpmath.workprec(space.precision_bits):
        return DComplex(mpmath.mpf(z.real), mpmath.mpf(z.imag))


def _quadratic_roots(rest):
    c0, c1, c2 = rest
    disc = c1 * c1 - 4 * c2 * c0
    half = -c1 / (2 * c2)
    if disc == 0:
        return [half, half]
    rn, rd = disc.numerator, disc.denominator
    if rn > 0:
        sn, sd = math.isqrt(rn), math.isqrt(rd)
        if sn * sn == rn and sd * sd == rd:
            s = Fraction(sn, sd) / (2 * c2)
            return [half + s, half - s]
        b = Fraction(1) / (2 * c2)
        return [QuadraticSurd(half, b, disc), QuadraticSurd(half, -b, disc)]
    # complex pair: render as radical roots (exact carrier stays real-only)
    import cmath
    sq = cmath.sqrt(complex(disc))
    a2 = complex(2 * c2)
    return [RadicalRoot(f"{half}+\\frac{{\\sqrt{{{disc}}}}}{{{2 * c2}}}", (-complex(c1) + sq) / a2),
            RadicalRoot(f"{half}-\\frac{{\\sqrt{{{disc}}}}}{{{2 * c2}}}", (-complex(c1) - sq) / a2)]


def _radical_roots_numeric(rest):
    """Cubic/quartic: closed radical display with Cardano/Ferrari numeric values."""
    deg = len(rest) - 1
    roots = aberth_roots(rest, precision=120)
    out = []
    if deg == 3 and rest[1] == 0 and rest[2] == 0:
        # x^3 + c0/c3 = 0: clean cube-root display
        k = -Fraction(rest[0]) / Fraction(rest[3])
        for r in roots:
            if abs(r.imag) < 1e-20:
                out.append(RadicalRoot(f"{{{k}}}^{{1/3}}" if k > 0 else f"-{{{-k}}}^{{1/3}}", r))
            else:
                out.append(RadicalRoot(f"\\omega\\,{{{k}}}^{{1/3}}", r))
        return out
    for r in roots:
        out.append(RadicalRoot(_numeric_display(r), r))
    return out


def _numeric_display(z):
    if abs(z.imag) < 1e-20:
        return f"{z.real:.12g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.12g}{sign}{abs(z.imag):.12g}i"


# -- zero-dimensional systems -------------------------------------------------

def solve_nae(generators, space):
    """All solutions of a zero-dimensional polynomial system, per the space."""
    basis = groebner(generators, "lex")
    if len(basis) == 1 and basis[0].is_constant():
        raise NoSolution("the ideal is the whole ring: no common zeros")
    variables = basis[0].vars
    live = sorted({v for p in basis for v in p.free_vars()},
                  key=lambda v: variables.index(v))
    # zero-dimensionality: every live variable appears as a pure leading power
    for v in live:
        i = variables.index(v)
        ok = False
        for p in basis:
            exps, _ = p.leading()
            if exps[i] > 0 and all(e == 0 for j, e in enumerate(exps) if j != i):
                ok = True
                break
        if not ok:
            raise NotZeroDimensional(f"no pure power of {v} leads any generator")
    solutions = []
    _extend_solution(basis, live, {}, space, solutions)
    return solutions


def _extend_solution(basis, remaining, partial, space, solutions):
    if not remaining:
        solutions.append(dict(partial))
        return
    var = remaining[0]
    substituted = []
    for p in basis:
        q = p
        for v, val in partial.items():
            q = q.substitute(v, val)
        substituted.append(q)
    candidates = [q for q in substituted
                  if not q.is_zero_element() and q.free_vars() == {var}]
    if not candidates:
        raise NotZeroDimensional(f"no univariate eliminant in {var} after substitution")
    eliminant = min(candidates, key=lambda q: q.degree(var))
    coeffs = eliminant.univariate_coeff_list(var)
    roots = _exact_or_numeric_roots(coeffs, space)
    for root in roots:
        nxt = dict(partial)
        nxt[var] = root
        consistent = True
        for q in substituted:
            if q.free_vars() == {var} and not q.is_zero_element():
                if not _root_satisfies(q, var, root, space):
                    consistent = False
                    break
        if consistent:
            _extend_solution(basis, remaining[1:], nxt, space, solutions)


def _exact_or_numeric_roots(coeffs, space):
    if space.is_exact:
        exact = [_surd_to_frac(c) for c in coeffs]
        if any(e is None for e in exact):
            raise DomainError("back-substitution left non-rational coefficients")
        roots = solve_univariate(exact, space)
        usable = []
        for r in roots:
            if isinstance(r, (Fraction, QuadraticSurd)):
                usable.append(r)
            elif isinstance(r, (RadicalRoot, UnresolvedFactor)):
                continue  # numeric refusal in an exact space
        return usable
    return solve_univariate(coeffs, space)


def _surd_to_frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, QuadraticSurd) and c.b == 0:
        return c.a
    return None


def _root_satisfies(q, var, root, space):
    val = q.evaluate({var: root})
    if isinstance(val, Poly):
        val = val.constant_value()
    if space.is_exact and not isinstance(root, RadicalRoot):
        return val == 0
    return abs(_numeric_abs(val)) <= 1e-9


def _numeric_abs(val):
    from .domains import Complex as DComplex
    if isinstance(val, DComplex):
        return abs(val)
    if isinstance(val, QuadraticSurd):
        return abs(float(val))
    return abs(float(val))
