"""Small helpers that let matrix/polynomial code stay generic over carriers.

Entries handled here: int, Fraction, float, mpmath.mpf, bool, Mod, Complex,
and anything implementing the duck-typed hooks ``ring_zero``/``ring_one``/
``exact_div`` (Poly, RationalFunction).
"""

from fractions import Fraction

import mpmath

from .errors import DivisionByZero, NonInvertible


def is_zero(x):
    if hasattr(x, "is_zero_element"):
        return x.is_zero_element()
    return x == 0


def zero_like(x):
    if hasattr(x, "ring_zero"):
        return x.ring_zero()
    if isinstance(x, Fraction):
        return Fraction(0)
    if isinstance(x, float):
        return 0.0
    if isinstance(x, mpmath.mpf):
        return mpmath.mpf(0)
    return 0


def one_like(x):
    if hasattr(x, "ring_one"):
        return x.ring_one()
    if isinstance(x, Fraction):
        return Fraction(1)
    if isinstance(x, float):
        return 1.0
    if isinstance(x, mpmath.mpf):
        return mpmath.mpf(1)
    return 1


def exact_div(a, b):
    """Divide a by b, staying inside the carrier; raise if not exact."""
    if is_zero(b):
        raise DivisionByZero("exact division by zero")
    if hasattr(a, "exact_div"):
        return a.exact_div(b)
    if isinstance(a, int) and isinstance(b, int) and not isinstance(a, bool):
        q, r = divmod(a, b)
        if r != 0:
            raise NonInvertible(f"{a} is not divisible by {b}")
        return q
    return a / b
