"""The 18 idempotent (tropical) algebras and their solvers.

Scalars carry their algebra with them; matrices are plain row-major lists of
TropicalScalar handled by the functions below.  The matrix module wraps these
in MatrixValue for the language surface.
"""

import math
from fractions import Fraction

from .errors import (
    BadVertex,
    DimensionMismatch,
    DivergentClosure,
    DomainError,
    NegativeCycle,
    NoSolution,
    Unreachable,
    UnsupportedAlgebra,
)

NEG_INF = float("-inf")
POS_INF = float("inf")


class TropicalAlgebra:
    """One of the 18 idempotent algebras: carrier + (oplus, otimes) pair."""

    def __init__(self, tag, carrier, oplus_name, otimes_name, is_semifield):
        self.tag = tag
        self.carrier = carrier          # "Z" | "R" | "R64"
        self.oplus_name = oplus_name    # "max" | "min"
        self.otimes_name = otimes_name  # "plus" | "mult" | "min" | "max"
        self.is_semifield = is_semifield
        if oplus_name == "max":
            self.zero_value = NEG_INF if otimes_name != "mult" else 0
        else:
            self.zero_value = POS_INF
        if otimes_name == "plus":
            self.unit_value = 0
        elif otimes_name == "mult":
            self.unit_value = 1
        elif otimes_name == "min":
            self.unit_value = POS_INF
        else:  # otimes max
            self.unit_value = NEG_INF

    def __repr__(self):
        return f"TropicalAlgebra({self.tag})"

    def coerce(self, value):
        """Bring a plain number into the carrier; rejects what the algebra forbids."""
        if value in (NEG_INF, POS_INF):
            return TropicalScalar(value, self)
        if self.otimes_name == "mult" and value < 0:
            raise DomainError(f"{self.tag} carrier is nonnegative; got {value}")
        if self.carrier == "Z":
            if isinstance(value, float):
                if not value.is_integer():
                    raise DomainError(f"{self.tag} carrier is Z; got {value}")
                value = int(value)
            elif isinstance(value, Fraction):
                if value.denominator != 1:
                    raise DomainError(f"{self.tag} carrier is Z; got {value}")
                value = int(value)
        elif self.carrier == "R":
            if not isinstance(value, Fraction):
                value = Fraction(value)
        else:
            value = float(value)
        return TropicalScalar(value, self)

    @property
    def zero(self):
        return TropicalScalar(self.zero_value, self)

    @property
    def unit(self):
        return TropicalScalar(self.unit_value, self)

    def oplus(self, a, b):
        return max(a, b) if self.oplus_name == "max" else min(a, b)

    def otimes(self, a, b):
        name = self.otimes_name
        if name == "plus":
            if a in (NEG_INF, POS_INF) or b in (NEG_INF, POS_INF):
                # zero element absorbs even against the opposite infinity
                if a == self.zero_value or b == self.zero_value:
                    return self.zero_value
                return float(a) + float(b)
            return a + b
        if name == "mult":
            if a == self.zero_value or b == self.zero_value:
                return self.zero_value
            return a * b
        if name == "min":
            return min(a, b)
        return max(a, b)

    def otimes_inverse(self, a):
        if not self.is_semifield:
            raise UnsupportedAlgebra(f"{self.tag} multiplication is not invertible")
        if a == self.zero_value:
            raise DomainError("zero element has no multiplicative inverse")
        if self.otimes_name == "plus":
            return -a
        if a == 0:
            raise DomainError("0 has no inverse in a mult-family algebra")
        if isinstance(a, Fraction):
            return 1 / a
        if isinstance(a, int):
            return Fraction(1, a) if self.carrier == "R" else 1 / a
        return 1.0 / a


def _build_algebras():
    semifields = [
        ("ZMaxPlus", "Z", "max", "plus"), ("ZMinPlus", "Z", "min", "plus"),
        ("RMaxPlus", "R", "max", "plus"), ("RMinPlus", "R", "min", "plus"),
        ("RMaxMult", "R", "max", "mult"), ("RMinMult", "R", "min", "mult"),
        ("R64MaxPlus", "R64", "max", "plus"), ("R64MinPlus", "R64", "min", "plus"),
        ("R64MaxMult", "R64", "max", "mult"), ("R64MinMult", "R64", "min", "mult"),
    ]
    semirings = [
        ("ZMaxMin", "Z", "max", "min"), ("ZMinMax", "Z", "min", "max"),
        ("ZMaxMult", "Z", "max", "mult"), ("ZMinMult", "Z", "min", "mult"),
        ("RMaxMin", "R", "max", "min"), ("RMinMax", "R", "min", "max"),
        ("R64MaxMin", "R64", "max", "min"), ("R64MinMax", "R64", "min", "max"),
    ]
    table = {}
    for tag, carrier, op, ot in semifields:
        table[tag] = TropicalAlgebra(tag, carrier, op, ot, True)
    for tag, carrier, op, ot in semirings:
        table[tag] = TropicalAlgebra(tag, carrier, op, ot, False)
    return table


ALGEBRAS = _build_algebras()


class TropicalScalar:
    """A value of one tropical algebra; + is the lattice op, * the carrier op."""

    __slots__ = ("value", "algebra")

    def __init__(self, value, algebra):
        self.value = value
        self.algebra = algebra

    def _check(self, other):
        if not isinstance(other, TropicalScalar):
            raise UnsupportedAlgebra(
                f"cannot mix {self.algebra.tag} values with {type(other).__name__}")
        if other.algebra.tag != self.algebra.tag:
            raise UnsupportedAlgebra(
                f"cannot mix {self.algebra.tag} and {other.algebra.tag} values")
        return other

    def __add__(self, other):
        other = self._check(other)
        return TropicalScalar(self.algebra.oplus(self.value, other.value), self.algebra)

    def __mul__(self, other):
        other = self._check(other)
        return TropicalScalar(self.algebra.otimes(self.value, other.value), self.algebra)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("tropical powers take nonnegative integer exponents")
        acc = self.algebra.unit
        for _ in range(n):
            acc = acc * self
        return acc

    def __eq__(self, other):
        if isinstance(other, TropicalScalar):
            return self.algebra.tag == other.algebra.tag and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra.tag, self.value))

    def natural_le(self, other):
        """a <= b in the lattice order: a + b == b."""
        other = self._check(other)
        return self.algebra.oplus(self.value, other.value) == other.value

    def __repr__(self):
        return f"TropicalScalar({self.value!r}, {self.algebra.tag})"


# -- scalar and matrix closure ------------------------------------------------

def scalar_closure(a: TropicalScalar) -> TropicalScalar:
    alg = a.algebra
    unit = alg.unit
    if a.value == alg.zero_value:
        return unit
    # series unit + a + a^2 + ...; closed forms per family
    if alg.otimes_name == "plus":
        if alg.oplus_name == "max":
            if a.value <= 0:
                return unit
            raise DivergentClosure(f"closure diverges for {a.value} in {alg.tag}")
        if a.value >= 0:
            return unit
        raise DivergentClosure(f"closure diverges for {a.value} in {alg.tag}")
    if alg.otimes_name == "mult":
        if alg.oplus_name == "max":
            if a.value <= 1:
                return unit
            raise DivergentClosure(f"closure diverges for {a.value} in {alg.tag}")
        if a.value >= 1:
            return unit
        # min-mult with 0 <= a < 1: powers tend to 0, the supremum in the lattice
        return alg.coerce(0)
    # idempotent otimes (min/max): the unit is the lattice top for oplus
    return unit


def identity(n, algebra):
    unit, zero = algebra.unit, algebra.zero
    return [[unit if i == j else zero for j in range(n)] for i in range(n)]


def mat_oplus(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_otimes(A, B):
    n, k, m = len(A), len(B), len(B[0])
    if len(A[0]) != k:
        raise DimensionMismatch("inner dimensions differ")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + (A[i][t] * B[t][j])
            row.append(acc)
        out.append(row)
    return out


def matrix_closure(A):
    """Kleene star I + A + A^2 + ... by repeated squaring with a divergence check."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise DimensionMismatch("closure needs a square matrix")
    if n == 0:
        return []
    algebra = A[0][0].algebra
    B = mat_oplus(identity(n, algebra), A)
    steps = 1
    while steps < max(n - 1, 1):
        B2 = mat_otimes(B, B)
        if B2 == B:
            return B
        B = B2
        steps *= 2
    check = mat_otimes(B, B)
    if check != B:
        raise DivergentClosure("partial sums still growing past the stabilization bound")
    return B


def closure(a):
    if isinstance(a, TropicalScalar):
        return scalar_closure(a)
    return matrix_closure(a)


# -- linear systems -----------------------------------------------------------

def solve_lae_tropic(A, b):
    """Principal-solution residuation for A x = b in a tropical semifield."""
    if not A or not A[0]:
        raise DimensionMismatch("empty system")
    algebra = A[0][0].algebra
    if not algebra.is_semifield:
        raise UnsupportedAlgebra(f"{algebra.tag} is not a semifield")
    m, n = len(A), len(A[0])
    if len(b) != m:
        raise DimensionMismatch(f"A has {m} rows but b has {len(b)} entries")
    dual = min if algebra.oplus_name == "max" else max
    xhat = []
    for j in range(n):
        candidates = []
        for i in range(m):
            aij = A[i][j]
            if aij.value == algebra.zero_value:
                continue  # this entry imposes no constraint on x_j
            bi = b[i]
            if bi.value == algebra.zero_value:
                candidates.append(algebra.zero_value)
            else:
                candidates.append(algebra.otimes(bi.value, algebra.otimes_inverse(aij.value)))
        if not candidates:
            xhat.append(algebra.zero)
        else:
            xhat.append(TropicalScalar(dual(candidates), algebra))
    got = mat_otimes(A, [[x] for x in xhat])
    if [row[0] for row in got] != list(b):
        raise NoSolution("principal candidate does not satisfy the system")
    return xhat


def bellman_equation(A, b):
    """Least solution of A x + b = x, namely closure(A) * b."""
    star = matrix_closure(A)
    x = [row[0] for row in mat_otimes(star, [[v] for v in b])]
    # fixed-point identity must hold by construction
    lhs = [row[0] + bv for row, bv in zip(mat_otimes(A, [[v] for v in x]), b)]
    if lhs != x:
        raise DivergentClosure("fixed point identity failed after closure")
    return x


def bellman_inequality(A, b):
    """Least solution of A x + b <= x; same closed form as the equation."""
    star = matrix_closure(A)
    return [row[0] for row in mat_otimes(star, [[v] for v in b])]


# -- graph problems -----------------------------------------------------------

def _require_min_semifield(A):
    if not A or not A[0]:
        raise DimensionMismatch("empty adjacency matrix")
    algebra = A[0][0].algebra
    if algebra.oplus_name != "min" or algebra.otimes_name not in ("plus", "mult"):
        raise UnsupportedAlgebra(
            f"distance problems need a min-plus/min-mult algebra, not {algebra.tag}")
    return algebra


def search_least_distances(A):
    """All-pairs least path weights: Floyd-Warshall over the algebra."""
    algebra = _require_min_semifield(A)
    n = len(A)
    dist = [row[:] for row in A]
    for i in range(n):
        dist[i][i] = dist[i][i] + algebra.unit
    for k in range(n):
        for i in range(n):
            dik = dist[i][k]
            if dik.value == algebra.zero_value:
                continue
            for j in range(n):
                cand = dik * dist[k][j]
                dist[i][j] = dist[i][j] + cand
    for i in range(n):
        if not algebra.unit.natural_le(dist[i][i]):
            raise NegativeCycle(f"weight-improving cycle through vertex {i + 1}")
    return dist


def find_the_shortest_path(A, i, j):
    """Least weight plus one deterministic optimal vertex path, 1-based ends."""
    algebra = _require_min_semifield(A)
    n = len(A)
    if not (1 <= i <= n and 1 <= j <= n):
        raise BadVertex(f"vertex indices must lie in 1..{n}")
    i -= 1
    j -= 1
    dist = [row[:] for row in A]
    nxt = [[(c if dist[r][c].value != algebra.zero_value else None) for c in range(n)]
           for r in range(n)]
    for v in range(n):
        dist[v][v] = algebra.unit
        nxt[v][v] = v
    for k in range(n):
        for r in range(n):
            if dist[r][k].value == algebra.zero_value:
                continue
            for c in range(n):
                cand = dist[r][k] * dist[k][c]
                # strict improvement only: deterministic tie-breaking on low k
                if cand != dist[r][c] and (cand + dist[r][c]) == cand:
                    dist[r][c] = cand
                    nxt[r][c] = nxt[r][k]
    for v in range(n):
        if not algebra.unit.natural_le(dist[v][v]):
            raise NegativeCycle(f"weight-improving cycle through vertex {v + 1}")
    if dist[i][j].value == algebra.zero_value:
        raise Unreachable(f"vertex {j + 1} is not reachable from {i + 1}")
    path = [i]
    cur = i
    while cur != j:
        cur = nxt[cur][j]
        path.append(cur)
    return dist[i][j], [p + 1 for p in path]
