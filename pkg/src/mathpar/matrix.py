"""Matrix operators over the active space: fraction-free exact algebra,
LSU/Bruhat factorizations, pseudoinverses, and exact simplex.

Entries are scalars (int/Fraction/Mod/float/mpf/Complex/TropicalScalar) or
Poly/RationalFunction values; every operation keeps the carrier homogeneous.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import rings, tropical
from .errors import (
    DimensionMismatch,
    DomainError,
    NotSquare,
    Singular,
    UnsupportedCarrier,
)
from .polynomial import Poly, RationalFunction
from .domains import Complex, Mod


class MatrixValue:
    """Dense row-major matrix; vectors are n-by-1 matrices."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch("ragged matrix literal")

    @classmethod
    def identity(cls, n, one=1, zero=0):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows, cols, zero=0):
        return cls([[zero for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def column(cls, values):
        return cls([[v] for v in values])

    def column_values(self):
        if self.cols != 1:
            raise DimensionMismatch("not a column vector")
        return [row[0] for row in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_square(self):
        return self.rows == self.cols

    def is_tropical(self):
        return bool(self.entries) and isinstance(self.entries[0][0], tropical.TropicalScalar)

    def map(self, fn):
        return MatrixValue([[fn(x) for x in row] for row in self.entries])

    def __add__(self, other):
        if not isinstance(other, MatrixValue):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in addition")
        return MatrixValue([[a + b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, MatrixValue):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in subtraction")
        return MatrixValue([[a - b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, k):
        return self.map(lambda x: k * x)

    def __mul__(self, other):
        if isinstance(other, MatrixValue):
            if self.cols != other.rows:
                raise DimensionMismatch(
                    f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
            if self.is_tropical():
                return MatrixValue(tropical.mat_otimes(self.entries, other.entries))
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = self.entries[i][0] * other.entries[0][j]
                    for k in range(1, self.cols):
                        acc = acc + self.entries[i][k] * other.entries[k][j]
                    row.append(acc)
                out.append(row)
            return MatrixValue(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        if not self.is_square():
            raise NotSquare("powers need a square matrix")
        if not isinstance(n, int) or n < 0:
            raise DomainError("matrix powers take nonnegative integer exponents")
        sample = self.entries[0][0]
        out = MatrixValue.identity(self.rows, rings.one_like(sample), rings.zero_like(sample))
        base = self
        while n:
            if n & 1:
                out = out * base
            if n > 1:
                base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MatrixValue):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            all(a == b for ra, rb in zip(self.entries, other.entries)
                for a, b in zip(ra, rb))

    def __hash__(self):
        return hash(tuple(tuple(str(x) for x in row) for row in self.entries))

    def __repr__(self):
        return f"MatrixValue({self.entries!r})"

    def __str__(self):
        from .syntax import render_value
        return render_value(self, "plain")


# -- entry helpers ------------------------------------------------------------

def _to_field(x):
    """Lift a domain entry into its fraction field."""
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, Poly):
        return RationalFunction.from_poly(x)
    return x


def _field_matrix(A):
    return A.map(_to_field)


def _conj_entry(x):
    if isinstance(x, Complex):
        return x.conjugate()
    return x


def transpose(A):
    return MatrixValue([[A.entries[i][j] for i in range(A.rows)] for j in range(A.cols)])


def conjugate(A):
    """Conjugate-transpose; reduces to plain transpose over real carriers."""
    return transpose(A.map(_conj_entry))


# -- fraction-free elimination ------------------------------------------------

def _bareiss_forward(A):
    """Fraction-free forward elimination with row swaps.

    Returns (echelon grid, pivot values, pivot column list, sign of the row
    permutation).  Entries never leave the domain.
    """
    grid = [row[:] for row in A.entries]
    rows, cols = A.rows, A.cols
    prev = None
    pivots = []
    pivot_cols = []
    sign = 1
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pivot_row = None
        for i in range(r, rows):
            if not rings.is_zero(grid[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            grid[r], grid[pivot_row] = grid[pivot_row], grid[r]
            sign = -sign
        p = grid[r][c]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                num = p * grid[i][j] - grid[i][c] * grid[r][j]
                grid[i][j] = rings.exact_div(num, prev) if prev is not None else num
            grid[i][c] = rings.zero_like(p)
        prev = p
        pivots.append(p)
        pivot_cols.append(c)
        r += 1
    return grid, pivots, pivot_cols, sign


def to_echelon_form(A):
    grid, _, _, _ = _bareiss_forward(A)
    return MatrixValue(grid)


def rank(A):
    _, pivots, _, _ = _bareiss_forward(A)
    return len(pivots)


def det(A):
    if not A.is_square():
        raise NotSquare("determinant needs a square matrix")
    n = A.rows
    if n == 0:
        return 1
    if _is_sparse_symbolic(A):
        return _det_sparse(A)
    grid, pivots, _, sign = _bareiss_forward(A)
    if len(pivots) < n:
        sample = A.entries[0][0]
        return rings.zero_like(sample)
    d = pivots[-1]
    return -d if sign < 0 else d


def _is_sparse_symbolic(A):
    """Prefer Laplace expansion when the zero pattern keeps the term count
    small; elimination fills in and its exact divisions dominate."""
    if not any(isinstance(x, Poly) for row in A.entries for x in row):
        return False
    n = A.rows
    if n < 4 or n > 20:
        return False
    mask_rows = []
    for row in A.entries:
        m = 0
        for j, x in enumerate(row):
            if not rings.is_zero(x):
                m |= 1 << j
        mask_rows.append(m)
    cap = 200_000
    counts = {(1 << n) - 1: 1}  # column sets still available, top-down
    total = 0
    for m in mask_rows:
        nxt = {}
        for cols, ways in counts.items():
            avail = cols & m
            while avail:
                j = avail & -avail
                avail ^= j
                key = cols ^ j
                nxt[key] = nxt.get(key, 0) + ways
        total = sum(nxt.values())
        if total > cap or not nxt:
            return False
        counts = nxt
    return True


def _det_sparse(A):
    """Laplace expansion along rows, memoized on the free-column set.

    Fill-in is what makes elimination blow up on sparse symbolic matrices;
    expansion touches only the nonzero pattern.
    """
    n = A.rows
    order = sorted(range(n), key=lambda i: sum(
        0 if rings.is_zero(x) else 1 for x in A.entries[i]))
    sign = _permutation_sign_list(order)
    grid = [A.entries[i] for i in order]
    # share one variable tuple so Poly arithmetic never re-aligns terms
    all_vars = sorted({v for row in grid for x in row
                       if isinstance(x, Poly) for v in x.free_vars()})
    grid = [[x.with_vars(all_vars) if isinstance(x, Poly) else x for x in row]
            for row in grid]
    zero = rings.zero_like(next(x for row in grid for x in row if not rings.is_zero(x)))
    memo = {}

    def rec(i, cols):
        if i == n:
            return 1
        key = cols
        hit = memo.get(key)
        if hit is not None:
            return hit
        acc = None
        cols_sorted = sorted(cols)
        for pos, j in enumerate(cols_sorted):
            a = grid[i][j]
            if rings.is_zero(a):
                continue
            sub = rec(i + 1, cols - {j})
            term = a * sub if pos % 2 == 0 else -(a * sub)
            acc = term if acc is None else acc + term
        if acc is None:
            acc = zero
        memo[key] = acc
        return acc

    result = rec(0, frozenset(range(n)))
    if sign < 0:
        result = -result
    return result


def _permutation_sign_list(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# -- field-based solvers ------------------------------------------------------

def _rref(A):
    """Reduced row echelon over the fraction field: (grid, pivot columns)."""
    grid = [[_to_field(x) for x in row] for row in A.entries]
    rows, cols = A.rows, A.cols
    pivot_cols = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pivot_row = None
        for i in range(r, rows):
            if not rings.is_zero(grid[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        grid[r], grid[pivot_row] = grid[pivot_row], grid[r]
        p = grid[r][c]
        grid[r] = [rings.exact_div(x, p) for x in grid[r]]
        for i in range(rows):
            if i == r or rings.is_zero(grid[i][c]):
                continue
            factor = grid[i][c]
            grid[i] = [x - factor * y for x, y in zip(grid[i], grid[r])]
        pivot_cols.append(c)
        r += 1
    return grid, pivot_cols


def inverse(A):
    if not A.is_square():
        raise NotSquare("inverse needs a square matrix")
    n = A.rows
    field = _field_matrix(A)
    one = rings.one_like(field.entries[0][0])
    zero = rings.zero_like(field.entries[0][0])
    aug = MatrixValue([field.entries[i] + [one if i == j else zero for j in range(n)]
                       for i in range(n)])
    grid, pivot_cols = _rref(aug)
    if pivot_cols[:n] != list(range(n)) or len(pivot_cols) < n:
        raise Singular("matrix is not invertible")
    return MatrixValue([row[n:] for row in grid])


def adjoint(A):
    """Classical adjugate: entries stay in the carrier, A adj(A) = det(A) I."""
    if not A.is_square():
        raise NotSquare("adjoint needs a square matrix")
    n = A.rows
    if n == 1:
        sample = A.entries[0][0]
        return MatrixValue([[rings.one_like(sample)]])
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = MatrixValue([[A.entries[r][c] for c in range(n) if c != j]
                                 for r in range(n) if r != i])
            m = det(minor)
            out[j][i] = m if (i + j) % 2 == 0 else -m
    return MatrixValue(out)


def kernel(A):
    """Columns form a basis of the null space over the fraction field."""
    grid, pivot_cols = _rref(A)
    free_cols = [c for c in range(A.cols) if c not in pivot_cols]
    sample = _to_field(A.entries[0][0])
    one = rings.one_like(sample)
    zero = rings.zero_like(sample)
    basis = []
    for fc in free_cols:
        vec = [zero] * A.cols
        vec[fc] = one
        for r, pc in enumerate(pivot_cols):
            vec[pc] = -grid[r][fc]
        basis.append(vec)
    if not basis:
        return MatrixValue.zero(A.cols, 0) if A.cols else MatrixValue([[]])
    return transpose(MatrixValue(basis))


def char_polynom(A, var="lambda"):
    """det(lambda I - A) as a monic Poly in a fresh indeterminate."""
    if not A.is_square():
        raise NotSquare("characteristic polynomial needs a square matrix")
    n = A.rows
    lam = Poly.variable(var)

    def lift(x):
        if isinstance(x, Poly):
            return x
        return Poly.const(x, ())
    entries = [[(lam if i == j else Poly.const(0, ())) - lift(A.entries[i][j])
                for j in range(n)] for i in range(n)]
    return det(MatrixValue(entries))


def closure(A):
    """I + A + A^2 + ...: (I-A)^{-1} in a field, Kleene star in tropical."""
    if not A.is_square():
        raise NotSquare("closure needs a square matrix")
    if A.is_tropical():
        return MatrixValue(tropical.matrix_closure(A.entries))
    field = _field_matrix(A)
    one = rings.one_like(field.entries[0][0])
    zero = rings.zero_like(field.entries[0][0])
    eye = MatrixValue.identity(A.rows, one, zero)
    return inverse(eye - field)


def gen_inverse(A):
    """Moore-Penrose pseudoinverse via exact rank factorization A = F G."""
    for row in A.entries:
        for x in row:
            if isinstance(x, (Poly, RationalFunction)):
                raise UnsupportedCarrier("pseudoinverse needs numeric entries")
    grid, pivot_cols = _rref(A)
    r = len(pivot_cols)
    if r == 0:
        return MatrixValue.zero(A.cols, A.rows, Fraction(0))
    F = MatrixValue([[_to_field(A.entries[i][c]) for c in pivot_cols]
                     for i in range(A.rows)])
    G = MatrixValue([grid[i] for i in range(r)])
    Fs = conjugate(F)
    Gs = conjugate(G)
    mid = inverse(G * Gs) * inverse(Fs * F)
    return Gs * mid * Fs


# -- LSU and Bruhat -----------------------------------------------------------

@dataclass
class LSUFactorization:
    L: MatrixValue
    S: MatrixValue
    U: MatrixValue
    W: MatrixValue
    M: MatrixValue
    det: object

    @property
    def pseudo_inverse(self):
        inv_det_sq = _invert_scalar(self.det * self.det)
        return (self.W * self.S * self.M).scale(inv_det_sq)


@dataclass
class BruhatFactorization:
    V: MatrixValue
    w: MatrixValue
    U: MatrixValue


def _invert_scalar(x):
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(1, x)
    if isinstance(x, Poly):
        return RationalFunction(Poly.const(1, x.vars), x)
    if isinstance(x, Mod):
        return x.inverse()
    if isinstance(x, RationalFunction):
        return x.ring_one() / x
    return 1 / x


def lsu_factorization(A):
    """A = L S U with triangular cofactors in the domain; W, M complete the
    scaled-permutation middle into det^{-2} W S M, a (pseudo)inverse of A."""
    if not A.is_square():
        raise NotSquare("LSU factorization needs a square matrix")
    n = A.rows
    sample = A.entries[0][0]
    one = rings.one_like(sample)
    zero = rings.zero_like(sample)
    B = [row[:] for row in A.entries]
    L = [[zero for _ in range(n)] for _ in range(n)]
    U = [[zero for _ in range(n)] for _ in range(n)]
    used_rows = []
    used_cols = []
    pivots = []
    prev = None
    while True:
        pivot = None
        for c in range(n):
            if c in used_cols:
                continue
            for r in range(n):
                if r in used_rows:
                    continue
                if not rings.is_zero(B[r][c]):
                    pivot = (r, c)
                    break
            if pivot is not None:
                break
        if pivot is None:
            break
        r, c = pivot
        p = B[r][c]
        # pre-elimination column becomes an L column, row a U row
        for i in range(n):
            if i not in used_rows:
                L[i][r] = B[i][c]
        for j in range(n):
            if j not in used_cols:
                U[c][j] = B[r][j]
        for i in range(n):
            if i in used_rows or i == r:
                continue
            for j in range(n):
                if j in used_cols or j == c:
                    continue
                num = p * B[i][j] - B[i][c] * B[r][j]
                B[i][j] = rings.exact_div(num, prev) if prev is not None else num
            B[i][c] = zero
        used_rows.append(r)
        used_cols.append(c)
        pivots.append(p)
        prev = p
    r_rank = len(pivots)
    for i in range(n):
        if i not in used_rows:
            L[i][i] = one
    for j in range(n):
        if j not in used_cols:
            U[j][j] = one
    # S: scaled permutation with 1/(p_{k-1} p_k) at (row_k, col_k)
    field_zero = _to_field(zero)
    S = [[field_zero for _ in range(n)] for _ in range(n)]
    Sg = [[field_zero for _ in range(n)] for _ in range(n)]
    for k in range(r_rank):
        denom = pivots[k] * pivots[k - 1] if k > 0 else pivots[0]
        value = _invert_scalar(denom)
        S[used_rows[k]][used_cols[k]] = value
        Sg[used_cols[k]][used_rows[k]] = _invert_scalar(value)
    Lm = MatrixValue(L)
    Um = MatrixValue(U)
    Sm = MatrixValue(S)
    Sgm = MatrixValue(Sg)
    if r_rank == n:
        sign = _permutation_sign_pairs(used_rows, used_cols)
        d = pivots[-1] if sign > 0 else -pivots[-1]
    else:
        # rank-deficient: a consistent nonzero scalar (it cancels inside P)
        d = pivots[-1] if pivots else one
    W = (inverse(Um) * Sgm).scale(_to_field(d))
    M = (Sgm * inverse(Lm)).scale(_to_field(d))
    return LSUFactorization(L=Lm, S=Sm, U=Um, W=W, M=M, det=d)


def _permutation_sign_pairs(rows, cols):
    """Sign of the permutation sending row_k -> col_k."""
    mapping = {r: c for r, c in zip(rows, cols)}
    perm = [mapping[i] for i in sorted(mapping)]
    rank_of = {v: i for i, v in enumerate(sorted(perm))}
    return _permutation_sign_list([rank_of[v] for v in perm])


def bruhat_decomposition(A):
    """A = V w U via the LSU factorization of the row-reversed matrix."""
    if not A.is_square():
        raise NotSquare("Bruhat decomposition needs a square matrix")
    n = A.rows
    J = [[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)]
    flipped = MatrixValue([A.entries[n - 1 - i] for i in range(n)])
    fact = lsu_factorization(flipped)
    V = MatrixValue([[fact.L.entries[n - 1 - i][n - 1 - j] for j in range(n)]
                     for i in range(n)])
    w = MatrixValue([fact.S.entries[n - 1 - i] for i in range(n)])
    return BruhatFactorization(V=V, w=w, U=fact.U)


# -- linear programming -------------------------------------------------------

@dataclass
class LPResult:
    status: str                 # "optimal" | "unbounded" | "infeasible"
    optimum: object = None
    point: MatrixValue = None


def simplex(direction, A, b, c):
    """Optimize c^T x subject to A x <= b with free variables, exactly over Q.

    Free variables split into differences of nonnegatives; two-phase simplex
    with Bland's rule.
    """
    if direction not in ("max", "min"):
        raise DomainError("direction must be 'max' or 'min'")
    m, n = A.rows, A.cols
    bv = b.column_values() if isinstance(b, MatrixValue) else list(b)
    cv = c.column_values() if isinstance(c, MatrixValue) else list(c)
    if len(bv) != m or len(cv) != n:
        raise DimensionMismatch("inconsistent LP dimensions")
    Aq = [[Fraction(x) for x in row] for row in A.entries]
    bq = [Fraction(x) for x in bv]
    cq = [Fraction(x) for x in cv]
    if direction == "max":
        cq = [-x for x in cq]
    # x_j = u_j - v_j with u, v >= 0; then slacks
    ncols = 2 * n + m
    rows = []
    for i in range(m):
        row = []
        for j in range(n):
            row.append(Aq[i][j])
        for j in range(n):
            row.append(-Aq[i][j])
        for j in range(m):
            row.append(Fraction(1) if j == i else Fraction(0))
        rows.append(row)
    cost = [cq[j] for j in range(n)] + [-cq[j] for j in range(n)] + [Fraction(0)] * m
    tab, basis, feasible = _phase_one(rows, bq, ncols)
    if not feasible:
        return LPResult(status="infeasible")
    status, tab, basis = _phase_two(tab, basis, cost, ncols)
    if status == "unbounded":
        return LPResult(status="unbounded")
    values = [Fraction(0)] * ncols
    for r, j in enumerate(basis):
        if j < ncols:
            values[j] = tab[r][-1]
    point = [values[j] - values[n + j] for j in range(n)]
    opt = sum(q * p for q, p in zip(cq, point))
    if direction == "max":
        opt = -opt
    return LPResult(status="optimal", optimum=opt, point=MatrixValue.column(point))


def _phase_one(rows, b, ncols):
    m = len(rows)
    tab = []
    basis = []
    for i in range(m):
        row = rows[i][:]
        rhs = b[i]
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        tab.append(row + [Fraction(1) if k == i else Fraction(0) for k in range(m)] + [rhs])
        basis.append(ncols + i)
    cost = [Fraction(0)] * ncols + [Fraction(1)] * m + [Fraction(0)]
    obj = [Fraction(0)] * (ncols + m + 1)
    for i in range(m):
        for k in range(ncols + m + 1):
            obj[k] += tab[i][k]
    # minimize sum of artificials: reduced costs = cost - obj over basics
    red = [cost[k] - obj[k] if k < ncols + m else 0 for k in range(ncols + m)]
    z = -obj[-1]
    red = list(red)
    while True:
        enter = next((j for j in range(ncols + m) if red[j] < 0), None)
        if enter is None:
            break
        leave = _ratio_test(tab, enter)
        if leave is None:
            break
        _pivot(tab, red, basis, leave, enter)
    total = sum(tab[r][-1] for r in range(m) if basis[r] >= ncols)
    if total != 0:
        return None, None, False
    # drive remaining artificials out when possible, then drop their columns
    for r in range(m):
        if basis[r] >= ncols:
            enter = next((j for j in range(ncols) if tab[r][j] != 0), None)
            if enter is not None:
                _pivot(tab, red, basis, r, enter)
    tab = [row[:ncols] + [row[-1]] for row in tab]
    return tab, basis, True


def _phase_two(tab, basis, cost, ncols):
    m = len(tab)
    red = cost[:] + [Fraction(0)]
    for r in range(m):
        j = basis[r]
        if j < ncols and red[j] != 0:
            f = red[j]
            for k in range(ncols + 1):
                red[k] -= f * tab[r][k]
    while True:
        enter = next((j for j in range(ncols) if red[j] < 0), None)  # Bland: lowest index
        if enter is None:
            return "optimal", tab, basis
        leave = _ratio_test(tab, enter)
        if leave is None:
            return "unbounded", tab, basis
        _pivot(tab, red, basis, leave, enter)


def _ratio_test(tab, enter):
    best = None
    best_ratio = None
    for r in range(len(tab)):
        a = tab[r][enter]
        if a > 0:
            ratio = tab[r][-1] / a
            if best_ratio is None or ratio < best_ratio:
                best, best_ratio = r, ratio
    return best


def _pivot(tab, red, basis, leave, enter):
    p = tab[leave][enter]
    tab[leave] = [x / p for x in tab[leave]]
    for r in range(len(tab)):
        if r != leave and tab[r][enter] != 0:
            f = tab[r][enter]
            tab[r] = [x - f * y for x, y in zip(tab[r], tab[leave])]
    if red is not None and red[enter] != 0:
        f = red[enter]
        for k in range(len(red)):
            red[k] -= f * tab[leave][k] if k < len(tab[leave]) else 0
    basis[leave] = enter
