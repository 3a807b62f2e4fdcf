"""Exact integer and rational linear algebra for lattice work.

Vectors are tuples of Python ints (arbitrary precision), matrices are
tuples of row tuples.  Rational work uses ``fractions.Fraction``, which
keeps denominators positive and fully reduced on its own.  Nothing here
is meant for dimensions beyond a dozen; clarity and exactness win over
asymptotic speed.

Canonical forms: every lattice basis returned by this module is in
row-style Hermite normal form (positive pivots, entries above a pivot
reduced into [0, pivot)), so basis equality is plain tuple equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from .errors import DegenerateInput

IntVec = tuple[int, ...]
IntMat = tuple[IntVec, ...]
RatVec = tuple[Fraction, ...]
RatMat = tuple[RatVec, ...]


# ---------------------------------------------------------------------------
# small helpers


def identity(n: int) -> IntMat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(mat) -> tuple:
    return tuple(zip(*mat)) if mat else ()


def mat_vec(mat, vec) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, vec)) for row in mat)


def mat_mul(a, b) -> tuple:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def vec_dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vec_sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_neg(v) -> tuple:
    return tuple(-a for a in v)


def primitive_vector(v) -> IntVec:
    """Divide an integer vector by the gcd of its entries, keeping direction."""
    if not any(v):
        raise DegenerateInput("zero vector has no primitive form")
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v)


def primitive_from_rational(v) -> IntVec:
    """The primitive integer vector pointing in the direction of a rational one."""
    fr = [Fraction(x) for x in v]
    if not any(fr):
        raise DegenerateInput("zero vector has no primitive form")
    scale = lcm(*(f.denominator for f in fr))
    return primitive_vector(tuple(int(f * scale) for f in fr))


def int_det(mat: IntMat) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(row) for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k]), None)
            if pivot_row is None:
                return 0
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# rational elimination


def _eliminate(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place forward elimination; returns (rows, pivot column list)."""
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rat_rank(mat) -> int:
    rows = [[Fraction(x) for x in row] for row in mat]
    if not rows:
        return 0
    _, pivots = _eliminate(rows)
    return len(pivots)


def rat_solve(mat, rhs, require_unique: bool = False) -> RatVec | None:
    """A rational solution of mat.x = rhs, or None.

    Free variables are set to 0; with require_unique a non-unique system
    also returns None.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    rows = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    rows, pivots = _eliminate(rows)
    if any(c == n for c in pivots):
        return None  # inconsistent: pivot in the rhs column
    if require_unique and len(pivots) < n:
        return None
    x = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        x[c] = rows[r][n]
    return tuple(x)


def invert_rational(mat) -> RatMat:
    """Inverse of a square nonsingular matrix over the rationals."""
    n = len(mat)
    rows = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(mat)]
    rows, pivots = _eliminate(rows)
    if pivots != list(range(n)):
        raise DegenerateInput("matrix is singular")
    return tuple(tuple(rows[i][n:]) for i in range(n))


def invert_unimodular(mat: IntMat) -> IntMat:
    inv = invert_rational(mat)
    if any(f.denominator != 1 for row in inv for f in row):
        raise DegenerateInput("matrix is not unimodular")
    return tuple(tuple(int(f) for f in row) for row in inv)


# ---------------------------------------------------------------------------
# Hermite normal form


def hermite_normal_form(mat) -> IntMat:
    """Canonical row-style HNF of the row lattice; zero rows dropped.

    Pivots are positive, entries above a pivot are reduced into
    [0, pivot), pivot columns increase left to right.
    """
    rows = [list(r) for r in mat if any(r)]
    if not rows:
        return ()
    n = len(rows[0])
    r = 0
    for c in range(n):
        while True:
            live = [i for i in range(r, len(rows)) if rows[i][c]]
            if not live:
                break
            i_min = min(live, key=lambda i: (abs(rows[i][c]), i))
            rows[r], rows[i_min] = rows[i_min], rows[r]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if r < len(rows) and rows[r][c]:
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
            r += 1
            if r == len(rows):
                break
    return tuple(tuple(row) for row in rows[:r])


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """U.A.V = D with U, V unimodular and D diagonal, d1 | d2 | ... >= 0."""

    left: IntMat
    diag: IntMat
    right: IntMat

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        k = min(len(self.diag), len(self.diag[0]) if self.diag else 0)
        return tuple(self.diag[i][i] for i in range(k) if self.diag[i][i])

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(mat) -> SmithDecomposition:
    """Smith decomposition of an integer matrix.

    Pivoting rule: smallest absolute value in the trailing block, ties
    broken by lowest (row, col), so the run is reproducible.
    """
    a = [list(row) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):  # col_dst -= q * col_src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            swap_rows(t, best[0])
        if best[1] != t:
            swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, a[i][t] // a[t][t])
                    if a[i][t]:  # remainder is strictly smaller: promote it
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, a[t][j] // a[t][t])
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            offender = None
            for i in range(t + 1, m):
                if any(a[i][j] % a[t][t] for j in range(t + 1, n)):
                    offender = i
                    break
            if offender is None:
                break
            add_row(offender, t, -1)  # pull the offending row into row t
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return SmithDecomposition(
        left=tuple(tuple(row) for row in u),
        diag=tuple(tuple(row) for row in a),
        right=tuple(tuple(row) for row in v),
    )


# ---------------------------------------------------------------------------
# lattice operations built on the normal forms


def kernel_basis(mat, *, ncols: int | None = None) -> IntMat:
    """Canonical basis (HNF rows) of the integer kernel {x : mat.x = 0}.

    The kernel of an integer map is saturated, and the basis returned
    here spans all of it.  An empty matrix needs ncols to fix the
    ambient dimension; its kernel is the whole lattice.
    """
    m = len(mat)
    if m == 0:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return identity(ncols)
    n = len(mat[0])
    snf = smith_normal_form(mat)
    r = snf.rank
    cols = transpose(snf.right)
    if r == n:
        return ()
    return hermite_normal_form(cols[r:])


def cokernel_invariants(mat, *, nrows: int | None = None) -> tuple[tuple[int, ...], int]:
    """(torsion invariant factors > 1, free rank) of Z^m / colspan(mat)."""
    m = len(mat) if mat else nrows
    if m is None:
        raise ValueError("nrows required for an empty matrix")
    if not mat or not mat[0]:
        return ((), m)
    snf = smith_normal_form(mat)
    torsion = tuple(d for d in snf.invariant_factors if d > 1)
    return (torsion, m - snf.rank)


def saturate_sublattice(basis: IntMat) -> tuple[IntMat, int]:
    """Saturation of the row span inside the ambient lattice, plus the index.

    The saturation is (R-span of the rows) intersected with Z^n; the
    index equals the product of the invariant factors of the inclusion.
    """
    if not basis:
        raise DegenerateInput("empty basis")
    n = len(basis[0])
    k = len(basis)
    if rat_rank(basis) != k:
        raise DegenerateInput("rows are dependent")
    orth = kernel_basis(basis, ncols=n)
    saturated = kernel_basis(orth, ncols=n) if orth else identity(n)
    # coordinates of the original rows in the saturated basis are integers
    coords = []
    st = transpose(saturated)
    for row in basis:
        c = rat_solve(st, row)
        assert c is not None and all(f.denominator == 1 for f in c)
        coords.append(tuple(int(f) for f in c))
    index = 1
    for d in smith_normal_form(tuple(coords)).invariant_factors:
        index *= d
    return saturated, index


def solve_integer_system(mat, rhs) -> IntVec | None:
    """Some integer x with mat.x = rhs, or None when no integer solution exists."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    snf = smith_normal_form(mat)
    c = mat_vec(snf.left, rhs)
    y = [0] * n
    r = min(m, n)
    for i in range(r):
        d = snf.diag[i][i]
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    if any(c[i] for i in range(r, m)):
        return None
    return mat_vec(snf.right, y)


def lattice_coordinates(basis: IntMat, vec) -> IntVec | None:
    """Integer coordinates of vec w.r.t. independent basis rows, or None."""
    c = rat_solve(transpose(basis), vec)
    if c is None or any(f.denominator != 1 for f in c):
        return None
    return tuple(int(f) for f in c)


def gcd_of_minors(mat, k: int) -> int:
    """gcd of all k x k minors; brute force, for test oracles only."""
    m, n = len(mat), len(mat[0])
    g = 0
    for rows in combinations(range(m), k):
        for cols in combinations(range(n), k):
            sub = tuple(tuple(mat[i][j] for j in cols) for i in rows)
            g = gcd(g, int_det(sub))
    return g
