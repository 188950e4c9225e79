"""Exact linear algebra over Q and Z.

Everything here is deterministic: pivot choice is always the first usable
row/column, so repeated runs on equal input produce identical output. The
integer routines implement the row-style Hermite normal form (echelon shape,
positive pivots, entries above a pivot reduced into [0, pivot)), which is the
unique canonical basis of an integer row lattice.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, v)
    return out


def frac_rref(rows):
    """Reduced row echelon form over Q. Returns (rref_rows, pivot_columns)."""
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def frac_rank(rows) -> int:
    return len(frac_rref(rows)[1])


def frac_solve(matrix, rhs):
    """Solve the square system matrix * x = rhs exactly. None if singular."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c]), None)
        if pivot is None:
            return None
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n] for row in aug]


def frac_inverse(matrix):
    """Exact inverse of a square rational matrix. None if singular."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c]), None)
        if pivot is None:
            return None
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def frac_det(matrix) -> Fraction:
    """Determinant by exact Gaussian elimination."""
    n = len(matrix)
    mat = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if mat[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            mat[c], mat[pivot] = mat[pivot], mat[c]
            det = -det
        det *= mat[c][c]
        inv = 1 / mat[c][c]
        for i in range(c + 1, n):
            if mat[i][c]:
                f = mat[i][c] * inv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
    return det


class RowSpanSolver:
    """Expresses vectors as rational combinations of a fixed list of rows.

    Tracks the elimination matrix, so solve() returns coefficients over the
    original rows and kernel() returns a basis of the left kernel (all rational
    relations among the original rows).
    """

    def __init__(self, rows):
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        work = [[Fraction(x) for x in row] +
                [Fraction(int(i == j)) for j in range(self.nrows)]
                for i, row in enumerate(rows)]
        pivots = []
        r = 0
        for c in range(self.ncols):
            pivot = next((i for i in range(r, len(work)) if work[i][c]), None)
            if pivot is None:
                continue
            work[r], work[pivot] = work[pivot], work[r]
            inv = 1 / work[r][c]
            work[r] = [x * inv for x in work[r]]
            for i in range(len(work)):
                if i != r and work[i][c]:
                    f = work[i][c]
                    work[i] = [a - f * b for a, b in zip(work[i], work[r])]
            pivots.append(c)
            r += 1
            if r == len(work):
                break
        self._pivots = pivots
        self._reduced = [row[:self.ncols] for row in work]
        self._transform = [row[self.ncols:] for row in work]
        self.rank = len(pivots)

    def solve(self, vector):
        """Coefficients c with c . rows == vector, or None if outside the span."""
        v = [Fraction(x) for x in vector]
        coeffs = [Fraction(0)] * self.nrows
        for k, c in enumerate(self._pivots):
            if v[c]:
                f = v[c]
                v = [a - f * b for a, b in zip(v, self._reduced[k])]
                coeffs = [a + f * b for a, b in zip(coeffs, self._transform[k])]
        if any(v):
            return None
        return coeffs

    def kernel(self):
        """Basis of {c : c . rows == 0}."""
        return [self._transform[k] for k in range(self.rank, self.nrows)]


def hnf(rows):
    """Canonical row Hermite normal form of integer rows; zero rows dropped."""
    mat = [list(map(int, row)) for row in rows if any(row)]
    if not mat:
        return []
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(mat)) if mat[i][c]]
            if len(nz) <= 1:
                break
            k = min(nz, key=lambda i: abs(mat[i][c]))
            for i in nz:
                if i != k:
                    q = mat[i][c] // mat[k][c]
                    if q:
                        mat[i] = [a - q * b for a, b in zip(mat[i], mat[k])]
        nz = [i for i in range(r, len(mat)) if mat[i][c]]
        if not nz:
            continue
        k = nz[0]
        mat[r], mat[k] = mat[k], mat[r]
        if mat[r][c] < 0:
            mat[r] = [-x for x in mat[r]]
        for i in range(r):
            q = mat[i][c] // mat[r][c]
            if q:
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return [row for row in mat[:r] if any(row)]


def hnf_pivot_columns(hrows):
    return [next(c for c, x in enumerate(row) if x) for row in hrows]


def hnf_solve(hrows, vector):
    """Integer coefficients over the HNF rows, or None if not in the lattice."""
    v = list(map(int, vector))
    coeffs = []
    for row in hrows:
        c = next(i for i, x in enumerate(row) if x)
        q, rem = divmod(v[c], row[c])
        if rem != 0:
            return None
        if q:
            v = [a - q * b for a, b in zip(v, row)]
        coeffs.append(q)
    if any(v):
        return None
    return coeffs


def det_bareiss(matrix) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    mat = [list(map(int, row)) for row in matrix]
    sign = 1
    prev = 1
    for c in range(n - 1):
        if mat[c][c] == 0:
            pivot = next((i for i in range(c + 1, n) if mat[i][c]), None)
            if pivot is None:
                return 0
            mat[c], mat[pivot] = mat[pivot], mat[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                mat[i][j] = (mat[i][j] * mat[c][c] - mat[i][c] * mat[c][j]) // prev
            mat[i][c] = 0
        prev = mat[c][c]
    return sign * mat[n - 1][n - 1]
