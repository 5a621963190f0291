"""Exact linear algebra over Q and over cyclotomic fields.

Elimination is fraction-free (Bareiss): rows over Q are first scaled to
integers, and each elimination step divides exactly by the previous pivot.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .cyclotomic import Cyclotomic
from .errors import DimensionMismatch


class ExactMatrix:
    """Rectangular matrix over a single scalar domain (Fraction or Cyclotomic)."""

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged matrix")
        domain = None
        for r in rows:
            for x in r:
                d = Cyclotomic if isinstance(x, Cyclotomic) else Fraction
                if domain is None:
                    domain = d
                elif domain is not d and d is Cyclotomic:
                    domain = Cyclotomic
        self.domain = domain or Fraction
        if self.domain is Cyclotomic:
            n = 1
            for r in rows:
                for x in r:
                    if isinstance(x, Cyclotomic):
                        n = n * x.conductor // gcd(n, x.conductor)
            rows = [[_as_cyc(x, n) for x in r] for r in rows]
        else:
            rows = [[Fraction(x) for x in r] for r in rows]
        self.entries = rows
        self.rows = len(rows)
        self.cols = width

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def _as_cyc(x, n):
    if isinstance(x, Cyclotomic):
        return x.lift(n) if x.conductor != n else x
    return Cyclotomic.rational(x, n)


def _zero_like(x):
    return x - x


def _integerize_rows(rows):
    """Scale each rational row to coprime integers (same row space)."""
    out = []
    for r in rows:
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in r]
        out.append(ints)
    return out


def bareiss_echelon(rows, ncols=None):
    """Fraction-free forward elimination.

    ``rows`` are lists of ints or Cyclotomic numbers.  Returns (echelon rows,
    pivot columns, sign of the row permutation).
    """
    M = [list(r) for r in rows]
    if not M:
        return M, [], 1
    ncols = ncols if ncols is not None else len(M[0])
    nrows = len(M)
    one = 1 if not isinstance(M[0][0], Cyclotomic) else Cyclotomic.one(M[0][0].conductor)
    prev = one
    prev_inv = one
    pivots = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if M[i][c]), None)
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
            sign = -sign
        piv = M[r][c]
        for i in range(r + 1, nrows):
            a = M[i][c]
            row_i, row_r = M[i], M[r]
            for j in range(c + 1, ncols):
                v = piv * row_i[j] - a * row_r[j]
                if isinstance(v, int):
                    q, rem = divmod(v, prev)
                    assert rem == 0
                    row_i[j] = q
                else:
                    row_i[j] = v * prev_inv
            row_i[c] = _zero_like(a)
        prev = piv
        prev_inv = piv if isinstance(piv, int) else piv.inverse()
        pivots.append(c)
        r += 1
    return M, pivots, sign


def _prepare(A):
    if isinstance(A, ExactMatrix):
        return A.entries, A.domain
    M = ExactMatrix(A)
    return M.entries, M.domain


def determinant(A):
    rows, domain = _prepare(A)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    if domain is Fraction:
        dens = []
        for r in rows:
            d = 1
            for x in r:
                d = d * x.denominator // gcd(d, x.denominator)
            dens.append(d)
        ints = [[int(x * d) for x in r] for r, d in zip(rows, dens)]
        E, piv, sign = bareiss_echelon(ints, n)
        if len(piv) < n:
            return Fraction(0)
        scale = 1
        for d in dens:
            scale *= d
        return Fraction(sign * E[n - 1][n - 1], scale)
    E, piv, sign = bareiss_echelon(rows, n)
    if len(piv) < n:
        return _zero_like(rows[0][0])
    return E[n - 1][n - 1] * sign


def rref(rows, domain=Fraction):
    """Reduced row echelon form via Bareiss elimination then back substitution."""
    if not rows:
        return [], []
    ncols = len(rows[0])
    if domain is Fraction:
        E, piv, _ = bareiss_echelon(_integerize_rows(rows), ncols)
        E = [[Fraction(x) for x in r] for r in E[: len(piv)]]
    else:
        E, piv, _ = bareiss_echelon(rows, ncols)
        E = E[: len(piv)]
    for k in range(len(piv) - 1, -1, -1):
        c = piv[k]
        inv = 1 / E[k][c] if domain is Fraction else E[k][c].inverse()
        E[k] = [x * inv for x in E[k]]
        for i in range(k):
            a = E[i][c]
            if a:
                E[i] = [x - a * y for x, y in zip(E[i], E[k])]
    return E, piv


def solve_linear_system(A, b):
    """Exact solution x of A x = b (free variables set to 0), or None if inconsistent."""
    rows, domain = _prepare(A)
    if len(rows) != len(b):
        raise DimensionMismatch("right-hand side length mismatch")
    if not rows:
        return []
    ncols = len(rows[0])
    if domain is Cyclotomic:
        n = rows[0][0].conductor if ncols else 1
        for x in b:
            if isinstance(x, Cyclotomic):
                n = n * x.conductor // gcd(n, x.conductor)
        aug = [[_as_cyc(x, n) for x in r] + [_as_cyc(y, n)] for r, y in zip(rows, b)]
    else:
        aug = [list(r) + [Fraction(y)] for r, y in zip(rows, b)]
    R, piv = rref(aug, domain)
    if piv and piv[-1] == ncols:
        return None
    zero = _zero_like(aug[0][0])
    x = [zero] * ncols
    for k, c in enumerate(piv):
        x[c] = R[k][ncols]
    return x


def kernel_basis(A):
    """Basis of {x : A x = 0}, one vector per free column (free entry 1)."""
    rows, domain = _prepare(A)
    if not rows:
        return []
    ncols = len(rows[0])
    R, piv = rref(rows, domain)
    zero = _zero_like(rows[0][0])
    one = zero + 1
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for k, c in enumerate(piv):
            v[c] = -R[k][f]
        basis.append(v)
    return basis


def rank(rows):
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    if isinstance(rows[0][0], Cyclotomic):
        return len(bareiss_echelon(rows)[1])
    return len(bareiss_echelon(_integerize_rows([[Fraction(x) for x in r] for r in rows]))[1])
