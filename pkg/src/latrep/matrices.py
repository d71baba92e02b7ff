"""Exact integer and rational linear algebra on symmetric matrices.

Everything here is arbitrary-precision: Python ints and Fractions only.
Floating point is forbidden throughout the package because p-adic
valuations and determinant signs must be exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence


def _freeze(rows) -> tuple[tuple[int, ...], ...]:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


@dataclass(frozen=True)
class IntMatrix:
    """A rows x cols matrix of exact integers."""

    entries: tuple[tuple[int, ...], ...]

    def __init__(self, entries):
        object.__setattr__(self, "entries", _freeze(entries))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "IntMatrix":
        cols = [list(c) for c in columns]
        if not cols:
            raise ValueError("need at least one column")
        n = len(cols[0])
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(n)])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self.entries[i][j] for i in range(self.rows)]
                          for j in range(self.cols)])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.entries
        return IntMatrix([
            [sum(self.entries[i][k] * ot[k][j] for k in range(self.cols))
             for j in range(other.cols)]
            for i in range(self.rows)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-x for x in row] for row in self.entries])

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric integral Gram matrix; the form is Q(x) = x^t S x.

    Diagonal entries are the values Q(e_i); even lattices are simply
    those with even diagonal.
    """

    entries: tuple[tuple[int, ...], ...]

    def __init__(self, entries):
        frozen = _freeze(entries)
        n = len(frozen)
        if any(len(r) != n for r in frozen):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if frozen[i][j] != frozen[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "entries", frozen)

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, n: int) -> "GramMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "GramMatrix":
        vals = list(values)
        n = len(vals)
        return cls([[vals[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[i][j]

    def matrix(self) -> IntMatrix:
        return IntMatrix(self.entries)

    def value(self, x: Sequence[int]) -> int:
        """Q(x) = x^t S x."""
        return inner_product(self, x, x)

    def det(self) -> int:
        return det(self)

    def is_positive_definite(self) -> bool:
        return is_positive_definite(self)


def inner_product(S: GramMatrix, x: Sequence[int], y: Sequence[int]) -> int:
    """x^t S y for exact integer vectors."""
    total = 0
    for i, row in enumerate(S.entries):
        xi = x[i]
        if xi:
            total += xi * sum(row[j] * y[j] for j in range(S.n) if y[j])
    return total


def gram_of_columns(S: GramMatrix, X: IntMatrix) -> GramMatrix:
    """X^t S X as a Gram matrix."""
    cols = X.columns()
    m = len(cols)
    g = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            v = inner_product(S, cols[i], cols[j])
            g[i][j] = v
            g[j][i] = v
    return GramMatrix(g)


# ---------------------------------------------------------------------------
# determinants

def _det_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free Bareiss elimination; exact integer determinant."""
    n = len(rows)
    if n == 0:
        return 1
    a = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@lru_cache(maxsize=4096)
def _det_cached(entries: tuple[tuple[int, ...], ...]) -> int:
    return _det_bareiss([list(r) for r in entries])


def det(S: GramMatrix) -> int:
    """Exact determinant of a Gram matrix."""
    return _det_cached(S.entries)


def det_int(M: IntMatrix) -> int:
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    return _det_cached(M.entries)


def is_positive_definite(S: GramMatrix) -> bool:
    """All leading principal minors positive."""
    for k in range(1, S.n + 1):
        minor = _det_bareiss([list(row[:k]) for row in S.entries[:k]])
        if minor <= 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SmithForm:
    """U X V = diag(divisors) with U, V unimodular and d_i | d_{i+1}."""

    divisors: tuple[int, ...]
    U: IntMatrix
    V: IntMatrix


def smith_normal_form(X: IntMatrix) -> SmithForm:
    r, c = X.rows, X.cols
    a = [list(row) for row in X.entries]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    t = 0
    while t < min(r, c):
        # locate a minimal nonzero entry in the remaining block
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            swap_rows(t, best[0])
        if best[1] != t:
            swap_cols(t, best[1])
        # clear row and column t by gcd reduction
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, r):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, c):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        # enforce divisibility of the remaining block by the pivot
        pivot = a[t][t]
        offender = None
        for i in range(t + 1, r):
            for j in range(t + 1, c):
                if a[i][j] % pivot != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        if pivot < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    divisors = tuple(a[i][i] for i in range(min(r, c)))
    return SmithForm(divisors, IntMatrix(u), IntMatrix(v))


def elementary_divisors(X: IntMatrix) -> tuple[int, ...]:
    """Nonzero Smith divisors of X."""
    return tuple(d for d in smith_normal_form(X).divisors if d != 0)


# ---------------------------------------------------------------------------
# rational helpers (internal)

def _frac_rows(M: IntMatrix) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in M.entries]


def invert_unimodular(M: IntMatrix) -> IntMatrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = M.rows
    if n != M.cols:
        raise ValueError("inverse of a non-square matrix")
    a = _frac_rows(M)
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        inv[col] = [x / pv for x in inv[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
                inv[i] = [x - f * y for x, y in zip(inv[i], inv[col])]
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([x.numerator for x in row])
    return IntMatrix(out)


def solve_integer_columns(B: IntMatrix, X: IntMatrix) -> IntMatrix | None:
    """Solve B A = X for A with rational entries; return A if integral, else None.

    B must have full column rank.
    """
    bt = B.transpose()
    g = bt @ B  # positive semidefinite Gramian, invertible iff full column rank
    n = g.rows
    rhs = bt @ X
    a = _frac_rows(g)
    y = _frac_rows(rhs)
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            raise ValueError("B is rank-deficient")
        a[col], a[pivot] = a[pivot], a[col]
        y[col], y[pivot] = y[pivot], y[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        y[col] = [x / pv for x in y[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * z for x, z in zip(a[i], a[col])]
                y[i] = [x - f * z for x, z in zip(y[i], y[col])]
    for row in y:
        if any(x.denominator != 1 for x in row):
            return None
    return IntMatrix([[x.numerator for x in row] for row in y])


# ---------------------------------------------------------------------------
# Hermite form and lattice spans

def column_hnf(M: IntMatrix) -> IntMatrix:
    """Canonical basis (column Hermite form) of the column span of M.

    Returns an n x r matrix whose columns are the HNF basis, pivots
    positive, entries left of each pivot reduced modulo it.
    """
    n = M.rows
    cols = [list(c) for c in M.columns() if any(c)]
    basis: list[list[int]] = []
    for row in range(n):
        if not cols:
            break
        live = [c for c in cols if c[row] != 0]
        rest = [c for c in cols if c[row] == 0]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda c: abs(c[row]))
            short = live[0]
            nxt = [short]
            for other in live[1:]:
                q = other[row] // short[row]
                reduced = [x - q * y for x, y in zip(other, short)]
                if reduced[row] != 0:
                    nxt.append(reduced)
                elif any(reduced):
                    rest.append(reduced)
            live = nxt
        piv = live[0]
        if piv[row] < 0:
            piv = [-x for x in piv]
        for b in basis:
            q = b[row] // piv[row]
            if q:
                for k in range(n):
                    b[k] -= q * piv[k]
        basis.append(piv)
        cols = [c for c in rest if any(c)]
    if not basis:
        raise ValueError("zero column span")
    return IntMatrix.from_columns(basis)


def saturate(B: IntMatrix) -> IntMatrix:
    """Basis of the saturation QB intersect Z^n of the column span of B.

    B must have full column rank; the result is in column Hermite form,
    so saturation is idempotent on the nose.
    """
    snf = smith_normal_form(B)
    rank = sum(1 for d in snf.divisors if d != 0)
    if rank != B.cols:
        raise ValueError("B is rank-deficient")
    uinv = invert_unimodular(snf.U)
    cols = [uinv.column(j) for j in range(rank)]
    return column_hnf(IntMatrix.from_columns(cols))


def integer_kernel(A: IntMatrix) -> IntMatrix | None:
    """Saturated basis of {v in Z^n : A v = 0}; None when the kernel is 0."""
    snf = smith_normal_form(A)
    rank = sum(1 for d in snf.divisors if d != 0)
    if rank == A.cols:
        return None
    cols = [snf.V.column(j) for j in range(rank, A.cols)]
    return column_hnf(IntMatrix.from_columns(cols))


def orthogonal_complement(S: GramMatrix, B: IntMatrix) -> IntMatrix:
    """Saturated basis of {v in Z^n : B^t S v = 0}.

    The columns of B must span a regular subspace (B^t S B nonsingular).
    """
    if det(gram_of_columns(S, B)) == 0:
        raise ValueError("columns of B span a degenerate subspace")
    ker = integer_kernel(B.transpose() @ S.matrix())
    if ker is None:
        raise ValueError("orthogonal complement is zero")
    return ker


# ---------------------------------------------------------------------------
# rational diagonalization

def congruence_diagonalization(S: GramMatrix) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Rational P with P^t S P = diag(d); returns (P, d). S must be nonsingular."""
    n = S.n
    if det(S) == 0:
        raise ValueError("singular Gram matrix")
    a = [[Fraction(x) for x in row] for row in S.entries]
    p = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def col_op(dst, src, f):
        # x_dst <- x_dst + f x_src as a basis change: col_dst += f col_src on a and p,
        # plus the matching row operation on a
        for i in range(n):
            a[i][dst] += f * a[i][src]
        for j in range(n):
            a[dst][j] += f * a[src][j]
        for i in range(n):
            p[i][dst] += f * p[i][src]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        a[i], a[j] = a[j], a[i]
        for row in p:
            row[i], row[j] = row[j], row[i]

    for i in range(n):
        if a[i][i] == 0:
            k = next((k for k in range(i + 1, n) if a[k][k] != 0), None)
            if k is not None:
                col_swap(i, k)
            else:
                # all remaining diagonal entries vanish; use an off-diagonal pair
                pair = next(((k, l) for k in range(i, n) for l in range(k + 1, n)
                             if a[k][l] != 0), None)
                if pair is None:
                    raise ValueError("singular Gram matrix")
                k, l = pair
                col_op(k, l, Fraction(1))  # makes a[k][k] = 2 a[k][l] != 0
                if k != i:
                    col_swap(i, k)
        for k in range(i + 1, n):
            if a[k][i] != 0:
                col_op(k, i, -a[k][i] / a[i][i])
    return p, [a[i][i] for i in range(n)]


def diagonalize_over_Q(S: GramMatrix) -> tuple[Fraction, ...]:
    """Nonzero rationals d with S rationally congruent to diag(d)."""
    _, d = congruence_diagonalization(S)
    return tuple(d)


# ---------------------------------------------------------------------------
# shared Gram reader

def parse_gram(text: str) -> GramMatrix:
    """Parse a Gram matrix from plain text (first line n, then n rows)
    or from a JSON array-of-arrays."""
    stripped = text.lstrip()
    if stripped.startswith("["):
        data = json.loads(stripped)
        return GramMatrix(data)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty Gram file")
    n = int(lines[0].split()[0])
    if len(lines) < n + 1:
        raise ValueError("Gram file has too few rows")
    rows = [[int(tok) for tok in lines[1 + i].split()] for i in range(n)]
    if any(len(r) != n for r in rows):
        raise ValueError("Gram file row length mismatch")
    return GramMatrix(rows)


def load_gram(path) -> GramMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_gram(fh.read())
