"""Exact enumeration over positive definite lattices.

LLL reduction with rational Gram-Schmidt, Fincke-Pohst style vector
enumeration with exact rational bounds, global representation search
X^t S X = T, imprimitivity measurement and representation extension.
No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence

from .matrices import (GramMatrix, IntMatrix, det, elementary_divisors,
                       gram_of_columns, inner_product, invert_unimodular,
                       is_positive_definite, column_hnf, saturate,
                       smith_normal_form, solve_integer_columns)

DELTA = Fraction(3, 4)  # LLL parameter


# ---------------------------------------------------------------------------
# LLL reduction on a Gram matrix

def _gram_schmidt(S: GramMatrix, basis: list[list[int]]):
    """Rational Gram-Schmidt data (mu, B*) of basis vectors w.r.t. S."""
    n = len(basis)
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms = [Fraction(0)] * n
    g = [[Fraction(inner_product(S, basis[i], basis[j])) for j in range(n)]
         for i in range(n)]
    for i in range(n):
        norms[i] = g[i][i] - sum(mu[i][j] * mu[i][j] * norms[j] for j in range(i))
        for k in range(i + 1, n):
            mu[k][i] = (g[k][i] - sum(mu[k][j] * mu[i][j] * norms[j]
                                      for j in range(i))) / norms[i]
    return mu, norms


def lll_reduce(S: GramMatrix, delta: Fraction = DELTA) -> tuple[GramMatrix, IntMatrix]:
    """LLL-reduced Gram S' = U^t S U with U unimodular; exact arithmetic."""
    if not is_positive_definite(S):
        raise ValueError("LLL requires a positive definite form")
    n = S.n
    basis = [[1 if i == j else 0 for i in range(n)] for j in range(n)]  # columns
    mu, norms = _gram_schmidt(S, basis)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = (mu[k][j] + Fraction(1, 2)).__floor__()
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], basis[j])]
                mu, norms = _gram_schmidt(S, basis)
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1]:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            mu, norms = _gram_schmidt(S, basis)
            k = max(k - 1, 1)
    U = IntMatrix.from_columns(basis)
    return gram_of_columns(S, U), U


# ---------------------------------------------------------------------------
# exact enumeration

def _floor_c_plus_sqrt(c: Fraction, t: Fraction) -> int:
    """floor(c + sqrt(t)) for rational c and rational t >= 0, exactly."""
    z = (c.numerator // c.denominator) + isqrt(t.numerator // t.denominator) + 2
    while True:
        diff = Fraction(z) - c
        if diff <= 0 or diff * diff <= t:
            return z
        z -= 1


def _cholesky(gram: GramMatrix):
    """q, mu with Q(x) = sum_i q_i (x_i + sum_{j>i} mu_ij x_j)^2."""
    n = gram.n
    a = [[Fraction(x) for x in row] for row in gram.entries]
    q = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        q[i] = a[i][i]
        if q[i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / q[i]
        for r in range(i + 1, n):
            for s in range(i + 1, n):
                a[r][s] -= a[r][i] * a[i][s] / q[i]
    return q, mu


def _enumerate_reduced(gram: GramMatrix, bound: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """All nonzero x with Q(x) <= bound in the given coordinates (both signs)."""
    n = gram.n
    q, mu = _cholesky(gram)
    x = [0] * n

    def rec(i: int, remaining: Fraction) -> Iterator[tuple[tuple[int, ...], int]]:
        if i < 0:
            if any(x):
                val = bound - remaining  # == Q(x); exact since all terms rational
                yield tuple(x), int(val)
            return
        center = sum(mu[i][j] * x[j] for j in range(i + 1, n))
        radius2 = remaining / q[i]
        hi = _floor_c_plus_sqrt(-center, radius2)
        lo = -_floor_c_plus_sqrt(center, radius2)
        for xi in range(lo, hi + 1):
            x[i] = xi
            term = q[i] * (xi + center) ** 2
            yield from rec(i - 1, remaining - term)
        x[i] = 0

    yield from rec(n - 1, Fraction(bound))


def _canonical_sign(v: tuple[int, ...]) -> bool:
    first = next((c for c in v if c != 0), 0)
    return first > 0


@dataclass(frozen=True)
class ShortVectorReport:
    """Vectors of bounded norm, stored once per +-pair (first nonzero
    coordinate positive)."""

    bound: int
    vectors: tuple[tuple[int, ...], ...]
    minimum: int | None

    def to_dict(self) -> dict:
        return {"schema_version": 1, "bound": self.bound,
                "minimum": self.minimum,
                "vectors": [list(v) for v in self.vectors]}


_short_cache: dict[tuple, tuple] = {}


def _short_vectors_raw(S: GramMatrix, bound: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Canonical-sign vectors with 0 < Q <= bound, with their values; cached."""
    key = (S.entries, bound)
    if key not in _short_cache:
        reduced, U = lll_reduce(S)
        out = []
        for v, val in _enumerate_reduced(reduced, bound):
            w = tuple(sum(U.entries[i][j] * v[j] for j in range(S.n))
                      for i in range(S.n))
            if _canonical_sign(w):
                out.append((w, val))
        out.sort(key=lambda t: (t[1], t[0]))
        _short_cache[key] = tuple(out)
    return _short_cache[key]


def short_vectors(S: GramMatrix, bound: int) -> ShortVectorReport:
    """All x (up to sign) with 0 < Q(x) <= bound."""
    raw = _short_vectors_raw(S, bound)
    vectors = tuple(v for v, _ in raw)
    minimum = raw[0][1] if raw else None
    return ShortVectorReport(bound=bound, vectors=vectors, minimum=minimum)


def lattice_minimum(S: GramMatrix) -> int:
    """mu(S) = min over nonzero integer x of x^t S x."""
    reduced, _ = lll_reduce(S)
    start = min(reduced.entries[i][i] for i in range(S.n))
    raw = _short_vectors_raw(S, start)
    return raw[0][1]


def _is_square(f: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if f < 0:
        return None
    a, b = f.numerator, f.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def _enumerate_exact(gram: GramMatrix, t,
                     shift: list[Fraction] | None = None
                     ) -> Iterator[tuple[int, ...]]:
    """All integer x with Q(x + shift) = t in the given coordinates (both
    signs), streamed; shift defaults to zero, t may be rational.

    Unlike the ball enumeration, the innermost level solves the exact
    remaining-value equation instead of scanning an interval, so the cost
    tracks the sphere, not the ball."""
    n = gram.n
    q, mu = _cholesky(gram)
    affine = shift is not None
    s0 = shift if affine else [Fraction(0)] * n
    x = [0] * n
    z = list(s0)  # z[j] = x[j] + s0[j]

    def rec(i: int, remaining: Fraction) -> Iterator[tuple[int, ...]]:
        center = s0[i] + sum(mu[i][j] * z[j] for j in range(i + 1, n))
        if i == 0:
            root = _is_square(remaining / q[0])
            if root is None:
                return
            for s in ({root, -root} if root else {root}):
                x0 = s - center
                if x0.denominator == 1:
                    x[0] = x0.numerator
                    if affine or any(x):
                        yield tuple(x)
            x[0] = 0
            return
        radius2 = remaining / q[i]
        hi = _floor_c_plus_sqrt(-center, radius2)
        lo = -_floor_c_plus_sqrt(center, radius2)
        for xi in range(lo, hi + 1):
            x[i] = xi
            z[i] = xi + s0[i]
            term = q[i] * (xi + center) ** 2
            if term <= remaining:
                yield from rec(i - 1, remaining - term)
        x[i] = 0
        z[i] = s0[i]

    yield from rec(n - 1, Fraction(t))


class _NormStream:
    """Lazy, memoized stream of canonical-sign vectors of one exact norm."""

    def __init__(self, S: GramMatrix, t: int):
        reduced, U = lll_reduce(S)
        n = S.n

        def gen():
            for v in _enumerate_exact(reduced, t):
                w = tuple(sum(U.entries[i][j] * v[j] for j in range(n))
                          for i in range(n))
                if _canonical_sign(w):
                    yield w

        self._gen = gen()
        self._seen: list[tuple[int, ...]] = []
        self._done = False

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        i = 0
        while True:
            if i < len(self._seen):
                yield self._seen[i]
                i += 1
                continue
            if self._done:
                return
            try:
                v = next(self._gen)
            except StopIteration:
                self._done = True
                return
            self._seen.append(v)


_norm_streams: dict[tuple, _NormStream] = {}


def _vectors_of_norm_iter(S: GramMatrix, t: int) -> _NormStream:
    key = (S.entries, t)
    if key not in _norm_streams:
        _norm_streams[key] = _NormStream(S, t)
    return _norm_streams[key]


def vectors_of_norm(S: GramMatrix, t: int) -> ShortVectorReport:
    """All x (up to sign) with x^t S x = t."""
    if t <= 0:
        raise ValueError("norm must be positive")
    vectors = tuple(sorted(_vectors_of_norm_iter(S, t)))
    return ShortVectorReport(bound=t, vectors=vectors, minimum=t if vectors else None)


# ---------------------------------------------------------------------------
# embeddings

@dataclass(frozen=True)
class Embedding:
    """An exact representation X^t S X = T with its imprimitivity data."""

    X: IntMatrix
    source: GramMatrix  # T
    target: GramMatrix  # S
    elementary_divisors: tuple[int, ...]
    imprimitivity_bound: int

    @classmethod
    def build(cls, S: GramMatrix, T: GramMatrix, X: IntMatrix) -> "Embedding":
        if gram_of_columns(S, X).entries != T.entries:
            raise ValueError("X^t S X != T")
        sat = saturate(X)
        coords = solve_integer_columns(sat, X)
        if coords is None:
            raise AssertionError("image not contained in its saturation")
        divisors = elementary_divisors(coords)
        return cls(X=X, source=T, target=S, elementary_divisors=divisors,
                   imprimitivity_bound=divisors[-1] if divisors else 1)

    def to_dict(self) -> dict:
        return {"schema_version": 1,
                "X": self.X.to_lists(),
                "elementary_divisors": list(self.elementary_divisors),
                "imprimitivity_bound": self.imprimitivity_bound}


def imprimitivity_bound(E: Embedding) -> int:
    """Smallest c with c (W cap Lambda) inside the image; equals the largest
    elementary divisor of the saturation inclusion."""
    return E.imprimitivity_bound


def _column_candidates(S: GramMatrix, norm: int, canonical_only: bool):
    for v in _vectors_of_norm_iter(S, norm):
        yield v
        if not canonical_only:
            yield tuple(-x for x in v)


def _solve_linear_over_Z(A: IntMatrix, rhs: list[int]
                         ) -> tuple[list[int], list[tuple[int, ...]]] | None:
    """Particular integer solution of A x = rhs plus a kernel basis, or
    None when no integer solution exists."""
    snf = smith_normal_form(A)
    k, n = A.rows, A.cols
    ut = [sum(snf.U.entries[i][j] * rhs[j] for j in range(k)) for i in range(k)]
    rank = sum(1 for d in snf.divisors if d != 0)
    if any(ut[i] != 0 for i in range(rank, k)):
        return None
    w = [0] * n
    for i in range(rank):
        d = snf.divisors[i]
        if ut[i] % d != 0:
            return None
        w[i] = ut[i] // d
    x0 = [sum(snf.V.entries[i][j] * w[j] for j in range(n)) for i in range(n)]
    kernel = [snf.V.column(j) for j in range(rank, n)]
    return x0, kernel


def _constrained_candidates(S: GramMatrix, prior: list[tuple[int, ...]],
                            inners: list[int], norm: int
                            ) -> Iterator[tuple[int, ...]]:
    """All x with x^t S v_j = inners[j] for the prior columns v_j and
    Q(x) = norm, by exact enumeration of the shifted kernel lattice.

    Avoids scanning the full norm-`norm` sphere when the linear
    constraints cut it down to a thin slice."""
    n = S.n
    rows = [[sum(S.entries[i][k] * v[k] for k in range(n)) for i in range(n)]
            for v in prior]
    A = IntMatrix(rows)
    solved = _solve_linear_over_Z(A, inners)
    if solved is None:
        return
    x0, kernel = solved
    if not kernel:
        if inner_product(S, tuple(x0), tuple(x0)) == norm:
            yield tuple(x0)
        return
    K = IntMatrix.from_columns(kernel)
    G = gram_of_columns(S, K)
    Gred, U = lll_reduce(G)
    B = K @ U  # x = x0 + B y, Gram of B's columns is Gred
    d = Gred.n
    # complete the square: Q(x0 + B y) = (y + mu)^t Gred (y + mu) + const
    cvec = [sum(B.entries[i][r] * sum(S.entries[i2][i] * x0[i2]
                                      for i2 in range(n))
                for i in range(n)) for r in range(d)]
    mu = _solve_fraction_system(Gred, cvec)
    q0 = inner_product(S, tuple(x0), tuple(x0))
    target = Fraction(norm) - q0 + sum(c * m for c, m in zip(cvec, mu))
    if target < 0:
        return
    for y in _enumerate_exact(Gred, target, shift=mu):
        yield tuple(x0[i] + sum(B.entries[i][r] * y[r] for r in range(d))
                    for i in range(n))


def _solve_fraction_system(G: GramMatrix, rhs: list[int]) -> list[Fraction]:
    """Solve G mu = rhs over Q for nonsingular G."""
    n = G.n
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])]
         for i, row in enumerate(G.entries)]
    for col in range(n):
        pivot = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


def _search_embeddings(S: GramMatrix, T: GramMatrix, c: int,
                       limit: int | None,
                       fixed: list[tuple[int, ...]] | None = None
                       ) -> list[IntMatrix]:
    """Backtracking over columns; fixed columns (if any) are a prescribed
    prefix and exempt from sign canonicalization."""
    m = T.n
    fixed = fixed or []
    k0 = len(fixed)
    found: list[IntMatrix] = []

    def backtrack(k: int, chosen: list[tuple[int, ...]]):
        if limit is not None and len(found) >= limit:
            return
        if k == m:
            found.append(IntMatrix.from_columns(chosen))
            return
        if k == 0:
            candidates = _column_candidates(S, T.entries[0][0], True)
        else:
            candidates = _constrained_candidates(
                S, chosen, [T.entries[j][k] for j in range(k)],
                T.entries[k][k])
        for v in candidates:
            chosen.append(v)
            backtrack(k + 1, chosen)
            chosen.pop()
            if limit is not None and len(found) >= limit:
                return

    backtrack(k0, list(fixed))
    return found


def find_representations(S: GramMatrix, T: GramMatrix, c: int = 1,
                         limit: int | None = None) -> list[Embedding]:
    """All (or up to limit) X with X^t S X = T and imprimitivity bound
    dividing c, up to the global sign symmetry."""
    if not is_positive_definite(S) or not is_positive_definite(T):
        raise ValueError("both forms must be positive definite")
    if T.n > S.n:
        raise ValueError("target rank exceeds ambient rank")
    out: list[Embedding] = []

    def emit(X: IntMatrix) -> bool:
        emb = Embedding.build(S, T, X)
        if c % emb.imprimitivity_bound == 0:
            out.append(emb)
        return limit is not None and len(out) >= limit

    # the divisor filter sits outside the column search, so ask for
    # matrices until enough filtered embeddings have been collected
    m = T.n
    fixed: list[tuple[int, ...]] = []

    def backtrack(k: int, chosen: list[tuple[int, ...]]) -> bool:
        if k == m:
            return emit(IntMatrix.from_columns(chosen))
        if k == 0:
            candidates = _column_candidates(S, T.entries[0][0], True)
        else:
            candidates = _constrained_candidates(
                S, chosen, [T.entries[j][k] for j in range(k)],
                T.entries[k][k])
        for v in candidates:
            chosen.append(v)
            stop = backtrack(k + 1, chosen)
            chosen.pop()
            if stop:
                return True
        return False

    backtrack(0, fixed)
    return out


def extend_representation(S: GramMatrix, sigma: Embedding, T_M: GramMatrix,
                          glue: IntMatrix) -> Embedding | None:
    """Extend sigma: R -> Lambda to tau: M -> Lambda with tau|_R = sigma.

    glue holds the coordinates of R's basis inside M's basis (one column
    per basis vector of R); its Gram under T_M must reproduce sigma's
    source Gram.
    """
    r = sigma.source.n
    m = T_M.n
    if glue.rows != m or glue.cols != r:
        raise ValueError("glue shape mismatch")
    if gram_of_columns(T_M, glue).entries != sigma.source.entries:
        raise ValueError("glue Gram does not match sigma's source")
    if m == r and abs(det_of(glue)) == 1:
        # trivial extension: M = R up to basis change
        ginv = invert_unimodular(glue)
        return Embedding.build(S, T_M, sigma.X @ ginv)

    sat = saturate(glue)
    coords = solve_integer_columns(sat, glue)  # glue = sat @ coords
    # tau on the saturation basis is forced over Q; it must be integral
    cinv = _fraction_inverse(coords)
    xb = _matmul_fraction(sigma.X, cinv)
    if xb is None:
        return None
    # complete the saturation basis to a unimodular basis of Z^m
    snf = smith_normal_form(sat)
    uinv = invert_unimodular(snf.U)
    completion = [uinv.column(j) for j in range(r, m)]
    P = IntMatrix.from_columns([sat.column(j) for j in range(r)] + completion)
    Tp = gram_of_columns(T_M, P)  # Gram of M in the adapted basis
    matches = _search_embeddings(S, Tp, 1, limit=1,
                                 fixed=[tuple(col) for col in xb.columns()])
    if not matches:
        return None
    X_adapted = matches[0]
    X = X_adapted @ invert_unimodular(P)
    tau = Embedding.build(S, T_M, X)
    if (tau.X @ glue).entries != sigma.X.entries:
        raise AssertionError("extension does not restrict to sigma")
    return tau


def det_of(M: IntMatrix) -> int:
    from .matrices import det_int
    return det_int(M)


def _fraction_inverse(M: IntMatrix) -> list[list[Fraction]]:
    n = M.rows
    a = [[Fraction(x) for x in row] for row in M.entries]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ValueError("singular coordinate matrix")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        f = a[col][col]
        a[col] = [x / f for x in a[col]]
        inv[col] = [x / f for x in inv[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
                inv[i] = [x - f * y for x, y in zip(inv[i], inv[col])]
    return inv


def _matmul_fraction(X: IntMatrix, F: list[list[Fraction]]) -> IntMatrix | None:
    """X (int) times F (fractions); None if the product is not integral."""
    rows, inner = X.rows, X.cols
    cols = len(F[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            v = sum(Fraction(X.entries[i][k]) * F[k][j] for k in range(inner))
            if v.denominator != 1:
                return None
            row.append(v.numerator)
        out.append(row)
    return IntMatrix(out)


# ---------------------------------------------------------------------------
# superlattice search (desk-scale witness finder)

def _prime_factors(n: int) -> list[int]:
    import sympy
    return sorted(sympy.factorint(n).keys())


def superlattices_of_prime_index(G: GramMatrix, d: int) -> list[tuple[GramMatrix, IntMatrix]]:
    """Integral superlattices of index d (prime) of the lattice with Gram G.

    Returns (new Gram, basis matrix of the old lattice inside the new one).
    """
    m = G.n
    out = []
    seen = set()
    for x in _nonzero_tuples_mod(d, m):
        gx = [sum(G.entries[i][j] * x[j] for j in range(m)) for i in range(m)]
        if any(v % d for v in gx):
            continue
        qx = sum(x[i] * gx[i] for i in range(m))
        if qx % (d * d):
            continue
        # basis of G + Z(x/d): HNF of the columns {d e_i, x} divided by d
        gens = [[d if i == j else 0 for i in range(m)] for j in range(m)] + [list(x)]
        H = column_hnf(IntMatrix.from_columns(gens))
        # new basis columns are H/d in old coordinates; old basis inside new:
        # solve (H/d) Y = I  =>  Y = d H^{-1}
        hinv = _fraction_inverse(H)
        Y = [[hinv[i][j] * d for j in range(m)] for i in range(m)]
        if any(v.denominator != 1 for row in Y for v in row):
            raise AssertionError("old lattice not contained in new one")
        inclusion = IntMatrix([[v.numerator for v in row] for row in Y])
        gram_rows = _rational_congruence(G, H, d)
        key = tuple(map(tuple, gram_rows))
        if key in seen:
            continue
        seen.add(key)
        out.append((GramMatrix(gram_rows), inclusion))
    return out


def _rational_congruence(G: GramMatrix, H: IntMatrix, d: int) -> list[list[int]]:
    """(H/d)^t G (H/d), which must be integral."""
    m = G.n
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            v = Fraction(0)
            for a in range(m):
                for b in range(m):
                    v += Fraction(H.entries[a][i] * G.entries[a][b] * H.entries[b][j], d * d)
            if v.denominator != 1:
                raise AssertionError("superlattice Gram not integral")
            row.append(v.numerator)
        rows.append(row)
    return rows


def _nonzero_tuples_mod(d: int, m: int):
    from itertools import product
    for x in product(range(d), repeat=m):
        if any(x):
            yield x


def search_primitive_superlattice(S_context: GramMatrix, M: GramMatrix,
                                  C1: int, index_bound: int
                                  ) -> tuple[GramMatrix, IntMatrix] | None:
    """Desk-scale witness finder: a superlattice M' of M with index <= bound,
    minimum >= C1 and primitive (c = 1) local representability by the
    context lattice at every place.  Not a proof of anything; a witness."""
    from .localrep import represents_locally_everywhere

    if not is_positive_definite(M):
        raise ValueError("M must be positive definite")

    def acceptable(G: GramMatrix) -> bool:
        if lattice_minimum(G) < C1:
            return False
        certs = represents_locally_everywhere(S_context, G, 1)
        return all(cert.status == "representable" for cert in certs.values())

    queue: list[tuple[GramMatrix, IntMatrix, int]] = [(M, IntMatrix.identity(M.n), 1)]
    seen = {M.entries}
    while queue:
        G, incl, idx = queue.pop(0)
        if acceptable(G):
            return G, incl
        for d in [p for p in (2, 3, 5, 7, 11, 13) if idx * p <= index_bound]:
            for G2, step in superlattices_of_prime_index(G, d):
                if G2.entries in seen:
                    continue
                seen.add(G2.entries)
                queue.append((G2, step @ incl, idx * d))
    return None
