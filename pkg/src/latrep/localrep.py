"""Lattice-level representability of T by S over Z_p with bounded
imprimitivity, and the isotropy-of-complement condition at a
distinguished prime.

The decision procedure is a certified search modulo p^N: a witness of
X^t S X = T mod p^N whose induced sublattice has small enough
discriminant valuation lifts to Z_p by the quadratic Hensel argument,
while exhaustion without any admissible witness modulo p^N refutes
representability (a genuine Z_p solution would reduce to one).
Outcomes that survive one precision escalation are surfaced as a third
"undecided" status, never coerced to a boolean.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import sympy

from .enumeration import find_representations
from .matrices import (GramMatrix, IntMatrix, det, elementary_divisors,
                       gram_of_columns, inner_product, is_positive_definite,
                       orthogonal_complement)
from .padic import (Place, REAL, is_isotropic, ord_p, space_invariants,
                    space_represents)

REPRESENTABLE = "representable"
NOT_REPRESENTABLE = "not_representable"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class LocalRepCertificate:
    place: Place
    status: str
    witness: IntMatrix | None = None
    precision: int | None = None  # exponent N; None for exact witnesses
    exact: bool = False
    divisor_valuations: tuple[int, ...] = ()
    margin: int | None = None
    method: str = "search"

    @property
    def representable(self) -> bool:
        return self.status == REPRESENTABLE

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "place": str(self.place),
            "status": self.status,
            "precision": self.precision,
            "exact": self.exact,
            "witness": None if self.witness is None else
                       [[str(x) for x in row] for row in self.witness.entries],
            "divisor_valuations": list(self.divisor_valuations),
            "margin": self.margin,
            "method": self.method,
        }


def _exact_certificate(place: Place, X: IntMatrix, p: int | None) -> LocalRepCertificate:
    divisors = elementary_divisors(X)
    vals = tuple(ord_p(d, p) for d in divisors) if p else ()
    return LocalRepCertificate(place=place, status=REPRESENTABLE, witness=X,
                               precision=None, exact=True,
                               divisor_valuations=vals, method="exact")


def _divisor_valuations_mod(X: IntMatrix, p: int, N: int) -> tuple[int, ...]:
    """p-valuations of the elementary divisors of a lift, with >= N as a
    sentinel for divisors not determined at this precision."""
    from .matrices import smith_normal_form
    snf = smith_normal_form(X)
    vals = []
    for d in snf.divisors:
        if d == 0:
            vals.append(N)
        else:
            v = ord_p(d, p)
            vals.append(v if v < N else N)
    return tuple(vals)


def _search_mod_pN(S: GramMatrix, T: GramMatrix, p: int, c: int, N: int,
                   margin_bound: int, node_budget: int):
    """Enumerate X mod p^N with X^t S X = T mod p^N column by column.

    Returns (certified_witness, witness_vals, any_filtered, budget_exceeded).
    A 'filtered' witness passes the elementary-divisor valuation bound;
    a certified one additionally passes the Hensel margin rule.
    """
    n, m = S.n, T.n
    pN = p ** N
    ordc = ord_p(c, p) if c % p == 0 else 0
    budget = [node_budget]
    any_filtered = [False]
    srows = S.entries

    def sdot(x, y):
        return sum(x[i] * sum(srows[i][j] * y[j] for j in range(n))
                   for i in range(n))

    def divisor_prune(prefix: list[tuple[int, ...]], y: list[int]) -> bool:
        """True when the prefix columns can still extend to a witness whose
        elementary divisors all have valuation <= ordc.  Decidable from the
        entries mod p^(ordc+1), since divisor valuations <= ordc are
        determined by the minors at that precision; divisors of a column
        subset divide those of the full matrix."""
        X = IntMatrix.from_columns(prefix + [y])
        from .matrices import smith_normal_form
        return all(d != 0 and ord_p(d, p) <= ordc
                   for d in smith_normal_form(X).divisors)

    def srow(x):
        return [sum(srows[i][j] * x[j] for j in range(n)) for i in range(n)]

    def affine_solutions(rows, rhs):
        """All d in F_p^n with rows . d = rhs, as digit tuples."""
        k = len(rows)
        a = [list(r) + [b % p] for r, b in zip(rows, rhs)]
        piv_cols = []
        rank = 0
        for col in range(n):
            piv = next((i for i in range(rank, k) if a[i][col] % p), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            inv = pow(a[rank][col], -1, p)
            a[rank] = [(v * inv) % p for v in a[rank]]
            for i in range(k):
                if i != rank and a[i][col] % p:
                    f = a[i][col]
                    a[i] = [(v - f * w) % p for v, w in zip(a[i], a[rank])]
            piv_cols.append(col)
            rank += 1
        if any(a[i][n] % p for i in range(rank, k)):
            return
        free = [c for c in range(n) if c not in piv_cols]
        for vals in product(range(p), repeat=len(free)):
            d = [0] * n
            for c, v in zip(free, vals):
                d[c] = v
            for r, c in enumerate(piv_cols):
                d[c] = (a[r][n] - sum(a[r][fc] * d[fc] for fc in free)) % p
            yield tuple(d)

    def column_solutions(prefix: list[tuple[int, ...]], k: int):
        """All x mod p^N with Q(x) = T_kk and prefix inner products mod p^N."""
        tkk = T.entries[k][k]
        lins = [(prefix[j], srow(prefix[j]), T.entries[j][k]) for j in range(k)]

        def candidate_digits(level, x, step, qmod):
            """Digit vectors at this level; for level >= 1 the constraints
            are affine-linear over F_p, so only the solution coset is
            enumerated (a superset of the valid digits; each candidate is
            re-checked exactly below)."""
            if level == 0:
                yield from product(range(p), repeat=n)
                return
            rows, rhs = [], []
            sx = srow(x)
            for _, scol, target in lins:
                r = sdot_cached(scol, x) - target
                rows.append([v % p for v in scol])
                rhs.append(-(r // step))
            # quadratic constraint: Q(x + step d) = Q(x) + 2 step (Sx . d)
            # + step^2 Q(d); at p = 2 the d_i^2 = d_i identity keeps the
            # step = 2 case linear as well
            rq = sdot(x, x) - tkk
            if p != 2:
                rows.append([(2 * v) % p for v in sx])
                rhs.append(-(rq // step))
            elif 2 * step < qmod or qmod == pN and 4 * step <= pN:
                coeff = [v % 2 for v in sx]
                if step == 2:
                    coeff = [(v + srows[i][i]) % 2 for i, v in enumerate(coeff)]
                rows.append(coeff)
                rhs.append(-(rq // (2 * step)))
            yield from affine_solutions(rows, rhs)

        def sdot_cached(sc, y):
            return sum(sc[i] * y[i] for i in range(n))

        def rec(level: int, x: list[int]):
            if budget[0] <= 0:
                return
            if level == N:
                yield tuple(x)
                return
            step = p ** level
            mod = step * p
            # any completion of y to a mod-p^N witness changes Q(y) by a
            # multiple of 2 p^{level+1}, so at p = 2 the value is pinned one
            # level deeper than the entries
            qmod = min(mod * 2, pN) if p == 2 else mod
            for digits in candidate_digits(level, x, step, qmod):
                budget[0] -= 1
                if budget[0] <= 0:
                    return
                y = [x[i] + digits[i] * step for i in range(n)]
                ok = True
                for col, _, target in lins:
                    if (sdot(col, y) - target) % mod:
                        ok = False
                        break
                if ok and (sdot(y, y) - tkk) % qmod:
                    ok = False
                if ok and level == ordc and not divisor_prune(prefix, y):
                    ok = False
                if ok:
                    yield from rec(level + 1, y)

        yield from rec(0, [0] * n)

    certified = None
    certified_vals = ()

    def full_check(cols: list[tuple[int, ...]]):
        nonlocal certified, certified_vals
        X = IntMatrix.from_columns(cols)
        vals = _divisor_valuations_mod(X, p, N)
        if any(v > ordc for v in vals):
            return False
        any_filtered[0] = True
        G = gram_of_columns(S, X)
        dG = det(G)
        vd = ord_p(dG, p) if dG != 0 else N
        if vd <= margin_bound and 2 * vd < N:
            certified = X
            certified_vals = vals
            return True
        return False

    def columns(k: int, chosen: list[tuple[int, ...]]) -> bool:
        if k == m:
            return full_check(chosen)
        for x in column_solutions(chosen, k):
            if columns(k + 1, chosen + [x]):
                return True
            if budget[0] <= 0:
                return False
        return False

    columns(0, [])
    return certified, certified_vals, any_filtered[0], budget[0] <= 0


def represents_over_Zp(S: GramMatrix, T: GramMatrix, p: int, c: int = 1,
                       precision: int | None = None,
                       node_budget: int = 2_000_000,
                       try_global: bool = True) -> LocalRepCertificate:
    """Decide existence of X over Z_p with X^t S X = T and all elementary
    divisors dividing c."""
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if T.n > S.n:
        raise ValueError("target rank exceeds ambient rank")
    dS, dT = det(S), det(T)
    if dS == 0 or dT == 0:
        raise ValueError("forms must be nonsingular")
    place = Place.finite(p)

    if try_global and is_positive_definite(S) and is_positive_definite(T):
        embs = find_representations(S, T, c, limit=1)
        if embs:
            return _exact_certificate(place, embs[0].X, p)

    ordc = ord_p(c, p) if c % p == 0 else 0
    e = (1 if p == 2 else 0) + ord_p(dS, p) + ord_p(dT, p) + 2 * ordc
    margin_bound = ord_p(dT, p) + 2 * T.n * ordc
    N0 = precision if precision is not None else 2 * e + 1
    schedule = [N0] if precision is not None else [N0, 2 * N0]

    last_N = N0
    for N in schedule:
        last_N = N
        witness, vals, any_filtered, exhausted_budget = _search_mod_pN(
            S, T, p, c, N, margin_bound, node_budget)
        if witness is not None:
            return LocalRepCertificate(place=place, status=REPRESENTABLE,
                                       witness=witness, precision=N,
                                       divisor_valuations=vals,
                                       margin=margin_bound, method="search")
        if exhausted_budget:
            return LocalRepCertificate(place=place, status=UNDECIDED,
                                       precision=N, margin=margin_bound,
                                       method="budget")
        if not any_filtered:
            return LocalRepCertificate(place=place, status=NOT_REPRESENTABLE,
                                       precision=N, margin=margin_bound,
                                       method="search")
    return LocalRepCertificate(place=place, status=UNDECIDED, precision=last_N,
                               margin=margin_bound, method="search")


def _relevant_primes(S: GramMatrix, T: GramMatrix, c: int) -> list[int]:
    n = abs(c * det(S) * det(T))
    return sorted(sympy.factorint(n).keys() | {2})


def represents_locally_everywhere(S: GramMatrix, T: GramMatrix, c: int = 1
                                  ) -> dict[Place, LocalRepCertificate]:
    """Certificates at the real place and at every finite place where the
    answer is not forced by the unimodular-lattice criterion."""
    if not is_positive_definite(S) or not is_positive_definite(T):
        raise ValueError("both forms must be positive definite")
    if T.n > S.n:
        raise ValueError("target rank exceeds ambient rank")

    out: dict[Place, LocalRepCertificate] = {}
    out[REAL] = LocalRepCertificate(place=REAL, status=REPRESENTABLE,
                                    method="signature")

    global_embs = find_representations(S, T, c, limit=1)
    witness = global_embs[0].X if global_embs else None

    for p in _relevant_primes(S, T, c):
        if witness is not None:
            out[Place.finite(p)] = _exact_certificate(Place.finite(p), witness, p)
        else:
            out[Place.finite(p)] = represents_over_Zp(S, T, p, c,
                                                      try_global=False)

    # outside the relevant set both lattices are unimodular at an odd prime;
    # for rank gap >= 1 that forces representability, for equal ranks the
    # determinant square classes must agree at p
    if T.n == S.n and witness is None:
        from .padic import squarefree_class
        q = squarefree_class(det(S) * det(T))
        if q != 1:
            invS, invT = space_invariants(S), space_invariants(T)
            checked = set(_relevant_primes(S, T, c))
            cand = 3
            while True:
                if cand not in checked and sympy.isprime(cand):
                    v = Place.finite(cand)
                    if not space_represents(invT, invS, v):
                        out[v] = LocalRepCertificate(
                            place=v, status=NOT_REPRESENTABLE,
                            method="unimodular")
                        break
                    checked.add(cand)
                if cand > 4 * abs(q) + 100:
                    break  # quotient is a square at every odd prime
                cand += 2
    return out


def complement_isotropic_at_q(S: GramMatrix, X: IntMatrix, q: int) -> bool:
    """Is the orthogonal complement of the witness's column span isotropic
    over Q_q?"""
    if not sympy.isprime(q):
        raise ValueError(f"{q} is not prime")
    if det(gram_of_columns(S, X)) == 0:
        raise ValueError("witness columns span a degenerate subspace")
    comp = orthogonal_complement(S, X)
    inv = space_invariants(gram_of_columns(S, comp))
    return is_isotropic(inv, Place.finite(q))


def auto_isotropy_shortcut(S: GramMatrix, T: GramMatrix, q: int) -> bool:
    """The isotropy condition holds automatically for m <= n-5, or when both
    discriminants are units at q and the rank gap is at least 3."""
    n, m = S.n, T.n
    if m <= n - 5:
        return True
    return (det(S) % q != 0 and det(T) % q != 0 and n - m >= 3)
