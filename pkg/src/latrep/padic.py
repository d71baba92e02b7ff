"""p-adic and real invariants of quadratic spaces and lattices.

Places of Q, valuations, square classes, Hilbert symbols, Hasse
invariants, Jordan decompositions, isotropy and space-level
representability at every place.  F = Q throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .matrices import GramMatrix, congruence_diagonalization, det


@dataclass(frozen=True, order=True)
class Place:
    """A prime p or the real place (p = 0)."""

    p: int

    def __post_init__(self):
        if self.p != 0 and not sympy.isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def real(cls) -> "Place":
        return cls(0)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(int(p))

    @property
    def is_real(self) -> bool:
        return self.p == 0

    def __str__(self) -> str:
        return "oo" if self.is_real else str(self.p)


REAL = Place.real()


def ord_p(a, p: int) -> int:
    """Additive p-adic valuation of a nonzero rational."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    num, den = a.numerator, a.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(a, p: int) -> Fraction:
    """a / p^ord_p(a)."""
    return Fraction(a) / Fraction(p) ** ord_p(a, p)


def squarefree_class(a) -> int:
    """Canonical representative (signed squarefree integer) of a's square class."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("0 has no square class")
    n = a.numerator * a.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    for q, e in sympy.factorint(n).items():
        if e % 2:
            out *= q
    return sign * out


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd p, a prime to p; values +-1."""
    s = pow(a % p, (p - 1) // 2, p)
    return 1 if s == 1 else -1


def hilbert_symbol(a, b, v: Place) -> int:
    """Hilbert symbol (a, b)_v: +1 iff z^2 = a x^2 + b y^2 has a nontrivial
    solution over the completion at v.  Closed-form rules."""
    a = Fraction(a)
    b = Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if v.is_real:
        return -1 if a < 0 and b < 0 else 1
    p = v.p
    alpha, beta = ord_p(a, p), ord_p(b, p)
    u = unit_part(a, p)
    w = unit_part(b, p)
    # reduce the unit parts to integers prime to p
    un = u.numerator * u.denominator
    wn = w.numerator * w.denominator
    if p == 2:
        eps_u = ((un - 1) // 2) % 2
        eps_w = ((wn - 1) // 2) % 2
        om_u = ((un * un - 1) // 8) % 2
        om_w = ((wn * wn - 1) // 8) % 2
        exp = eps_u * eps_w + alpha * om_w + beta * om_u
        return -1 if exp % 2 else 1
    sign = 1
    if (alpha * beta) % 2 and p % 4 == 3:
        sign = -sign
    if beta % 2:
        sign *= legendre(un, p)
    if alpha % 2:
        sign *= legendre(wn, p)
    return sign


def hasse_invariant(diag: Sequence, v: Place) -> int:
    """Product over i < j of (d_i, d_j)_v."""
    d = [Fraction(x) for x in diag]
    out = 1
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            out *= hilbert_symbol(d[i], d[j], v)
    return out


def is_local_square(a, v: Place) -> bool:
    """Is a a square in the completion at v?"""
    a = Fraction(a)
    if a == 0:
        raise ValueError("0 is excluded")
    if v.is_real:
        return a > 0
    p = v.p
    e = ord_p(a, p)
    if e % 2:
        return False
    u = unit_part(a, p)
    un = u.numerator * u.denominator
    if p == 2:
        return un % 8 == 1
    return legendre(un, p) == 1


def same_square_class(a, b, v: Place) -> bool:
    return is_local_square(Fraction(a) * Fraction(b), v)


def relevant_places(S: GramMatrix) -> list[Place]:
    """The real place, 2, and all primes dividing det(S)."""
    d = det(S)
    if d == 0:
        raise ValueError("singular Gram matrix")
    primes = sorted(sympy.factorint(abs(d)).keys() | {2})
    return [REAL] + [Place.finite(p) for p in primes]


@dataclass(frozen=True)
class SpaceInvariants:
    """Rank, determinant square class, Hasse symbols and real signature of a
    nonsingular quadratic space over Q."""

    rank: int
    det_class: int  # signed squarefree integer
    hasse: tuple[tuple[Place, int], ...]  # symbols at the relevant places
    signature: tuple[int, int]  # (positive, negative) at the real place

    def hasse_at(self, v: Place) -> int:
        for place, val in self.hasse:
            if place == v:
                return val
        if v.is_real:
            # Hasse at the real place from the signature: (-1,-1) pairs
            neg = self.signature[1]
            return -1 if (neg * (neg - 1) // 2) % 2 else 1
        return 1  # trivial outside the relevant set


def invariants_of_diagonal(diag: Sequence) -> SpaceInvariants:
    d = [Fraction(x) for x in diag]
    if any(x == 0 for x in d):
        raise ValueError("diagonal entry 0")
    detc = squarefree_class(_prod(d))
    pos = sum(1 for x in d if x > 0)
    neg = len(d) - pos
    # candidate places: anywhere the symbol could be nontrivial
    candidates = {REAL, Place.finite(2)}
    for x in d:
        n = abs(x.numerator * x.denominator)
        for q in sympy.factorint(n).keys():
            candidates.add(Place.finite(q))
    always = {REAL, Place.finite(2)}
    for q in sympy.factorint(abs(detc)).keys():
        always.add(Place.finite(q))
    values = {v: hasse_invariant(d, v) for v in candidates}
    # canonical storage: the mandatory places plus any place with symbol -1,
    # so the result does not depend on which diagonalization was used
    stored = {v for v in candidates if v in always or values[v] == -1}
    hasse = tuple(sorted(((v, values[v]) for v in stored), key=lambda t: t[0].p))
    return SpaceInvariants(rank=len(d), det_class=detc, hasse=hasse,
                           signature=(pos, neg))


def _prod(xs):
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def space_invariants(S: GramMatrix) -> SpaceInvariants:
    """Invariants of the rational quadratic space of S; S nonsingular."""
    if det(S) == 0:
        raise ValueError("singular Gram matrix")
    _, diag = congruence_diagonalization(S)
    return invariants_of_diagonal(diag)


# ---------------------------------------------------------------------------
# Jordan decomposition

@dataclass(frozen=True)
class JordanComponent:
    scale: int
    rank: int
    unit_block: GramMatrix  # p-adically unimodular, entries reduced mod p^k
    even: bool | None = None  # p = 2 only


@dataclass(frozen=True)
class JordanSplitting:
    prime: Place
    components: tuple[JordanComponent, ...]

    def symbol(self) -> tuple:
        """Hashable invariant summary used for genus comparisons."""
        p = self.prime.p
        out = []
        for comp in self.components:
            d = det(comp.unit_block)
            if p == 2:
                out.append((comp.scale, comp.rank, d % 8, comp.even))
            else:
                out.append((comp.scale, comp.rank, legendre(d, p)))
        return tuple(out)


def _reduce_mod(x: Fraction, modulus: int) -> int:
    """Lift of a p-integral rational modulo p^k."""
    num = x.numerator % modulus
    den = x.denominator % modulus
    return (num * pow(den, -1, modulus)) % modulus


def jordan_decomposition(S: GramMatrix, p: int) -> JordanSplitting:
    """p-adic Jordan splitting of a nonsingular integral Gram matrix.

    Odd p: full diagonalization over Z_p by pivoting on minimal-valuation
    entries (off-diagonal minima handled by a row/column combination,
    valid since 2 is a unit).  p = 2: pivot on a minimal-valuation
    diagonal entry when one achieves the minimum; otherwise split off a
    2x2 block around a minimal off-diagonal entry.
    """
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    d = det(S)
    if d == 0:
        raise ValueError("singular Gram matrix")
    n = S.n
    ord_det = ord_p(d, p)
    precision = p ** (ord_det + 3)

    a = [[Fraction(x) for x in row] for row in S.entries]
    active = list(range(n))
    pieces: list[tuple[int, list[list[Fraction]], bool]] = []  # (scale, block, is2x2)

    def val(x: Fraction) -> int:
        return ord_p(x, p) if x != 0 else 10 ** 9

    def eliminate_against_1x1(i: int):
        for k in active:
            if k != i and a[k][i] != 0:
                f = a[k][i] / a[i][i]
                for l in range(n):
                    a[k][l] -= f * a[i][l]
                for l in range(n):
                    a[l][k] -= f * a[l][i]

    def eliminate_against_2x2(i: int, j: int):
        dd = a[i][i] * a[j][j] - a[i][j] * a[i][j]
        for k in active:
            if k in (i, j):
                continue
            ri, rj = a[k][i], a[k][j]
            if ri == 0 and rj == 0:
                continue
            # solve [aii aij; aij ajj] (fi, fj)^t = (ri, rj)^t
            fi = (ri * a[j][j] - rj * a[i][j]) / dd
            fj = (rj * a[i][i] - ri * a[i][j]) / dd
            for l in range(n):
                a[k][l] -= fi * a[i][l] + fj * a[j][l]
            for l in range(n):
                a[l][k] -= fi * a[l][i] + fj * a[l][j]

    while active:
        best_v = None
        best = None
        for i in active:
            for j in active:
                if a[i][j] != 0:
                    v = val(a[i][j])
                    if best_v is None or v < best_v or (v == best_v and i == j and best[0] != best[1]):
                        best_v, best = v, (i, j)
        if best is None:
            raise ValueError("degenerate block")  # cannot happen for nonsingular S
        i, j = best
        diag_hit = next((k for k in active if val(a[k][k]) == best_v), None)
        if p != 2 and diag_hit is None:
            # x_i <- x_i + x_j brings the minimal valuation to the diagonal
            for l in range(n):
                a[i][l] += a[j][l]
            for l in range(n):
                a[l][i] += a[l][j]
            diag_hit = i
            assert val(a[i][i]) == best_v
        if diag_hit is not None:
            k = diag_hit
            eliminate_against_1x1(k)
            pieces.append((best_v, [[a[k][k]]], False))
            active.remove(k)
        else:
            # p = 2, minimal valuation only off-diagonal: even 2x2 block
            if i == j:
                i, j = next(((x, y) for x in active for y in active
                             if x != y and val(a[x][y]) == best_v))
            eliminate_against_2x2(i, j)
            pieces.append((best_v, [[a[i][i], a[i][j]], [a[j][i], a[j][j]]], True))
            active.remove(i)
            active.remove(j)

    # group pieces by scale into components
    by_scale: dict[int, list[tuple[list[list[Fraction]], bool]]] = {}
    for scale, block, two in pieces:
        by_scale.setdefault(scale, []).append((block, two))
    comps = []
    for scale in sorted(by_scale):
        blocks = by_scale[scale]
        size = sum(len(b) for b, _ in blocks)
        g = [[Fraction(0)] * size for _ in range(size)]
        off = 0
        for b, _ in blocks:
            for r in range(len(b)):
                for c in range(len(b)):
                    g[off + r][off + c] = b[r][c] / Fraction(p) ** scale
            off += len(b)
        unit = GramMatrix([[_reduce_mod(x, precision) for x in row] for row in g])
        if ord_p(det(unit), p) != 0:
            raise AssertionError("unit block is not unimodular at p")
        even = None
        if p == 2:
            even = all(unit.entries[i][i] % 2 == 0 for i in range(size))
        comps.append(JordanComponent(scale=scale, rank=size, unit_block=unit, even=even))

    total = sum(c.scale * c.rank for c in comps)
    if total != ord_det:
        raise AssertionError("scale/rank sum does not match ord_p(det)")
    return JordanSplitting(prime=Place.finite(p), components=tuple(comps))


# ---------------------------------------------------------------------------
# isotropy and space representability

def is_isotropic(inv: SpaceInvariants, v: Place) -> bool:
    """Does the space contain a nonzero vector of Q-value zero over the
    completion at v?  Classical classification."""
    if v.is_real:
        pos, neg = inv.signature
        return pos > 0 and neg > 0
    n = inv.rank
    d = inv.det_class
    eps = inv.hasse_at(v)
    if n <= 1:
        return False
    if n == 2:
        return same_square_class(d, -1, v)
    if n == 3:
        return eps != -hilbert_symbol(-1, -d, v)
    if n == 4:
        anisotropic = is_local_square(d, v) and eps == -hilbert_symbol(-1, -1, v)
        return not anisotropic
    return True


def _space_exists(rank: int, det_class: int, hasse: int, v: Place) -> bool:
    """Is there a quadratic space over Q_v with these invariants?
    (Finite v only; rank >= 0.)"""
    if rank == 0:
        return det_class == 1 and hasse == 1
    if rank == 1:
        return hasse == 1
    if rank == 2:
        if same_square_class(det_class, -1, v) and hasse == -hilbert_symbol(-1, -1, v):
            return False
        return True
    return True


def space_represents(target: SpaceInvariants, ambient: SpaceInvariants,
                     v: Place) -> bool:
    """Does the target space embed isometrically in the ambient space over
    the completion at v?  Witt-theory reduction: the embedding exists iff
    the virtual complement has realizable invariants."""
    if target.rank > ambient.rank:
        raise ValueError("target rank exceeds ambient rank")
    if v.is_real:
        return (target.signature[0] <= ambient.signature[0]
                and target.signature[1] <= ambient.signature[1])
    k = ambient.rank - target.rank
    d_comp = squarefree_class(Fraction(target.det_class) * ambient.det_class)
    eps_comp = (ambient.hasse_at(v) * target.hasse_at(v)
                * hilbert_symbol(target.det_class, d_comp, v))
    if k == 0:
        return (same_square_class(target.det_class, ambient.det_class, v)
                and target.hasse_at(v) == ambient.hasse_at(v))
    return _space_exists(k, d_comp, eps_comp, v)
