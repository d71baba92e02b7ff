import random
from fractions import Fraction

import pytest
import sympy

from latrep.matrices import GramMatrix, det
from latrep.padic import (Place, REAL, hasse_invariant, hilbert_symbol,
                          invariants_of_diagonal, is_isotropic,
                          is_local_square, jordan_decomposition, legendre,
                          ord_p, space_invariants, space_represents,
                          squarefree_class, unit_part)

from oracles import hilbert_oracle

rng = random.Random(97)


def places_for(*values):
    out = {REAL, Place.finite(2)}
    for v in values:
        v = Fraction(v)
        for q in sympy.factorint(abs(v.numerator * v.denominator)).keys():
            out.add(Place.finite(q))
    return out


def test_ord_and_unit_part():
    assert ord_p(12, 2) == 2
    assert ord_p(Fraction(3, 8), 2) == -3
    assert unit_part(12, 2) == 3
    with pytest.raises(ValueError):
        ord_p(0, 2)


def test_squarefree_class():
    assert squarefree_class(50) == 2
    assert squarefree_class(-4) == -1
    assert squarefree_class(Fraction(2, 3)) == 6
    with pytest.raises(ValueError):
        squarefree_class(0)


def test_legendre():
    for p in (3, 5, 7, 11, 13):
        residues = {pow(a, 2, p) for a in range(1, p)}
        for a in range(1, p):
            assert legendre(a, p) == (1 if a in residues else -1)


def test_hilbert_real():
    assert hilbert_symbol(-1, -1, REAL) == -1
    assert hilbert_symbol(-1, 2, REAL) == 1
    assert hilbert_symbol(3, 5, REAL) == 1


def test_hilbert_bilinearity():
    for v in (REAL, Place.finite(2), Place.finite(3), Place.finite(5)):
        for _ in range(60):
            a = rng.choice([x for x in range(-20, 21) if x])
            b = rng.choice([x for x in range(-20, 21) if x])
            c = rng.choice([x for x in range(-20, 21) if x])
            assert (hilbert_symbol(a, b * c, v) ==
                    hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v))
            assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)


def test_hilbert_square_invariance():
    for v in (REAL, Place.finite(2), Place.finite(7)):
        for a in (-6, -1, 2, 3, 10):
            assert hilbert_symbol(a, a * a, v) == 1
            if a != 1:
                assert hilbert_symbol(a, -a, v) == 1
            assert hilbert_symbol(a, 1 - a, v) == 1 if a != 1 else True


def test_hilbert_reciprocity():
    for a in range(-30, 31):
        for b in range(-30, 31):
            if a == 0 or b == 0:
                continue
            prod = 1
            for v in places_for(a, b):
                prod *= hilbert_symbol(a, b, v)
            assert prod == 1, (a, b)


def test_hilbert_matches_solvability_oracle():
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        a = rng.choice([x for x in range(-9, 10) if x])
        b = rng.choice([x for x in range(-9, 10) if x])
        expect = hilbert_oracle(a, b, p)
        assert (hilbert_symbol(a, b, Place.finite(p)) == 1) == expect, (a, b, p)


def test_is_local_square():
    assert is_local_square(9, Place.finite(2))
    assert not is_local_square(2, Place.finite(2))
    assert not is_local_square(3, Place.finite(2))
    assert is_local_square(17, Place.finite(2))
    assert is_local_square(4, Place.finite(3))
    assert not is_local_square(3, Place.finite(3))
    assert is_local_square(2, REAL)
    assert not is_local_square(-2, REAL)


def test_invariants_independent_of_diagonalization():
    # same space, two different diagonal presentations
    inv1 = invariants_of_diagonal([1, 1, 1])
    inv2 = invariants_of_diagonal([4, 9, 25])
    assert inv1 == inv2
    inv3 = invariants_of_diagonal([2, 3, 6])
    assert inv3.det_class == 1
    assert space_invariants(GramMatrix.diagonal([2, 3, 6])) == inv3


def test_space_invariants_congruence_invariant():
    from latrep.matrices import IntMatrix, gram_of_columns
    S = GramMatrix([[2, 1, 0], [1, 4, 1], [0, 1, 6]])
    U = IntMatrix([[1, 2, 0], [0, 1, 1], [0, 0, 1]])
    assert space_invariants(S) == space_invariants(gram_of_columns(S, U))


def test_hasse_multiplicativity_with_det():
    # eps(diag(a) + diag(rest)) = eps(rest) * (a, det(rest))_v
    for v in (Place.finite(2), Place.finite(3), REAL):
        for _ in range(30):
            d = [rng.choice([x for x in range(-10, 11) if x]) for _ in range(3)]
            a = rng.choice([x for x in range(-10, 11) if x])
            lhs = hasse_invariant([a] + d, v)
            rhs = hasse_invariant(d, v) * hilbert_symbol(a, d[0] * d[1] * d[2], v)
            assert lhs == rhs


def isotropy_oracle(diag, p, k=7):
    """Exhaustive search for a primitive zero of sum d_i x_i^2 mod p^k."""
    from itertools import product
    m = p ** k
    n = len(diag)
    for xs in product(range(m), repeat=n):
        if all(x % p == 0 for x in xs):
            continue
        if sum(d * x * x for d, x in zip(diag, xs)) % m == 0:
            return True
    return False


def test_isotropy_against_oracle_small():
    cases = [
        ([1, 1], 5), ([1, -1], 5), ([1, 1], 2), ([1, -1], 2),
        ([1, 1, 1], 7), ([1, 1, -1], 3), ([1, 2, -3], 3), ([2, 3], 5),
    ]
    for diag, p in cases:
        inv = invariants_of_diagonal(diag)
        k = 6 if p == 2 else 3
        assert is_isotropic(inv, Place.finite(p)) == isotropy_oracle(diag, p, k), \
            (diag, p)


def test_isotropy_rank5_always():
    for _ in range(20):
        diag = [rng.choice([x for x in range(-8, 9) if x]) for _ in range(5)]
        inv = invariants_of_diagonal(diag)
        for p in (2, 3, 5, 7):
            assert is_isotropic(inv, Place.finite(p))


def test_isotropy_real():
    assert not is_isotropic(invariants_of_diagonal([1, 1, 1]), REAL)
    assert is_isotropic(invariants_of_diagonal([1, -1]), REAL)


def test_jordan_reassembly_invariants():
    for _ in range(40):
        n = rng.randint(1, 4)
        while True:
            rows = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
            sym = [[rows[i][j] + rows[j][i] for j in range(n)] for i in range(n)]
            S = GramMatrix(sym)
            if det(S) != 0:
                break
        for p in (2, 3, 5):
            split = jordan_decomposition(S, p)
            assert sum(c.rank for c in split.components) == n
            assert sum(c.scale * c.rank for c in split.components) == \
                ord_p(det(S), p)
            scales = [c.scale for c in split.components]
            assert scales == sorted(scales)
            for c in split.components:
                assert ord_p(det(c.unit_block), p) == 0


def test_jordan_known_splittings():
    split = jordan_decomposition(GramMatrix.diagonal([1, 2, 4, 8]), 2)
    assert [(c.scale, c.rank) for c in split.components] == \
        [(0, 1), (1, 1), (2, 1), (3, 1)]
    # hyperbolic-plane shape at 2: one even 2x2 block of scale 0
    H = GramMatrix([[0, 1], [1, 0]])
    split = jordan_decomposition(H, 2)
    assert [(c.scale, c.rank, c.even) for c in split.components] == [(0, 2, True)]
    split3 = jordan_decomposition(GramMatrix.diagonal([3, 9, 1]), 3)
    assert [(c.scale, c.rank) for c in split3.components] == \
        [(0, 1), (1, 1), (2, 1)]


def test_space_represents_diagonal_cases():
    # x^2 + y^2 represents units like 2 at 7, but not 7 itself
    # ((7, -1)_7 = -1), and not 7 at 2 either
    amb = invariants_of_diagonal([1, 1])
    t7 = invariants_of_diagonal([7])
    assert space_represents(invariants_of_diagonal([2]), amb, Place.finite(7))
    assert not space_represents(t7, amb, Place.finite(7))
    assert not space_represents(t7, amb, Place.finite(2))
    # rank-3 unimodular represents any unit target at an odd prime
    amb3 = invariants_of_diagonal([1, 1, 1])
    for t in (1, 2, 3, 5, 6):
        assert space_represents(invariants_of_diagonal([t]), amb3,
                                Place.finite(5))
    # real place: signature comparison
    assert not space_represents(invariants_of_diagonal([-1]), amb3, REAL)
    assert space_represents(invariants_of_diagonal([1, 1]), amb3, REAL)


def test_space_represents_equal_rank():
    a = invariants_of_diagonal([1, 1])
    b = invariants_of_diagonal([2, 2])
    c = invariants_of_diagonal([1, 3])
    for v in (Place.finite(2), Place.finite(3), Place.finite(11), REAL):
        assert space_represents(a, b, v)  # same space up to squares
        same = space_represents(c, a, v)
        # det classes 1 vs 3: 3 is a non-square at 3, a square at 11
        if v == Place.finite(3):
            assert not same
        if v == Place.finite(11):
            assert same
