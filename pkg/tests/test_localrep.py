import random

import pytest

from oracles import draw_local_instance, local_rep_oracle

from latrep.localrep import (NOT_REPRESENTABLE, REPRESENTABLE, UNDECIDED,
                             auto_isotropy_shortcut, complement_isotropic_at_q,
                             represents_locally_everywhere, represents_over_Zp)
from latrep.matrices import GramMatrix, IntMatrix, det, is_positive_definite
from latrep.padic import Place, REAL

rng = random.Random(31337)

I3 = GramMatrix.identity(3)
I4 = GramMatrix.identity(4)
I5 = GramMatrix.identity(5)


def random_pos_def(n, spread=2):
    while True:
        B = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        G = [[sum(B[k][i] * B[k][j] for k in range(n)) for j in range(n)]
             for i in range(n)]
        for i in range(n):
            G[i][i] += rng.randint(1, 2)
        S = GramMatrix(G)
        if is_positive_definite(S):
            return S


def test_certificate_shape():
    cert = represents_over_Zp(I3, GramMatrix.diagonal([5]), 2)
    assert cert.status == REPRESENTABLE
    assert cert.witness is not None
    d = cert.to_dict()
    assert d["schema_version"] == 1
    assert d["place"] == "2"


def test_primitive_three_squares_at_two():
    # primitively representable over Z_2 iff t mod 8 not in {0, 4, 7}
    for t in range(1, 41):
        cert = represents_over_Zp(I3, GramMatrix.diagonal([t]), 2, 1)
        assert cert.status != UNDECIDED
        assert cert.representable == (t % 8 not in (0, 4, 7)), t


def test_imprimitivity_unlocks_at_two():
    # 4 = (2e)^2 needs divisor 2; allowed when c is even
    for c, expect in [(1, False), (2, True), (4, True), (3, False)]:
        cert = represents_over_Zp(I3, GramMatrix.diagonal([4]), 2, c)
        assert cert.representable == expect, c


def test_odd_prime_unimodular_always_representable():
    for p in (3, 5, 7):
        for t in (1, 2, 3, 5, 10, 12):
            cert = represents_over_Zp(I3, GramMatrix.diagonal([t]), p, 1)
            assert cert.representable, (p, t)


def test_rank2_target():
    T = GramMatrix([[2, 1], [1, 2]])
    cert = represents_over_Zp(I4, T, 2, 1)
    assert cert.representable
    cert3 = represents_over_Zp(I4, T, 3, 1)
    assert cert3.representable


def test_refutation_without_global_path():
    cert = represents_over_Zp(I3, GramMatrix.diagonal([7]), 2, 1,
                              try_global=False)
    assert cert.status == NOT_REPRESENTABLE
    assert cert.witness is None


def test_witness_mod_pN_is_a_solution():
    cert = represents_over_Zp(I4, GramMatrix.diagonal([6]), 2, 1,
                              try_global=False)
    assert cert.status == REPRESENTABLE
    if not cert.exact:
        X = cert.witness
        pN = 2 ** cert.precision
        from latrep.matrices import gram_of_columns
        G = gram_of_columns(I4, X)
        assert (G.entries[0][0] - 6) % pN == 0


def test_fixed_precision_and_budget_give_undecided():
    # tiny budget forces an honest undecided, never a wrong boolean
    cert = represents_over_Zp(I4, GramMatrix.diagonal([15]), 2, 1,
                              node_budget=5, try_global=False)
    assert cert.status == UNDECIDED


def test_locally_everywhere_three_squares():
    for t in (1, 2, 3, 5, 6, 35):
        certs = represents_locally_everywhere(I3, GramMatrix.diagonal([t]), 1)
        assert REAL in certs
        assert all(c.status == REPRESENTABLE for c in certs.values()), t
    for t in (7, 15, 23):
        certs = represents_locally_everywhere(I3, GramMatrix.diagonal([t]), 1)
        bad = [p for p, c in certs.items() if c.status != REPRESENTABLE]
        assert bad == [Place.finite(2)], t


def test_locally_everywhere_rejects_indefinite():
    with pytest.raises(ValueError):
        represents_locally_everywhere(GramMatrix.diagonal([1, -1]),
                                      GramMatrix.diagonal([1]), 1)


def test_equal_rank_det_class_obstruction():
    # S = I2 vs T = diag(1, 3): equal rank, det classes 1 vs 3 differ at 3
    certs = represents_locally_everywhere(GramMatrix.identity(2),
                                          GramMatrix.diagonal([1, 3]), 1)
    assert any(c.status == NOT_REPRESENTABLE for c in certs.values())


def test_randomized_against_exhaustive_oracle():
    for _ in range(25):
        p, S_rows, T_rows, c, N = draw_local_instance(rng)
        S, T = GramMatrix(S_rows), GramMatrix(T_rows)
        cert = represents_over_Zp(S, T, p, c)
        assert cert.status != UNDECIDED
        expect = local_rep_oracle(S_rows, T_rows, p, c, N + 2,
                                  pair_cap=4_000_000)
        assert expect != "unknown", (S.entries, T.entries, p, c)
        assert cert.representable == (expect == "representable"), \
            (S.entries, T.entries, p, c, cert.status, expect)


def test_complement_isotropic_at_q():
    # image e1 in I5: complement is I4, isotropic at every odd prime but
    # anisotropic at 2 (quaternion norm form)
    X = IntMatrix([[1], [0], [0], [0], [0]])
    assert complement_isotropic_at_q(I5, X, 3)
    assert not complement_isotropic_at_q(I5, X, 2)
    # image e1 in I3: complement I2, anisotropic at 3 ((-1) non-square)
    X3 = IntMatrix([[1], [0], [0]])
    assert not complement_isotropic_at_q(I3, X3, 3)
    assert complement_isotropic_at_q(I3, X3, 5)


def test_auto_isotropy_shortcut():
    assert auto_isotropy_shortcut(GramMatrix.identity(6),
                                  GramMatrix.diagonal([1]), 3)  # m <= n-5
    assert auto_isotropy_shortcut(I5, GramMatrix.diagonal([5]), 3)  # units, gap 4
    assert not auto_isotropy_shortcut(I5, GramMatrix.diagonal([3]), 3)
    assert not auto_isotropy_shortcut(I4, GramMatrix.diagonal([1, 1]), 3)
