import random

import pytest

from latrep.enumeration import lattice_minimum, vectors_of_norm
from latrep.genus import (SpinorNormClass, enumerate_genus, is_isometric,
                          p_neighbors, represented_by_all_classes,
                          spinor_norm_reflection)
from latrep.matrices import (GramMatrix, IntMatrix, det, det_int,
                             gram_of_columns, is_positive_definite)

rng = random.Random(2718)

E8 = GramMatrix([
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, -1],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, 0, 0, -1, 0, 0, 2]])


def random_pos_def(n, spread=3):
    while True:
        B = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        G = [[sum(B[k][i] * B[k][j] for k in range(n)) for j in range(n)]
             for i in range(n)]
        for i in range(n):
            G[i][i] += rng.randint(1, 2)
        S = GramMatrix(G)
        if is_positive_definite(S):
            return S


def random_unimodular(n, steps=10):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        f = rng.randint(-2, 2)
        for k in range(n):
            m[i][k] += f * m[j][k]
    return IntMatrix(m)


def test_spinor_norm_class_multiplication():
    a = SpinorNormClass(2)
    b = SpinorNormClass(8)
    assert (a * b).value == 1
    assert (SpinorNormClass(3) * SpinorNormClass(5)).value == 15


def test_spinor_norm_reflection():
    S = GramMatrix.identity(3)
    assert spinor_norm_reflection(S, (1, 1, 0)).value == 2
    assert spinor_norm_reflection(S, (2, 0, 0)).value == 1
    with pytest.raises(ValueError):
        spinor_norm_reflection(GramMatrix.diagonal([1, -1]), (1, 1))


def test_is_isometric_positive_cases():
    for _ in range(12):
        n = rng.randint(2, 4)
        S = random_pos_def(n)
        U = random_unimodular(n)
        S2 = gram_of_columns(S, U)
        W = is_isometric(S, S2)
        assert W is not None
        assert gram_of_columns(S, W).entries == S2.entries


def test_is_isometric_negative_cases():
    assert is_isometric(GramMatrix.diagonal([1, 1]),
                        GramMatrix.diagonal([1, 4])) is None
    # same determinant, same minimum, different forms
    A2 = GramMatrix([[2, 1], [1, 2]])
    other = GramMatrix.diagonal([1, 3])
    assert is_isometric(A2, other) is None
    with pytest.raises(ValueError):
        is_isometric(GramMatrix.identity(2), GramMatrix.identity(3))


def test_p_neighbors_requirements():
    S = GramMatrix.identity(3)
    with pytest.raises(ValueError):
        p_neighbors(S, 2)
    with pytest.raises(ValueError):
        p_neighbors(GramMatrix.diagonal([3, 1, 1]), 3)


def test_p_neighbors_stay_in_genus():
    S = GramMatrix([[2, 0, 0], [0, 2, 1], [0, 1, 4]])  # det 14
    for p in (3, 5):
        for nb in p_neighbors(S, p):
            assert det(nb) == det(S)
            assert is_positive_definite(nb)


def test_genus_single_class_small():
    for n in (2, 3, 4, 5):
        record = enumerate_genus(GramMatrix.identity(n), 3)
        assert record.complete
        assert len(record.classes) == 1


def test_genus_record_dict():
    record = enumerate_genus(GramMatrix.identity(2), 5)
    d = record.to_dict()
    assert d["schema_version"] == 1
    assert d["complete"] is True
    assert d["prime_used"] == 5
    assert len(d["classes"]) == 1


def test_genus_nontrivial_two_classes():
    # det-17 binary forms: x^2 + 17y^2 and 2x^2 + 2xy + 9y^2 lie in one
    # genus with two classes (classical class number 2 discriminant)
    S = GramMatrix.diagonal([1, 17])
    record = enumerate_genus(S, 3)
    assert record.complete
    assert len(record.classes) == 2
    reps = [tuple(sorted((c.entries[0][0], c.entries[1][1])))
            for c in record.classes]
    mins = sorted(lattice_minimum(c) for c in record.classes)
    assert mins == [1, 2]


def test_represented_by_all_classes():
    record = enumerate_genus(GramMatrix.diagonal([1, 17]), 3)
    # 1 is represented by x^2 + 17y^2 but not by 2x^2 + 2xy + 9y^2
    out = represented_by_all_classes(record, GramMatrix.diagonal([1]), 1)
    assert sorted(out.values()) == [False, True]
    # 2 is represented by the second class only
    out2 = represented_by_all_classes(record, GramMatrix.diagonal([2]), 1)
    assert sorted(out2.values()) == [False, True]
    # 18 = 2*3^2 is represented by the second class only imprimitively
    out18 = represented_by_all_classes(record, GramMatrix.diagonal([18]), 1)
    assert sorted(out18.values()) == [False, True]
    out18c = represented_by_all_classes(record, GramMatrix.diagonal([18]), 3)
    assert all(out18c.values())
    # 21 = 4 + 17 = 2*4 + 4 + 9 is primitively represented by both
    out21 = represented_by_all_classes(record, GramMatrix.diagonal([21]), 1)
    assert all(out21.values())


def test_incomplete_genus_raises():
    record = enumerate_genus(GramMatrix.diagonal([1, 17]), 3, class_cap=1)
    assert not record.complete
    with pytest.raises(ValueError):
        represented_by_all_classes(record, GramMatrix.diagonal([1]), 1)


def test_e8_genus_and_kissing():
    assert lattice_minimum(E8) == 2
    assert len(vectors_of_norm(E8, 2).vectors) == 120  # 240 up to sign
    record = enumerate_genus(E8, 3)
    assert record.complete
    assert len(record.classes) == 1
