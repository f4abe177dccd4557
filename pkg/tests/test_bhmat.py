from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bhlab import bhmat
from bhlab.errors import NotInvertiblePolynomial, BadShape, Singular


def test_classify_chain():
    m = bhmat.validate([[2, 1], [0, 3]])
    atoms = m.decomposition.atoms
    assert len(atoms) == 1
    assert atoms[0].kind == "chain"
    assert atoms[0].exponents == (2, 3)
    assert m.det == 6
    assert bhmat.weights(m) == (Fraction(1, 3), Fraction(1, 3))


def test_classify_loop():
    m = bhmat.validate([[3, 0, 1], [1, 2, 0], [0, 1, 2]])
    a = m.decomposition.atoms[0]
    assert a.kind == "loop"
    assert m.det == 3 * 2 * 2 + 1
    assert all(q > 0 for q in bhmat.weights(m))


def test_classify_direct_sum_with_permutation():
    # x1^2*x3 + x3^3 + x2^2: chain(2,3) on coords (0,2) plus fermat(2)
    m = bhmat.validate([[2, 0, 1], [0, 2, 0], [0, 0, 3]])
    kinds = sorted((a.kind, a.exponents) for a in m.decomposition.atoms)
    assert kinds == [("chain", (2,)), ("chain", (2, 3))]


def test_rejects_non_invertible():
    with pytest.raises(NotInvertiblePolynomial):
        bhmat.validate([[1, 0], [0, 1]])
    with pytest.raises(Singular):
        bhmat.validate([[2, 2], [2, 2]])


def test_rejects_zero_weight():
    # x1*x2 + x1*x2^2: the weights solve to (1, 0)
    with pytest.raises(NotInvertiblePolynomial):
        bhmat.validate([[1, 1], [1, 2]])


def test_rejects_bad_shape():
    with pytest.raises(BadShape):
        bhmat.validate([[2, 1]])


def test_group_size_equals_det():
    for rows in ([[2]], [[2, 1], [0, 3]], [[3, 1], [1, 2]]):
        m = bhmat.validate(rows)
        assert len(bhmat.group_elements(m)) == abs(m.det)


def test_canonical_rep_idempotent_and_charges_fractional():
    m = bhmat.validate([[2, 1], [0, 3]])
    for s in bhmat.group_elements(m):
        assert bhmat.canonical_rep(m, s.lam) == s.lam
        assert all(0 <= c < 1 for c in s.charges)
        assert bhmat.canonical_rep(
            m, tuple(a + 7 * b for a, b in
                     zip(s.lam, m.transpose().row(0)))) is not None


@given(st.sampled_from([[[2]], [[2, 1], [0, 3]], [[3, 1], [1, 2]],
                        [[3, 0, 1], [1, 2, 0], [0, 1, 2]]]),
       st.lists(st.integers(-20, 20), min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_canonical_rep_is_class_invariant(rows, shift):
    m = bhmat.validate(rows)
    lam = tuple(shift[:m.n])
    rep = bhmat.canonical_rep(m, lam)
    # shifting by any row of A^T does not change the class
    for i in range(m.n):
        row = tuple(m.entries[j][i] for j in range(m.n))
        moved = tuple(a + b for a, b in zip(lam, row))
        assert bhmat.canonical_rep(m, moved) == rep


def test_sector_submatrix_unfixed():
    m = bhmat.validate([[2, 1], [0, 3]])
    for s in bhmat.group_elements(m):
        assert set(s.jvee) <= set(range(m.n))
        assert s.sub.n == len(s.unfixed)


def test_transpose_involution():
    m = bhmat.validate([[2, 1], [0, 3]])
    assert m.transpose().transpose() == m
    assert m.transpose().det == m.det
