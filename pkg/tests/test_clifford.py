import random

from bhlab import bhmat, clifford
from bhlab.clifford import ExtElement
from bhlab.pilaurent import PiLaurent


def random_ext(n, rng):
    out = ExtElement(n)
    for _ in range(rng.randint(1, 3)):
        idx = frozenset(i for i in range(n) if rng.random() < 0.5)
        out = out + ExtElement(n, {idx: PiLaurent.const(rng.randint(-3, 3))})
    return out


def test_wedge_contract_signs():
    # e1 ^ e2 = -(e2 ^ e1), iota_1(e1e2) = e2, iota_2(e1e2) = -e1
    n = 2
    e12 = ExtElement.basis(n, (0, 1))
    assert clifford.mul_e(0, ExtElement.basis(n, (1,))) == e12
    assert clifford.mul_e(1, ExtElement.basis(n, (0,))) == e12.scale(-1)
    assert clifford.contract_e(0, e12) == ExtElement.basis(n, (1,))
    assert clifford.contract_e(1, e12) == ExtElement.basis(n, (0,)).scale(-1)


def test_clifford_anticommutators():
    rng = random.Random(1)
    n = 3
    for _ in range(50):
        x = random_ext(n, rng)
        for i in range(n):
            for j in range(n):
                lhs = clifford.mul_e(i, clifford.mul_e(j, x)) \
                    + clifford.mul_e(j, clifford.mul_e(i, x))
                assert lhs.is_zero()
                lhs = clifford.contract_e(i, clifford.contract_e(j, x)) \
                    + clifford.contract_e(j, clifford.contract_e(i, x))
                assert lhs.is_zero()
                mixed = clifford.mul_e(i, clifford.contract_e(j, x)) \
                    + clifford.contract_e(j, clifford.mul_e(i, x))
                expect = x if i == j else ExtElement(n)
                assert mixed == expect


def test_star_exchanges_multiplication_and_contraction():
    rng = random.Random(2)
    for rows in ([[2, 1], [0, 3]], [[3, 0, 1], [1, 2, 0], [0, 1, 2]]):
        m = bhmat.validate(rows)
        for _ in range(25):
            x = random_ext(m.n, rng)
            for i in range(m.n):
                assert clifford.star(m, clifford.apply_E(m, i, x)) == \
                    clifford.contract_e(i, clifford.star(m, x))
                assert clifford.star(m, clifford.apply_E_vee(m, i, x)) == \
                    clifford.mul_e(i, clifford.star(m, x))


def test_star_square_is_scalar():
    m = bhmat.validate([[2, 1], [0, 3]])
    for idx in (frozenset(), frozenset({0}), frozenset({1}),
                frozenset({0, 1})):
        x = ExtElement.basis(m.n, idx)
        y = clifford.star(m.transpose(), clifford.star(m, x))
        (only,) = y.coeffs
        assert only == idx
        assert y.coeffs[only] == PiLaurent.pi_power(2, -6)
