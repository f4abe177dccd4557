import random
from fractions import Fraction

import pytest

from bhlab import bhmat, chaincx, cohoring, homolab
from bhlab.bhmat import Atom
from bhlab.chaincx import ChainElement
from bhlab.errors import NotTopDegree
from bhlab.pilaurent import PiLaurent

A23 = [[2, 1], [0, 3]]


def test_milnor_basis_counts():
    assert len(cohoring.milnor_basis(Atom("chain", (2,)))) == 1
    assert len(cohoring.milnor_basis(Atom("chain", (2, 3)))) == 4
    # loop basis is the full box
    assert len(cohoring.milnor_basis(Atom("loop", (3, 2)))) == 6


def test_orbifold_basis_total_matches_sector_formula():
    for rows in ([[2]], A23, [[3, 1], [1, 2]],
                 [[3, 0, 1], [1, 2, 0], [0, 1, 2]]):
        m = bhmat.validate(rows)
        basis = cohoring.orbifold_basis(m)
        assert len(basis.entries) == homolab.orbifold_total(m)


def test_basis_monomials_for_table_example():
    m = bhmat.validate(A23)
    names = [str(mono) for mono in cohoring.orbifold_basis(m).monomials]
    assert sorted(names) == sorted([
        "x1x2e1e2", "x1x2²e1e2", "x1x2³e1e2", "x1²x2e1e2",
        "x2y1e2", "x2²y1e2",
        "y1y2", "y1y2²", "y1²y2", "y1²y2²"])


def test_reduce_closed_form_odd_powers():
    m = bhmat.validate([[2]])
    for k in range(1, 6):
        v = ChainElement.monomial((2 * k + 1,), (0,), (0,))
        red = cohoring.reduce_closed_form(m, v)
        (mono, c), = red.terms.items()
        assert mono.gamma == (1,)
        dfac = 1
        for i in range(1, 2 * k, 2):
            dfac *= i
        assert c == PiLaurent.pi_power(-k, Fraction(dfac, (-2) ** k))


def test_reduce_closed_form_needs_top_degree():
    m = bhmat.validate(A23)
    with pytest.raises(NotTopDegree):
        cohoring.reduce_closed_form(
            m, ChainElement.monomial((2, 1), (0, 0), (0,)))


def test_normal_form_handles_coboundary_identification():
    # y1^2 y2 is cohomologous to a multiple of pi * x1 x2^3 e1 e2
    m = bhmat.validate([[2, 0], [1, 3]])
    v = ChainElement.monomial((0, 0), (2, 1), ())
    coords = cohoring.normal_form(m, v, window=8)
    (mono, c), = coords.items()
    assert str(mono) == "x1x2³e1e2"
    assert c in (PiLaurent.pi_power(1, 3), PiLaurent.pi_power(1, -3))


def test_normal_form_agrees_with_oracle():
    m = bhmat.validate(A23)
    basis = cohoring.orbifold_basis(m).monomials
    q = Fraction(5)
    tc = homolab.truncate(m, 7, pi_value=q)
    rng = random.Random(3)
    secs = bhmat.group_elements(m)
    done = 0
    while done < 15:
        sec = rng.choice(secs)
        g = tuple(rng.randint(1, 5) if i in sec.unfixed else 0
                  for i in range(m.n))
        mono = ChainElement.monomial(g, sec.lam, sec.unfixed)
        (key,) = mono.terms
        if not tc.in_window(key):
            continue
        coords_cf = cohoring.normal_form(m, mono, window=7)
        coords_or, _ = homolab.reduce_by_oracle(tc, mono, basis)
        for b in basis:
            got = coords_cf.get(b, PiLaurent.zero()).eval_at(q)
            assert got == coords_or[b]
        done += 1


def test_duality_matrix_is_monomial_and_involutive():
    m = bhmat.validate(A23)
    D1 = cohoring.duality_matrix(m)
    D2 = cohoring.duality_matrix(m.transpose())
    n = len(D1)
    for col in range(n):
        nz = [row for row in range(n)
              if D1[row][col] != PiLaurent.zero()]
        assert len(nz) == 1
    scale = PiLaurent.pi_power(2, -6)
    for i in range(n):
        for j in range(n):
            acc = PiLaurent.zero()
            for k in range(n):
                acc = acc + D2[i][k] * D1[k][j]
            assert acc == (scale if i == j else PiLaurent.zero())
