"""The monomial chain complex attached to an exponent matrix: its two
differentials, gradings, the duality map, the de Rham embedding, and the
chain-level Frobenius.

Monomials are x^gamma y^lambda e^I.  A monomial is the zero class
whenever some gamma_i > 0 with (lambda A^{-T})_i > 0; such terms are
dropped eagerly so equality of elements is syntactic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import bhmat, clifford, ratmat
from .bhmat import BHMatrix
from .clifford import ExtElement, contract, wedge
from .errors import Inhomogeneous, NotInSA, PrimeDividesDet
from .pilaurent import PiLaurent

Subset = frozenset


@dataclass(frozen=True)
class Monomial:
    gamma: tuple[int, ...]
    lam: tuple[int, ...]
    I: Subset

    def __str__(self):
        def pows(sym, exps):
            out = ""
            for i, e in enumerate(exps):
                if e == 1:
                    out += f"{sym}{i + 1}"
                elif e:
                    sup = str(e).translate(_SUP)
                    out += f"{sym}{i + 1}{sup}"
            return out

        s = pows("x", self.gamma) + pows("y", self.lam)
        s += "".join(f"e{i + 1}" for i in sorted(self.I))
        return s or "1"


_SUP = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


class ChainElement:
    """Finite PiLaurent-linear combination of monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, PiLaurent] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items()
                      if not v.is_zero()}

    @classmethod
    def monomial(cls, gamma, lam, I=(), coeff=1) -> "ChainElement":
        mono = Monomial(tuple(gamma), tuple(lam), frozenset(I))
        c = coeff if isinstance(coeff, PiLaurent) else PiLaurent.const(coeff)
        return cls({mono: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ChainElement") -> "ChainElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, PiLaurent.zero()) + v
        return ChainElement(out)

    def __sub__(self, other: "ChainElement") -> "ChainElement":
        return self + other.scale(-1)

    def scale(self, c) -> "ChainElement":
        return ChainElement({k: v * c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ChainElement) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"({c!r})*{mono}" for mono, c in sorted(
            self.terms.items(), key=lambda kv: (kv[0].gamma, kv[0].lam,
                                                sorted(kv[0].I)))]
        return " + ".join(parts)

    def to_json(self) -> list:
        return [{"gamma": list(m.gamma), "lam": list(m.lam),
                 "I": sorted(i + 1 for i in m.I), "coeff": c.to_json()}
                for m, c in sorted(self.terms.items(),
                                   key=lambda kv: (kv[0].gamma, kv[0].lam,
                                                   sorted(kv[0].I)))]


@lru_cache(maxsize=None)
def charges(m: BHMatrix, lam: tuple[int, ...]) -> tuple[Fraction, ...]:
    """lambda * A^{-T}."""
    return ratmat.vec_mat(lam, m.inv_t)


@lru_cache(maxsize=None)
def gamma_ainv(m: BHMatrix, gamma: tuple[int, ...]) -> tuple[Fraction, ...]:
    """gamma * A^{-1}."""
    return ratmat.vec_mat(gamma, m.inv)


def is_zero_class(m: BHMatrix, gamma, lam) -> bool:
    ch = charges(m, tuple(lam))
    return any(g > 0 and c > 0 for g, c in zip(gamma, ch))


def in_sa(m: BHMatrix, mono: Monomial) -> bool:
    return all(v >= 0 for v in gamma_ainv(m, mono.gamma))


def _accum(out: dict, mono: Monomial, c: PiLaurent):
    out[mono] = out.get(mono, PiLaurent.zero()) + c


def _normalize(m: BHMatrix, out: dict) -> ChainElement:
    return ChainElement({k: v for k, v in out.items()
                         if not is_zero_class(m, k.gamma, k.lam)})


# ---------------------------------------------------------------------
# differentials
# ---------------------------------------------------------------------

def apply_d(m: BHMatrix, v: ChainElement) -> ChainElement:
    """Sum over i of (gamma_i + pi*sum_j A_ji x^{row_j}) e_i wedge."""
    n = m.n
    pi = PiLaurent.pi_power(1)
    out: dict[Monomial, PiLaurent] = {}
    for mono, c in v.terms.items():
        for i in range(n):
            hit = wedge(i, mono.I)
            if hit is None:
                continue
            sign, J = hit
            base = c * sign
            if mono.gamma[i]:
                _accum(out, Monomial(mono.gamma, mono.lam, J),
                       base * mono.gamma[i])
            for j in range(n):
                a = m.entries[j][i]
                if a:
                    g = tuple(x + y for x, y in zip(mono.gamma,
                                                    m.entries[j]))
                    _accum(out, Monomial(g, mono.lam, J), base * pi * a)
    return _normalize(m, out)


def apply_dvee(m: BHMatrix, v: ChainElement) -> ChainElement:
    """Sum over i of (pi^{-1}(lam A^{-T})_i + y^{row_i of A^T})
    e_i-contraction."""
    n = m.n
    ipi = PiLaurent.pi_power(-1)
    out: dict[Monomial, PiLaurent] = {}
    for mono, c in v.terms.items():
        ch = charges(m, mono.lam)
        for i in range(n):
            hit = contract(i, mono.I)
            if hit is None:
                continue
            sign, J = hit
            base = c * sign
            if ch[i]:
                _accum(out, Monomial(mono.gamma, mono.lam, J),
                       base * ipi * ch[i])
            lam2 = tuple(x + m.entries[j][i]
                         for j, x in enumerate(mono.lam))
            _accum(out, Monomial(mono.gamma, lam2, J), base)
    return _normalize(m, out)


def apply_hat_d(m: BHMatrix, i: int, v: ChainElement) -> ChainElement:
    """(pi^{-1}(gamma A^{-1})_i + x^{row_i}) composed with the twisted
    creation operator pi*sum_j A_ij e_j."""
    n = m.n
    out: dict[Monomial, PiLaurent] = {}
    for mono, c in v.terms.items():
        if not in_sa(m, mono):
            raise NotInSA(f"{mono} has negative gamma*A^{{-1}} entries")
        t = gamma_ainv(m, mono.gamma)[i]
        for j in range(n):
            a = m.entries[i][j]
            if not a:
                continue
            hit = wedge(j, mono.I)
            if hit is None:
                continue
            sign, J = hit
            base = c * (sign * a) * PiLaurent.pi_power(1)
            if t:
                _accum(out, Monomial(mono.gamma, mono.lam, J),
                       base * PiLaurent.pi_power(-1) * t)
            g = tuple(x + y for x, y in zip(mono.gamma, m.entries[i]))
            _accum(out, Monomial(g, mono.lam, J), base)
    return _normalize(m, out)


# ---------------------------------------------------------------------
# gradings
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class GradingReport:
    q: int
    qvee: int
    qhat: int
    qhatvee: int
    ext: int
    sharp: int
    sharpvee: int


def _qhat_pair(m: BHMatrix, mono: Monomial) -> tuple[int, int]:
    """Eigenvalues of the hatted charge operators; the exterior part is
    expanded in the A-twisted wedge basis, where they are diagonal."""
    if not in_sa(m, mono):
        raise NotInSA(f"{mono} has negative gamma*A^{{-1}} entries")
    ga = gamma_ainv(m, mono.gamma)
    pset = {i for i in range(m.n) if ga[i] != 0}
    d = len(mono.I)
    subsets, f, finv = clifford.ebasis_matrices(m)[d]
    col = subsets.index(mono.I)
    vals = set()
    for r, K in enumerate(subsets):
        if finv[r][col] != 0:
            vals.add(len(K & pset))
    if len(vals) != 1:
        raise Inhomogeneous(
            f"{mono} mixes hatted-charge eigenvalues {sorted(vals)}")
    qhat = vals.pop()
    return qhat, (m.n - d) + qhat


def gradings(m: BHMatrix, mono: Monomial) -> GradingReport:
    ch = charges(m, mono.lam)
    ga = gamma_ainv(m, mono.gamma)
    q = sum((i in mono.I) + (ch[i] > 0) * (i not in mono.I)
            for i in range(m.n))
    qvee = sum((ch[i] > 0) * (i not in mono.I) for i in range(m.n))
    sharp = sum(1 for x in ga if x.denominator != 1)
    sharpvee = sum(1 for x in ch if x.denominator != 1)
    qhat, qhatvee = _qhat_pair(m, mono)
    return GradingReport(q, qvee, qhat, qhatvee, len(mono.I),
                         sharp, sharpvee)


def scale_q(m: BHMatrix, v: ChainElement, base: Fraction) -> ChainElement:
    """base^{Q} (diagonal)."""
    out = {}
    for mono, c in v.terms.items():
        ch = charges(m, mono.lam)
        e = sum((i in mono.I) + (ch[i] > 0) * (i not in mono.I)
                for i in range(m.n))
        out[mono] = c * Fraction(base) ** e
    return ChainElement(out)


def scale_qvee(m: BHMatrix, v: ChainElement, base: Fraction) -> ChainElement:
    """base^{Q-vee} (diagonal)."""
    out = {}
    for mono, c in v.terms.items():
        ch = charges(m, mono.lam)
        e = sum((ch[i] > 0) * (i not in mono.I) for i in range(m.n))
        out[mono] = c * Fraction(base) ** e
    return ChainElement(out)


def scale_ext(v: ChainElement, base: Fraction) -> ChainElement:
    """base^{ext} (diagonal)."""
    return ChainElement({mono: c * Fraction(base) ** len(mono.I)
                         for mono, c in v.terms.items()})


def scale_qhat(m: BHMatrix, v: ChainElement, base: Fraction) -> ChainElement:
    """base^{Q-hat}: diagonal in the twisted wedge basis, applied per
    (gamma, lam) block via the cached change of basis."""
    base = Fraction(base)
    ebm = clifford.ebasis_matrices(m)
    groups: dict[tuple, dict[Subset, PiLaurent]] = {}
    for mono, c in v.terms.items():
        if not in_sa(m, mono):
            raise NotInSA(f"{mono} has negative gamma*A^{{-1}} entries")
        groups.setdefault((mono.gamma, mono.lam), {})[mono.I] = c
    out: dict[Monomial, PiLaurent] = {}
    for (gamma, lam), byi in groups.items():
        ga = gamma_ainv(m, gamma)
        pset = {i for i in range(m.n) if ga[i] != 0}
        for d in {len(i) for i in byi}:
            subsets, f, finv = ebm[d]
            vec = [byi.get(s, PiLaurent.zero()) for s in subsets]
            # w = F^{-1} v, scaled, then back through F
            w = [sum((vec[c0] * finv[r][c0] for c0 in range(len(subsets))
                      if finv[r][c0] != 0), PiLaurent.zero())
                 for r in range(len(subsets))]
            w = [w[r] * base ** len(subsets[r] & pset)
                 for r in range(len(subsets))]
            for r in range(len(subsets)):
                c = sum((w[c0] * f[r][c0] for c0 in range(len(subsets))
                         if f[r][c0] != 0), PiLaurent.zero())
                if not c.is_zero():
                    _accum(out, Monomial(gamma, lam, subsets[r]), c)
    return ChainElement(out)


# ---------------------------------------------------------------------
# duality and de Rham
# ---------------------------------------------------------------------

def delta(m: BHMatrix, v: ChainElement) -> ChainElement:
    """Swap x- and y-exponents and apply the twisted star to the wedge
    part; lands in the complex of the transposed matrix."""
    mt = m.transpose()
    out: dict[Monomial, PiLaurent] = {}
    for mono, c in v.terms.items():
        if not in_sa(m, mono):
            raise NotInSA(f"{mono} has negative gamma*A^{{-1}} entries")
        st = clifford.star(m, ExtElement.basis(m.n, mono.I))
        for J, cl in st.coeffs.items():
            _accum(out, Monomial(mono.lam, mono.gamma, J), c * cl)
    return _normalize(mt, out)


def embed_de_rham(m: BHMatrix, v: ChainElement) -> ChainElement:
    """x^gamma e^I -> x^{gamma + indicator(I)} e^I (y-exponents must be
    zero)."""
    out = {}
    for mono, c in v.terms.items():
        assert not any(mono.lam), "de Rham side carries no y-exponents"
        g = tuple(x + (i in mono.I) for i, x in enumerate(mono.gamma))
        _accum(out, Monomial(g, mono.lam, mono.I), c)
    return ChainElement(out)


def de_rham_d(m: BHMatrix, v: ChainElement) -> ChainElement:
    """Twisted de Rham differential sum_i (d/dx_i + pi dW/dx_i) e_i."""
    n = m.n
    pi = PiLaurent.pi_power(1)
    out: dict[Monomial, PiLaurent] = {}
    for mono, c in v.terms.items():
        for i in range(n):
            hit = wedge(i, mono.I)
            if hit is None:
                continue
            sign, J = hit
            base = c * sign
            if mono.gamma[i]:
                g = tuple(x - (j == i) for j, x in enumerate(mono.gamma))
                _accum(out, Monomial(g, mono.lam, J), base * mono.gamma[i])
            for j in range(n):
                a = m.entries[j][i]
                if a:
                    g = tuple(x + y - (k == i) for k, (x, y) in
                              enumerate(zip(mono.gamma, m.entries[j])))
                    if all(e >= 0 for e in g):
                        _accum(out, Monomial(g, mono.lam, J),
                               base * pi * a)
    return ChainElement(out)


# ---------------------------------------------------------------------
# chain-level Frobenius
# ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def dwork_rational(p: int, M: int) -> tuple[Fraction, ...]:
    """c_0..c_M with exp(pi(t^p - t)) = sum c_m (-pi)^m t^m after folding
    pi^{p-1} = -p; exact rationals (not p-integral in general)."""
    out = []
    for mm in range(M + 1):
        s = Fraction(0)
        a = 0
        while p * a <= mm:
            s += (Fraction((-1) ** ((p + 1) * a), p ** a)
                  / (factorial(a) * factorial(mm - p * a)))
            a += 1
        out.append(s)
    return tuple(out)


def frobenius_chain(m: BHMatrix, p: int, order: int,
                    v: ChainElement) -> ChainElement:
    """p^{Q+Q-vee}, then exponent dilation by p, then multiplication by
    the Z-series of A (x side) and of A^T (y side) truncated so that the
    total number of added rows is at most `order`."""
    if m.det % p == 0:
        raise PrimeDividesDet(f"{p} divides det = {m.det}")
    n = m.n
    c = dwork_rational(p, order)
    w = scale_qvee(m, scale_q(m, v, Fraction(p)), Fraction(p))
    out: dict[Monomial, PiLaurent] = {}
    rows_x = m.entries
    rows_y = tuple(zip(*m.entries)) if n else ()
    for mono, coeff in w.terms.items():
        g0 = tuple(p * x for x in mono.gamma)
        l0 = tuple(p * x for x in mono.lam)
        for ks in itertools.product(range(order + 1), repeat=2 * n):
            tot = sum(ks)
            if tot > order:
                continue
            fac = PiLaurent.pi_power(tot).scale(
                (-1) ** tot
                * prod_frac(c[k] for k in ks))
            g = list(g0)
            lam = list(l0)
            for i in range(n):
                if ks[i]:
                    for j in range(n):
                        g[j] += ks[i] * rows_x[i][j]
                if ks[n + i]:
                    for j in range(n):
                        lam[j] += ks[n + i] * rows_y[i][j]
            _accum(out, Monomial(tuple(g), tuple(lam), mono.I),
                   coeff * fac)
    return _normalize(m, out)


def prod_frac(it) -> Fraction:
    out = Fraction(1)
    for x in it:
        out *= x
    return out
