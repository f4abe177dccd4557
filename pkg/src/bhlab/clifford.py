"""Exterior algebra with creation/annihilation operators and the
matrix-twisted star involution.

Wedge monomials are frozensets of 0-based indices; the implicit sign
convention orders factors ascending.  Coefficients are Laurent
polynomials in pi.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from . import ratmat
from .bhmat import BHMatrix
from .errors import Inhomogeneous
from .pilaurent import PiLaurent

Subset = frozenset


def wedge(i: int, idx: Subset) -> tuple[int, Subset] | None:
    """e_i wedged on the left of e^idx; None if it vanishes."""
    if i in idx:
        return None
    sign = (-1) ** sum(1 for j in idx if j < i)
    return sign, idx | {i}


def contract(i: int, idx: Subset) -> tuple[int, Subset] | None:
    """Interior product by e_i^vee; None if it vanishes."""
    if i not in idx:
        return None
    sign = (-1) ** sum(1 for j in idx if j < i)
    return sign, idx - {i}


class ExtElement:
    """Elements of the exterior algebra over the pi-Laurent ring."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict[Subset, PiLaurent] | None = None):
        self.n = n
        self.coeffs = {k: v for k, v in (coeffs or {}).items()
                       if not v.is_zero()}

    @classmethod
    def scalar(cls, n: int, c) -> "ExtElement":
        c = c if isinstance(c, PiLaurent) else PiLaurent.const(c)
        return cls(n, {frozenset(): c})

    @classmethod
    def basis(cls, n: int, idx) -> "ExtElement":
        return cls(n, {frozenset(idx): PiLaurent.one()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "ExtElement") -> "ExtElement":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, PiLaurent.zero()) + v
        return ExtElement(self.n, out)

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return self + other.scale(-1)

    def scale(self, c) -> "ExtElement":
        return ExtElement(self.n, {k: v * c for k, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtElement) and self.coeffs == other.coeffs

    def wedge_by(self, i: int) -> "ExtElement":
        out: dict[Subset, PiLaurent] = {}
        for idx, c in self.coeffs.items():
            hit = wedge(i, idx)
            if hit is not None:
                s, j = hit
                out[j] = out.get(j, PiLaurent.zero()) + c * s
        return ExtElement(self.n, out)

    def contract_by(self, i: int) -> "ExtElement":
        out: dict[Subset, PiLaurent] = {}
        for idx, c in self.coeffs.items():
            hit = contract(i, idx)
            if hit is not None:
                s, j = hit
                out[j] = out.get(j, PiLaurent.zero()) + c * s
        return ExtElement(self.n, out)

    def ext_degree(self) -> int:
        degs = {len(k) for k in self.coeffs}
        if len(degs) != 1:
            raise Inhomogeneous(f"mixed exterior degrees {sorted(degs)}")
        return degs.pop()

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for idx in sorted(self.coeffs, key=lambda k: (len(k), sorted(k))):
            mono = "".join(f"e{i + 1}" for i in sorted(idx)) or "1"
            parts.append(f"({self.coeffs[idx]!r})*{mono}")
        return " + ".join(parts)


def mul_e(i: int, x: ExtElement) -> ExtElement:
    return x.wedge_by(i)


def contract_e(i: int, x: ExtElement) -> ExtElement:
    return x.contract_by(i)


def ext_degree(x: ExtElement) -> int:
    return x.ext_degree()


def apply_E(m: BHMatrix, i: int, x: ExtElement) -> ExtElement:
    """pi * sum_j A[i][j] e_j wedge x (row i of A)."""
    out = ExtElement(x.n)
    for j in range(m.n):
        a = m.entries[i][j]
        if a:
            out = out + x.wedge_by(j).scale(a)
    return out.scale(PiLaurent.pi_power(1))


def apply_E_vee(m: BHMatrix, i: int, x: ExtElement) -> ExtElement:
    """pi^{-1} * sum_j A^{-1}[j][i] e_j^vee x (column i of A^{-1})."""
    out = ExtElement(x.n)
    for j in range(m.n):
        a = m.inv[j][i]
        if a:
            out = out + x.contract_by(j).scale(a)
    return out.scale(PiLaurent.pi_power(-1))


@lru_cache(maxsize=None)
def _omega(m: BHMatrix) -> ExtElement:
    """E_{A^T,1} ... E_{A^T,n} applied to 1 (rightmost first)."""
    mt = m.transpose()
    x = ExtElement.scalar(m.n, 1)
    for i in range(m.n - 1, -1, -1):
        x = apply_E(mt, i, x)
    return x


def star(m: BHMatrix, x: ExtElement) -> ExtElement:
    """Twisted star involution, characterized by star(e_i ^ v) =
    E_vee(A^T, i)(star(v)) and star(1) = omega.  On e^{i1...ik}
    (ascending) this contracts omega by the A^T-twisted annihilators
    with the ik factor applied first (innermost)."""
    mt = m.transpose()
    out = ExtElement(x.n)
    for idx, c in x.coeffs.items():
        y = _omega(m)
        for i in sorted(idx, reverse=True):
            y = apply_E_vee(mt, i, y)
        out = out + y.scale(c)
    return out


# ---------------------------------------------------------------------
# change of basis into twisted wedge monomials E^K
# ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def ebasis_matrices(m: BHMatrix) -> dict[int, tuple]:
    """Per exterior degree d: (subset list, F, F^{-1}) where column K of F
    gives pi^{-|K|} E^K in e^I coordinates."""
    n = m.n
    out = {}
    for d in range(n + 1):
        subsets = [frozenset(s) for s in itertools.combinations(range(n), d)]
        pos = {s: c for c, s in enumerate(subsets)}
        cols = []
        for K in subsets:
            x = ExtElement.scalar(n, 1)
            for k in sorted(K, reverse=True):
                x = apply_E(m, k, x)
            col = [Fraction(0)] * len(subsets)
            for idx, c in x.coeffs.items():
                col[pos[idx]] = c[d]  # coefficient of pi^d
            cols.append(col)
        f = ratmat.transpose(ratmat.as_matrix(cols))
        out[d] = (subsets, f, ratmat.inverse(f))
    return out
