"""Brute-force cohomology oracle.

From a finite window (per-variable exponent bound on both x- and
y-exponents) we keep the largest subset closed under the differential.
Because all operators only increase exponents, that subset is a genuine
subcomplex of the infinite complex, and the union over growing windows
is the whole complex.  Individual windows can carry spurious rim
classes (cocycles whose primitives were pruned), so certified ranks
count only the classes that survive the inclusion into a larger
window's subcomplex; stability is checked by shifting both windows.
Exact rational elimination certifies ranks, reduces cocycles to basis
coordinates, and cross-checks the closed-form cohomology bases.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod

from . import bhmat, chaincx
from .bhmat import BHMatrix, Sector
from .chaincx import ChainElement, Monomial
from .errors import (BasisDeficient, NotACocycle, NotInWindow, Unstable,
                     WindowTooSmall)

SparseRow = dict[int, Fraction]


def _degree(m: BHMatrix, mono: Monomial) -> int:
    """q + q-vee, the cohomological degree."""
    ch = chaincx.charges(m, mono.lam)
    q = sum((i in mono.I) + (ch[i] > 0) * (i not in mono.I)
            for i in range(m.n))
    qv = sum((ch[i] > 0) * (i not in mono.I) for i in range(m.n))
    return q + qv


@dataclass
class TruncatedComplex:
    m: BHMatrix
    window: int
    pi_value: Fraction
    restrict_sa: bool
    monomials: list[Monomial]
    index: dict[Monomial, int]
    dmat: list[SparseRow]          # image of monomial i, by column index
    degree: list[int]
    sector_lam: list[tuple[int, ...]]

    def in_window(self, mono: Monomial) -> bool:
        return (all(0 <= g <= self.window for g in mono.gamma)
                and all(0 <= x <= self.window for x in mono.lam)
                and (not self.restrict_sa or chaincx.in_sa(self.m, mono)))

    def eval_elem(self, v: ChainElement) -> dict[int, Fraction]:
        """Coefficient vector at the working pi value; terms outside the
        kept subcomplex raise."""
        out: dict[int, Fraction] = {}
        for mono, c in v.terms.items():
            if mono not in self.index:
                raise NotInWindow(str(mono))
            val = c.eval_at(self.pi_value)
            if val:
                out[self.index[mono]] = val
        return out

    def apply_D(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, c in vec.items():
            for j, a in self.dmat[i].items():
                out[j] = out.get(j, Fraction(0)) + c * a
        return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=32)
def truncate(m: BHMatrix, B: int, pi_value=1,
             restrict_sa: bool = False) -> TruncatedComplex:
    if m.n and B < max(max(r) for r in m.entries):
        raise WindowTooSmall(f"window {B} below max matrix entry")
    pi_value = Fraction(pi_value)
    assert pi_value != 0
    n = m.n
    monomials: list[Monomial] = []
    for lam in itertools.product(range(B + 1), repeat=n):
        ch = chaincx.charges(m, lam)
        if any(c < 0 for c in ch):
            continue
        free = [i for i in range(n) if ch[i] == 0]
        for gfree in itertools.product(range(B + 1), repeat=len(free)):
            gamma = [0] * n
            for i, g in zip(free, gfree):
                gamma[i] = g
            gamma = tuple(gamma)
            if restrict_sa and any(
                    x < 0 for x in chaincx.gamma_ainv(m, gamma)):
                continue
            for r in range(n + 1):
                for I in itertools.combinations(range(n), r):
                    monomials.append(Monomial(gamma, lam, frozenset(I)))
    # keep only the largest genuine subcomplex inside the window: drop
    # (iteratively) any monomial whose differential leaves the kept set
    images: dict[Monomial, dict[Monomial, Fraction]] = {}
    for mo in monomials:
        v = ChainElement({mo: chaincx.PiLaurent.one()})
        img = chaincx.apply_d(m, v) + chaincx.apply_dvee(m, v)
        images[mo] = {tm: c.eval_at(pi_value)
                      for tm, c in img.terms.items()
                      if c.eval_at(pi_value)}
    kept = set(monomials)
    preds: dict[Monomial, list[Monomial]] = {}
    for mo, img in images.items():
        for tm in img:
            preds.setdefault(tm, []).append(mo)
    work = [mo for mo in monomials
            if any(tm not in kept for tm in images[mo])]
    for mo in work:
        kept.discard(mo)
    while work:
        gone = work.pop()
        for pre in preds.get(gone, ()):
            if pre in kept:
                kept.discard(pre)
                work.append(pre)
    monomials = sorted(kept, key=lambda mo: (mo.gamma, mo.lam,
                                             sorted(mo.I)))
    index = {mo: i for i, mo in enumerate(monomials)}
    tc = TruncatedComplex(m, B, pi_value, restrict_sa, monomials, index,
                          [], [], [])
    for mo in monomials:
        tc.dmat.append({index[tm]: val
                        for tm, val in images[mo].items()})
        tc.degree.append(_degree(m, mo))
        tc.sector_lam.append(bhmat.canonical_rep(m, mo.lam))
    return tc


# ---------------------------------------------------------------------
# exact sparse elimination helpers
# ---------------------------------------------------------------------

def _reduce_row(r: SparseRow, pivots: dict[int, SparseRow],
                combo=None, combos=None) -> SparseRow:
    while r:
        c = min(r)
        if c not in pivots:
            return r
        piv = pivots[c]
        f = r[c] / piv[c]
        for k, v in piv.items():
            nv = r.get(k, Fraction(0)) - f * v
            if nv:
                r[k] = nv
            else:
                r.pop(k, None)
        if combo is not None:
            for k, v in combos[c].items():
                combo[k] = combo.get(k, Fraction(0)) - f * v
    return r


def _sparse_rank(rows) -> int:
    pivots: dict[int, SparseRow] = {}
    rank = 0
    for row in rows:
        r = _reduce_row(dict(row), pivots)
        if r:
            pivots[min(r)] = r
            rank += 1
    return rank


def _kernel_basis(cols: list[tuple[int, SparseRow]]) -> list[SparseRow]:
    """Kernel of the map whose columns are the given vectors, expressed
    as combinations {tag: coeff}."""
    pivots: dict[int, SparseRow] = {}
    combos: dict[int, dict] = {}
    out = []
    for tag, vec in cols:
        combo = {tag: Fraction(1)}
        r = _reduce_row(dict(vec), pivots, combo, combos)
        if r:
            c = min(r)
            pivots[c] = r
            combos[c] = combo
        else:
            out.append({k: v for k, v in combo.items() if v})
    return out


# ---------------------------------------------------------------------
# certified ranks
# ---------------------------------------------------------------------

def projected_ranks(tc_small: TruncatedComplex,
                    tc_big: TruncatedComplex) -> dict:
    """Rank, per (canonical sector, degree), of the image of the small
    window's cohomology inside the big window's (which kills rim
    classes whose primitives the small window pruned)."""
    groups: dict[tuple, list[int]] = {}
    for i in range(len(tc_small.monomials)):
        key = (tc_small.sector_lam[i], tc_small.degree[i])
        groups.setdefault(key, []).append(i)
    big_rows: dict[tuple, list[SparseRow]] = {}
    for i in range(len(tc_big.monomials)):
        if tc_big.dmat[i]:
            key = (tc_big.sector_lam[i], tc_big.degree[i] + 1)
            big_rows.setdefault(key, []).append(tc_big.dmat[i])
    out = {}
    for key, idxs in sorted(groups.items()):
        kers = _kernel_basis([(i, tc_small.dmat[i]) for i in idxs])
        if not kers:
            continue
        pivots: dict[int, SparseRow] = {}
        for row in big_rows.get(key, ()):
            r = _reduce_row(dict(row), pivots)
            if r:
                pivots[min(r)] = r
        rank = 0
        for combo in kers:
            vec = {tc_big.index[tc_small.monomials[i]]: c
                   for i, c in combo.items()}
            r = _reduce_row(vec, pivots)
            if r:
                pivots[min(r)] = r
                rank += 1
        if rank:
            out[key] = rank
    return out


def _limit_ranks(m: BHMatrix, B: int, pi_value, restrict_sa: bool,
                 step: int, max_off: int) -> dict:
    """Projected ranks from window B into B+off, for growing off, until
    two consecutive offsets agree.  The image rank is non-increasing in
    the offset, so agreement signals the limit."""
    small = truncate(m, B, pi_value, restrict_sa)
    prev = None
    off = step
    while off <= max_off:
        r = projected_ranks(small, truncate(m, B + off, pi_value,
                                            restrict_sa))
        if r == prev:
            return r
        prev = r
        off += step
    raise Unstable(f"projected ranks from window {B} did not settle "
                   f"within offset {max_off}")


def stable_ranks(m: BHMatrix, B: int, pi_value=1,
                 restrict_sa: bool = False) -> dict:
    """Certified cohomology ranks per (canonical sector, degree).  The
    limit of projected ranks is computed from windows B and B+1 and the
    two must agree."""
    s = max((sum(r) for r in m.entries), default=1)
    max_off = 4 * s + 2
    r1 = _limit_ranks(m, B, pi_value, restrict_sa, s, max_off)
    r2 = _limit_ranks(m, B + 1, pi_value, restrict_sa, s, max_off)
    if r1 != r2:
        raise Unstable(f"ranks differ between base windows {B}/{B + 1}")
    return r1


def cohomology_rank(tc: TruncatedComplex, sector: Sector) -> dict[int, int]:
    """Certified ranks per degree for one sector (stability protocol
    run at the complex's own window)."""
    ranks = stable_ranks(tc.m, tc.window, tc.pi_value, tc.restrict_sa)
    return {k: r for (lam, k), r in sorted(ranks.items())
            if lam == sector.lam}


def stable_ranks_factored(m: BHMatrix, B: int | None = None) -> dict:
    """stable_ranks computed per atom and combined multiplicatively
    (sectors concatenate through the decomposition permutation, degrees
    add, ranks multiply)."""
    dec = m.decomposition
    if B is not None or len(dec.atoms) <= 1:
        return stable_ranks(m, B if B is not None
                            else max(max(r) for r in m.entries))
    perm = dec.permutation
    combined = {((), 0): 1}
    off = 0
    for atom in dec.atoms:
        am = bhmat.validate(atom.canonical_matrix())
        ranks = stable_ranks(am, max(atom.exponents))
        nxt = {}
        for (lam1, k1), r1 in combined.items():
            for (lam2, k2), r2 in ranks.items():
                key = (lam1 + lam2, k1 + k2)
                nxt[key] = nxt.get(key, 0) + r1 * r2
        combined = nxt
        off += atom.n
    out = {}
    for (lam, k), r in combined.items():
        full = [0] * m.n
        for i, v in enumerate(lam):
            full[perm[i]] = v
        key = (bhmat.canonical_rep(m, tuple(full)), k)
        out[key] = out.get(key, 0) + r
    return out


def reduce_by_oracle(tc: TruncatedComplex, v: ChainElement,
                     basis: list[Monomial]):
    """Solve v = sum_b c_b*b + D(u); returns (coords by basis monomial,
    u as a coefficient vector by monomial index).  All statements are
    exact in the infinite complex since tc is a true subcomplex."""
    vec = tc.eval_elem(v)
    if tc.apply_D(vec):
        raise NotACocycle(repr(v))
    for b in basis:
        if b not in tc.index:
            raise NotInWindow(str(b))
    degs = {tc.degree[i] for i in vec} | {tc.degree[tc.index[b]]
                                          for b in basis}
    uidx = [i for i in range(len(tc.monomials))
            if tc.degree[i] + 1 in degs and tc.dmat[i]]
    pivots: dict[int, SparseRow] = {}
    combos: dict[int, dict] = {}
    cols = [({tc.index[b]: Fraction(1)}, ("b", b)) for b in basis]
    cols += [(tc.dmat[i], ("u", i)) for i in uidx]
    for colvec, tag in cols:
        combo = {tag: Fraction(1)}
        r = _reduce_row(dict(colvec), pivots, combo, combos)
        if r:
            c = min(r)
            pivots[c] = r
            combos[c] = combo
    target = dict(vec)
    expr: dict = {}
    while target:
        c = min(target)
        if c not in pivots:
            raise BasisDeficient(
                "cocycle not spanned by basis and coboundaries in window")
        f = target[c] / pivots[c][c]
        for k, val in pivots[c].items():
            nv = target.get(k, Fraction(0)) - f * val
            if nv:
                target[k] = nv
            else:
                target.pop(k, None)
        for k, val in combos[c].items():
            expr[k] = expr.get(k, Fraction(0)) + f * val
    coords = {b: Fraction(0) for b in basis}
    u: dict[int, Fraction] = {}
    for (kind, key), val in expr.items():
        if not val:
            continue
        if kind == "b":
            coords[key] = val
        else:
            u[key] = val
    return coords, u


# ---------------------------------------------------------------------
# Milnor ring dimension
# ---------------------------------------------------------------------

def milnor_dimension(m: BHMatrix) -> int:
    """dim F[x]/(partials of W) by graded elimination; asserted to equal
    the weight-formula product."""
    n = m.n
    q = bhmat.weights(m)
    expected = prod(Fraction(1) / qi - 1 for qi in q)
    assert expected.denominator == 1 and expected > 0
    expected = int(expected)
    if n == 0:
        return 1
    d = abs(m.det)
    w = [int(qi * d) for qi in q]   # integer weights, deg W = d
    socle = sum(d - 2 * wi for wi in w)
    # partials: dW/dx_i = sum_j A_ji x^{row_j - e_i}, weighted deg d - w_i
    partials = []
    for i in range(n):
        terms = {}
        for j in range(n):
            if m.entries[j][i]:
                e = tuple(x - (k == i) for k, x in enumerate(m.entries[j]))
                terms[e] = terms.get(e, 0) + m.entries[j][i]
        partials.append(terms)

    def monos_of_degree(t: int) -> list:
        return sorted(
            g for g in itertools.product(
                *(range(t // wi + 1) for wi in w))
            if sum(gi * wi for gi, wi in zip(g, w)) == t)

    total = 0
    for t in range(socle + 1):
        monos = monos_of_degree(t)
        if not monos:
            continue
        pos = {g: i for i, g in enumerate(monos)}
        rows = []
        for i in range(n):
            ti = t - (d - w[i])
            if ti < 0:
                continue
            for alpha in monos_of_degree(ti):
                row: SparseRow = {}
                for e, c in partials[i].items():
                    g = tuple(a + b for a, b in zip(alpha, e))
                    row[pos[g]] = row.get(pos[g], Fraction(0)) + c
                rows.append({k: v for k, v in row.items() if v})
        total += len(monos) - _sparse_rank(rows)
    assert total == expected, (total, expected)
    return total


def orbifold_total(m: BHMatrix) -> int:
    """Sum of Milnor dimensions of the sector submatrices."""
    return sum(milnor_dimension(s.sub) for s in bhmat.group_elements(m))


def verify_quasi_iso(m: BHMatrix, B: int | None = None) -> dict:
    """Compare certified cohomology of the full complex and of its
    x-admissible subcomplex, against the closed-form sector total."""
    if B is None:
        B = max(max(r) for r in m.entries) if m.n else 1
    rb = stable_ranks(m, B)
    rc = stable_ranks(m, B, restrict_sa=True)
    total = orbifold_total(m)
    report = {
        "ranks_full": {f"{lam}|{k}": r for (lam, k), r in sorted(rb.items())},
        "ranks_sub": {f"{lam}|{k}": r for (lam, k), r in sorted(rc.items())},
        "total_full": sum(rb.values()),
        "total_sub": sum(rc.values()),
        "orbifold_total": total,
    }
    report["pass"] = (rb == rc and report["total_full"] == total)
    return report
