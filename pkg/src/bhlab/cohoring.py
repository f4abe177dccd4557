"""Closed-form orbifold cohomology bases and the duality matrix.

Each group-element sector contributes the Milnor-ring basis of its
fixed-locus submatrix, lifted to monomials x^{gamma+I} y^lambda e^I with
I the sector's untwisted coordinates.  Cocycles are reduced to the basis
with exact Pochhammer coefficients where a within-sector relation
applies, and by the brute-force window oracle otherwise.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod

from . import bhmat, chaincx, homolab, ratmat
from .bhmat import Atom, BHMatrix, Sector
from .chaincx import ChainElement, GradingReport, Monomial
from .errors import MixedSectors, NotTopDegree
from .pilaurent import PiLaurent


def milnor_basis(atom: Atom) -> list[tuple[int, ...]]:
    """Exponent vectors (already shifted to start at 1) of a monomial
    basis of the Milnor ring of the atom's polynomial, wedged with the
    top exterior form."""
    n, a = atom.n, atom.exponents
    if atom.kind == "loop":
        out = sorted(itertools.product(*(range(1, ai + 1) for ai in a)))
    else:
        out = []
        for m in range(n // 2 + 1):
            prefix = []
            for i in range(m):
                prefix += [a[2 * i], 1]
            if 2 * m == n:
                out.append(tuple(prefix))
                continue
            head = range(1, a[2 * m])          # strictly below a_{2m+1}
            tail = [range(1, ai + 1) for ai in a[2 * m + 1:]]
            for rest in itertools.product(head, *tail):
                out.append(tuple(prefix) + rest)
        out.sort()
    q = bhmat.weights(bhmat.validate(atom.canonical_matrix()))
    expected = prod(Fraction(1) / qi - 1 for qi in q)
    assert len(out) == expected, (atom, len(out), expected)
    return out


def _sub_basis(sub: BHMatrix) -> list[tuple[int, ...]]:
    """Milnor basis exponents of an arbitrary valid matrix, in its own
    coordinates, combined across its atoms."""
    if sub.n == 0:
        return [()]
    dec = sub.decomposition
    perm = dec.permutation
    out = []
    pieces = [milnor_basis(at) for at in dec.atoms]
    for combo in itertools.product(*pieces):
        g = [0] * sub.n
        off = 0
        for at, pat in zip(dec.atoms, combo):
            for j, v in enumerate(pat):
                g[perm[off + j]] = v
            off += at.n
        out.append(tuple(g))
    return sorted(out)


@dataclass(frozen=True)
class CohBasis:
    entries: tuple[tuple[Sector, Monomial, GradingReport], ...]

    @property
    def monomials(self) -> list[Monomial]:
        return [mono for _, mono, _ in self.entries]

    def rows(self) -> list[tuple[str, int, Fraction]]:
        """Display rows: monomial, q+qvee, (sharp-sharpvee)/2."""
        return [(str(mono), g.q + g.qvee,
                 Fraction(g.sharp - g.sharpvee, 2))
                for _, mono, g in self.entries]

    def to_json(self) -> list[dict]:
        return [{
            "sector": list(sec.lam),
            "monomial": str(mono),
            "q_plus_qvee": g.q + g.qvee,
            "half_sharp_diff": str(Fraction(g.sharp - g.sharpvee, 2)),
        } for sec, mono, g in self.entries]


@lru_cache(maxsize=None)
def orbifold_basis(m: BHMatrix) -> CohBasis:
    entries = []
    for sec in bhmat.group_elements(m):
        unfixed = sec.unfixed
        I = frozenset(unfixed)
        for g in _sub_basis(sec.sub):
            gamma = [0] * m.n
            for pos, v in zip(unfixed, g):
                gamma[pos] = v
            mono = Monomial(tuple(gamma), sec.lam, I)
            entries.append((sec, mono, chaincx.gradings(m, mono)))
    return CohBasis(tuple(entries))


def _poch(base: Fraction, k: int) -> Fraction:
    """Rising factorial base*(base+1)*...*(base+k-1)."""
    out = Fraction(1)
    for j in range(k):
        out *= base + j
    return out


def _reduce_x(sub: BHMatrix, g: tuple[int, ...]) -> tuple[tuple[int, ...],
                                                          PiLaurent]:
    """Peel rows of the sector matrix off the exponent vector, largest
    row first, keeping every intermediate exponent >= 1.  Each peel of
    k copies of row i contributes (-pi)^{-k} * ((g' sub^{-1})_i)_(k)."""
    coeff = PiLaurent.one()
    g = list(g)
    changed = True
    while changed:
        changed = False
        for i in reversed(range(sub.n)):
            row = sub.entries[i]
            k = (g[i] - 1) // row[i]
            for j in range(sub.n):
                if row[j]:
                    k = min(k, (g[j] - 1) // row[j])
            if k <= 0:
                continue
            for j in range(sub.n):
                g[j] -= k * row[j]
            base = ratmat.vec_mat(tuple(Fraction(x) for x in g), sub.inv)[i]
            coeff = coeff * PiLaurent.pi_power(-k).scale(
                _poch(base, k) * (-1) ** k)
            changed = True
    return tuple(g), coeff


def _reduce_y(m: BHMatrix, sec: Sector,
              lam: tuple[int, ...]) -> tuple[tuple[int, ...], PiLaurent]:
    """Peel columns of the matrix (rows of its transpose) off the twist
    exponent, in the directions the sector genuinely twists."""
    coeff = PiLaurent.one()
    lam = list(lam)
    for i in range(m.n):
        if not sec.jvee[i]:
            continue
        c = chaincx.charges(m, tuple(lam))[i]
        k = c.numerator // c.denominator
        if k <= 0:
            continue
        col = tuple(m.entries[j][i] for j in range(m.n))  # e_i A^T
        for j in range(m.n):
            lam[j] -= k * col[j]
        base = chaincx.charges(m, tuple(lam))[i]
        coeff = coeff * PiLaurent.pi_power(-k).scale(
            _poch(base, k) * (-1) ** k)
    return tuple(lam), coeff


def reduce_closed_form(m: BHMatrix, v: ChainElement) -> ChainElement:
    """Within-sector Pochhammer reduction of a top-exterior-degree
    element.  The result is supported on box monomials; anything this
    calculus cannot see (cross-sector identifications) is left in place
    for the oracle."""
    out: dict[Monomial, PiLaurent] = {}
    sector_key = None
    for mono, c in v.terms.items():
        rep = bhmat.canonical_rep(m, mono.lam)
        if sector_key is None:
            sector_key = rep
        elif rep != sector_key:
            raise MixedSectors(f"{sector_key} vs {rep}")
        sec = bhmat.sector_of(m, mono.lam)
        if mono.I != frozenset(sec.unfixed):
            raise NotTopDegree(str(mono))
        if any(mono.gamma[i] for i in sec.fixed):
            raise NotTopDegree(f"x-support on twisted coordinate: {mono}")
        lam, ycoeff = _reduce_y(m, sec, mono.lam)
        gsub = tuple(mono.gamma[i] for i in sec.unfixed)
        if sec.sub.n and min(gsub) >= 1:
            gsub, xcoeff = _reduce_x(sec.sub, gsub)
        else:
            xcoeff = PiLaurent.one()
        gamma = [0] * m.n
        for pos, val in zip(sec.unfixed, gsub):
            gamma[pos] = val
        total = c * ycoeff * xcoeff
        if total == PiLaurent.zero():
            continue
        tm = Monomial(tuple(gamma), lam, mono.I)
        chaincx._accum(out, tm, total)
    return ChainElement({k: c for k, c in out.items()
                         if c != PiLaurent.zero()})


def _fit_laurent(samples: list[tuple[Fraction, Fraction]]) -> PiLaurent:
    """Interpolate a Laurent polynomial through (t, value) samples; the
    exponent span is len(samples) wide, centered."""
    N = len(samples)
    lo = -(N // 2)
    rows = []
    rhs = []
    for t, val in samples:
        rows.append([t ** (lo + j) for j in range(N)])
        rhs.append(val)
    # dense exact solve
    A = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    ncol = N
    piv = 0
    for col in range(ncol):
        sel = next((r for r in range(piv, N) if A[r][col]), None)
        if sel is None:
            continue
        A[piv], A[sel] = A[sel], A[piv]
        f = A[piv][col]
        A[piv] = [x / f for x in A[piv]]
        for r in range(N):
            if r != piv and A[r][col]:
                g = A[r][col]
                A[r] = [x - g * y for x, y in zip(A[r], A[piv])]
        piv += 1
    coeffs = {}
    for r in range(N):
        lead = next((c for c in range(ncol) if A[r][c]), None)
        if lead is not None and A[r][ncol]:
            coeffs[lo + lead] = A[r][ncol]
    return PiLaurent(coeffs)


def normal_form(m: BHMatrix, v: ChainElement,
                window: int) -> dict[Monomial, PiLaurent]:
    """Coordinates of a cocycle on the orbifold basis: closed-form fast
    path, window oracle (with exact recovery of the pi-dependence by
    multi-point evaluation) for the rest."""
    basis = orbifold_basis(m)
    bset = set(basis.monomials)
    coords: dict[Monomial, PiLaurent] = {}
    leftovers: dict[Monomial, PiLaurent] = {}
    groups: dict[tuple, dict] = {}
    for mono, c in v.terms.items():
        sec = bhmat.sector_of(m, mono.lam)
        if (mono.I == frozenset(sec.unfixed)
                and not any(mono.gamma[i] for i in sec.fixed)):
            groups.setdefault(sec.lam, {})[mono] = c
        else:
            # outside the within-sector calculus (e.g. twist exponents
            # with integral charges on the wrong wedge) -> oracle
            leftovers[mono] = leftovers.get(mono, PiLaurent.zero()) + c
    for terms in groups.values():
        reduced = reduce_closed_form(m, ChainElement(terms))
        for mono, c in reduced.terms.items():
            if mono in bset:
                coords[mono] = coords.get(mono, PiLaurent.zero()) + c
            else:
                leftovers[mono] = leftovers.get(mono, PiLaurent.zero()) + c
    if leftovers:
        elem = ChainElement(leftovers)
        degs = [d for c in leftovers.values() for d in (c.min_degree(),
                                                        c.max_degree())]
        span = 2 * (window + max(degs) - min(degs)) + 3

        def sample(s: int) -> dict[Monomial, Fraction]:
            tc = homolab.truncate(m, window, Fraction(s))
            cds, _ = homolab.reduce_by_oracle(tc, elem, basis.monomials)
            return cds

        # fast path: each coordinate is usually a single power of pi,
        # recoverable from three evaluations
        s123 = [sample(s) for s in (1, 2, 3)]
        pending = []
        for b in basis.monomials:
            v1, v2, v3 = (cds[b] for cds in s123)
            if not (v1 or v2 or v3):
                continue
            fit = None
            if v1:
                r = v2 / v1
                if r.numerator == 1:
                    e = -(r.denominator.bit_length() - 1)
                elif r.denominator == 1:
                    e = r.numerator.bit_length() - 1
                else:
                    e = None
                if (e is not None and r == Fraction(2) ** e
                        and v3 == v1 * Fraction(3) ** e):
                    fit = PiLaurent.pi_power(e, v1)
            if fit is None:
                pending.append(b)
            else:
                coords[b] = coords.get(b, PiLaurent.zero()) + fit
        if pending:
            allsmp = s123 + [sample(s) for s in range(4, span + 1)]
            for b in pending:
                fit = _fit_laurent([(Fraction(s + 1), cds[b])
                                    for s, cds in enumerate(allsmp)])
                coords[b] = coords.get(b, PiLaurent.zero()) + fit
    return {b: c for b, c in coords.items() if c != PiLaurent.zero()}


def duality_matrix(m: BHMatrix, window: int | None = None) -> list[list]:
    """Matrix of the duality map in the two orbifold bases: column j
    holds the coordinates, on the transpose matrix's basis, of the image
    of the j-th basis element."""
    mt = m.transpose()
    cols_src = orbifold_basis(m).monomials
    rows_dst = orbifold_basis(mt).monomials
    if window is None:
        window = 2 * max((sum(r) for r in m.entries), default=1) + 2
    out = [[PiLaurent.zero() for _ in cols_src] for _ in rows_dst]
    pos = {b: i for i, b in enumerate(rows_dst)}
    for j, b in enumerate(cols_src):
        img = chaincx.delta(m, ChainElement({b: PiLaurent.one()}))
        for bdst, c in normal_form(mt, img, window).items():
            out[pos[bdst]][j] = c
    return out
