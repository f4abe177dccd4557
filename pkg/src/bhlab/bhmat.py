"""Exponent matrices of invertible polynomials.

Validation is structural: a matrix is accepted exactly when it is
permutation-equivalent to a direct sum of chain and loop blocks, which by
the classification of irreducible invertible polynomials is equivalent to
the partials forming a regular sequence.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Optional, Sequence

from . import ratmat
from .errors import BadShape, NotAnAtom, NotInvertiblePolynomial, Singular

IntMat = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Atom:
    """One irreducible block: a chain x1^a1 x2 + ... + xn^an or the
    cyclic loop variant."""

    kind: str  # "chain" | "loop"
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("chain", "loop"):
            raise ValueError(self.kind)

    @property
    def n(self) -> int:
        return len(self.exponents)

    def canonical_matrix(self) -> IntMat:
        n, a = self.n, self.exponents
        rows = []
        for i in range(n):
            row = [0] * n
            row[i] = a[i]
            if self.kind == "loop":
                row[(i + 1) % n] = 1
            elif i + 1 < n:
                row[i + 1] = 1
            rows.append(tuple(row))
        return tuple(rows)

    def det(self) -> int:
        if self.kind == "chain":
            return prod(self.exponents)
        return prod(self.exponents) + (-1) ** (self.n + 1)

    def transposed(self) -> "Atom":
        """Atom of the transposed canonical matrix."""
        a = self.exponents
        if self.kind == "chain":
            return Atom("chain", tuple(reversed(a)))
        return Atom("loop", (a[0],) + tuple(reversed(a[1:])))

    def key(self):
        """Canonical comparison key (loops normalized up to rotation)."""
        if self.kind == "chain":
            return ("chain", self.exponents)
        rots = [self.exponents[i:] + self.exponents[:i] for i in range(self.n)]
        return ("loop", min(rots))

    def __str__(self):
        return f"{self.kind}({','.join(map(str, self.exponents))})"


@dataclass(frozen=True)
class AtomDecomposition:
    """Permutation (new position -> original variable, 0-based) plus the
    ordered atom list whose block sum the permuted matrix equals."""

    permutation: tuple[int, ...]
    atoms: tuple[Atom, ...]


@dataclass(frozen=True)
class BHMatrix:
    entries: IntMat
    n: int
    det: int
    inv: ratmat.Mat
    decomposition: AtomDecomposition

    # -- construction helpers -----------------------------------------
    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    @property
    def inv_t(self) -> ratmat.Mat:
        return ratmat.transpose(self.inv)

    def transpose(self) -> "BHMatrix":
        return validate(tuple(zip(*self.entries)) if self.n else ())

    def submatrix(self, keep: Sequence[int]) -> "BHMatrix":
        keep = tuple(keep)
        sub = tuple(tuple(self.entries[i][j] for j in keep) for i in keep)
        return validate(sub)

    def __str__(self):
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]"
                              for r in self.entries) + "]"

    def __hash__(self):
        return hash(self.entries)

    def __eq__(self, other):
        return isinstance(other, BHMatrix) and self.entries == other.entries


@dataclass(frozen=True)
class Sector:
    """A scaling-symmetry group element by its canonical representative."""

    lam: tuple[int, ...]
    charges: tuple[Fraction, ...]
    jvee: tuple[bool, ...]
    sub: BHMatrix

    @property
    def fixed(self) -> tuple[int, ...]:
        """Variables moved by the symmetry (set to zero in the sector)."""
        return tuple(i for i, f in enumerate(self.jvee) if f)

    @property
    def unfixed(self) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.jvee) if not f)

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam),
            "charges": [f"{c.numerator}/{c.denominator}" for c in self.charges],
            "jvee": [int(b) for b in self.jvee],
            "sub": [list(r) for r in self.sub.entries],
        }


# ---------------------------------------------------------------------
# validation / decomposition
# ---------------------------------------------------------------------

def _row_options(entries: IntMat, r: int):
    """(head, tail) candidates for row r; tail exponent must be 1."""
    nz = [(j, entries[r][j]) for j in range(len(entries)) if entries[r][j]]
    if len(nz) == 1:
        return [(nz[0][0], None)]
    if len(nz) == 2:
        (j1, a1), (j2, a2) = nz
        opts = []
        if a2 == 1:
            opts.append((j1, j2))
        if a1 == 1:
            opts.append((j2, j1))
        return opts
    return []


def _assignments(entries: IntMat):
    """All consistent head/tail assignments (head bijection rows->cols,
    each col the tail of at most one row)."""
    n = len(entries)
    opts = [_row_options(entries, r) for r in range(n)]
    if any(not o for o in opts):
        return
    heads: dict[int, int] = {}   # head col -> row
    tails: dict[int, int] = {}   # tail col -> row

    def rec(r):
        if r == n:
            yield dict(heads), dict(tails)
            return
        for h, t in opts[r]:
            if h in heads or (t is not None and t in tails):
                continue
            heads[h] = r
            if t is not None:
                tails[t] = r
            yield from rec(r + 1)
            del heads[h]
            if t is not None:
                del tails[t]

    yield from rec(0)


def _atoms_of_assignment(entries: IntMat, heads, tails):
    """Split the variable graph v -> tail(row_of_head(v)) into chains and
    loops; returns list of (atom, variable sequences) or None if invalid."""
    n = len(entries)
    succ = {}
    for col, r in heads.items():
        t = next((c for c, rr in tails.items() if rr == r), None)
        succ[col] = t
    indeg = {v: 0 for v in range(n)}
    for v, t in succ.items():
        if t is not None:
            indeg[t] += 1
    out = []
    seen = set()
    # chains: start at variables with no incoming edge
    for v in range(n):
        if indeg[v] == 0 and v not in seen:
            seq = []
            w: Optional[int] = v
            while w is not None and w not in seen:
                seen.add(w)
                seq.append(w)
                w = succ[w]
            if w is not None:
                return None  # ran into an already-used variable
            exps = tuple(entries[heads[u]][u] for u in seq)
            if exps[-1] < 2 or any(a < 1 for a in exps):
                return None
            out.append((Atom("chain", exps), [tuple(seq)]))
    # loops: remaining vertices form cycles
    for v in range(n):
        if v not in seen:
            cyc = []
            w = v
            while w not in seen:
                seen.add(w)
                cyc.append(w)
                w = succ[w]
                if w is None:
                    return None
            if w != v or len(cyc) < 2:
                return None
            exps = tuple(entries[heads[u]][u] for u in cyc)
            if any(a < 1 for a in exps):
                return None
            if prod(exps) + (-1) ** (len(exps) + 1) == 0:
                return None
            seqs = [tuple(cyc[i:] + cyc[:i]) for i in range(len(cyc))]
            out.append((Atom("loop", exps), seqs))
    return out


def _best_decomposition(entries: IntMat) -> Optional[AtomDecomposition]:
    """Lexicographically smallest valid permutation over all assignments,
    atom orders and loop rotations."""
    n = len(entries)
    best = None
    for heads, tails in _assignments(entries):
        parts = _atoms_of_assignment(entries, heads, tails)
        if parts is None:
            continue
        for order in itertools.permutations(range(len(parts))):
            for choice in itertools.product(
                    *(range(len(parts[i][1])) for i in order)):
                perm: tuple[int, ...] = ()
                atoms = []
                for i, c in zip(order, choice):
                    atom, seqs = parts[i]
                    seq = seqs[c]
                    exps = tuple(entries[heads[u]][u] for u in seq)
                    perm = perm + seq
                    atoms.append(Atom(atom.kind, exps))
                cand = (perm, tuple(atoms))
                if best is None or cand[0] < best[0]:
                    best = cand
    if best is None:
        return None
    return AtomDecomposition(best[0], best[1])


def _check_block_form(entries: IntMat, dec: AtomDecomposition) -> bool:
    n = len(entries)
    perm = dec.permutation
    # row r' of the permuted matrix is the row whose head is variable perm[r']
    blocks = []
    off = 0
    for atom in dec.atoms:
        blocks.append((off, atom.canonical_matrix()))
        off += atom.n
    # recover head assignment: head of variable v is the unique row with
    # a matching canonical pattern; rebuild by matching entries
    headrow = {}
    used = set()
    for pos, v in enumerate(perm):
        # expected canonical row for position pos
        want = None
        for boff, bm in blocks:
            if boff <= pos < boff + len(bm):
                want = (boff, bm[pos - boff])
        boff, canrow = want
        for r in range(n):
            if r in used:
                continue
            row = tuple(entries[r][perm[boff + j]] if boff + j < len(perm)
                        else 0 for j in range(len(canrow)))
            full = [0] * n
            for j, val in enumerate(canrow):
                full[boff + j] = val
            ok = all(entries[r][perm[k]] == full[k] for k in range(n))
            if ok:
                headrow[pos] = r
                used.add(r)
                break
        else:
            return False
    return True


def validate(entries) -> BHMatrix:
    """Validate an exponent matrix and compute its inverse/decomposition."""
    rows = tuple(tuple(r) for r in entries)
    n = len(rows)
    if n == 0:
        return BHMatrix((), 0, 1, (), AtomDecomposition((), ()))
    if any(len(r) != n for r in rows):
        raise BadShape("matrix must be square")
    for r in rows:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise BadShape("entries must be non-negative integers")
    m = ratmat.as_matrix(rows)
    d = ratmat.det(m)
    if d == 0:
        raise Singular("determinant is zero")
    dec = _best_decomposition(rows)
    if dec is None:
        raise NotInvertiblePolynomial(
            "no chain/loop decomposition exists")
    assert _check_block_form(rows, dec)
    inv = ratmat.inverse(m)
    one = tuple(Fraction(1) for _ in range(n))
    if any(q <= 0 for q in ratmat.mat_vec(inv, one)):
        raise NotInvertiblePolynomial(
            "non-positive weight: the singularity is not isolated")
    return BHMatrix(rows, n, int(d), inv, dec)


def decompose(m: BHMatrix) -> AtomDecomposition:
    return m.decomposition


# ---------------------------------------------------------------------
# scaling-symmetry sectors
# ---------------------------------------------------------------------

def canonical_rep(m: BHMatrix, lam: Sequence[int]) -> tuple[int, ...]:
    """Canonical representative of lam modulo the row lattice of A^T."""
    charges = ratmat.vec_mat(lam, m.inv_t)
    frac = [c - (c.numerator // c.denominator) for c in charges]
    rep = ratmat.vec_mat(frac, ratmat.as_matrix(tuple(zip(*m.entries))))
    out = tuple(int(x) for x in rep)
    assert all(Fraction(x) == y for x, y in zip(out, rep))
    return out


def _make_sector(m: BHMatrix, lam: tuple[int, ...]) -> Sector:
    charges = ratmat.vec_mat(lam, m.inv_t)
    jvee = tuple(c.denominator != 1 for c in charges)
    keep = [i for i in range(m.n) if not jvee[i]]
    return Sector(lam, tuple(charges), jvee, m.submatrix(keep))


@lru_cache(maxsize=None)
def _group_elements_cached(m: BHMatrix) -> tuple[Sector, ...]:
    if m.n == 0:
        return (_make_sector(m, ()),)
    bounds = [sum(row) for row in m.entries]
    found = []
    for lam in itertools.product(*(range(b) for b in bounds)):
        charges = ratmat.vec_mat(lam, m.inv_t)
        if all(0 <= c < 1 for c in charges):
            found.append(tuple(lam))
    assert len(found) == abs(m.det), (len(found), m.det)
    found.sort()
    return tuple(_make_sector(m, lam) for lam in found)


def group_elements(m: BHMatrix) -> list[Sector]:
    """The |det A| sectors, sorted lexicographically by lambda."""
    return list(_group_elements_cached(m))


def sector_of(m: BHMatrix, lam: Sequence[int]) -> Sector:
    """Sector containing an arbitrary admissible y-exponent."""
    return _make_sector(m, canonical_rep(m, lam))


def orbifold_matrix(m: BHMatrix) -> list[tuple[Sector, BHMatrix]]:
    return [(s, s.sub) for s in group_elements(m)]


def weights(m: BHMatrix) -> tuple[Fraction, ...]:
    """q with A q = (1, ..., 1)."""
    return ratmat.mat_vec(m.inv, [1] * m.n)


# ---------------------------------------------------------------------
# non-integrality propagation
# ---------------------------------------------------------------------

def check_noninteger_propagation(m: BHMatrix, beta: Sequence[int]) -> bool:
    """Check the propagation pattern of non-integral entries of
    beta*A^{-1} and beta*A^{-T} for a single chain or loop.

    Chains: the non-integral set of beta*A^{-1} is upward closed and the
    one of beta*A^{-T} is downward closed (in canonical variable order).
    Loops: each set is empty or everything.
    """
    if len(m.decomposition.atoms) != 1:
        raise NotAnAtom("matrix must be a single chain or loop")
    atom = m.decomposition.atoms[0]
    perm = m.decomposition.permutation
    bc = [beta[perm[i]] for i in range(m.n)]
    b = ratmat.as_matrix(atom.canonical_matrix())
    v1 = ratmat.vec_mat(bc, ratmat.inverse(b))
    v2 = ratmat.vec_mat(bc, ratmat.inverse(ratmat.transpose(b)))
    s1 = [x.denominator != 1 for x in v1]
    s2 = [x.denominator != 1 for x in v2]
    if atom.kind == "loop":
        return (all(s1) or not any(s1)) and (all(s2) or not any(s2))
    up_closed = all(s1[j] for i, f in enumerate(s1) if f
                    for j in range(i, len(s1)))
    down_closed = all(s2[j] for i, f in enumerate(s2) if f
                      for j in range(i + 1))
    return up_closed and down_closed
