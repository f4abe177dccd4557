"""Built-in matrix corpus: all chain and loop atoms with n <= 3 and
exponents <= 4, plus a few direct sums and permuted variants."""
from __future__ import annotations

import itertools

from . import bhmat
from .bhmat import Atom, BHMatrix
from .errors import NotInvertiblePolynomial


def atoms(max_n: int = 3, max_exp: int = 4) -> list[Atom]:
    out = []
    for n in range(1, max_n + 1):
        # chains: all exponents >= 2 so the transpose is also valid
        # (a leading exponent 1 gives a dual with a zero weight)
        for exps in itertools.product(range(2, max_exp + 1), repeat=n):
            out.append(Atom("chain", exps))
        if n >= 2:
            seen = set()
            for exps in itertools.product(range(1, max_exp + 1), repeat=n):
                a = Atom("loop", exps)
                if a.det() == 0 or a.key() in seen:
                    continue
                seen.add(a.key())
                out.append(a)
    return out


def matrices(max_n: int = 3, max_exp: int = 4) -> list[BHMatrix]:
    out = []
    for a in atoms(max_n, max_exp):
        try:
            out.append(bhmat.validate(a.canonical_matrix()))
        except NotInvertiblePolynomial:
            continue  # degenerate (zero-weight) loops
    return out


def direct_sum(*ms: BHMatrix) -> BHMatrix:
    n = sum(m.n for m in ms)
    rows = []
    off = 0
    for m in ms:
        for r in m.entries:
            rows.append((0,) * off + tuple(r) + (0,) * (n - off - m.n))
        off += m.n
    return bhmat.validate(rows)


def permuted(m: BHMatrix, perm: tuple[int, ...]) -> BHMatrix:
    """Conjugate by a permutation of the variables."""
    return bhmat.validate(tuple(
        tuple(m.entries[perm[i]][perm[j]] for j in range(m.n))
        for i in range(m.n)))


def small_matrices() -> list[BHMatrix]:
    """The n <= 2 sub-corpus plus mixed variants; cheap enough for the
    brute-force and randomized suites."""
    out = matrices(max_n=2, max_exp=4)
    two = bhmat.validate([[2]])
    chain23 = bhmat.validate([[2, 1], [0, 3]])
    out.append(direct_sum(two, two))
    out.append(direct_sum(two, chain23))
    out.append(permuted(direct_sum(chain23, two), (1, 2, 0)))
    return out
