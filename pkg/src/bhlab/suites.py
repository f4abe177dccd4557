"""Randomized invariant suites shared by the CLI and the test suite.

Each suite draws seeded random elements over a list of matrices and
checks one family of exact identities; failures are reported with the
offending matrix and element.
"""
from __future__ import annotations

import random
from fractions import Fraction

from . import bhmat, chaincx, clifford, cohoring, errors, homolab
from .bhmat import BHMatrix
from .chaincx import ChainElement, Monomial
from .clifford import ExtElement
from .pilaurent import PiLaurent


def random_monomial(m: BHMatrix, rng: random.Random,
                    restrict_sa: bool = False,
                    max_lam_mult: int = 3) -> Monomial | None:
    lam = tuple(rng.randrange(0, max_lam_mult * max(sum(r) for r in m.entries))
                for _ in range(m.n)) if m.n else ()
    ch = chaincx.charges(m, lam)
    if any(c < 0 for c in ch):
        return None
    gamma = tuple(rng.randrange(0, 5) if ch[i] == 0 else 0
                  for i in range(m.n))
    if chaincx.is_zero_class(m, gamma, lam):
        return None
    if restrict_sa and any(x < 0 for x in chaincx.gamma_ainv(m, gamma)):
        return None
    I = frozenset(i for i in range(m.n) if rng.random() < 0.5)
    return Monomial(gamma, lam, I)


def random_element(m: BHMatrix, rng: random.Random,
                   restrict_sa: bool = False) -> ChainElement:
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        mono = random_monomial(m, rng, restrict_sa)
        if mono is None:
            continue
        c = PiLaurent.pi_power(rng.randrange(-1, 2),
                               Fraction(rng.randrange(-3, 4) or 1))
        terms[mono] = terms.get(mono, PiLaurent.zero()) + c
    return ChainElement({k: v for k, v in terms.items() if v != PiLaurent.zero()})


def random_ext(n: int, rng: random.Random) -> ExtElement:
    coeffs = {}
    for _ in range(rng.randrange(1, 4)):
        idx = frozenset(i for i in range(n) if rng.random() < 0.5)
        coeffs[idx] = PiLaurent.pi_power(rng.randrange(-1, 2),
                                         Fraction(rng.randrange(-3, 4) or 1))
    return ExtElement(n, coeffs)


def _report(name, cases, failures):
    return {"suite": name, "cases": cases,
            "failures": failures[:5], "pass": not failures}


def suite_chain(mats, seed: int, cases: int) -> dict:
    """(d + d_vee)^2 = 0 and the anticommutation of the summands."""
    rng = random.Random(seed)
    failures = []
    done = 0
    while done < cases:
        m = rng.choice(mats)
        v = random_element(m, rng)
        dd = chaincx.apply_d(m, chaincx.apply_d(m, v))
        vv = chaincx.apply_dvee(m, chaincx.apply_dvee(m, v))
        mix = (chaincx.apply_d(m, chaincx.apply_dvee(m, v))
               + chaincx.apply_dvee(m, chaincx.apply_d(m, v)))
        for w, tag in ((dd, "d^2"), (vv, "dvee^2"), (mix, "anticommutator")):
            if w.terms:
                failures.append({"matrix": str(m), "element": repr(v),
                                 "identity": tag})
        done += 1
    return _report("chain", cases, failures)


def suite_grading(mats, seed: int, cases: int) -> dict:
    """Hatted-grading identities: the hat-differentials sum to d, each
    raises the hat-grading by exactly one, and commutes with the dual
    hat-grading; on admissible monomials 2*qhat - sharp = ext."""
    rng = random.Random(seed)
    failures = []
    done = 0
    b = Fraction(3)
    while done < cases:
        m = rng.choice(mats)
        v = random_element(m, rng, restrict_sa=True)
        total = ChainElement({})
        ok = True
        for j in range(m.n):
            dj = chaincx.apply_hat_d(m, j, v)
            total = total + dj
            # conjugation form of [Qhat, hat_d_j] = hat_d_j
            lhs = chaincx.scale_qhat(
                m, chaincx.apply_hat_d(
                    m, j, chaincx.scale_qhat(m, v, 1 / b)), b)
            if lhs != dj.scale(b):
                ok = False
                failures.append({"matrix": str(m), "element": repr(v),
                                 "identity": f"[Qhat, hat_d_{j}]"})
            # Qhatvee = (n - ext) + Qhat commutes with hat_d_j
            def qhatvee(w, base):
                w = chaincx.scale_qhat(m, w, base)
                w = chaincx.scale_ext(w, 1 / base).scale(base ** m.n)
                return w
            lhs2 = qhatvee(chaincx.apply_hat_d(m, j, qhatvee(v, 1 / b)), b)
            if lhs2 != dj:
                ok = False
                failures.append({"matrix": str(m), "element": repr(v),
                                 "identity": f"[Qhatvee, hat_d_{j}]"})
        if total != chaincx.apply_d(m, v):
            ok = False
            failures.append({"matrix": str(m), "element": repr(v),
                             "identity": "sum hat_d = d"})
        done += 1
    return _report("grading", cases, failures)


def suite_star(mats, seed: int, cases: int) -> dict:
    """Star intertwining: star(E_{A,i} v) = contract_i(star v) and
    star(E^vee_{A,i} v) = wedge_i(star v)."""
    rng = random.Random(seed)
    failures = []
    done = 0
    while done < cases:
        m = rng.choice(mats)
        if m.n == 0:
            continue
        v = random_ext(m.n, rng)
        i = rng.randrange(m.n)
        lhs1 = clifford.star(m, clifford.apply_E(m, i, v))
        rhs1 = clifford.contract_e(i, clifford.star(m, v))
        lhs2 = clifford.star(m, clifford.apply_E_vee(m, i, v))
        rhs2 = clifford.mul_e(i, clifford.star(m, v))
        if lhs1 != rhs1:
            failures.append({"matrix": str(m), "element": repr(v),
                             "identity": f"star E_{i}"})
        if lhs2 != rhs2:
            failures.append({"matrix": str(m), "element": repr(v),
                             "identity": f"star E_vee_{i}"})
        done += 1
    return _report("star", cases, failures)


def suite_duality(mats, seed: int, cases: int) -> dict:
    """The duality map is a chain map to the transpose complex."""
    rng = random.Random(seed)
    failures = []
    done = 0
    while done < cases:
        m = rng.choice(mats)
        mt = m.transpose()
        v = random_element(m, rng, restrict_sa=True)
        lhs = chaincx.delta(
            m, chaincx.apply_d(m, v) + chaincx.apply_dvee(m, v))
        w = chaincx.delta(m, v)
        rhs = chaincx.apply_d(mt, w) + chaincx.apply_dvee(mt, w)
        if lhs != rhs:
            failures.append({"matrix": str(m), "element": repr(v),
                             "identity": "delta chain map"})
        done += 1
    return _report("duality", cases, failures)


def suite_eigenvalue(mats, seed: int = 0, cases: int = 0) -> dict:
    """2*ext - n - 2*qhat + 2*qvee = -(sharp - sharpvee) on every
    orbifold basis monomial."""
    failures = []
    total = 0
    for m in mats:
        for sec, mono, g in cohoring.orbifold_basis(m).entries:
            total += 1
            lhs = 2 * g.ext - m.n - 2 * g.qhat + 2 * g.qvee
            if lhs != -(g.sharp - g.sharpvee):
                failures.append({"matrix": str(m), "element": str(mono)})
            if 2 * g.qhat - g.sharp != g.ext:
                failures.append({"matrix": str(m), "element": str(mono),
                                 "identity": "2*qhat - sharp = ext"})
    return _report("eigenvalue", total, failures)


def suite_quasiiso(mats, seed: int = 0, window: int | None = None) -> dict:
    failures = []
    reports = []
    for m in mats:
        rep = homolab.verify_quasi_iso(m, window)
        reports.append({"matrix": str(m), **rep})
        if not rep["pass"]:
            failures.append({"matrix": str(m)})
    out = _report("quasiiso", len(mats), failures)
    out["reports"] = reports
    return out


SUITES = {
    "chain": suite_chain,
    "grading": suite_grading,
    "star": suite_star,
    "duality": suite_duality,
    "eigenvalue": suite_eigenvalue,
    "quasiiso": suite_quasiiso,
}
