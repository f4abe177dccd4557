"""Command-line interface.

Exit codes: 0 success, 1 property failure, 2 domain error, 3 parse
error.  Output formats: pretty (tables matching the documentation),
json, csv — json/csv are byte-stable for golden files.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import bhmat, chaincx, cohoring, corpus, dwork, homolab, suites
from .errors import BHLabError, PrimeDividesDet
from .pilaurent import PiLaurent

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_DOMAIN = 2
EXIT_PARSE = 3


def _parse_matrix(text: str):
    try:
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("matrix must be a list of rows")
        return data
    except (json.JSONDecodeError, ValueError) as exc:
        raise SystemExit(_fail(EXIT_PARSE, f"cannot parse matrix: {exc}"))


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _load(text: str):
    data = _parse_matrix(text)
    return bhmat.validate(data)


def _frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 \
        else str(f.numerator)


def _emit(rows: list[dict], fmt: str, order: list[str]):
    if fmt == "json":
        print(json.dumps(rows, sort_keys=True, separators=(",", ":")))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=order, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k, "") for k in order})
        sys.stdout.write(buf.getvalue())
    else:
        widths = [max(len(str(r.get(k, ""))) for r in rows + [{k: k}])
                  for k in order]
        print("  ".join(k.ljust(w) for k, w in zip(order, widths)).rstrip())
        for r in rows:
            print("  ".join(str(r.get(k, "")).ljust(w)
                            for k, w in zip(order, widths)).rstrip())


def cmd_classify(args) -> int:
    m = _load(args.matrix)
    parts = ", ".join(str(a) for a in m.decomposition.atoms)
    q = "(" + ",".join(_frac(x) for x in bhmat.weights(m)) + ")"
    if args.format == "json":
        print(json.dumps({
            "atoms": [str(a) for a in m.decomposition.atoms],
            "permutation": list(m.decomposition.permutation),
            "det": m.det,
            "weights": [_frac(x) for x in bhmat.weights(m)],
        }, sort_keys=True, separators=(",", ":")))
    else:
        print(f"{parts}, det={m.det}, q={q}")
    return EXIT_OK


def cmd_group(args) -> int:
    m = _load(args.matrix)
    rows = []
    for s in bhmat.group_elements(m):
        rows.append({
            "lambda": "(" + ",".join(map(str, s.lam)) + ")",
            "charges": "(" + ",".join(_frac(c) for c in s.charges) + ")",
        })
    _emit(rows, args.format, ["lambda", "charges"])
    return EXIT_OK


def cmd_basis(args) -> int:
    m = _load(args.matrix)
    basis = cohoring.orbifold_basis(m)
    rows = []
    for sec, mono, g in basis.entries:
        rows.append({
            "monomial": str(mono),
            "q_plus_qvee": g.q + g.qvee,
            "half_sharp_diff": _frac(Fraction(g.sharp - g.sharpvee, 2)),
        })
    _emit(rows, args.format, ["monomial", "q_plus_qvee", "half_sharp_diff"])
    return EXIT_OK


def cmd_dual(args) -> int:
    m = _load(args.matrix)
    D = cohoring.duality_matrix(m, args.window)
    src = cohoring.orbifold_basis(m).monomials
    dst = cohoring.orbifold_basis(m.transpose()).monomials
    rows = []
    for j, b in enumerate(src):
        for i, bd in enumerate(dst):
            if D[i][j] != PiLaurent.zero():
                rows.append({"source": str(b), "image": str(bd),
                             "coefficient": repr(D[i][j])})
    _emit(rows, args.format, ["source", "image", "coefficient"])
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in suites.SUITES:
        return _fail(EXIT_PARSE, f"unknown suite {args.suite!r}")
    mats = corpus.small_matrices()
    if args.matrix:
        mats = [_load(args.matrix)] + mats
    if args.suite == "eigenvalue":
        report = suites.suite_eigenvalue(corpus.matrices()
                                         + ([_load(args.matrix)]
                                            if args.matrix else []))
    elif args.suite == "quasiiso":
        target = [_load(args.matrix)] if args.matrix else mats[:3]
        report = suites.suite_quasiiso(target, window=args.window)
    else:
        report = suites.SUITES[args.suite](mats, args.seed, args.cases)
    print(json.dumps(report, sort_keys=True, separators=(",", ":"),
                     default=str))
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_frobenius(args) -> int:
    m = _load(args.matrix)
    p = args.prime
    if p is None:
        return _fail(EXIT_PARSE, "frobenius requires -p/--prime")
    prec = args.precision
    if prec is not None and prec < p - 1:
        return _fail(EXIT_DOMAIN, "precision must be >= p-1")
    try:
        F = dwork.tfr_matrix(m, p, prec)
    except PrimeDividesDet as exc:
        return _fail(EXIT_DOMAIN, str(exc))
    rows = []
    for (i, j), v in sorted(F.entries.items()):
        for r, x in v.comps:
            rows.append({
                "row": str(F.basis[i]),
                "col": str(F.basis[j]),
                "sigma_power": r,
                "pi_shift": x.shift,
                "digits": "".join(map(str, x.digits[:8])),
                "certified_prec": x.prec,
            })
    _emit(rows, args.format, ["row", "col", "sigma_power", "pi_shift",
                              "digits", "certified_prec"])
    if args.check_duality:
        rep = dwork.verify_commutation(m, p, prec)
        print(json.dumps(rep, sort_keys=True, separators=(",", ":")))
        return EXIT_OK if rep["pass"] else EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bhlab",
        description="Exact-arithmetic lab for invertible-polynomial "
                    "mirror duality and its p-adic Frobenius.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, matrix_required=True):
        sp.add_argument("-m", "--matrix",
                        required=matrix_required,
                        help="exponent matrix as JSON, e.g. '[[2,1],[0,3]]'")
        sp.add_argument("--format", choices=["pretty", "json", "csv"],
                        default="pretty")

    sp = sub.add_parser("classify", help="atom decomposition and weights")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("group", help="scaling-symmetry group sectors")
    common(sp)
    sp.set_defaults(func=cmd_group)

    sp = sub.add_parser("basis", help="orbifold cohomology basis")
    common(sp)
    sp.set_defaults(func=cmd_basis)

    sp = sub.add_parser("dual", help="duality pairings of the two bases")
    common(sp)
    sp.add_argument("--window", type=int, default=None)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("verify", help="run an invariant suite")
    common(sp, matrix_required=False)
    sp.add_argument("--suite", required=True,
                    choices=sorted(suites.SUITES))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cases", type=int, default=200)
    sp.add_argument("--window", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("frobenius", help="twisted Frobenius matrix")
    common(sp)
    sp.add_argument("-p", "--prime", type=int, default=None)
    sp.add_argument("--precision", type=int, default=None)
    sp.add_argument("--check-duality", action="store_true")
    sp.set_defaults(func=cmd_frobenius)
    return ap


def main(argv=None) -> int:
    os.environ.setdefault("BHLAB_THREADS", "1")
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_PARSE
    except BHLabError as exc:
        return _fail(EXIT_DOMAIN, f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
