"""Command line surface: certification verbs plus the supporting computations.

Exit codes: 0 when a verdict or value was produced (INCONCLUSIVE included),
1 when a certificate fails verification, 2 on malformed input or data,
3 when the deduction engine reports an internal contradiction.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ppscert.certdata import (
    QUARTIC_CM,
    REAL_QUADRATIC,
    ClassPolyRecord,
    LedgerError,
    load_class_polys,
    load_order_ledger,
)
from ppscert.certifier import (
    PAPER_ASSUMPTIONS,
    PAPS,
    PPS,
    STRICT,
    Certificate,
    InternalContradiction,
    SequenceType,
    certify_paps,
    certify_pps,
    density_bound,
    matrix_digest,
    qp_test,
    verify_certificate,
)
from ppscert.cyclotomic import ALMOST_P_ARY, P_ARY, brute_force_search, seq_to_text
from ppscert.lattice import hnf
from ppscert.ntheory import poly_from_text, relative_class_number_minus
from ppscert.quadforms import class_number
from ppscert.stickelberger import (
    FieldContext,
    build_relation_matrix,
    format_matrix,
    parse_matrix,
    reduce_by_conjugation,
)

_MODES = {"strict": STRICT, "paper": PAPER_ASSUMPTIONS}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ppscert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    certify = sub.add_parser("certify", help="certify non-existence for a sequence type")
    fam = certify.add_subparsers(dest="family", required=True)
    for name in ("pps", "paps"):
        fp = fam.add_parser(name)
        fp.add_argument("--p", type=int, required=True)
        fp.add_argument("--q", type=int, required=True)
        fp.add_argument("--l", type=int, default=1)
        if name == "pps":
            fp.add_argument("--a", type=int, default=1)
        fp.add_argument("--nprime", type=int, default=1)
        fp.add_argument("--mode", choices=sorted(_MODES), default="strict")
        fp.add_argument("--lmax", type=int, default=15)
        fp.add_argument("--ledger", metavar="FILE", help="assumption ledger file")
        fp.add_argument("--polys", metavar="DIR", help="directory holding class_polys.tsv")
        fp.add_argument("--fp-poly", metavar="FILE", help="real quadratic class polynomial, one coefficient line")
        fp.add_argument("--ep-poly", metavar="FILE", help="quartic class polynomial, one coefficient line")
        fp.add_argument("--w", type=int, help="primitive root override")
        fp.add_argument("--json", action="store_true")

    qp = sub.add_parser("qp-test", help="test membership of q in the qualifying prime set")
    qp.add_argument("--p", type=int, required=True)
    qp.add_argument("--q", type=int, required=True)
    qp.add_argument("--fp-poly", metavar="FILE")
    qp.add_argument("--ep-poly", metavar="FILE")
    qp.add_argument("--polys", metavar="DIR")
    qp.add_argument("--json", action="store_true")

    dens = sub.add_parser("density-bound", help="exact lower density bound for qualifying primes")
    dens.add_argument("--p", type=int, required=True)
    dens.add_argument("--h-plus", type=int, required=True, dest="h_plus")
    dens.add_argument("--h", type=int, required=True)
    dens.add_argument("--json", action="store_true")

    stick = sub.add_parser("stickelberger", help="print the relation matrix for (p, f)")
    stick.add_argument("--p", type=int, required=True)
    stick.add_argument("--f", type=int, required=True)
    stick.add_argument("--w", type=int)
    stick.add_argument("--reduced", action="store_true", help="apply the conjugation reduction")
    stick.add_argument("--json", action="store_true")

    hnfp = sub.add_parser("hnf", help="canonical lattice basis of a matrix file")
    hnfp.add_argument("--input", metavar="FILE", required=True)
    hnfp.add_argument("--json", action="store_true")

    cn = sub.add_parser("classnum", help="class number of an imaginary quadratic discriminant")
    cn.add_argument("--d", type=int, required=True)
    cn.add_argument("--json", action="store_true")

    hm = sub.add_parser("hminus", help="relative class number of the p-th cyclotomic field")
    hm.add_argument("--p", type=int, required=True)
    hm.add_argument("--json", action="store_true")

    srch = sub.add_parser("search", help="exhaustive search for a perfect sequence")
    srch.add_argument("--p", type=int, required=True)
    srch.add_argument("--n", type=int, required=True)
    srch.add_argument("--kind", choices=[P_ARY, ALMOST_P_ARY], default=P_ARY)
    srch.add_argument("--json", action="store_true")

    ver = sub.add_parser("verify", help="replay a certificate file")
    ver.add_argument("--certificate", metavar="FILE", required=True)
    ver.add_argument("--json", action="store_true")

    return parser


def _read_cli_poly(path: str | None, p: int, field_kind: str, label: str) -> ClassPolyRecord | None:
    if path is None:
        return None
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) != 1:
        raise ValueError(f"{path}: expected one coefficient line")
    return ClassPolyRecord(
        label=label,
        p=p,
        field_kind=field_kind,
        polynomial=poly_from_text(lines[0]),
        provenance="supplied on the command line",
    )


def _print_certificate(cert: Certificate, as_json: bool) -> None:
    if as_json:
        print(cert.to_json())
        return
    t = cert.input
    print(f"input: {t.family} p={t.p} a={t.a} q={t.q} l={t.l} nprime={t.nprime}")
    print(f"mode: {cert.mode}")
    for step in cert.steps:
        print(f"step {step.name}: {step.outcome}")
    if cert.relation is not None:
        rel = cert.relation
        print(f"relation: d1={rel['d1']} h_minus={rel['h_minus']}")
        for n, rule in rel["rejected"]:
            print(f"  rejected N={n} by {rule}")
        for entry in rel["carried"]:
            print(f"  carried N={entry['modulus']} coeffs {tuple(entry['coeffs'])}")
    if cert.search is not None:
        for block in cert.search:
            print(f"search N={block['modulus']}:")
            for line in block["lines"]:
                if line["solvable"]:
                    print(f"  l={line['l']} YES witness {tuple(line['witness'])}")
                else:
                    print(f"  l={line['l']} NO")
            print(f"  l0={block['l0']}")
    print(f"verdict: {cert.verdict}")
    if cert.reason:
        print(f"reason: {cert.reason}")


def _cmd_certify(args) -> int:
    ledger = load_order_ledger(args.ledger) if args.ledger else None
    polys = load_class_polys(Path(args.polys) / "class_polys.tsv") if args.polys else None
    fp_record = _read_cli_poly(args.fp_poly, args.p, REAL_QUADRATIC, "CLI_FP")
    ep_record = _read_cli_poly(args.ep_poly, args.p, QUARTIC_CM, "CLI_EP")
    if args.family == "pps":
        t = SequenceType(family=PPS, p=args.p, a=args.a, q=args.q, l=args.l, nprime=args.nprime)
        cert = certify_pps(
            t,
            mode=_MODES[args.mode],
            ledger=ledger,
            polys=polys,
            fp_poly=fp_record,
            ep_poly=ep_record,
            l_max=args.lmax,
            w=args.w,
        )
    else:
        t = SequenceType(family=PAPS, p=args.p, a=0, q=args.q, l=args.l, nprime=args.nprime)
        cert = certify_paps(
            t,
            mode=_MODES[args.mode],
            ledger=ledger,
            polys=polys,
            fp_poly=fp_record,
            ep_poly=ep_record,
            l_max=args.lmax,
            w=args.w,
        )
    _print_certificate(cert, args.json)
    return 0


def _cmd_qp_test(args) -> int:
    polys = load_class_polys(Path(args.polys) / "class_polys.tsv") if args.polys else None
    fp_record = _read_cli_poly(args.fp_poly, args.p, REAL_QUADRATIC, "CLI_FP")
    ep_record = _read_cli_poly(args.ep_poly, args.p, QUARTIC_CM, "CLI_EP")
    cert = qp_test(args.p, args.q, fp_poly=fp_record, ep_poly=ep_record, polys=polys)
    _print_certificate(cert, args.json)
    return 0


def _cmd_density(args) -> int:
    bound = density_bound(args.p, args.h_plus, args.h)
    if args.json:
        print(json.dumps({"p": args.p, "h_plus": args.h_plus, "h": args.h, "bound": str(bound)}, sort_keys=True))
    else:
        print(bound)
    return 0


def _cmd_stickelberger(args) -> int:
    ctx = FieldContext(p=args.p, f=args.f, w=args.w)
    matrix = build_relation_matrix(ctx)
    rows = reduce_by_conjugation(matrix) if args.reduced else matrix.rows
    if args.json:
        print(
            json.dumps(
                {
                    "p": ctx.p,
                    "f": ctx.f,
                    "w": ctx.w,
                    "rows": [list(r) for r in rows],
                    "digest": matrix_digest(rows),
                },
                sort_keys=True,
            )
        )
    else:
        print(format_matrix(rows), end="")
    return 0


def _cmd_hnf(args) -> int:
    rows = parse_matrix(Path(args.input).read_text(encoding="utf-8"))
    basis = hnf(rows)
    if args.json:
        print(
            json.dumps(
                {
                    "basis": [list(r) for r in basis.basis],
                    "diag": list(basis.diag),
                    "determinant": basis.determinant,
                    "digest": matrix_digest(basis.basis),
                },
                sort_keys=True,
            )
        )
    else:
        print(format_matrix(basis.basis), end="")
    return 0


def _cmd_classnum(args) -> int:
    h = class_number(args.d)
    print(json.dumps({"d": args.d, "class_number": h}, sort_keys=True) if args.json else h)
    return 0


def _cmd_hminus(args) -> int:
    h = relative_class_number_minus(args.p)
    print(json.dumps({"p": args.p, "h_minus": h}, sort_keys=True) if args.json else h)
    return 0


def _cmd_search(args) -> int:
    found = brute_force_search(args.p, args.n, args.kind)
    if args.json:
        payload = {"p": args.p, "n": args.n, "kind": args.kind, "found": found is not None}
        payload["sequence"] = None if found is None else seq_to_text(found)
        print(json.dumps(payload, sort_keys=True))
    else:
        print("NONE" if found is None else seq_to_text(found))
    return 0


def _cmd_verify(args) -> int:
    text = Path(args.certificate).read_text(encoding="utf-8")
    try:
        parsed = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"certificate is not well-formed JSON: {exc}") from exc
    ok = verify_certificate(parsed)
    if args.json:
        print(json.dumps({"certificate": args.certificate, "valid": ok}, sort_keys=True))
    else:
        print("VALID" if ok else "INVALID")
    return 0 if ok else 1


_DISPATCH = {
    "certify": _cmd_certify,
    "qp-test": _cmd_qp_test,
    "density-bound": _cmd_density,
    "stickelberger": _cmd_stickelberger,
    "hnf": _cmd_hnf,
    "classnum": _cmd_classnum,
    "hminus": _cmd_hminus,
    "search": _cmd_search,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.verb](args)
    except InternalContradiction as exc:
        print(f"internal contradiction: {exc}", file=sys.stderr)
        return 3
    except (ValueError, LedgerError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
