"""Command-line front end.

Exit codes: 0 success (type J verdict, certified output), 1 parse or usage
error, 2 definite failure, 3 irreducibility unknown, 4 search or precision
budget exhausted.
"""
from __future__ import annotations

import argparse
import sys

from . import intmat
from .classify import check_type_j
from .errors import CertificateError, DomainError, SearchExhausted, UndeterminedError
from .invariants import obstruction_report
from .manifold import DOUBLE, build_manifold
from .otbridge import compare_with_tm
from .realroots import count_real_roots
from .serialize import (
    ParseError,
    document,
    dumps,
    load_json_file,
    parse_factorization,
    parse_matrix,
    parse_poly,
    parse_poly_list,
)
from .units import DirichletFamily, build_dirichlet_family, find_units, select_log_basis

EXIT_OK, EXIT_PARSE, EXIT_FAIL, EXIT_UNKNOWN, EXIT_EXHAUSTED = 0, 1, 2, 3, 4


class _Exit(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--coeff-bound", type=_positive_int, default=8, help="unit search coefficient bound")
    common.add_argument("--search-bound", type=_positive_int, default=3, help="specialness exponent bound")
    common.add_argument("--precision", type=_positive_int, default=256, metavar="BITS", help="precision budget in bits")
    common.add_argument("--tolerance", type=_positive_float, default=1e-8, help="floating residual tolerance")
    common.add_argument("--float-bits", type=_positive_int, default=DOUBLE, help="working precision of the numeric eigenbasis")
    common.add_argument("--output", "-o", metavar="PATH", help="write JSON here instead of stdout")

    p = argparse.ArgumentParser(prog="otforge", description="Certificates for generalized OT manifolds T(M, D).")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="certify type J / J1 of an integer matrix")
    c.add_argument("matrix")
    c.add_argument("factorization")

    d = sub.add_parser("dirichlet", parents=[common], help="construct a Dirichlet family")
    d.add_argument("matrix")
    d.add_argument("factorization")
    mode = d.add_mutually_exclusive_group()
    mode.add_argument("--primary", action="store_true", help="residue t modulo B0 (default)")
    mode.add_argument("--custom", metavar="E_FILE", help="JSON array of residue polynomials E")

    b = sub.add_parser("build", parents=[common], help="assemble and verify T(M, D)")
    b.add_argument("matrix")
    b.add_argument("factorization")
    b.add_argument("family", help="output of 'dirichlet' or a JSON array of polynomials")

    i = sub.add_parser("invariants", parents=[common], help="specialness, b1 and obstruction verdicts")
    i.add_argument("manifold", help="output of 'build'")

    o = sub.add_parser("ot-compare", parents=[common], help="compare X(K, O, U) with T(B_P, D)")
    o.add_argument("p", help="JSON polynomial, monic irreducible")
    o.add_argument("units", nargs="?", help="JSON array of unit polynomials; searched for when omitted")
    return p


def _cmd_classify(args):
    m = parse_matrix(load_json_file(args.matrix), args.matrix)
    f = parse_factorization(load_json_file(args.factorization), args.factorization)
    cert = check_type_j(m, f)
    doc = document("type_certificate", matrix=intmat.to_json(m), certificate=cert.to_json())
    if cert.j:
        return doc, EXIT_OK
    if cert.j is None:
        return doc, EXIT_UNKNOWN
    return doc, EXIT_FAIL


def _classified(args):
    m = parse_matrix(load_json_file(args.matrix), args.matrix)
    f = parse_factorization(load_json_file(args.factorization), args.factorization)
    cert = check_type_j(m, f)
    if cert.j is None:
        raise _Exit(EXIT_UNKNOWN, "irreducibility of some factor is unknown: " + "; ".join(cert.failures))
    if not cert.j:
        raise _Exit(EXIT_FAIL, "matrix is not of type J: " + "; ".join(cert.failures))
    return m, f


def _cmd_dirichlet(args):
    m, f = _classified(args)
    if args.custom:
        es = parse_poly_list(load_json_file(args.custom), args.custom)
        fam = build_dirichlet_family(m, f, "custom", es, args.coeff_bound, args.precision)
    else:
        fam = build_dirichlet_family(m, f, "primary", None, args.coeff_bound, args.precision)
    doc = document(
        "dirichlet_family", matrix=intmat.to_json(m), factorization=f.to_json(), family=fam.to_json()
    )
    return doc, EXIT_OK


def _family_from(data, source):
    if isinstance(data, dict):
        fam = data.get("family", data)
        if not isinstance(fam, dict) or "polys" not in fam:
            raise ParseError("family document has no 'polys'", source)
        return parse_poly_list(fam["polys"], source), bool(fam.get("primary", False))
    return parse_poly_list(data, source), False


def _cmd_build(args):
    m, f = _classified(args)
    polys, primary = _family_from(load_json_file(args.family), args.family)
    md = build_manifold(m, f, polys, args.float_bits, args.tolerance, args.precision)
    md.primary = primary
    doc = document("manifold", matrix=intmat.to_json(m), factorization=f.to_json(), manifold=md.to_json())
    return doc, EXIT_OK


def _cmd_invariants(args):
    data = load_json_file(args.manifold)
    if not isinstance(data, dict) or "matrix" not in data or "manifold" not in data:
        raise ParseError("expected the JSON document written by 'build'", args.manifold)
    m = parse_matrix(data["matrix"], args.manifold)
    body = data["manifold"]
    if not isinstance(body, dict) or "family" not in body:
        raise ParseError("manifold document has no family", args.manifold)
    polys = parse_poly_list(body["family"], args.manifold)
    rep = obstruction_report(m, polys, args.search_bound, args.precision, primary=bool(body.get("primary")))
    return document("obstruction_report", report=rep.to_json()), EXIT_OK


def _auto_units(p, coeff_bound, budget):
    s = count_real_roots(p)
    last = None
    for bound in range(1, coeff_bound + 1):
        units = find_units(p, bound)
        try:
            return [u.elem.rep for u in select_log_basis(units, s, budget)]
        except (SearchExhausted, UndeterminedError) as exc:
            last = exc
    raise last or SearchExhausted("no units found")


def _cmd_ot_compare(args):
    p = parse_poly(load_json_file(args.p), args.p)
    if args.units:
        units = parse_poly_list(load_json_file(args.units), args.units)
    else:
        units = _auto_units(p, args.coeff_bound, args.precision)
    cert = compare_with_tm(p, units, args.precision)
    doc = document(
        "identity_certificate", p=p.to_json(), unit_polys=[u.to_json() for u in units], certificate=cert.to_json()
    )
    return doc, EXIT_OK if cert.ok else EXIT_FAIL


COMMANDS = {
    "classify": _cmd_classify,
    "dirichlet": _cmd_dirichlet,
    "build": _cmd_build,
    "invariants": _cmd_invariants,
    "ot-compare": _cmd_ot_compare,
}


def _emit(doc, path):
    text = dumps(doc)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        doc, code = COMMANDS[args.command](args)
    except ParseError as exc:
        code, msg = EXIT_PARSE, str(exc)
    except _Exit as exc:
        code, msg = exc.code, str(exc)
    except (SearchExhausted, UndeterminedError) as exc:
        code, msg = EXIT_EXHAUSTED, f"{exc} (try a larger --coeff-bound or --precision)"
    except (CertificateError, DomainError) as exc:
        code, msg = EXIT_FAIL, str(exc)
    else:
        _emit(doc, args.output)
        return code
    print(f"otforge {args.command}: {msg}", file=sys.stderr)
    _emit(document("error", error=msg, exit_code=code), args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
