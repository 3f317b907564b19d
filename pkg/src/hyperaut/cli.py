"""Command-line interface: JSON on stdout, diagnostics on stderr.

Exit codes: 0 success, 2 invalid input, 3 route disagreement, 4 precision
exhausted, 1 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .classify import RouteDisagreement, algorithm3, classify
from .dihedral import DecompositionError, dihedral_levels, normal_decomposition
from .exactnum import RadicandMismatch, parse_scalar, scalar_to_json
from .families import (FamilySpec, HyperellipticCurve, InvalidFamily, generate, generation_options,
                       registry_json, table1_lookup)
from .invariants import INVARIANT_NAMES, ModuliPointUndefined, absolute_invariants, classical_invariants, moduli_point
from .symmetry import OracleError, PrecisionExhausted, full_group_name, oracle_group

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_DISAGREE, EXIT_PRECISION = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


def parse_coeffs(text: str, radicand: int | None = None) -> list:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise InputError(f"malformed coefficient list {text!r}")
    return [parse_scalar(p, radicand) for p in parts]


def load_curve(args) -> HyperellipticCurve:
    if getattr(args, "curve", None):
        with open(args.curve) as fh:
            return HyperellipticCurve.from_json(json.load(fh))
    if not getattr(args, "coeffs", None):
        raise InputError("give --coeffs or --curve")
    return HyperellipticCurve.from_coeffs(parse_coeffs(args.coeffs, args.radicand), args.genus)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


# -- subcommands ---------------------------------------------------------------------

def cmd_invariants(args):
    C = load_curve(args)
    names = tuple(args.names.split(",")) if args.names else INVARIANT_NAMES
    bad = [n for n in names if n not in INVARIANT_NAMES]
    if bad:
        raise InputError(f"unknown invariants {bad}")
    iv = classical_invariants(C.F, names)
    vals = {k: v for k, v in iv.to_json().items() if k.split("_reason")[0] in names}
    return {"genus": C.genus, "invariants": vals}


def cmd_absolute(args):
    C = load_curve(args)
    ai = absolute_invariants(C.F)
    out = {"genus": C.genus, "absolute": ai.to_json()}
    try:
        out["moduli_point"] = moduli_point(ai.invariants).to_json()
    except (ModuliPointUndefined, ValueError) as exc:
        out["moduli_point"] = None
        out["moduli_point_reason"] = str(exc)
    return out


def _decomposition(args):
    C = load_curve(args)
    R = oracle_group(C, args.precision, args.tol)
    return C, R, normal_decomposition(C, R)


def cmd_dihedral(args):
    C, R, D = _decomposition(args)
    if D is None:
        return {"n": None, "t": None, "s": 1, "kind": None, "coeffs": None, "levels": []}
    cs = D.coeffs
    return {"n": D.n, "t": D.t, "s": D.degree_s, "kind": D.kind,
            "coeffs": None if cs is None else [scalar_to_json(c) for c in cs],
            "levels": [{"j": t.level, "values": t.to_json()["values"], "scaling_exact": t.scaling_exact}
                       for t in dihedral_levels(D)]}


def cmd_normalform(args):
    C, R, D = _decomposition(args)
    return {"genus": C.genus, "reduced": R.label, "decomposition": None if D is None else D.to_json()}


def cmd_autgroup(args):
    C = load_curve(args)
    R = oracle_group(C, args.precision, args.tol)
    if args.method == "algorithm3":
        v, _ = algorithm3(C, R)
    else:
        v = full_group_name(C, R)
    return v.to_json()


def cmd_classify(args):
    C = load_curve(args)
    return classify(C, args.mode, args.precision, args.tol).to_json()


def cmd_family(args):
    if args.action == "list":
        if args.genus is None:
            raise InputError("family list needs --genus")
        return [{"row": r.id, "group": r.group_name(n), "n": n, "delta": int(r.delta_at(args.genus, n))}
                for r, n in generation_options(args.genus)]
    if args.row is None or args.genus is None:
        raise InputError("family gen needs --row and --genus")
    lams = tuple(parse_coeffs(args.lam, args.radicand)) if args.lam else ()
    C = generate(FamilySpec(args.row, args.genus, args.n, lams))
    return C.to_json()


def cmd_table1(args):
    if args.genus is None:
        return registry_json()
    return [e.to_json() for e in table1_lookup(args.genus)]


# -- parser ----------------------------------------------------------------------------

def _curve_args(p):
    p.add_argument("--coeffs", help="comma-separated exact coefficients of F(X), ascending (use --coeffs=-1,...)")
    p.add_argument("--curve", help="curve JSON file (as written by 'family gen')")
    p.add_argument("--genus", type=int, default=None, help="genus override (must match the degree)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=256, help="working precision in bits (default 256)")
    common.add_argument("--tol", type=int, default=128, help="matching tolerance 2^-k (default k = 128)")
    common.add_argument("--radicand", type=int, default=None, help="radicand m of the scalar field Q(sqrt(m))")
    common.add_argument("--json", action="store_true", default=True, help="JSON output (always on)")

    ap = argparse.ArgumentParser(prog="hyperaut", parents=[common],
                                 description="Automorphism groups of hyperelliptic curves Y^2 = F(X).")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="classical invariants")
    _curve_args(p)
    p.add_argument("--names", help="comma-separated subset of " + ",".join(INVARIANT_NAMES))
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("absolute", parents=[common], help="absolute invariants and moduli point")
    _curve_args(p)
    p.set_defaults(func=cmd_absolute)

    p = sub.add_parser("dihedral", parents=[common], help="dihedral invariants of the normal decomposition")
    _curve_args(p)
    p.set_defaults(func=cmd_dihedral)

    p = sub.add_parser("normalform", parents=[common], help="normal decomposition")
    _curve_args(p)
    p.set_defaults(func=cmd_normalform)

    p = sub.add_parser("autgroup", parents=[common], help="automorphism group")
    _curve_args(p)
    p.add_argument("--oracle", dest="method", action="store_const", const="oracle",
                   help="Moebius-symmetry oracle (default)")
    p.add_argument("--algorithm3", dest="method", action="store_const", const="algorithm3",
                   help="normal decomposition and dihedral invariants")
    p.set_defaults(func=cmd_autgroup, method="oracle")

    p = sub.add_parser("classify", parents=[common], help="classification report")
    _curve_args(p)
    p.add_argument("--mode", choices=["auto", "invariants_only", "oracle_only", "cross"], default="auto")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("family", parents=[common], help="generate family members")
    p.add_argument("action", choices=["gen", "list"])
    p.add_argument("--row", help="registry row id, e.g. A4.1 or Dn.2")
    p.add_argument("--genus", type=int)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--lambda", dest="lam", help="comma-separated parameters")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("table1", parents=[common], help="registry of automorphism groups")
    p.add_argument("--genus", type=int, default=None)
    p.set_defaults(func=cmd_table1)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        _emit(args.func(args))
        return EXIT_OK
    except RouteDisagreement as exc:
        _emit({"error": "route disagreement", "message": str(exc), "report": exc.report.to_json()})
        print(f"hyperaut: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except PrecisionExhausted as exc:
        print(f"hyperaut: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (OracleError, DecompositionError) as exc:
        print(f"hyperaut: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InputError, InvalidFamily, RadicandMismatch, ValueError, OSError, KeyError) as exc:
        print(f"hyperaut: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
