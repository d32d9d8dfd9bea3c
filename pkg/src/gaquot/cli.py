"""Batch command-line driver.

Commands: verify (full battery for a family instance), kernel (invariant
generators of a derivation file), gb (reduced basis of an ideal file),
present (invariant-ring presentation).  Exit codes partition outcomes:

  0  success / all checks passed
  1  usage or parse error
  2  a mathematical check failed
  3  spec rejected (repeated roots, nonzero constant term)
  4  resource cap exceeded

Reports serialize deterministically: identical inputs give byte-identical
output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .derivations import (
    kernel_linear,
    kernel_saturation,
    load_derivation_file,
    make_slice,
)
from .errors import (
    GaquotError,
    NonzeroConstantError,
    NotLocallyNilpotentError,
    ParseError,
    RepeatedRootsError,
    ResourceCapError,
    RingMismatchError,
    RoundCapError,
    UnknownVariableError,
)
from .families import FamilySpec, VerificationReport, run_battery
from .groebner import Ideal, ResourceCaps, TermOrder, buchberger, load_ideal_file
from .poly import VarSet, parse

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2
EXIT_REJECTED = 3
EXIT_RESOURCE = 4

_USAGE_ERRORS = (
    ParseError,
    UnknownVariableError,
    RingMismatchError,
    FileNotFoundError,
    ValueError,
)
_REJECTION_ERRORS = (RepeatedRootsError, NonzeroConstantError)
_RESOURCE_ERRORS = (ResourceCapError, RoundCapError, NotLocallyNilpotentError)

DEFAULT_MAX_ROUNDS = 8


def _add_cap_flags(sub: argparse.ArgumentParser, max_degree_default: int = 60,
                   max_degree_help: str = "total degree cap for basis computations"):
    sub.add_argument("--max-pairs", type=int, default=100_000,
                     help="pair budget for basis computations")
    sub.add_argument("--max-degree", type=int, default=max_degree_default,
                     help=max_degree_help)
    sub.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS,
                     help="round budget for the saturation kernel method")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaquot",
        description="exact verification of additive-group quotient families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run the full check battery")
    verify.add_argument("--family", choices=("v3", "v4"), required=True)
    verify.add_argument("--f", required=True, metavar="POLY",
                        help="shape polynomial (in s for v3; in a,b,c for v4)")
    verify.add_argument("--trivial", type=int, default=0,
                        help="number of trivial summands")
    verify.add_argument("--out", type=Path, default=None,
                        help="write the JSON report here instead of stdout")
    _add_cap_flags(verify)

    kernel = sub.add_parser("kernel", help="invariant generators of a derivation")
    kernel.add_argument("--derivation", type=Path, required=True,
                        help="derivation file (lines 'x -> polynomial')")
    kernel.add_argument("--method", choices=("linear", "saturation"),
                        default="linear")
    kernel.add_argument("--max-degree", type=int, default=2,
                        help="degree bound for the linear kernel method")
    kernel.add_argument("--max-pairs", type=int, default=100_000)
    kernel.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS)

    gb = sub.add_parser("gb", help="reduced basis of an ideal file")
    gb.add_argument("--ideal", type=Path, required=True)
    gb.add_argument("--order", default="grevlex",
                    help="grevlex, lex, or elim:K (eliminate the first K variables)")
    _add_cap_flags(gb)

    present = sub.add_parser("present", help="invariant-ring presentation")
    present.add_argument("--family", choices=("v3", "v4"), default="v3")
    present.add_argument("--f", required=True, metavar="POLY")
    present.add_argument("--trivial", type=int, default=0)
    _add_cap_flags(present)

    return parser


def _caps(args) -> ResourceCaps:
    return ResourceCaps(max_pairs=args.max_pairs, max_degree=args.max_degree)


def _parse_shape(family: str, text: str):
    ring = VarSet(("s",)) if family == "v3" else VarSet(("a", "b", "c"))
    return parse(text, ring)


def report_document(report: VerificationReport, caps: ResourceCaps,
                    max_rounds: int) -> dict:
    """Schema-ordered plain dict for JSON serialization."""
    doc = {
        "schemaVersion": SCHEMA_VERSION,
        "family": report.spec.family,
        "f": str(report.spec.f),
        "trivialSummands": report.spec.trivial_summands,
        "dims": {
            "X": report.dims.x,
            "quotient": report.dims.quotient,
            "Ybar": report.dims.ybar,
            "B": report.dims.b,
        },
        "checks": dict(report.checks),
        "boundaryCodim": report.boundary_codim,
        "m": report.m,
        "k0Ranks": None,
        "presentation": None,
        "capsUsed": {
            "maxPairs": caps.max_pairs,
            "maxDegree": caps.max_degree,
            "maxRounds": max_rounds,
        },
    }
    if report.ranks is not None:
        doc["k0Ranks"] = {
            "Z": report.ranks.rank_z,
            "closure": report.ranks.rank_closure,
            "quotient": report.ranks.rank_quotient,
        }
    if report.presentation is not None:
        gens, relations = report.presentation
        doc["presentation"] = {
            "generators": [str(g) for g in gens],
            "relations": [str(r) for r in relations.generators],
        }
    return doc


def render_report(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _cmd_verify(args, out) -> int:
    try:
        f = _parse_shape(args.family, args.f)
    except (ParseError, UnknownVariableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    spec = FamilySpec(args.family, f, args.trivial)
    caps = _caps(args)
    report = run_battery(spec, caps=caps)
    doc = report_document(report, caps, args.max_rounds)
    text = render_report(doc)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
        status = "pass" if report.passed else "FAIL"
        print(f"{status}: report written to {args.out}", file=out)
    else:
        out.write(text)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _cmd_kernel(args, out) -> int:
    derivation = load_derivation_file(args.derivation)
    caps = ResourceCaps(max_pairs=args.max_pairs)
    if args.method == "linear":
        gens = kernel_linear(derivation, args.max_degree, caps=caps)
    else:
        slice_var = next(
            (name for name in derivation.ring.names
             if not derivation.apply(derivation.ring.var(name)).is_zero()
             and derivation.apply(
                 derivation.apply(derivation.ring.var(name))).is_zero()),
            None,
        )
        if slice_var is None:
            print("error: no slice variable (need D(s) nonzero with D(D(s)) = 0)",
                  file=sys.stderr)
            return EXIT_USAGE
        data = make_slice(derivation, slice_var)
        gens = kernel_saturation(derivation, data, args.max_rounds, caps=caps)
        if args.max_rounds == 0:
            print("warning: 0 rounds requested; stabilization not verified",
                  file=sys.stderr)
    if not gens:
        print("(no nonconstant generators up to the requested degree)", file=out)
    for g in gens:
        print(g, file=out)
    return EXIT_OK


def _parse_order(text: str) -> TermOrder:
    if text == "grevlex":
        return TermOrder.grevlex()
    if text == "lex":
        return TermOrder.lex()
    if text.startswith("elim:"):
        return TermOrder.block(int(text[len("elim:"):]))
    raise ValueError(f"unknown order {text!r}")


def _cmd_gb(args, out) -> int:
    ideal = load_ideal_file(args.ideal)
    order = _parse_order(args.order)
    gb = buchberger(ideal, order, caps=_caps(args))
    if not gb.basis:
        print("0", file=out)
    for g in gb.basis:
        print(g, file=out)
    return EXIT_OK


def _cmd_present(args, out) -> int:
    if args.family != "v3":
        print("error: presentation is implemented for the v3 family only",
              file=sys.stderr)
        return EXIT_USAGE
    from .families import build_family, invariant_presentation, w_restriction
    from .groebner import buchberger as _buchberger, normal_form

    f = _parse_shape(args.family, args.f)
    spec = FamilySpec(args.family, f, args.trivial)
    caps = _caps(args)
    art = build_family(spec)
    kernel = kernel_linear(w_restriction(art), 2, caps=caps)
    gens, relations = invariant_presentation(art, kernel, caps=caps)
    tags = relations.ring.names
    for tag, g in zip(tags, gens):
        print(f"{tag} = {g}", file=out)
    for r in relations.generators:
        print(f"relation: {r}", file=out)
    # Round trip: plugging the generators back into each relation must give
    # zero on X (here identically zero in the affine coordinates).
    assignment = {tag: g for tag, g in zip(tags, gens)}
    ok = all(
        r.substitute({n: assignment[n] for n in r.variables()}).is_zero()
        for r in relations.generators if not r.is_zero()
    )
    print("round-trip: " + ("verified" if ok else "FAILED"), file=out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


_HANDLERS = {
    "verify": _cmd_verify,
    "kernel": _cmd_kernel,
    "gb": _cmd_gb,
    "present": _cmd_present,
}


def main(argv: Optional[list] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage problems; fold the
        # latter into the documented usage code.
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    handler = _HANDLERS[args.command]
    try:
        return handler(args, out)
    except _REJECTION_ERRORS as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except _RESOURCE_ERRORS as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GaquotError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
