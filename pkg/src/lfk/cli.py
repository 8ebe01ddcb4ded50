"""Command-line front end.

Three commands on top of the library:

  describe      print the field constants (p, f, e, c, pc, q, mu_p, d)
  compute       one computation: level, break, pair, norm-group, or class
  verify        run claim verifiers and emit reports

Exit codes separate "the claim is false" from "the tool broke": 0 all pass,
1 a verified claim failed, 2 bad input or unsupported case, 3 not enough
precision, 4 internal invariant violation.  Precision comes from --prec,
falling back to the LFK_PREC environment variable, falling back to the
library default.  With --format json the output is schema-stable and, for
verify, byte-identical across runs with the same field/window/seed.
"""

import argparse
import json
import os
import sys

from .class_spaces import adapted_basis, coordinates
from .errors import (
    DomainError,
    InternalError,
    LfkError,
    MalformedInputError,
    PrecisionError,
)
from .extensions import attach_extension, line_of, ramification_break
from .local_arith import parse_element, parse_field
from .pairings_verifiers import (
    claims_for,
    norm_class_subgroup,
    pairing_value,
    pairs_trivially,
    verify_claim,
)


# ------------------------------------------------------------ shared helpers


def _context(args):
    prec = args.prec
    if prec is None and os.environ.get("LFK_PREC"):
        try:
            prec = int(os.environ["LFK_PREC"])
        except ValueError:
            raise MalformedInputError(
                "LFK_PREC must be an integer, got %r" % os.environ["LFK_PREC"]
            )
    return parse_field(args.field, prec_override=prec)


def _monomial(labels, coords):
    parts = []
    for lbl, k in zip(labels, coords):
        if k == 1:
            parts.append(lbl)
        elif k:
            parts.append("%s^%d" % (lbl, k))
    return "*".join(parts) if parts else "1"


def _emit(args, table_lines, payload):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in table_lines:
            print(line)


# ------------------------------------------------------------ describe


def cmd_describe(args):
    ctx = _context(args)
    show = lambda v: "-" if v is None else str(v)
    if ctx.characteristic == 0:
        rows = [
            ("field", ctx.field_label()),
            ("p", ctx.p),
            ("f", ctx.f),
            ("e", ctx.e),
            ("c", show(ctx.c)),
            ("pc", show(ctx.pc)),
            ("q", ctx.q),
            ("mu_p", "yes" if ctx.mu_p_present else "no"),
            ("d", ctx.dim_mult_classes()),
        ]
        payload = {
            "field": ctx.field_label(),
            "characteristic": 0,
            "p": ctx.p,
            "f": ctx.f,
            "e": ctx.e,
            "c": ctx.c,
            "pc": ctx.pc,
            "q": ctx.q,
            "mu_p": ctx.mu_p_present,
            "d": ctx.dim_mult_classes(),
        }
    else:
        rows = [
            ("field", ctx.field_label()),
            ("p", ctx.p),
            ("f", ctx.f),
            ("e", "∞"),
            ("q", ctx.q),
            ("mu_p", "no"),
        ]
        payload = {
            "field": ctx.field_label(),
            "characteristic": ctx.p,
            "p": ctx.p,
            "f": ctx.f,
            "e": None,
            "c": None,
            "pc": None,
            "q": ctx.q,
            "mu_p": False,
            "d": None,
        }
    _emit(args, ["%s = %s" % (k, v) for k, v in rows], payload)
    return 0


# ------------------------------------------------------------ compute


def _compute_line(ctx, args):
    if args.elt is None:
        raise MalformedInputError("compute level needs --elt")
    line = line_of(parse_element(ctx, args.elt))
    return ["δ=%d" % line.level], {"delta": line.level, "space": line.space}


def _compute_break(ctx, args):
    if args.line is None:
        raise MalformedInputError("compute break needs --line")
    line = line_of(parse_element(ctx, args.line))
    ext = attach_extension(line)
    eps = ramification_break(ext)
    return ["ε=%d" % eps], {"epsilon": eps, "delta": line.level}


def _compute_pair(ctx, args):
    if args.mult is None:
        raise MalformedInputError("compute pair needs --mult for the second slot")
    b = parse_element(ctx, args.mult)
    if ctx.characteristic == 0:
        if args.elt is None:
            raise MalformedInputError("compute pair over a char-0 field needs --elt")
        a_line = line_of(parse_element(ctx, args.elt))
        trivial = pairs_trivially(a_line, b, window=args.window)
        value = None
    else:
        if args.add is None:
            raise MalformedInputError("compute pair over a char-p field needs --add")
        a_line = line_of(parse_element(ctx, args.add))
        value = pairing_value(a_line, b, window=args.window)
        trivial = value == 0
    word = "trivial" if trivial else "nontrivial"
    return [word], {"result": word, "value": value}


def _compute_norm_group(ctx, args):
    src = args.elt if ctx.characteristic == 0 else args.add
    if src is None:
        raise MalformedInputError(
            "compute norm-group needs %s" % ("--elt" if ctx.characteristic == 0 else "--add")
        )
    line = line_of(parse_element(ctx, src))
    ext = attach_extension(line)
    sub = norm_class_subgroup(ext, window=args.window)
    basis = (
        adapted_basis(ctx)
        if ctx.characteristic == 0
        else adapted_basis(ctx, "mult", args.window)
    )
    labels = basis.labels()
    lines = ["labels: %s" % " ".join(labels), "dim = %d" % sub.dim()]
    lines += ["gen: %s" % _monomial(labels, row) for row in sub.basis]
    payload = {
        "labels": labels,
        "dim": sub.dim(),
        "generators": [list(row) for row in sub.basis],
    }
    return lines, payload


def _compute_class(ctx, args):
    if ctx.characteristic == 0:
        if args.elt is None:
            raise MalformedInputError("compute class needs --elt")
        basis = adapted_basis(ctx)
        x = parse_element(ctx, args.elt)
    elif args.mult is not None:
        basis = adapted_basis(ctx, "mult", args.window)
        x = parse_element(ctx, args.mult)
    elif args.add is not None:
        basis = adapted_basis(ctx, "add", args.window)
        x = parse_element(ctx, args.add)
    else:
        raise MalformedInputError(
            "compute class over a char-p field needs --mult or --add"
        )
    vec = coordinates(basis, x)
    labels = basis.labels()
    lines = [
        "labels: %s" % " ".join(labels),
        "coords: %s" % " ".join(str(c) for c in vec.coords),
        "class = %s" % _monomial(labels, vec.coords),
    ]
    return lines, {"labels": labels, "coords": list(vec.coords)}


_COMPUTE = {
    "level": _compute_line,
    "break": _compute_break,
    "pair": _compute_pair,
    "norm-group": _compute_norm_group,
    "class": _compute_class,
}


def cmd_compute(args):
    ctx = _context(args)
    table_lines, payload = _COMPUTE[args.what](ctx, args)
    _emit(args, table_lines, payload)
    return 0


# ------------------------------------------------------------ verify


def cmd_verify(args):
    ctx = _context(args)
    wanted = list(args.claims)
    if not wanted or wanted == ["all"]:
        wanted = list(claims_for(ctx))
    reports = [
        verify_claim(ctx, cid, window=args.window, seed=args.seed) for cid in wanted
    ]
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for rep in reports:
            path = os.path.join(args.out, "%s.json" % rep.claim_id)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(rep.to_json(), indent=2))
                fh.write("\n")
    failed = [rep.claim_id for rep in reports if rep.status == "fail"]
    if args.format == "json":
        print(json.dumps([rep.to_json() for rep in reports], indent=2))
    else:
        for rep in reports:
            print("%-7s %s" % (rep.claim_id, rep.status))
        print(
            "%d/%d claims pass on %s"
            % (len(reports) - len(failed), len(reports), ctx.field_label())
        )
        if failed:
            print("failing: %s" % ", ".join(failed))
    return 1 if failed else 0


# ------------------------------------------------------------ parser / entry


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="lfk",
        description="Exact invariants of p-fields at exponent p: class "
        "filtrations, degree-p extensions, breaks, norm groups, pairings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--field", required=True, help="field descriptor, e.g. 'Qp p=2 f=1'")
        sp.add_argument("--prec", type=int, default=None, help="precision override (else LFK_PREC, else default)")
        sp.add_argument("--window", type=int, default=None, help="working window for char-p quotients")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
        sp.add_argument("--format", choices=("table", "json"), default="table")
        sp.add_argument("--out", default=None, help="directory for per-claim JSON reports")

    sp = sub.add_parser("describe", help="print the field constants")
    common(sp)
    sp.set_defaults(func=cmd_describe)

    sp = sub.add_parser("compute", help="one computation on one field")
    sp.add_argument("what", choices=sorted(_COMPUTE))
    common(sp)
    sp.add_argument("--elt", help="element expression (char-0 class, e.g. '-1' or '2*pi')")
    sp.add_argument("--mult", help="multiplicative-side element expression")
    sp.add_argument("--add", help="additive-side element expression (char p, e.g. 't^-1')")
    sp.add_argument("--line", help="element spanning the line whose extension is meant")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("verify", help="run claim verifiers")
    sp.add_argument("claims", nargs="*", help="claim ids, or 'all' (default)")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    """Entry point; returns the exit code instead of raising."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except PrecisionError as exc:
        print("precision error: %s" % exc, file=sys.stderr)
        return 3
    except InternalError as exc:
        print("internal error: %s" % exc, file=sys.stderr)
        return 4
    except DomainError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except LfkError as exc:  # pragma: no cover - future error classes
        print("error: %s" % exc, file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
