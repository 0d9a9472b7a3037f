"""Command-line front end: ``lieexp <command> --algebra SIG [options] inputs...``.

Exit status is 0 on success, 1 on a domain error (bad element, violated
precondition, window too large, ...) and 2 on a usage error (unknown flag,
wrong number of inputs, malformed algebra string).
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import brackets, grading, ideals, structure
from .errors import LieExpError, ParseError
from .parsing import format_signature, parse_element, parse_signature, print_element, print_terms
from .report import write_report
from .serialize import dumps, element_to_json, format_rational, terms_to_json
from .window import TruncationCaps

# command -> (number of element inputs or None for "any", help)
COMMANDS = {
    "bracket": (2, "bracket of two elements"),
    "grade": (1, "grade key of a homogeneous element"),
    "decompose": (1, "homogeneous components, highest grade first"),
    "stats": (1, "term, component and power statistics"),
    "jacobi": (3, "Jacobi residual of three elements"),
    "center": (0, "basis of the centralizer of the cap window"),
    "addiag": (0, "window monomials with diagonal adjoint action"),
    "divergence": (1, "divergence of a vector field"),
    "hamiltonian": (1, "Hamiltonian vector field of a polynomial"),
    "derivation-check": (None, "residuals of a linear map: scalar | identity | ad Z | combo Z"),
    "automorphism-check": (2, "W+(1) automorphism shape from theta(D) and theta(x1 D1)"),
    "closure": (1, "ideal-closure saturation from one seed"),
    "simplicity": (0, "saturation from random seeds"),
    "parse-check": (1, "canonical form of an element"),
    "residue": (1, "coefficient of the product of all inverse variables"),
}


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lieexp",
        description="Exact arithmetic for exponential-polynomial Witt and Poisson Lie algebras.",
    )
    parser.add_argument("command", choices=list(COMMANDS), metavar="command",
                        help="one of: " + ", ".join(COMMANDS))
    parser.add_argument("inputs", nargs="*", help="element expressions (quote them)")
    parser.add_argument("--algebra", required=True, help='signature, e.g. "W(1,{1})" or "Hbar(1,1)"')
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    parser.add_argument("--poly-cap", type=int, default=2, help="polynomial power cap P (default 2)")
    parser.add_argument("--exp-cap", type=int, default=1, help="exponential coefficient cap A (default 1)")
    parser.add_argument("--seeds", type=int, default=20, help="number of random seeds (simplicity)")
    parser.add_argument("--rng", type=int, default=0, help="random seed")
    parser.add_argument("--max-rounds", type=int, default=8, help="saturation round limit")
    parser.add_argument("--margin", type=int, default=1,
                        help="extra exponential cap of the saturation working window")
    parser.add_argument("--control", action="store_true",
                        help="simplicity: run the zero-bracket control instead")
    parser.add_argument("--alpha", type=Fraction, default=Fraction(1),
                        help="derivation-check combo: coefficient of the scalar derivation")
    parser.add_argument("--max-pairs", type=int, default=None,
                        help="derivation-check: sample this many pairs")
    parser.add_argument("--report", metavar="DIR",
                        help="closure/simplicity: write report.json, coverage.tsv, coverage.png")
    return parser


def _caps(args, sig):
    if args.poly_cap < 0:
        raise UsageError("--poly-cap must be non-negative")
    if args.exp_cap < 0:
        raise UsageError("--exp-cap must be non-negative")
    return TruncationCaps.for_signature(sig, args.poly_cap, args.exp_cap)


def _meta(args, sig, **extra):
    meta = {"command": args.command, "algebra": format_signature(sig)}
    meta.update(extra)
    return meta


def _grade_list(g):
    return list(g)


class Output:
    """Collects one result either as JSON or as aligned text lines."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines = []
        self.doc = None

    def element(self, el, meta):
        if self.as_json:
            self.doc = element_to_json(el, meta)
        else:
            self.lines.append(print_terms(el.sig, el.data))

    def table(self, rows, doc):
        if self.as_json:
            self.doc = doc
        else:
            width = max((len(str(k)) for k, _ in rows), default=0)
            self.lines.extend(f"{str(k):<{width}}  {v}" for k, v in rows)

    def text(self):
        return dumps(self.doc) if self.as_json else "\n".join(self.lines) + "\n"


def _element_list_doc(elements, sig, meta):
    return {
        "algebra": format_signature(sig),
        "elements": [{"terms": terms_to_json(e.sig, e.data), "text": print_element(e)} for e in elements],
        "meta": meta,
    }


def _report_rows(rep: ideals.ClosureReport):
    return [
        ("seed", print_element(rep.seed)),
        ("window", rep.multiplier_budget),
        ("coverage", format_rational(rep.coverage)),
        ("reached", f"{rep.reached_count}/{rep.window_size}"),
        ("rounds", rep.rounds),
        ("coverage by round", " ".join(format_rational(c) for c in rep.coverage_by_round)),
        ("evaluated", rep.evaluated),
        ("discarded", f"{rep.discarded} (rate {format_rational(rep.discard_rate)})"),
        ("fixed point", rep.fixed_point),
        ("round limit hit", rep.round_limit_hit),
    ]


def run(args, out: Output):
    try:
        sig = parse_signature(args.algebra)
    except ValueError as exc:
        raise UsageError(f"--algebra: {exc}") from None
    arity = COMMANDS[args.command][0]
    if arity is not None and len(args.inputs) != arity:
        raise UsageError(f"{args.command} takes {arity} input(s), got {len(args.inputs)}")
    cmd = args.command

    def el(i, s=sig):
        return parse_element(args.inputs[i], s)

    if cmd == "bracket":
        out.element(brackets.bracket(el(0), el(1)), _meta(args, sig))
    elif cmd == "jacobi":
        out.element(brackets.jacobi_residual(el(0), el(1), el(2)), _meta(args, sig))
    elif cmd == "parse-check":
        out.element(el(0), _meta(args, sig))
    elif cmd == "grade":
        g = _grade_list(grading.grade_key(el(0)))
        out.table([("grade", g)], {"algebra": format_signature(sig), "grade": g, "meta": _meta(args, sig)})
    elif cmd == "decompose":
        comps = grading.decompose(el(0))
        doc = {
            "algebra": format_signature(sig),
            "components": [{"grade": _grade_list(g), "terms": terms_to_json(sig, c.data),
                            "text": print_element(c)} for g, c in comps.items()],
            "meta": _meta(args, sig),
        }
        out.table([(str(_grade_list(g)), print_element(c)) for g, c in comps.items()], doc)
    elif cmd == "stats":
        st = grading.stats(el(0))
        out.table(list(st.items()), {"algebra": format_signature(sig), "stats": st, "meta": _meta(args, sig)})
    elif cmd == "divergence":
        out.element(brackets.divergence(el(0)), _meta(args, sig))
    elif cmd == "hamiltonian":
        out.element(brackets.hamiltonian_field(el(0)), _meta(args, sig, source=format_signature(sig)))
    elif cmd == "residue":
        r = structure.residue(el(0))
        out.table([("residue", format_rational(r))],
                  {"algebra": format_signature(sig), "residue": format_rational(r), "meta": _meta(args, sig)})
    elif cmd in ("center", "addiag"):
        caps = _caps(args, sig)
        found = structure.center_probe(sig, caps) if cmd == "center" else structure.find_ad_diagonal(sig, caps)
        meta = _meta(args, sig, caps=caps.as_dict())
        out.table([(i, print_element(e)) for i, e in enumerate(found)] or [("result", "none")],
                  _element_list_doc(found, sig, meta))
    elif cmd == "derivation-check":
        _derivation_check(args, sig, out)
    elif cmd == "automorphism-check":
        v = structure.wplus_automorphism_check(el(0), el(1))
        rows = [("relation holds", v.relation_holds), ("shape ok", v.shape_ok),
                ("alpha", format_rational(v.alpha)), ("beta", format_rational(v.beta)),
                ("accepted", v.accepted)]
        doc = {"algebra": format_signature(sig), "relationHolds": v.relation_holds, "shapeOk": v.shape_ok,
               "alpha": format_rational(v.alpha), "beta": format_rational(v.beta),
               "accepted": v.accepted, "meta": _meta(args, sig)}
        out.table(rows, doc)
    elif cmd == "closure":
        caps = _caps(args, sig)
        rep = ideals.closure_saturate(el(0), caps, args.max_rounds, margin=args.margin)
        doc = {"algebra": format_signature(sig), "report": rep.to_dict(),
               "meta": _meta(args, sig, caps=caps.as_dict(), maxRounds=args.max_rounds)}
        out.table(_report_rows(rep), doc)
        if args.report:
            write_report(args.report, doc, [rep], f"{format_signature(sig)} closure")
    elif cmd == "simplicity":
        caps = _caps(args, sig)
        if args.seeds < 1:
            raise UsageError("--seeds must be at least 1")
        summ = ideals.simplicity_experiment(sig, caps, args.seeds, args.rng, args.max_rounds,
                                            control=args.control, margin=args.margin)
        doc = {"algebra": format_signature(sig), "summary": summ.to_dict(),
               "meta": _meta(args, sig, caps=caps.as_dict(), maxRounds=args.max_rounds)}
        rows = [(f"seed {i}", f"{format_rational(r.coverage)}  ({r.rounds} rounds)")
                for i, r in enumerate(summ.reports)]
        rows += [("min coverage", format_rational(summ.min_coverage)), ("corroborated", summ.corroborated)]
        out.table(rows, doc)
        if args.report:
            write_report(args.report, doc, summ.reports, f"{format_signature(sig)} simplicity")


def _derivation_check(args, sig, out):
    if not args.inputs:
        raise UsageError("derivation-check needs a map: scalar | identity | ad Z | combo Z")
    kind, rest = args.inputs[0], args.inputs[1:]
    want = 1 if kind in ("ad", "combo") else 0
    if kind not in ("scalar", "identity", "ad", "combo") or len(rest) != want:
        raise UsageError("derivation-check needs a map: scalar | identity | ad Z | combo Z")
    caps = _caps(args, sig)
    if kind == "scalar":
        table = structure.scalar_derivation_table(sig, caps)
    elif kind == "identity":
        table = structure.identity_table(sig, caps)
    else:
        z = parse_element(rest[0], sig)
        table = structure.inner_derivation_table(z, caps)
        if kind == "combo":
            table = structure.scalar_derivation_table(sig, caps).scaled(args.alpha) + table
    rep = structure.check_derivation(table, sig, caps, args.max_pairs, random.Random(args.rng))
    rows = [("derivation", rep.is_derivation), ("checked", rep.checked), ("skipped", rep.skipped),
            ("nonzero residuals", len(rep.residuals))]
    rows += [(f"[{print_element(a)}, {print_element(b)}]", print_element(r)) for a, b, r in rep.residuals[:5]]
    doc = {
        "algebra": format_signature(sig),
        "map": kind,
        "isDerivation": rep.is_derivation,
        "checked": rep.checked,
        "skipped": rep.skipped,
        "residuals": [{"a": print_element(a), "b": print_element(b), "residual": print_element(r)}
                      for a, b, r in rep.residuals],
        "meta": _meta(args, sig, caps=caps.as_dict()),
    }
    out.table(rows, doc)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_intermixed_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.json)
    try:
        run(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"lieexp: error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"lieexp: ParseError: {exc}", file=sys.stderr)
        return 1
    except LieExpError as exc:
        print(f"lieexp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out.text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
