"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 a mathematical violation
(or an invalid certificate), 3 an inconclusive run (budget or precision).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import construction, diffset, formats, prover, verifier
from .core import PointSet, PolicyOverflowError, UndecidableError
from .interval import format_endpoint

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_INCONCLUSIVE = 0, 1, 2, 3

SET_KINDS = ("hypercube",) + construction.BASELINE_KINDS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _threads(value: int | None) -> int:
    return value if value else (os.cpu_count() or 1)


def _summary(S) -> str:
    d = diffset.diff_count(S)
    return f"count={len(S)} diff_count={d} distance_count={(d - 1) // 2}"


def cmd_construct(args) -> int:
    if args.kind == "hypercube":
        if args.levels is not None:
            S = construction.build_pn(args.levels)
        else:
            S = construction.build_truncated(args.n)
    else:
        if args.n is None:
            raise ValueError(f"--n is required for kind {args.kind}")
        S = construction.build_baseline(args.kind, args.n, args.seed)
    if args.out:
        formats.write_set(args.out, S)
    else:
        sys.stdout.write(formats.dump_set(S))
    print(_summary(S), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def _local_reports(S, ks, mode, budget, threads):
    for k in ks:
        if mode == "exhaustive":
            yield verifier.verify_exhaustive(S, k, threads=threads)
        else:
            yield verifier.min_subset_bnb(S, k, budget=budget)


def cmd_verify(args) -> int:
    S = formats.read_set(args.input)
    if args.all_k:
        ks = list(range(1, len(S) + 1))
    elif args.k is not None:
        ks = [args.k]
    else:
        raise ValueError("give --k K or --all-k")
    mode = args.mode or ("exhaustive" if len(S) <= verifier.EXHAUSTIVE_CAP else "bnb")
    reports = list(_local_reports(S, ks, mode, args.budget, _threads(args.threads)))
    sys.stdout.write(formats.format_rows([r.row() for r in reports], formats.REPORT_FIELDS, args.format))
    if args.report:
        Path(args.report).write_text(formats.reports_to_text(reports))

    status = EXIT_OK
    for r in reports:
        if not r.holds:
            elements = [_element_text(S, i) for i in r.witness.indices()]
            print(f"violation k={r.k} min_diff={r.min_diff} witness={r.witness} elements={elements}",
                  file=sys.stderr)
            status = EXIT_VIOLATION
    if status == EXIT_OK and not all(r.complete for r in reports):
        print("inconclusive: node budget exhausted before the search completed", file=sys.stderr)
        status = EXIT_INCONCLUSIVE
    return status


def _element_text(S, i: int) -> str:
    if isinstance(S, PointSet):
        return "".join(map(str, S.elements[i].bits))
    return str(S.ints[i])


def cmd_prove(args) -> int:
    if args.claim == "tight-grid":
        report = prover.check_tight_inequality_grid(args.max)
        for line in report.lines():
            print(line)
        cert = prover.certify_tight_grid(args.max)
    elif args.claim == "subadditivity":
        cert = prover.certify_subadditivity(Fraction(args.a), Fraction(args.b_lo), Fraction(args.b_hi))
    else:
        cert = prover.CLAIMS[args.claim]()
    print(f"claim={cert.claim_id} status={cert.status} boxes={len(cert.boxes)} max_depth={cert.max_depth}")
    if cert.domain is not None:
        print(f"domain=[{cert.domain[0]},{cert.domain[1]}]")
    for premise in cert.premises:
        print(premise.to_line())
    if args.claim == "domain-reduction":
        lo, hi = format_endpoint(prover.domain_reduction_margin(), 12)
        print(f"margin=[{lo}, {hi}]")
    if args.cert:
        Path(args.cert).write_text(cert.to_text())
    if cert.ok and not cert.gaps():
        return EXIT_OK
    for lo, hi in cert.gaps():
        print(f"gap [{lo},{hi}]", file=sys.stderr)
    for box in cert.failed:
        print(f"failed {box.to_line()}", file=sys.stderr)
    return EXIT_INCONCLUSIVE if cert.failed else EXIT_VIOLATION


def cmd_validate(args) -> int:
    cert = prover.Certificate.from_text(Path(args.certificate).read_text())
    result = prover.validate_certificate(cert)
    if result.ok:
        print(f"valid claim={cert.claim_id} boxes={len(cert.boxes)}")
        return EXIT_OK
    for problem in result.problems:
        print(problem, file=sys.stderr)
    return EXIT_VIOLATION


def report_row(path: str, S, ks: list[int], budget: int) -> dict:
    d = diffset.diff_count(S)
    row = {
        "source": Path(path).name,
        "kind": "hypercube" if isinstance(S, PointSet) else S.kind,
        "size": len(S),
        "diff_count": d,
        "distance_count": (d - 1) // 2,
    }
    for k in ks:
        if k > len(S):
            row[f"min_diff_k{k}"], row[f"holds_k{k}"] = "", ""
            continue
        if len(S) <= verifier.EXHAUSTIVE_CAP:
            r = verifier.verify_exhaustive(S, k)
        else:
            r = verifier.min_subset_bnb(S, k, budget=budget)
        row[f"min_diff_k{k}"] = r.min_diff
        row[f"holds_k{k}"] = r.holds if r.complete else "incomplete"
    return row


def report_fields(ks: list[int]) -> list[str]:
    fields = ["source", "kind", "size", "diff_count", "distance_count"]
    for k in ks:
        fields += [f"min_diff_k{k}", f"holds_k{k}"]
    return fields


def cmd_report(args) -> int:
    ks = [int(k) for k in args.k.split(",") if k.strip()]
    rows = [report_row(path, formats.read_set(path), ks, args.budget) for path in args.inputs]
    sys.stdout.write(formats.format_rows(rows, report_fields(ks), args.format))
    return EXIT_OK


def cmd_profile(args) -> int:
    text = diffset.profile_csv(diffset.diff_profile(formats.read_set(args.input)))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="localdiff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build a hypercube set or a baseline and write it")
    size = c.add_mutually_exclusive_group(required=True)
    size.add_argument("--levels", "-l", type=int)
    size.add_argument("--n", type=int)
    c.add_argument("--kind", choices=SET_KINDS, default="hypercube")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", "-o")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check the local property on a set file")
    v.add_argument("input")
    which = v.add_mutually_exclusive_group(required=True)
    which.add_argument("--k", type=int)
    which.add_argument("--all-k", action="store_true")
    v.add_argument("--mode", choices=("exhaustive", "bnb"))
    v.add_argument("--budget", type=int, default=verifier.DEFAULT_BUDGET)
    v.add_argument("--threads", type=int)
    v.add_argument("--report")
    v.add_argument("--format", choices=("csv", "json-lines"), default="csv")
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("prove", help="run an interval certificate")
    p.add_argument("claim", choices=("subadditivity", "f0", "f1", "gamma-reduction",
                                     "domain-reduction", "tight-grid"))
    p.add_argument("--max", type=int, default=30, help="grid bound for tight-grid")
    p.add_argument("--a", default="1", help="fixed a for subadditivity")
    p.add_argument("--b-lo", default="1/1000000")
    p.add_argument("--b-hi", default="1")
    p.add_argument("--cert")
    p.set_defaults(func=cmd_prove)

    val = sub.add_parser("validate-certificate", help="re-check a serialized certificate")
    val.add_argument("certificate")
    val.set_defaults(func=cmd_validate)

    r = sub.add_parser("report", help="comparison table over set files")
    r.add_argument("inputs", nargs="*")
    r.add_argument("--format", choices=("csv", "json-lines"), default="csv")
    r.add_argument("--k", default="3,4", help="comma-separated subset sizes")
    r.add_argument("--budget", type=int, default=verifier.DEFAULT_BUDGET)
    r.set_defaults(func=cmd_report)

    pr = sub.add_parser("profile", help="difference multiplicities as code,count CSV")
    pr.add_argument("input")
    pr.add_argument("--out", "-o")
    pr.set_defaults(func=cmd_profile)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, PolicyOverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UndecidableError, prover.InconclusiveError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
