"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or structural error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import CardminError
from .landscape import classify_landscape, render
from .protocols import build_mod3
from .symfun import enumerate_classes, mod3_function
from .verifier import VerificationReport, default_workers, full_report
from .engine import sample_run


def _bounded(lo: int, hi: int):
    def convert(text: str) -> int:
        value = int(text)
        if not lo <= value <= hi:
            raise argparse.ArgumentTypeError(f"must be between {lo} and {hi}")
        return value
    return convert


def _bits(text: str) -> tuple[int, ...]:
    if not text or any(c not in "01" for c in text):
        raise argparse.ArgumentTypeError("inputs must be a string of 0s and 1s")
    return tuple(int(c) for c in text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cardmin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, n_range, k=False, fmt=True):
        p.add_argument("--n", type=_bounded(*n_range), required=True, help="number of inputs")
        if k:
            p.add_argument("--k", type=_bounded(0, 2), default=0, help="target remainder mod 3")
        if fmt:
            p.add_argument("--format", choices=("table", "json"), default="table")
        p.add_argument("--out", help="write output to FILE instead of stdout")

    common(sub.add_parser("verify", help="exhaustively verify the mod-3 protocol"), n_range=(3, 7), k=True)
    run = sub.add_parser("run", help="sample one execution and print its public trace")
    common(run, n_range=(3, 7), k=True, fmt=False)
    run.add_argument("--inputs", type=_bits, required=True, help="input bits, e.g. 1011")
    run.add_argument("--seed", type=int, default=0)
    common(sub.add_parser("classify", help="list NPN classes of symmetric functions"), n_range=(1, 12))
    common(sub.add_parser("landscape", help="status of every class for n = 2..7"), n_range=(2, 7))
    return parser


def format_report(report: VerificationReport) -> str:
    def verdict(section) -> str:
        return "pass" if section.passed else "FAIL"

    deck = report.deck
    lines = [
        f"protocol     {report.protocol_name}",
        f"function     {report.function}",
        f"correctness  {verdict(report.correctness)}",
        f"privacy      {verdict(report.privacy)}",
        f"shuffles     {report.shuffle_count}",
        f"deck         {deck.cards} cards ({deck.clubs} C + {deck.hearts} H), "
        f"free-card takes {'ok' if deck.takes_satisfiable else 'UNSATISFIABLE'} [{verdict(deck)}]",
        f"committed    {'yes' if report.committed_format else 'no'}",
        f"inputs       {report.runtime_stats['inputs']}",
        f"leaves       {report.runtime_stats['leaves']}",
    ]
    if not report.correctness.passed:
        bad = ", ".join("".join(map(str, x)) for x in report.correctness.failing_inputs)
        lines.append(f"wrong on     {bad}")
    if not report.privacy.passed:
        w = report.privacy.witness
        lines.append(f"leak         {''.join(map(str, w.x))} vs {''.join(map(str, w.x_prime))}: "
                     f"trace prob {w.p} vs {w.p_prime}")
    lines.append(f"result       {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> tuple[int, str]:
    report = full_report(build_mod3(args.n, args.k), mod3_function(args.n, args.k), default_workers())
    if args.format == "json":
        text = json.dumps(report.to_json(), indent=2) + "\n"
    else:
        text = format_report(report)
    return (0 if report.passed else 1), text


def cmd_run(args) -> tuple[int, str]:
    if len(args.inputs) != args.n:
        raise CardminError(f"--inputs has {len(args.inputs)} bits but --n is {args.n}")
    leaf = sample_run(build_mod3(args.n, args.k), args.inputs, args.seed)
    lines = [f"{i:>3}  {event}" for i, event in enumerate(leaf.trace, 1)]
    lines.append(f"output: {leaf.output}")
    return 0, "\n".join(lines) + "\n"


def cmd_classify(args) -> tuple[int, str]:
    classes = enumerate_classes(args.n)
    rows = [c.to_json() for c in classes]
    if args.format == "json":
        return 0, json.dumps(rows, indent=2) + "\n"
    lines = [f"n = {args.n}: {len(classes)} classes"]
    for r in rows:
        flags = []
        if r["doubly_symmetric"]:
            flags.append("doubly symmetric")
        if r["mod3_k"] is not None:
            flags.append(f"mod-3 k={r['mod3_k']}")
        suffix = f"  [{', '.join(flags)}]" if flags else ""
        lines.append(f"  {r['canonical']:<16} {' '.join(r['members'])}{suffix}")
    return 0, "\n".join(lines) + "\n"


def cmd_landscape(args) -> tuple[int, str]:
    return 0, render(classify_landscape(args.n), args.format)


COMMANDS = {"verify": cmd_verify, "run": cmd_run, "classify": cmd_classify, "landscape": cmd_landscape}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = COMMANDS[args.command](args)
    except CardminError as exc:
        print(f"cardmin: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
