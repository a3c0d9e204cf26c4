"""Command-line front end: ``covsteer analyze`` and ``covsteer scan``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .analysis import SCAN_CRITERIA, AnalysisConfig, Report, run_analysis, scan_record
from .criteria import parse_direction
from .exceptions import CovsteerError
from .gaussian import read_gaussian_cm
from .states import FAMILIES, FamilySpec, load_state

_CRITERIA = ("prop1", "prop2", "witness", "gaussian")


def _csv(allowed):
    def parse(text):
        items = tuple(x.strip() for x in text.split(",") if x.strip())
        bad = [x for x in items if x not in allowed]
        if bad:
            raise argparse.ArgumentTypeError(f"unknown value(s) {bad}; choose from {allowed}")
        return items

    return parse


def _directions(text):
    try:
        return tuple(parse_direction(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covsteer", description=__doc__)
    parser.add_argument("--version", action="version", version=f"covsteer {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="evaluate steering criteria on one input")
    src = an.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", choices=[f for f in FAMILIES if f != "explicit"])
    src.add_argument("--state", type=Path, help="JSON file {dimA, dimB, re, im}")
    src.add_argument("--gaussian", type=Path, help="JSON file {modesA, modesB, gamma}")
    an.add_argument("--param", type=float, help="family parameter in [0, 1]")
    an.add_argument("--criteria", type=_csv(_CRITERIA), default=None)
    an.add_argument("--direction", type=_directions, default=("A->B", "B->A"))
    an.add_argument("--json", type=Path, help="also write the machine-readable report here ('-' for stdout)")

    sc = sub.add_parser("scan", help="locate the steering threshold of a family")
    sc.add_argument("--family", required=True, choices=[f for f in FAMILIES if f != "explicit"])
    sc.add_argument("--criterion", required=True, choices=SCAN_CRITERIA)
    sc.add_argument("--direction", default="ab")
    sc.add_argument("--lo", type=float, default=0.0)
    sc.add_argument("--hi", type=float, default=1.0)
    sc.add_argument("--tol", type=float, default=1e-6)
    sc.add_argument("--json", type=Path)
    return parser


def _emit(report, json_path):
    print(report.to_text())
    if json_path is not None:
        text = report.to_json() + "\n"
        if str(json_path) == "-":
            sys.stdout.write(text)
        else:
            json_path.write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            if args.family is not None:
                if args.param is None:
                    raise CovsteerError("--family needs --param")
                cfg = AnalysisConfig(family=FamilySpec(args.family, args.param),
                                     criteria=args.criteria, directions=args.direction)
            elif args.state is not None:
                cfg = AnalysisConfig(state=load_state(args.state), criteria=args.criteria,
                                     directions=args.direction, label=str(args.state))
            else:
                cfg = AnalysisConfig(gaussian=read_gaussian_cm(args.gaussian), criteria=args.criteria,
                                     directions=args.direction)
            _emit(run_analysis(cfg), args.json)
        else:
            rec = scan_record(args.family, args.criterion, args.direction, args.lo, args.hi, args.tol)
            report = Report(input={"kind": "scan", "family": args.family}, threshold=rec)
            _emit(report, args.json)
    except (CovsteerError, OSError) as exc:
        print(f"covsteer: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
