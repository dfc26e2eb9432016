"""Command-line interface.

    pyramidfe dims --max-order N [--format table|json]
    pyramidfe verify --family ym|y --order R [--check LIST] [--out FILE]
    pyramidfe basis --family ym|y --order R --out FILE
    pyramidfe tabulate --family ym|y --order R --points FILE --out FILE [--format json|csv]

Exit status: 0 on success, 1 when a verification check fails, 2 on usage or
I/O errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import OutsideReferenceError
from .element import nodal_basis
from .serialize import (
    PointsFileError,
    basis_document,
    dumps,
    read_points,
    tabulation_csv,
    tabulation_document,
)
from .spaces import Family, SpaceSpec, dimension
from .verify import parse_checks, run_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def dims_table(max_order: int) -> dict[str, list[int]]:
    if not 1 <= max_order <= 12:
        raise ValueError("max order must be between 1 and 12")
    rs = list(range(1, max_order + 1))
    return {
        "r": rs,
        "Y": [dimension(SpaceSpec(Family.Y, r)) for r in rs],
        "YMinus": [dimension(SpaceSpec(Family.YMINUS, r)) for r in rs],
        "Phat_R0": [(r + 1) * (r + 2) * (2 * r + 3) // 6 for r in rs],
        "U0": [r ** 3 + 3 * r + 1 for r in rs],
    }


def format_dims(table: dict[str, list[int]]) -> str:
    labels = {
        "r": "r",
        "Y": "dim Y_r",
        "YMinus": "dim Y-_r",
        "Phat_R0": "(r+1)(r+2)(2r+3)/6",
        "U0": "r^3+3r+1",
    }
    width = max(len(str(v)) for row in table.values() for v in row)
    lw = max(len(v) for v in labels.values())
    lines = []
    for key, label in labels.items():
        lines.append(label.ljust(lw) + " | " + " ".join(str(v).rjust(width) for v in table[key]))
        if key == "r":
            lines.append("-" * len(lines[0]))
    return "\n".join(lines) + "\n"


def _order(text: str) -> int:
    try:
        r = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid order {text!r}") from None
    if r < 1:
        raise argparse.ArgumentTypeError("order must be >= 1")
    return r


def _max_order(text: str) -> int:
    r = _order(text)
    if r > 12:
        raise argparse.ArgumentTypeError("max order must be <= 12")
    return r


def _family(text: str) -> Family:
    try:
        return Family.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pyramidfe", description="Exact H1-conforming pyramid elements.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dims", help="dimension table of the pyramid families")
    d.add_argument("--max-order", type=_max_order, required=True)
    d.add_argument("--format", choices=("table", "json"), default="table")

    v = sub.add_parser("verify", help="run exact verification checks")
    v.add_argument("--family", type=_family, required=True)
    v.add_argument("--order", type=_order, required=True)
    v.add_argument("--check", default="all", help="comma-separated subset of dims,unisolvence,traces,reproduction,conformity,all")
    v.add_argument("--out", type=Path)

    b = sub.add_parser("basis", help="export shape basis, nodal basis and DOF catalog")
    b.add_argument("--family", type=_family, required=True)
    b.add_argument("--order", type=_order, required=True)
    b.add_argument("--out", type=Path, required=True)

    t = sub.add_parser("tabulate", help="tabulate nodal functions and gradients")
    t.add_argument("--family", type=_family, required=True)
    t.add_argument("--order", type=_order, required=True)
    t.add_argument("--points", type=Path, required=True)
    t.add_argument("--out", type=Path, required=True)
    t.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def cmd_dims(args) -> int:
    table = dims_table(args.max_order)
    _write(None, dumps(table) if args.format == "json" else format_dims(table))
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = SpaceSpec(args.family, args.order)
    try:
        checks = parse_checks(args.check)
    except ValueError as exc:
        print(f"pyramidfe verify: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports = [run_check(spec, c) for c in checks]
    passed = all(r.passed for r in reports)
    doc = {"passed": passed, "reports": [r.to_json() for r in reports]}
    _write(args.out, json.dumps(doc, indent=1) + "\n")
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.family}{r.order} {r.check} ({r.seconds:.2f}s)", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_basis(args) -> int:
    el = nodal_basis(SpaceSpec(args.family, args.order))
    _write(args.out, dumps(basis_document(el)))
    return EXIT_OK


def cmd_tabulate(args) -> int:
    el = nodal_basis(SpaceSpec(args.family, args.order))
    pts = read_points(args.points)
    tab = el.tabulate(pts)
    text = tabulation_csv(tab) if args.format == "csv" else dumps(tabulation_document(el, tab))
    _write(args.out, text)
    return EXIT_OK


COMMANDS = {"dims": cmd_dims, "verify": cmd_verify, "basis": cmd_basis, "tabulate": cmd_tabulate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (OSError, PointsFileError, OutsideReferenceError) as exc:
        print(f"pyramidfe {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
