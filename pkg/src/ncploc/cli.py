"""Command-line interface.

Structured output is newline-delimited JSON on stdout (``--pretty`` for
indented JSON).  Errors go to stderr as one JSON object with exit codes
1 (invalid input), 2 (budget exceeded) and 3 (invariant-suite failure).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Iterable, Sequence

from .core import Interval, Space, maximal_box
from .correspondence import DEFAULT_PRODUCT_BUDGET, plocal_lattice, product_lattice, psi, psi_inverse
from .errors import BudgetExceededError, InvalidInputError, NcplocError
from .lattice import is_distributive
from .ncp import NoncrossingPartition, catalan
from .supports import (
    DEFAULT_MAX_N,
    PLocalTuple,
    SupportTuple,
    brute_force_valid_plocal,
    bruteforce_budget_bits,
    enumerate_valid_plocal,
    is_valid,
    is_valid_plocal,
)
from .verify import run_suite

EXIT_INVALID = 1
EXIT_BUDGET = 2
EXIT_INVARIANT = 3


class UsageError(InvalidInputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _emit(items: Iterable, pretty: bool, out) -> None:
    for item in items:
        if pretty:
            out.write(json.dumps(item, indent=2) + "\n")
        else:
            out.write(json.dumps(item, separators=(",", ":")) + "\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from None


def _space(args) -> Space:
    if args.n > args.max_n:
        raise BudgetExceededError(f"n={args.n} exceeds --max-n {args.max_n}")
    return Space(args.n)


def _load_tuple(data) -> PLocalTuple | SupportTuple:
    try:
        if "sets" in data:
            return SupportTuple.from_json(data)
        return PLocalTuple.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, NcplocError):
            raise
        raise InvalidInputError(f"malformed tuple document: {exc}") from None


def _label(e):
    return e.to_json()


def _write_dot(path: str | None, lattice) -> None:
    if path:
        Path(path).write_text(lattice.to_dot(label=_label))


def cmd_intervals(args, out) -> int:
    _emit((y.to_json() for y in _space(args).intervals), args.pretty, out)
    return 0


def cmd_box(args, out) -> int:
    space = _space(args)
    ends = _int_list(args.y)
    if len(ends) != 2:
        raise UsageError("--y expects a,b")
    a, b = ends
    _emit([maximal_box(Interval(a, b, space.n)).to_json()], args.pretty, out)
    return 0


def cmd_enumerate(args, out) -> int:
    space = _space(args)
    if args.oracle:
        tuples = brute_force_valid_plocal(space, max_bits=args.max_bruteforce_bits)
    else:
        tuples = enumerate_valid_plocal(space, max_n=args.max_n)
    _emit((t.to_json() for t in tuples), args.pretty, out)
    return 0


def cmd_check(args, out) -> int:
    t = _load_tuple(_read_json(args.file))
    valid = is_valid(t) if isinstance(t, SupportTuple) else is_valid_plocal(t)
    _emit([{"valid": valid}], args.pretty, out)
    return 0


def cmd_psi(args, out) -> int:
    t = _load_tuple(_read_json(args.file))
    if not isinstance(t, PLocalTuple):
        raise InvalidInputError("psi expects a p-local tuple document")
    _emit([psi(t).to_json()], args.pretty, out)
    return 0


def cmd_psi_inv(args, out) -> int:
    data = _read_json(args.file)
    try:
        s = NoncrossingPartition.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, NcplocError):
            raise
        raise InvalidInputError(f"malformed partition document: {exc}") from None
    _emit([psi_inverse(s).to_json()], args.pretty, out)
    return 0


def cmd_lattice(args, out) -> int:
    lat = plocal_lattice(_space(args), max_n=args.max_n)
    _write_dot(args.dot, lat)
    _emit([lat.to_json(label=_label)], args.pretty, out)
    return 0


def _product(args):
    return product_lattice(_space(args), _int_list(args.primes), budget=args.max_elements)


def cmd_product(args, out) -> int:
    lat = _product(args)
    _write_dot(args.dot, lat)
    _emit([lat.to_json(label=_label)], args.pretty, out)
    return 0


def cmd_distributive(args, out) -> int:
    ok, witness = is_distributive(_product(args))
    if ok:
        _emit([{"distributive": True}], args.pretty, out)
    else:
        _emit([{"distributive": False, "witness": [w.to_json() for w in witness]}], args.pretty, out)
    return 0


def cmd_catalan(args, out) -> int:
    if args.k < 1:
        raise UsageError("--k must be positive")
    _emit([catalan(args.k)], args.pretty, out)
    return 0


def cmd_verify(args, out) -> int:
    _space(args)
    results = run_suite(args.n)
    rows = []
    for name, outcome in results:
        status = "skipped" if outcome is None else ("pass" if outcome else "fail")
        rows.append({"property": name, "n": args.n, "status": status})
    _emit(rows, args.pretty, out)
    return EXIT_INVARIANT if any(outcome is False for _, outcome in results) else 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indented JSON output")
    common.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="largest space size accepted")
    common.add_argument(
        "--max-bruteforce-bits",
        type=int,
        default=None,
        help="brute force allowed up to 2^BITS tuples (default: $NCPLOC_BUDGET_BITS or 22)",
    )

    parser = _Parser(prog="ncploc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    p = verb("intervals", cmd_intervals, "list the intervals of the n-point space")
    p.add_argument("--n", type=int, required=True)
    p = verb("box", cmd_box, "print the maximal box of an interval")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", required=True, help="interval as a,b")
    p = verb("enumerate", cmd_enumerate, "list all valid p-local tuples")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="use the brute-force filter")
    p = verb("check", cmd_check, "validate a tuple document")
    p.add_argument("--file", required=True, help="JSON file, or - for stdin")
    p = verb("psi", cmd_psi, "tuple JSON -> noncrossing partition JSON")
    p.add_argument("--file", required=True)
    p = verb("psi-inv", cmd_psi_inv, "noncrossing partition JSON -> tuple JSON")
    p.add_argument("--file", required=True)
    p = verb("lattice", cmd_lattice, "emit the p-local lattice")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dot", help="also write the Hasse diagram to this DOT file")
    for name, func, help in (
        ("product", cmd_product, "emit the lattice over a finite prime universe"),
        ("distributive", cmd_distributive, "test distributivity, reporting a witness"),
    ):
        p = verb(name, func, help)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--primes", required=True, help="comma-separated prime labels, 0 = generic point")
        p.add_argument("--max-elements", type=int, default=DEFAULT_PRODUCT_BUDGET)
        if name == "product":
            p.add_argument("--dot")
    p = verb("catalan", cmd_catalan, "print the k-th Catalan number")
    p.add_argument("--k", type=int, required=True)
    p = verb("verify", cmd_verify, "run the invariant suite")
    p.add_argument("--n", type=int, required=True)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.max_bruteforce_bits is None:
            args.max_bruteforce_bits = bruteforce_budget_bits()
        return args.func(args, out)
    except BudgetExceededError as exc:
        err.write(json.dumps({"error": "budget_exceeded", "message": str(exc)}) + "\n")
        return EXIT_BUDGET
    except InvalidInputError as exc:
        err.write(json.dumps({"error": "invalid_input", "message": str(exc)}) + "\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
