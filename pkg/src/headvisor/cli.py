"""Command-line entry point.

Exit codes: 0 ok, 1 input error, 2 no secure parametrization, 3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources
from pathlib import Path

from .advisor import InfeasibleError, advise, prepare
from .budgets import BudgetError, Parametrization, load_budgets, validate
from .circuit import CircuitError, load_circuit, to_profile
from .coefficients import FIPS, Priorities, surface_grid
from .fuzzy import FuzzyError
from .model import DEFAULT_EPSILON, explain
from .solver import SolverError

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_INVALID = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read_circuit(path: str):
    p = Path(path)
    if p.is_file():
        text = p.read_text("utf-8")
    else:
        # bare names such as "t1.json" fall back to the bundled descriptors
        bundled = resources.files("headvisor").joinpath("circuits", p.name)
        if p.parent != Path(".") or not bundled.is_file():
            raise InputError(f"circuit file not found: {path}")
        text = bundled.read_text("utf-8")
    try:
        return to_profile(load_circuit(text))
    except CircuitError as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_budgets(path: str | None):
    if path is not None and not Path(path).is_file():
        raise InputError(f"budget file not found: {path}")
    try:
        return load_budgets(path)
    except BudgetError as exc:
        raise InputError(str(exc)) from None


def _priorities(text: str) -> Priorities:
    try:
        return Priorities.parse(text)
    except (ValueError, FuzzyError) as exc:
        raise InputError(f"--priorities: {exc}") from None


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)


def cmd_advise(args) -> int:
    prio = _priorities(args.priorities)
    profile = _read_circuit(args.circuit)
    budgets = _read_budgets(args.budgets)
    try:
        result = advise(prio, profile, budgets, args.epsilon)
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if not result.report.passed:
        print(result.report.render(), file=sys.stderr)
        return EXIT_INVALID
    _emit(result.params.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    profile = _read_circuit(args.circuit)
    budgets = _read_budgets(args.budgets)
    p = Path(args.params)
    if not p.is_file():
        raise InputError(f"parametrization file not found: {args.params}")
    try:
        params = Parametrization.from_dict(json.loads(p.read_text("utf-8")))
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.params}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    except BudgetError as exc:
        raise InputError(f"{args.params}: {exc}") from None
    report = validate(params, profile, budgets)
    print(report.render())
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_surfaces(args) -> int:
    try:
        rows = surface_grid(args.fip, args.res)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    except ValueError as exc:
        raise InputError(f"--res: {exc}") from None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("x", "y", "z"))
    w.writerows((repr(x), repr(y), repr(z)) for x, y, z in rows)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_explain(args) -> int:
    prio = _priorities(args.priorities)
    profile = _read_circuit(args.circuit)
    budgets = _read_budgets(args.budgets)
    model = prepare(prio, profile, budgets, args.epsilon)
    _emit(explain(model) + "\n", args.out)
    return EXIT_OK


def _epsilon(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError("epsilon must lie in (0, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="headvisor", description="Priority-driven CKKS parameter selection."
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, priorities=True):
        if priorities:
            p.add_argument("--priorities", required=True,
                           help="precision,performance,security, each in [0, 10]")
        p.add_argument("--circuit", required=True, help="circuit descriptor (JSON)")
        p.add_argument("--budgets", help="budget overrides (JSON, 'logN,lambda,type' keys)")

    p = sub.add_parser("advise", help="select a parametrization")
    common(p)
    p.add_argument("--epsilon", type=_epsilon, default=DEFAULT_EPSILON)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_advise)

    p = sub.add_parser("validate", help="check a parametrization against the standard")
    p.add_argument("--params", required=True, help="parametrization JSON")
    common(p, priorities=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("surfaces", help="export a fuzzy surface as CSV")
    p.add_argument("--fip", required=True, help=f"one of: {', '.join(FIPS)}")
    p.add_argument("--res", type=int, default=101)
    p.add_argument("--out")
    p.set_defaults(func=cmd_surfaces)

    p = sub.add_parser("explain", help="dump the optimization model")
    common(p)
    p.add_argument("--epsilon", type=_epsilon, default=DEFAULT_EPSILON)
    p.add_argument("--out")
    p.set_defaults(func=cmd_explain)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"error: solver gave up: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
