"""Command line surface: instance checks, fuzzing, and the shift-space demo.

Exit codes: 0 all selected checks passed (skipped checks count as passed),
1 a check failed with a counterexample, 2 the instance failed to parse or
shape-check, 3 an exhaustive sweep exceeded the element cap.
"""

from __future__ import annotations

import argparse
import sys

from .checks import CHECK_NAMES, run_checks
from .comodule import free_comodule, validate_comodule
from .fuzz import FuzzSpec, run_fuzz
from .instancefile import (
    InstanceSemanticError,
    InstanceSyntaxError,
    load_instance,
)
from .linalg import DEFAULT_MAX_ELEMENTS
from .report import FAIL, PASS, CheckResult, Report
from .shiftspace import check_shift_identities

_INSTANCE_CHECKS = tuple(n for n in CHECK_NAMES)


def _common_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--format", choices=("text", "json"), default="text",
                     help="report format (default: text)")
    sub.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS,
                     help="cap for exhaustive sweeps (default: %(default)s)")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for randomized paths (default: 0)")
    sub.add_argument("--witnesses", action="store_true",
                     help="include witness payloads in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comodkit",
        description="Exact checks for coalgebras and comodules over Z/n.")
    subs = parser.add_subparsers(dest="command", required=True)

    for name in _INSTANCE_CHECKS:
        sub = subs.add_parser(name, help=f"run the {name} check on an instance file")
        sub.add_argument("instance", help="path to an instance file")
        _common_flags(sub)

    fuzz = subs.add_parser("fuzz", help="generate random instances and run the theorem bundle")
    fuzz.add_argument("--modulus", type=int, required=True)
    fuzz.add_argument("--coalgebra", default="trivial",
                      help="trivial, grouplike:<g> or matrix:<k> (default: trivial)")
    fuzz.add_argument("--strategy", choices=("subcomodule", "quotient"),
                      default="subcomodule")
    fuzz.add_argument("--power", type=int, default=1,
                      help="sample inside this power of the free comodule")
    fuzz.add_argument("--count", type=int, default=10)
    fuzz.add_argument("--max-module", type=int, default=256,
                      help="size bound for sampled carriers (default: 256)")
    fuzz.add_argument("--dump-dir", default=".",
                      help="where counterexample instances are written")
    _common_flags(fuzz)

    shift = subs.add_parser("shift", help="check the shift decomposition identities")
    shift.add_argument("instance", help="instance file providing the component comodule")
    shift.add_argument("--comodule", default=None,
                       help="component comodule name (default: first in the file)")
    shift.add_argument("--trials", type=int, default=1000)
    _common_flags(shift)

    return parser


def _load(path: str) -> object | int:
    try:
        return load_instance(path)
    except (InstanceSyntaxError, InstanceSemanticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _emit(report: Report, fmt: str, witnesses: bool) -> int:
    sys.stdout.write(report.render(fmt, witnesses))
    return report.exit_code()


def _run_shift(args) -> int:
    inst = _load(args.instance)
    if isinstance(inst, int):
        return inst
    if args.comodule is not None:
        try:
            component = inst.comodule_named(args.comodule)
        except KeyError:
            print(f"error: no comodule named {args.comodule!r}", file=sys.stderr)
            return 2
        name = args.comodule
    elif inst.comodules:
        name, component = inst.comodules[0]
    else:
        name, component = "C", free_comodule(inst.coalgebra, 1)
    report = Report(
        instance={"path": args.instance, "component": name},
        caps={"max_elements": args.max_elements},
        seed=args.seed,
    )
    axioms = validate_comodule(component)
    if not axioms.ok:
        report.checks.append(CheckResult(
            "shift.component-axioms", FAIL, name,
            counterexample={"axiom": axioms.failures()[0].axiom}))
        return _emit(report, args.format, args.witnesses)
    rep = check_shift_identities(component, args.trials, args.seed)
    result = CheckResult(
        "shift.identities", PASS if rep.ok else FAIL, name,
        details={
            "trials": rep.trials,
            "idempotent_failures": rep.idempotent_failures,
            "unit_failures": rep.unit_failures,
            "sum_failures": rep.sum_failures,
            "coaction_failures": rep.coaction_failures,
        })
    report.checks.append(result)
    return _emit(report, args.format, args.witnesses)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "fuzz":
        spec = FuzzSpec(
            modulus=args.modulus,
            coalgebra=args.coalgebra,
            strategy=args.strategy,
            power=args.power,
            count=args.count,
            seed=args.seed,
            max_elements=args.max_elements,
            max_module=args.max_module,
            dump_dir=args.dump_dir,
        )
        return _emit(run_fuzz(spec), args.format, args.witnesses)

    if args.command == "shift":
        return _run_shift(args)

    inst = _load(args.instance)
    if isinstance(inst, int):
        return inst
    report = run_checks(inst, [args.command], cap=args.max_elements, seed=args.seed)
    report.instance["path"] = args.instance
    return _emit(report, args.format, args.witnesses)


if __name__ == "__main__":
    sys.exit(main())
