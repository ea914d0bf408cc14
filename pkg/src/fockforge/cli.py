"""Command-line front end.

Exit status: 0 on success, 1 when an experiment file fails to parse (each
error on stderr as ``file:line:column: message``), 2 for any other domain or
usage error, including a missing input file.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path
from typing import Sequence

from .analysis import (
    canonical_phase, chsh, correlation, empirical_chsh, steering_state,
)
from .dsl import ExperimentSpec, FkfSyntaxError, SweepAxis, parse_bytes, parse_phase_literal
from .errors import FockforgeError
from .fock import DEFAULT_EPS
from .presets import PRESETS, load_preset
from .runner import DEFAULT_SEED, run_experiment
from .serialize import csv_lines, dumps

TOL_ENV = "FOCKFORGE_TOL"


class UsageError(FockforgeError):
    pass


def _phase(text: str) -> float:
    try:
        return parse_phase_literal(text.strip())
    except ValueError as exc:
        raise UsageError(f"bad phase '{text}': {exc}") from None


def _range(text: str, var: str) -> float | SweepAxis:
    """``start:stop:steps`` (stop excluded) or a single fixed phase."""
    parts = text.split(":")
    if len(parts) == 1:
        return _phase(text)
    if len(parts) != 3:
        raise UsageError(f"malformed range '{text}' for {var}; expected start:stop:steps")
    start, stop = _phase(parts[0]), _phase(parts[1])
    try:
        steps = int(parts[2])
    except ValueError:
        raise UsageError(f"malformed step count '{parts[2]}' for {var}") from None
    if steps < 1:
        raise UsageError(f"range for {var} needs steps >= 1, got {steps}")
    return SweepAxis(var, start, stop, steps)


def _tolerance(args: argparse.Namespace) -> float:
    if args.tol is not None:
        tol = args.tol
    elif os.environ.get(TOL_ENV):
        try:
            tol = float(os.environ[TOL_ENV])
        except ValueError:
            raise UsageError(f"{TOL_ENV}={os.environ[TOL_ENV]!r} is not a number") from None
    else:
        tol = DEFAULT_EPS
    if not (tol > 0 and math.isfinite(tol)):
        raise UsageError(f"tolerance must be a positive number, got {tol}")
    return tol


def _load(args: argparse.Namespace) -> ExperimentSpec:
    if args.input and args.preset:
        raise UsageError("give either an experiment file or --preset, not both")
    if args.preset:
        return load_preset(args.preset)
    if not args.input:
        raise UsageError("no experiment: pass a .fkf file or --preset")
    path = Path(args.input)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_bytes(data, source_name=str(path))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _check_shots(args: argparse.Namespace) -> None:
    if args.shots is not None and args.shots < 0:
        raise UsageError(f"--shots must be >= 0, got {args.shots}")


def cmd_simulate(args: argparse.Namespace) -> None:
    _check_shots(args)
    spec = _load(args)
    overrides = {}
    if args.phiA is not None:
        overrides["phiA"] = _phase(args.phiA)
    if args.phiB is not None:
        overrides["phiB"] = _phase(args.phiB)
    table = run_experiment(spec, overrides, args.shots, args.seed, _tolerance(args))
    _emit(table.render(args.format), args.out)


def cmd_sweep(args: argparse.Namespace) -> None:
    _check_shots(args)
    spec = _load(args)
    overrides = {}
    if args.phiA is not None:
        overrides["phiA"] = _range(args.phiA, "phiA")
    if args.phiB is not None:
        overrides["phiB"] = _range(args.phiB, "phiB")
    table = run_experiment(spec, overrides, args.shots, args.seed, _tolerance(args))
    table.swept = True
    _emit(table.render(args.format), args.out)


def cmd_chsh(args: argparse.Namespace) -> None:
    _check_shots(args)
    a, ap, b, bp = (_phase(x) for x in (args.a, args.a_prime, args.b, args.b_prime))
    pairs = [(a, b), (a, bp), (ap, b), (ap, bp)]
    record = {
        "a": a, "a_prime": ap, "b": b, "b_prime": bp,
        "E_ab": correlation(*pairs[0]),
        "E_ab_prime": correlation(*pairs[1]),
        "E_a_prime_b": correlation(*pairs[2]),
        "E_a_prime_b_prime": correlation(*pairs[3]),
        "S": chsh(a, ap, b, bp),
    }
    if args.shots is not None:
        if args.shots == 0:
            raise UsageError("--shots must be positive to estimate correlations")
        seed = DEFAULT_SEED if args.seed is None else args.seed
        s_emp, es = empirical_chsh(a, ap, b, bp, args.shots, seed)
        record.update({
            "shots": args.shots, "seed": seed,
            "E_ab_sampled": es[0], "E_ab_prime_sampled": es[1],
            "E_a_prime_b_sampled": es[2], "E_a_prime_b_prime_sampled": es[3],
            "S_sampled": s_emp,
        })
    if args.format == "json":
        text = dumps(record) + "\n"
    else:
        text = "\n".join(csv_lines(list(record), [list(record.values())])) + "\n"
    _emit(text, args.out)


def cmd_steer(args: argparse.Namespace) -> None:
    phi = _phase(args.phiA)
    amp = canonical_phase(steering_state(phi, args.detector, _tolerance(args)), _tolerance(args))
    record = {
        "detector": "D_" + args.detector, "phi_a": phi,
        "ub_re": amp[0].real, "ub_im": amp[0].imag,
        "sb_re": amp[1].real, "sb_im": amp[1].imag,
    }
    if args.format == "json":
        text = dumps(record) + "\n"
    else:
        text = "\n".join(csv_lines(list(record), [list(record.values())])) + "\n"
    _emit(text, args.out)


def _common(p: argparse.ArgumentParser, experiment: bool = True) -> None:
    if experiment:
        p.add_argument("input", nargs="?", help="experiment file (.fkf)")
        p.add_argument("--preset", choices=sorted(PRESETS), help="built-in experiment instead of a file")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default: csv)")
    p.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    p.add_argument("--tol", type=float, metavar="EPS",
                   help=f"numerical tolerance (default: ${TOL_ENV} or {DEFAULT_EPS:g})")


def _shots(p: argparse.ArgumentParser) -> None:
    p.add_argument("--shots", type=int, metavar="N", help="also draw N multinomial samples")
    p.add_argument("--seed", type=int, metavar="S",
                   help=f"PCG64 seed for sampling (default: {DEFAULT_SEED})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockforge",
        description="Linear-optics multiphoton interference simulator.",
        epilog="Phases accept decimal radians, pi, <k>pi or <k>/<m>pi (e.g. -1/4pi).",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("simulate", help="run an experiment at fixed phases (or over its sweep)")
    _common(p)
    p.add_argument("--phiA", metavar="PHASE", help="fix variable phiA")
    p.add_argument("--phiB", metavar="PHASE", help="fix variable phiB")
    _shots(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="tabulate an experiment over a phase grid")
    _common(p)
    p.add_argument("--phiA", metavar="START:STOP:STEPS",
                   help="grid for phiA, stop excluded; a single phase fixes it")
    p.add_argument("--phiB", metavar="START:STOP:STEPS",
                   help="grid for phiB, stop excluded; a single phase fixes it")
    _shots(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("chsh", help="CHSH value of the non-local HOM correlations")
    _common(p, experiment=False)
    p.add_argument("--a", default="0", metavar="PHASE", help="first A setting (default: 0)")
    p.add_argument("--a-prime", default="1/2pi", metavar="PHASE", help="second A setting (default: 1/2pi)")
    p.add_argument("--b", default="-1/4pi", metavar="PHASE", help="first B setting (default: -1/4pi)")
    p.add_argument("--b-prime", default="1/4pi", metavar="PHASE", help="second B setting (default: 1/4pi)")
    _shots(p)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("steer", help="conditional state of B after a detection in A")
    _common(p, experiment=False)
    p.add_argument("--phiA", default="0", metavar="PHASE", help="phase on A1 (default: 0)")
    p.add_argument("--detector", choices=("A1", "A2"), default="A1", help="detector that fired (default: A1)")
    p.set_defaults(func=cmd_steer)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except FkfSyntaxError as exc:
        for err in exc.errors:
            print(f"{exc.source_name}:{err}", file=sys.stderr)
        return 1
    except (FockforgeError, ValueError) as exc:
        print(f"fockforge: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
