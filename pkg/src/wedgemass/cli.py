"""Command line entry point: ``wedgemass {mass,sweep,gen-coeffs,verify}``."""
from __future__ import annotations

import argparse
import logging
import sys
import time
from fractions import Fraction

from . import acceptance
from .bench import DEFAULT_DELTA_MAX, DEFAULT_STEPS, METHODS, SweepConfig, run_sweep, write_csv
from .massmat import mass_exact_rational, mass_matrix, write_matrix
from .schemes import CoeffMatrices, SchemeKind, embedded_coeff_matrices, generate_coeff_matrices
from .wedge15 import NonPhysicalElementError, read_nodes

log = logging.getLogger("wedgemass")

MASS_METHODS = ("cm", "lm", "qm", "gauss18", "exact")


def _positive_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _scheme_list(text: str) -> tuple[str, ...]:
    items = tuple(s.strip().upper() for s in text.split(",") if s.strip())
    unknown = [s for s in items if s not in METHODS]
    if not items or unknown:
        raise argparse.ArgumentTypeError(
            f"unknown scheme(s) {unknown}; choose from {','.join(m.lower() for m in METHODS)}"
        )
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wedgemass",
        description="Consistent mass matrices of the 15-node wedge element.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mass", help="mass matrix of one element")
    p.add_argument("--nodes", required=True, help="15-row 'x y z' text file or JSON array")
    p.add_argument("--scheme", choices=MASS_METHODS, default="qm", type=str.lower)
    p.add_argument("--density", type=_positive_fraction, default=Fraction(1))
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--rational", action="store_true",
                   help="with --scheme exact, write n/d entries instead of floats")

    p = sub.add_parser("sweep", help="error sweep over a distorted element family")
    p.add_argument("--family", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--delta-max", type=_positive_fraction, default=DEFAULT_DELTA_MAX)
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--schemes", type=_scheme_list, default=METHODS)
    p.add_argument("--density", type=_positive_fraction, default=Fraction(1))
    p.add_argument("--out", help="CSV output file (default: stdout)")
    p.add_argument("--time", action="store_true", help="report wall-clock time on stderr")

    p = sub.add_parser("gen-coeffs", help="generate coefficient matrices and check the embedded ones")
    p.add_argument("--scheme", choices=("cm", "lm", "qm"), required=True, type=str.lower)
    p.add_argument("--out", help="JSON output file (default: stdout)")

    sub.add_parser("verify", help="run every acceptance check; exit 1 on failure")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_mass(args) -> int:
    nodes = read_nodes(args.nodes)
    if args.scheme == "exact" and args.rational:
        M = mass_exact_rational(nodes, args.density)
        exact = True
    else:
        M = mass_matrix(nodes, args.scheme, float(args.density))
        exact = False
    if args.out:
        write_matrix(M, args.out, exact=exact)
    else:
        fmt = str if exact else repr
        for row in M:
            print(",".join(fmt(v if exact else float(v)) for v in row))
    return 0


def _cmd_sweep(args) -> int:
    if args.steps < 2:
        raise argparse.ArgumentTypeError("--steps must be at least 2")
    config = SweepConfig(args.family, args.delta_max, args.steps, args.schemes, float(args.density))
    t0 = time.perf_counter()
    records = run_sweep(config)
    if args.time:
        print(f"sweep took {time.perf_counter() - t0:.3f} s", file=sys.stderr)
    write_csv(records, args.out or sys.stdout)
    return 0


def _cmd_gen_coeffs(args) -> int:
    kind = SchemeKind.parse(args.scheme)
    fresh = generate_coeff_matrices(kind)
    _emit(fresh.dumps() + "\n", args.out)
    if args.out and CoeffMatrices.load(args.out) != fresh:
        log.error("written document does not round-trip")
        return 1
    if embedded_coeff_matrices(kind) != fresh:
        log.error("embedded %s coefficients differ from freshly generated ones", kind.value)
        return 1
    log.info("embedded %s coefficients match fresh generation", kind.value)
    return 0


def _cmd_verify(args) -> int:
    t0 = time.perf_counter()
    results = acceptance.run_all(echo=print)
    elapsed = time.perf_counter() - t0
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed in {elapsed:.1f} s")
    return 1 if failed else 0


COMMANDS = {"mass": _cmd_mass, "sweep": _cmd_sweep, "gen-coeffs": _cmd_gen_coeffs, "verify": _cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except (OSError, ValueError, NonPhysicalElementError) as exc:
        print(f"wedgemass: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
