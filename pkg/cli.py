#!/usr/bin/env python
"""
Symplectic Toolkit - command-line entry point.

Usage:
    python cli.py williamson --input A.csv
    python cli.py check-commute --input A.json --input B.json --power 2
    python cli.py gen --seed 3 --n 2 --spectrum 1,2 --spectrum 3,5 --out family.json
    python cli.py simdiag --input family.json

Every invocation prints one JSON Report on standard output. Exit codes:
0 success, 2 a mathematical hypothesis is violated, 1 anything else.
Logging goes to standard error.
"""

import argparse
import logging
import sys
from pathlib import Path

from models.config import DEFAULT_TOLERANCES
from models.errors import InvalidInputError, MatrixFileError
from models.report import Report, ReportStatus
from services import api
from services.matrix_io import FORMATS, load_matrices

logger = logging.getLogger("cli")

GEN_KINDS = ("family", "symplectic", "orthosymplectic")


class ToolkitArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1 instead of argparse's 2, which is reserved for rejections."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _spectrum(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from e
    if not values:
        raise argparse.ArgumentTypeError("empty spectrum")
    return values


def _add_common(sub: argparse.ArgumentParser) -> None:
    io_group = sub.add_argument_group("input/output")
    io_group.add_argument("--input", action="append", default=[], metavar="PATH",
                          help="matrix file, repeatable; '-' reads JSON from stdin")
    io_group.add_argument("--format", choices=FORMATS, help="input format (default: from suffix)")
    io_group.add_argument("--out", metavar="PATH", help="also write the report JSON here")

    tol = sub.add_argument_group("tolerances")
    for name in ("sym", "pd", "rank", "commute", "cluster", "residual"):
        tol.add_argument(f"--tol-{name}", type=float, default=None, metavar="TOL",
                         help=f"override tol_{name} (default {getattr(DEFAULT_TOLERANCES, 'tol_' + name):g})")

    sub.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = ToolkitArgumentParser(
        prog="symplectic",
        description="Williamson decompositions and simultaneous symplectic diagonalization.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True,
                                       parser_class=ToolkitArgumentParser)

    helps = {
        "williamson": "Williamson decomposition of one PD matrix",
        "symplectic-eigs": "symplectic eigenvalues of one PSD matrix",
        "check-commute": "test AJB = BJA (optionally for powers)",
        "bracket": "Gram matrix of the Poisson bracket of two quadratic forms",
        "simdiag": "simultaneous diagonalization of a commuting PD family",
        "normal-form": "simultaneous normal form of a PSD family",
        "gaussian-modes": "common normal modes of two Gaussian covariance matrices",
        "partition": "closed-form partition function of a quadratic Hamiltonian",
        "gen": "generate seeded random instances",
    }
    subs = {}
    for command in api.get_commands():
        subs[command] = subparsers.add_parser(command, help=helps[command])
        _add_common(subs[command])

    subs["check-commute"].add_argument("--power", type=float, help="also test AˢJBˢ = BˢJAˢ")
    subs["check-commute"].add_argument("--power-b", type=float, help="exponent of B when it differs from --power")

    part = subs["partition"]
    part.add_argument("--beta", type=float, default=1.0, help="inverse energy (default 1)")
    part.add_argument("--h", type=float, default=1.0, help="action constant (default 1)")
    part.add_argument("--d", type=int, help="spatial dimensions (default: dim / 2N)")
    part.add_argument("--N", type=int, help="number of particles (default: number of inputs)")

    gen = subs["gen"]
    gen.add_argument("--kind", choices=GEN_KINDS, default="family")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n", type=int, help="number of modes (default: length of the first spectrum)")
    gen.add_argument("--spread", type=float, default=1.0)
    gen.add_argument("--spectrum", type=_spectrum, action="append", default=[], metavar="D1,D2,...",
                     help="symplectic spectrum of one family member, repeatable")
    gen.add_argument("--orthosymplectic-family", action="store_true",
                     help="share an orthosymplectic congruence so members also commute classically")
    return parser


def _params(args: argparse.Namespace) -> dict:
    if args.command == "check-commute":
        return {"power": args.power, "power_b": args.power_b}
    if args.command == "partition":
        return {"beta": args.beta, "h": args.h, "d": args.d, "N": args.N}
    if args.command == "gen":
        n = args.n
        if n is None:
            n = len(args.spectrum[0]) if args.spectrum else 1
        return {
            "kind": args.kind,
            "seed": args.seed,
            "n": n,
            "spread": args.spread,
            "spectra": args.spectrum,
            "orthosymplectic": args.orthosymplectic_family,
        }
    return {}


def _failed_report(command: str, exc: Exception) -> Report:
    return Report(
        command=command,
        status=ReportStatus.FAILED,
        error={"type": type(exc).__name__, "violated_hypothesis": None, "message": str(exc), "residual": None},
    )


def run(args: argparse.Namespace) -> Report:
    """Load inputs, execute the command, and return its Report."""
    try:
        cfg = DEFAULT_TOLERANCES.with_overrides(
            tol_sym=args.tol_sym,
            tol_pd=args.tol_pd,
            tol_rank=args.tol_rank,
            tol_commute=args.tol_commute,
            tol_cluster=args.tol_cluster,
            tol_residual=args.tol_residual,
        )
        matrices = []
        shapes = []
        for path in args.input:
            loaded = load_matrices(path, args.format)
            matrices.extend(loaded)
            shapes.extend([list(m.shape) for m in loaded])
    except (InvalidInputError, MatrixFileError) as e:
        logger.error("%s", e)
        return _failed_report(args.command, e)

    inputs = {"files": args.input, "shapes": shapes}
    return api.execute_run(args.command, matrices, _params(args), cfg, inputs=inputs)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    report = run(args)
    text = report.to_json()
    print(text)

    if args.out:
        try:
            Path(args.out).write_text(text + "\n")
        except OSError as e:
            logger.error("cannot write %s: %s", args.out, e.strerror or e)
            return 1

    if report.status is not ReportStatus.COMPLETED:
        logger.info("%s", report.display_name)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
