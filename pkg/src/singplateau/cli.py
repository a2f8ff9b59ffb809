"""Command-line front end.

Exit codes: 0 pass, 1 input error, 2 solver did not converge,
3 insufficient resolution (coarse seam or a failed tolerance check).
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .collar import MIN_SEAM_SAMPLES
from .curves import ClosedCurve, CurveError, constant_speed_reparam, load_curve
from .io import dumps, write_mesh
from .mesh import MAX_DEPTH
from .solver import SolverConfig, solve
from .verification import VerificationConfig, collar_checks, run_suite

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONVERGED = 2
EXIT_RESOLUTION = 3

log = logging.getLogger("singplateau")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    depth: int = 5
    max_outer_iters: int = 200
    rel_tol: float = 1e-6
    seed: int = 0
    seam_samples: int = 256
    out: str | None = None
    report: str | None = None

    def __post_init__(self):
        if not 1 <= self.depth <= MAX_DEPTH:
            raise ValueError(f"--depth must lie in 1..{MAX_DEPTH}")
        if self.max_outer_iters < 1:
            raise ValueError("--iters must be positive")
        if not self.rel_tol > 0:
            raise ValueError("--tol must be positive")
        if self.seed < 0:
            raise ValueError("--seed must be nonnegative")
        if self.seam_samples < 3:
            raise ValueError("--seam-samples must be at least 3")

    def verification(self) -> VerificationConfig:
        return VerificationConfig(depth=self.depth, max_outer_iters=self.max_outer_iters, rel_tol=self.rel_tol,
                                  seed=self.seed, seam_samples=self.seam_samples)

    def solver(self) -> SolverConfig:
        return self.verification().solver()

    def to_json(self) -> dict:
        # the input is named, not located, so reports do not depend on the working directory
        return {"command": self.command, "input": Path(self.input).name, "depth": self.depth,
                "max_outer_iters": self.max_outer_iters, "rel_tol": self.rel_tol, "seed": self.seed,
                "seam_samples": self.seam_samples}


def _prepare(curve: ClosedCurve) -> ClosedCurve:
    if curve.is_constant_speed:
        return curve
    log.info("resampling %s to constant speed", curve.name or "curve")
    return constant_speed_reparam(curve, curve.m)


def _emit(report: dict, path: str | None) -> None:
    text = dumps(report)
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve(cfg: RunConfig, curve: ClosedCurve) -> int:
    u, rep = solve(curve, cfg.solver())
    if cfg.out:
        write_mesh(u, cfg.out)
    report = rep.to_json()
    report["curve"] = curve.name
    report["config"] = cfg.to_json()
    _emit(report, cfg.report)
    return EXIT_OK if rep.converged else EXIT_NOT_CONVERGED


def cmd_collar_check(cfg: RunConfig, curve: ClosedCurve) -> int:
    coarse = cfg.seam_samples < MIN_SEAM_SAMPLES
    report = collar_checks(curve, cfg.verification(), strict=not coarse)
    report["config"] = cfg.to_json()
    report["curve"] = curve.name
    if coarse:
        report["pass"] = False
        report["note"] = f"insufficient resolution: seam_samples < {MIN_SEAM_SAMPLES}"
    _emit(report, cfg.report)
    return EXIT_OK if report["pass"] else EXIT_RESOLUTION


def cmd_verify(cfg: RunConfig, curve: ClosedCurve) -> int:
    if cfg.seam_samples < MIN_SEAM_SAMPLES:
        _emit({"pass": False, "config": cfg.to_json(),
               "note": f"insufficient resolution: seam_samples < {MIN_SEAM_SAMPLES}"}, cfg.report)
        return EXIT_RESOLUTION
    summary = run_suite(curve, cfg.verification())
    summary["config"] = cfg.to_json()
    _emit(summary, cfg.report)
    if summary["pass"]:
        return EXIT_OK
    return EXIT_NOT_CONVERGED if not summary["converged"] else EXIT_RESOLUTION


def cmd_corpus(out_dir: str) -> int:
    """Copy the bundled example curves into ``out_dir``."""
    dest = Path(out_dir)
    dest.mkdir(parents=True, exist_ok=True)
    for entry in sorted(resources.files("singplateau").joinpath("data").iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            (dest / entry.name).write_text(entry.read_text())
            print(dest / entry.name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="singplateau", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("solve", "least-area disc spanning a curve"),
                           ("collar-check", "metric checks of the collar space"),
                           ("verify", "area ledger, isoperimetric and parametrized checks")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input", help="curve JSON file")
        p.add_argument("--depth", type=int, default=5)
        p.add_argument("--iters", type=int, default=200)
        p.add_argument("--tol", type=float, default=1e-6)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--seam-samples", type=int, default=256)
        p.add_argument("--out", default=None, help="mesh output path")
        p.add_argument("--report", default=None, help="report path (default: stdout)")
    p = sub.add_parser("corpus", help="write the bundled example curves")
    p.add_argument("--out", required=True, help="output directory")
    return parser


COMMANDS = {"solve": cmd_solve, "collar-check": cmd_collar_check, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "corpus":
        return cmd_corpus(args.out)
    try:
        cfg = RunConfig(args.command, args.input, args.depth, args.iters, args.tol, args.seed,
                        args.seam_samples, args.out, args.report)
        curve = _prepare(load_curve(cfg.input))
    except (OSError, ValueError, CurveError) as exc:
        # curve errors name the offending key
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return COMMANDS[args.command](cfg, curve)


if __name__ == "__main__":
    sys.exit(main())
