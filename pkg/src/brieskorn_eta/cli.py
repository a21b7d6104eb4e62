"""Command line entry point: ``brieskorn-eta {eta,fixedpoints,classify,cheeger}``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .exact import format_rational, parse_rational
from .reports import RENDERERS, cheeger_report, classify_report, eta_report, fixedpoints_report


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    fmt: str = "json"
    output: str | None = None
    seed: int = 0
    tol: float = 1e-10

    def validate(self) -> None:
        p = self.params
        if self.fmt not in RENDERERS:
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.seed < 0:
            raise UsageError("--seed must be nonnegative")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.command == "eta":
            if (p.get("n") is None) == (p.get("k") is None):
                raise UsageError("eta needs exactly one of --n and --k")
            if p.get("n") is not None and (p["n"] < 3 or p["n"] % 2 == 0):
                raise UsageError(f"--n must be odd and >= 3, got {p['n']}")
            if p.get("k") is not None and p["k"] < 1:
                raise UsageError(f"--k must be >= 1, got {p['k']}")
            if p["d"] < 1 or p["d"] % 2 == 0:
                raise UsageError(f"--d must be odd and >= 1, got {p['d']}")
        elif self.command == "fixedpoints":
            eps = p["epsilon"]
            if not 0 < eps < 1:
                raise UsageError(f"--epsilon must satisfy 0 < epsilon < 1, got {format_rational(eps)}")
        elif self.command == "classify":
            if p.get("dim") is not None:
                if p["dim"] != 5:
                    raise UsageError("--dim supports 5 only; use --k for dimension 4k+1")
                if p.get("d_max") is None or p["d_max"] < 1:
                    raise UsageError("--dim 5 needs --d-max >= 1")
            elif None in (p.get("k"), p.get("family"), p.get("count")):
                raise UsageError("classify needs --dim 5 --d-max N or --k K --family D0 --count C")
        elif self.command == "cheeger":
            if not p["t_max"] > 0:
                raise UsageError("--t-max must be positive")
            if any(t < 0 for t in p["t"]):
                raise UsageError("--t values must be nonnegative")
            if p["samples"] < 1:
                raise UsageError("--samples must be positive")


def _t_list(text: str) -> list[float]:
    try:
        return [float(parse_rational(x)) if "/" in x else float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad t list {text!r}") from exc


def _rational(text: str):
    try:
        return parse_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=sorted(RENDERERS), default="json")
    common.add_argument("--output", default=None, help="write the report to this path instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-10)

    parser = _Parser(prog="brieskorn-eta", description="Eta-invariants, fixed points, classification "
                     "arithmetic and Cheeger deformations for Brieskorn projective spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eta", parents=[common], help="relative eta-invariant with derivation trace")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("fixedpoints", parents=[common], help="tau-fixed points of W_eps")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--epsilon", type=_rational, required=True)

    p = sub.add_parser("classify", parents=[common], help="classification report")
    p.add_argument("--dim", type=int)
    p.add_argument("--d-max", dest="d_max", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--family", type=int, help="base d0 of the family d0 + i 2^(2k+2)")
    p.add_argument("--count", type=int, help="family size including d0")

    p = sub.add_parser("cheeger", parents=[common], help="Cheeger deformation sweep")
    p.add_argument("--chart", default="hopf", help="hopf, torus, brieskorn or a chart JSON file")
    p.add_argument("--t", type=_t_list, default=[0.0, 1.0, 10.0])
    p.add_argument("--t-max", dest="t_max", type=float, default=1e4)
    p.add_argument("--steps", type=int, default=64, help="grid points per decade")
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--epsilon", type=_rational, default=parse_rational("1/2"))
    p.add_argument("--curvature", default="fixed_point_bump",
                   help="flat, constant:K, fixed_point_bump or gauss (brieskorn charts)")
    return parser


def config_from_args(argv: list[str] | None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    cfg = RunConfig(args.pop("command"), fmt=args.pop("fmt"), output=args.pop("output"),
                    seed=args.pop("seed"), tol=args.pop("tol"))
    cfg.params = args
    cfg.validate()
    return cfg


def dispatch(cfg: RunConfig) -> dict:
    p = cfg.params
    if cfg.command == "eta":
        return eta_report(p["d"], n=p.get("n"), k=p.get("k"))
    if cfg.command == "fixedpoints":
        return fixedpoints_report(p["n"], p["d"], p["epsilon"])
    if cfg.command == "classify":
        return classify_report(dim=p.get("dim"), d_max=p.get("d_max"), k=p.get("k"),
                               family=p.get("family"), count=p.get("count"))
    if cfg.command == "cheeger":
        return cheeger_report(p["chart"], p["t"], p["t_max"], p["steps"], n=p["n"], d=p["d"],
                              epsilon=p["epsilon"], samples=p["samples"], seed=cfg.seed, curvature=p["curvature"])
    raise UsageError(f"unknown command {cfg.command!r}")


def _error_object(command: str | None, exc: Exception) -> str:
    reason = " ".join(str(exc).split()) or type(exc).__name__
    return json.dumps({"error": {"command": command, "type": type(exc).__name__, "message": reason}},
                      sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    command = next((a for a in argv if not a.startswith("-")), None)
    try:
        cfg = config_from_args(argv)
        command = cfg.command
        text = RENDERERS[cfg.fmt](dispatch(cfg))
    except (UsageError, ValueError, TypeError, OSError, ArithmeticError) as exc:
        sys.stdout.write(_error_object(command, exc))
        return 2
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
