"""Command-line front end.

Subcommands:
  flow        evaluate the 2D flows at a point
  figure      emit one of the four flow-pattern figures
  transform   apply a modular / positive-generator action to a sampled function
  kernel      print the thermal two-point density or the regularized kernel
  verify      run a named verification suite and write its JSON report

Configuration comes from an optional JSON file ($MFL_CONFIG or --config)
with flags taking precedence.  All numeric output uses 17 significant
digits, and every file is written to a temporary name and renamed, so a
failed run leaves no partial output.

Exit codes: 0 success; 1 failed verification; 2 domain violation or bad
configuration; 3 I/O failure; 4 unresolved derivative.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

from .cone_wedge import (
    FigureSpec,
    Region,
    SpacetimePoint,
    emit_flow_figure,
    gamma_flow_2d,
    modular_flow_2d,
)
from .errors import DomainViolation, QuadratureError, ResolutionError
from .flow_maps import ThermalContext
from .verify import report_json, run_suite
from .weyl_field import (
    TestFunction,
    higher_transform,
    two_point_momentum,
    two_point_position,
)
from .weyl_field import FieldSpec

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 2
EXIT_IO = 3
EXIT_RESOLUTION = 4


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class RunConfig:
    """Validated run configuration with file/flag layering."""

    beta: float = 1.0
    epsilon: float = 1e-4
    grid_xmin: float = -3.0
    grid_xmax: float = 3.0
    grid_n: int = 2048
    pmax: float | None = None
    npts: int = 8192
    output: str | None = None
    format: str = "csv"

    def validate(self):
        if not (self.beta > 0.0):
            raise ValueError(f"beta must be positive or inf, got {self.beta}")
        if not (self.epsilon > 0.0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.grid_xmin < self.grid_xmax):
            raise ValueError("grid xmin must be below xmax")
        if self.grid_n < 16:
            raise ValueError(f"grid n must be at least 16, got {self.grid_n}")
        if self.pmax is not None and not self.pmax > 0:
            raise ValueError(f"pmax must be positive, got {self.pmax}")
        if self.npts < 16:
            raise ValueError(f"np must be at least 16, got {self.npts}")
        if self.format not in ("csv", "json", "svg"):
            raise ValueError(f"format must be csv, json or svg, got {self.format!r}")
        return self

    def context(self) -> ThermalContext:
        return ThermalContext(beta=self.beta, pmax=self.pmax, npts=self.npts)

    @staticmethod
    def from_file(path: str) -> "RunConfig":
        with open(path) as fh:
            doc = json.load(fh)
        cfg = RunConfig()
        if "beta" in doc:
            cfg.beta = math.inf if doc["beta"] == "inf" else float(doc["beta"])
        if "epsilon" in doc:
            cfg.epsilon = float(doc["epsilon"])
        grid = doc.get("grid", {})
        cfg.grid_xmin = float(grid.get("xmin", cfg.grid_xmin))
        cfg.grid_xmax = float(grid.get("xmax", cfg.grid_xmax))
        cfg.grid_n = int(grid.get("n", cfg.grid_n))
        quad = doc.get("quadrature", {})
        if "pmax" in quad:
            cfg.pmax = float(quad["pmax"])
        if "np" in quad:
            cfg.npts = int(quad["np"])
        if "output" in doc:
            cfg.output = str(doc["output"])
        if "format" in doc:
            cfg.format = str(doc["format"])
        return cfg


def _load_config(args) -> RunConfig:
    path = args.config or os.environ.get("MFL_CONFIG")
    cfg = RunConfig.from_file(path) if path else RunConfig()
    if getattr(args, "beta", None) is not None:
        cfg.beta = math.inf if args.beta == "inf" else float(args.beta)
    if getattr(args, "epsilon", None) is not None:
        cfg.epsilon = args.epsilon
    if getattr(args, "pmax", None) is not None:
        cfg.pmax = args.pmax
    if getattr(args, "np", None) is not None:
        cfg.npts = args.np
    if getattr(args, "output", None) is not None:
        cfg.output = args.output
    if getattr(args, "format", None) is not None:
        cfg.format = args.format
    return cfg.validate()


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_flow(args) -> int:
    cfg = _load_config(args)
    ctx = cfg.context()
    region = Region.FORWARD_CONE if args.region == "cone" else Region.RIGHT_WEDGE
    try:
        x0s, x1s = args.point.split(",")
        p = SpacetimePoint(float(x0s), float(x1s))
    except (ValueError, AttributeError):
        print(f"bad --point {args.point!r}; expected x0,x1", file=sys.stderr)
        return EXIT_DOMAIN
    if args.flow == "modular":
        if args.u is None:
            print("modular flow needs --u", file=sys.stderr)
            return EXIT_DOMAIN
        q = modular_flow_2d(ctx, region, args.u, p)
    else:
        if args.tau is None:
            print("gamma flow needs --tau", file=sys.stderr)
            return EXIT_DOMAIN
        q = gamma_flow_2d(ctx, region, args.tau, p)
    print(f"{_fmt(q.x0)},{_fmt(q.x1)}")
    return EXIT_OK


_FIGURES = {
    1: (Region.FORWARD_CONE, "modular"),
    2: (Region.RIGHT_WEDGE, "modular"),
    3: (Region.FORWARD_CONE, "gamma"),
    4: (Region.RIGHT_WEDGE, "gamma"),
}


def cmd_figure(args) -> int:
    cfg = _load_config(args)
    ctx = cfg.context()
    region, flow = _FIGURES[args.which]
    out = cfg.output or f"figure{args.which}.{cfg.format}"
    spec = FigureSpec(window=0.5 * (cfg.grid_xmax - cfg.grid_xmin))
    emit_flow_figure(ctx, region, flow, out, fmt=cfg.format, spec=spec)
    print(out)
    return EXIT_OK


def cmd_transform(args) -> int:
    cfg = _load_config(args)
    ctx = cfg.context()
    f = TestFunction.load(args.input)
    which = "modular" if args.u is not None else "gamma"
    if args.u is not None and args.tau is not None:
        print("give exactly one of --u / --tau", file=sys.stderr)
        return EXIT_DOMAIN
    if args.u is None and args.tau is None:
        print("give one of --u / --tau", file=sys.stderr)
        return EXIT_DOMAIN
    param = args.u if which == "modular" else args.tau
    if args.n == 0 and which == "modular":
        from .weyl_field import modular_transform

        g = modular_transform(ctx, param, f, clip=args.clip)
    else:
        g = higher_transform(ctx, args.n, which, param, f)
    out = args.output or cfg.output or (os.path.splitext(args.input)[0] + ".out.json")
    _atomic_write(out, json.dumps(g.to_dict()) + "\n")
    print(out)
    return EXIT_OK


def cmd_kernel(args) -> int:
    cfg = _load_config(args)
    ctx = cfg.context()
    spec = FieldSpec(args.n)
    if (args.p is None) == (args.xi is None):
        print("give exactly one of --p / --xi", file=sys.stderr)
        return EXIT_DOMAIN
    if args.p is not None:
        print(_fmt(two_point_momentum(ctx, spec, args.p)))
        return EXIT_OK
    if spec.n != 0:
        print("the position kernel is available for index 0 only", file=sys.stderr)
        return EXIT_DOMAIN
    val = two_point_position(ctx, args.xi, cfg.epsilon)
    print(f"{_fmt(val.real)},{_fmt(val.imag)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    cases = run_suite(args.suite, beta=cfg.beta if math.isfinite(cfg.beta) else 1.0)
    text = report_json(cases)
    out = cfg.output or "verify_report.json"
    _atomic_write(out, text)
    failed = [c for c in cases if not c.passed]
    for c in cases:
        status = "pass" if c.passed else "FAIL"
        print(f"{status} {c.check}: {_fmt(c.lhs)} vs {_fmt(c.rhs)}")
    print(f"{len(cases) - len(failed)}/{len(cases)} checks passed -> {out}")
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mfl",
        description="thermal modular flows: evaluate, transform, verify",
    )
    ap.add_argument("--config", help="JSON config file (default: $MFL_CONFIG)")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (default: $MFL_CONFIG)")
    common.add_argument("--beta", help="inverse temperature (number or 'inf')")
    common.add_argument("--epsilon", type=float, help="kernel regulator")
    common.add_argument("--pmax", type=float, help="momentum cutoff")
    common.add_argument("--np", type=int, help="momentum node count")
    common.add_argument("--output", "-o", help="output path")
    common.add_argument("--format", choices=("csv", "json", "svg"))
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("flow", parents=[common], help="evaluate a 2D flow at a point")
    p.add_argument("--region", choices=("cone", "wedge"), required=True)
    p.add_argument("--flow", choices=("modular", "gamma"), required=True)
    p.add_argument("--u", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--point", required=True, help="x0,x1")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("figure", parents=[common], help="emit a flow-pattern figure")
    p.add_argument("--which", type=int, choices=(1, 2, 3, 4), required=True)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("transform", parents=[common], help="transform a sampled function")
    p.add_argument("input", help="TestFunction JSON file")
    p.add_argument("--n", type=int, default=0, help="field scaling index")
    p.add_argument("--u", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--clip", action="store_true")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("kernel", parents=[common], help="print two-point kernels")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--p", type=float, help="momentum argument")
    p.add_argument("--xi", type=float, help="position argument")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument(
        "suite",
        choices=("group-laws", "flows", "kernels", "thm22", "rates", "kms", "all"),
    )
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainViolation as e:
        print(f"domain violation: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResolutionError as e:
        print(f"resolution failure: {e}", file=sys.stderr)
        return EXIT_RESOLUTION
    except QuadratureError as e:
        print(f"quadrature failure: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
