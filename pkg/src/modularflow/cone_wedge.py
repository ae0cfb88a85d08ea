"""Flows of the forward light cone and the right wedge in 2D.

The 2D theory factorizes in light-cone coordinates xR = x0 + x1 and
xL = x0 - x1, so both flows act componentwise through the half-line maps:
the cone pairs two plus-rays, the wedge pairs a minus-ray (left coordinate)
with a plus-ray (right coordinate).  The backward cone and left wedge follow
by the reflections (x0, x1) -> (-x0, -x1) and x1 -> -x1 applied at the call
site; only the two primary regions are first-class here.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainViolation
from .flow_maps import (
    RayDirection,
    ThermalContext,
    gamma_flow_ray,
    modular_flow_ray,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpacetimePoint:
    """2D point in time/space coordinates with light-cone views."""

    x0: float
    x1: float

    @property
    def xR(self) -> float:
        return self.x0 + self.x1

    @property
    def xL(self) -> float:
        return self.x0 - self.x1

    @staticmethod
    def from_lightcone(xL: float, xR: float) -> "SpacetimePoint":
        return SpacetimePoint((xR + xL) / 2.0, (xR - xL) / 2.0)


class Region(Enum):
    FORWARD_CONE = "cone"
    RIGHT_WEDGE = "wedge"

    def contains(self, p: SpacetimePoint) -> bool:
        if self is Region.FORWARD_CONE:
            return p.xR > 0.0 and p.xL > 0.0
        return p.xR > 0.0 and p.xL < 0.0

    @property
    def left_direction(self) -> RayDirection:
        """Ray direction acting on the xL coordinate."""
        if self is Region.FORWARD_CONE:
            return RayDirection.PLUS
        return RayDirection.MINUS


def _component_flow(ctx, region, p, flow_left, flow_right) -> SpacetimePoint:
    try:
        new_L = flow_left(p.xL)
    except DomainViolation as e:
        raise DomainViolation(f"left light-cone coordinate xL={p.xL}: {e}") from None
    try:
        new_R = flow_right(p.xR)
    except DomainViolation as e:
        raise DomainViolation(f"right light-cone coordinate xR={p.xR}: {e}") from None
    return SpacetimePoint.from_lightcone(new_L, new_R)


def modular_flow_2d(
    ctx: ThermalContext, region: Region, u: float, p: SpacetimePoint
) -> SpacetimePoint:
    """Modular flow of the region algebra applied to a point.

    Componentwise half-line modular flow on (xL, xR); points of the region
    stay in the region for every u.
    """
    return _component_flow(
        ctx,
        region,
        p,
        lambda v: modular_flow_ray(ctx, region.left_direction, u, v),
        lambda v: modular_flow_ray(ctx, RayDirection.PLUS, u, v),
    )


def gamma_flow_2d(
    ctx: ThermalContext, region: Region, tau: float, p: SpacetimePoint
) -> SpacetimePoint:
    """Positive-generator flow of the region applied to a point.

    Translation by tau in both chart coordinates.  The admissible tau range
    is one-sided for the cone and two-sided for the wedge; violations name
    the failing light-cone component.
    """
    return _component_flow(
        ctx,
        region,
        p,
        lambda v: gamma_flow_ray(ctx, region.left_direction, tau, v),
        lambda v: gamma_flow_ray(ctx, RayDirection.PLUS, tau, v),
    )


def remainder_terms(
    ctx: ThermalContext, region: Region, u: float, p: SpacetimePoint
) -> tuple[float, float]:
    """Closed-form deviation of the modular flow from time translation by -beta u.

    Returns (R0, R1) with modular_flow_2d(u, p) = (x0 - beta u + R0, x1 + R1);
    both terms are exponentially small deep inside the region.
    """
    if not ctx.finite:
        raise DomainViolation("remainder terms require finite beta")
    beta = ctx.beta
    b = beta / (2.0 * TWO_PI)  # beta/(4 pi)

    def log_plus(x):
        # log{1 + (e^{2pi u} - 1) e^{-2pi x/beta}}, the plus-ray remainder
        arg = math.expm1(TWO_PI * u) * math.exp(-TWO_PI * x / beta)
        if arg <= -1.0:
            raise DomainViolation(
                f"remainder undefined at x={x}: modular flow domain violated"
            )
        return math.log1p(arg)

    def log_minus(x):
        # log{1 + (e^{-2pi u} - 1) e^{+2pi x/beta}}, the minus-ray remainder
        arg = math.expm1(-TWO_PI * u) * math.exp(TWO_PI * x / beta)
        if arg <= -1.0:
            raise DomainViolation(
                f"remainder undefined at x={x}: modular flow domain violated"
            )
        return math.log1p(arg)

    if region is Region.FORWARD_CONE:
        aR = log_plus(p.xR)
        aL = log_plus(p.xL)
        return b * (aR + aL), b * (aR - aL)
    aR = log_plus(p.xR)
    aL = log_minus(p.xL)
    return b * (aR - aL), b * (aR + aL)


def velocity_field(ctx: ThermalContext, region: Region, p: SpacetimePoint) -> float:
    """Velocity dx1/dx0 of the positive-generator flow at a point; |v| < 1."""
    if not ctx.finite:
        return 0.0
    if region is Region.FORWARD_CONE:
        return -math.tanh(TWO_PI * p.x1 / ctx.beta)
    return -math.tanh(TWO_PI * p.x0 / ctx.beta)


@dataclass(frozen=True)
class FlowLine:
    """Sampled trajectory of one flow line."""

    params: np.ndarray
    points: np.ndarray  # shape (n, 2), columns (x0, x1)

    def __len__(self):
        return len(self.params)


def flow_line(
    ctx: ThermalContext,
    region: Region,
    flow: str,
    seed: SpacetimePoint,
    param_range: tuple[float, float],
    n_samples: int,
) -> FlowLine:
    """Trajectory of the seed under the named flow ("modular" or "gamma").

    Raises DomainViolation carrying the first parameter value at which the
    flow leaves its domain.
    """
    if flow not in ("modular", "gamma"):
        raise ValueError(f"flow must be 'modular' or 'gamma', got {flow!r}")
    lo, hi = param_range
    params = np.linspace(lo, hi, n_samples)
    step = modular_flow_2d if flow == "modular" else gamma_flow_2d
    pts = np.empty((n_samples, 2))
    for i, r in enumerate(params):
        try:
            q = step(ctx, region, float(r), seed)
        except DomainViolation as e:
            raise DomainViolation(
                f"flow line leaves the domain at parameter {r}: {e}",
                exit_param=float(r),
            ) from None
        pts[i] = (q.x0, q.x1)
    return FlowLine(params, pts)


def gamma_line_constant(ctx: ThermalContext, region: Region, p: SpacetimePoint) -> float:
    """Integration constant of the closed-form positive-generator flow line.

    Cone lines satisfy x0 = -(beta/2pi) log|sinh(2pi x1/beta)| + C away from
    the time axis; wedge lines satisfy x1 = -(beta/2pi) log(cosh(2pi x0/beta)) + C.
    """
    b = ctx.beta / TWO_PI
    if region is Region.FORWARD_CONE:
        s = math.sinh(p.x1 / b)
        if s == 0.0:
            raise DomainViolation(
                "cone flow line through the time axis has no finite constant"
            )
        return p.x0 + b * math.log(abs(s))
    return p.x1 + b * math.log(math.cosh(p.x0 / b))


def time_calibration(
    ctx: ThermalContext, region: Region, value: float, direction: str
) -> float:
    """Parameter conversions along the through-origin flow path.

    direction:
      "tau_of_t"      coordinate time -> flow parameter
      "t_of_tau"      flow parameter -> coordinate time
      "tau_of_proper" proper time along the path -> flow parameter

    The through-origin cone path runs up the time axis (proper time equals
    coordinate time there); the wedge path bends, with
    tau = (beta/2pi) sin(2pi t_p/beta).
    """
    if not ctx.finite:
        raise DomainViolation("time calibration requires finite beta")
    b = ctx.beta / TWO_PI
    if region is Region.FORWARD_CONE:
        if direction == "tau_of_t" or direction == "tau_of_proper":
            return b * math.expm1(value / b)
        if direction == "t_of_tau":
            arg = value / b
            if arg <= -1.0:
                raise DomainViolation(
                    f"cone path time undefined: need tau > {-b}, got {value}"
                )
            return b * math.log1p(arg)
    else:
        if direction == "tau_of_t":
            return b * math.tanh(value / b)
        if direction == "t_of_tau":
            w = value / b
            if abs(w) >= 1.0:
                raise DomainViolation(
                    f"wedge path time undefined: need |tau| < {b}, got {value}"
                )
            return b * math.atanh(w)
        if direction == "tau_of_proper":
            return b * math.sin(value / b)
    raise ValueError(
        "direction must be 'tau_of_t', 't_of_tau' or 'tau_of_proper', "
        f"got {direction!r}"
    )


def causal_chart(ctx: ThermalContext, p: SpacetimePoint) -> tuple[float, float]:
    """Globally glued chart (xiL, xiR), order preserving and C^1 across the cone.

    Each light-cone coordinate maps through the plus chart for x >= 0 and the
    minus chart for x < 0; first derivatives match at 0, second derivatives
    jump by 4 pi / beta.
    """
    def glue(x: float) -> float:
        b = ctx.beta / TWO_PI
        if x >= 0.0:
            return b * math.expm1(x / b)
        return -b * math.expm1(-x / b)

    if not ctx.finite:
        raise DomainViolation("causal chart requires finite beta")
    return glue(p.xL), glue(p.xR)


@dataclass(frozen=True)
class FigureSpec:
    """Deterministic sampling plan for one flow-pattern figure."""

    n_lines: int = 12
    n_samples: int = 129
    param_span: float = 1.0  # modular figures: u in [-span, span]
    window: float | None = None  # half-width of the emitted window, default 3 beta
    seeds: tuple[SpacetimePoint, ...] | None = None


def _default_window(ctx: ThermalContext, spec: FigureSpec) -> float:
    return spec.window if spec.window is not None else 3.0 * ctx.beta


def _modular_figure_lines(ctx, region, spec):
    """Modular flow lines from seeds swept over u in [-span, span]."""
    w = _default_window(ctx, spec)
    if spec.seeds is not None:
        seeds = list(spec.seeds)
    elif region is Region.FORWARD_CONE:
        # seeds fan across the cone interior at fixed time
        fracs = np.linspace(-0.9, 0.9, spec.n_lines)
        seeds = [SpacetimePoint(0.5 * w, 0.5 * w * f) for f in fracs]
    else:
        fracs = np.linspace(-0.9, 0.9, spec.n_lines)
        seeds = [SpacetimePoint(0.5 * w * f, 0.5 * w) for f in fracs]
    out = []
    for s in seeds:
        out.append((s, flow_line(ctx, region, "modular",
                                 s, (-spec.param_span, spec.param_span),
                                 spec.n_samples)))
    return out


def _gamma_figure_lines(ctx, region, spec):
    """Positive-generator flow lines from their closed forms.

    Lines are emitted on a coordinate grid shared by the whole family (x1
    for the cone, x0 for the wedge) so the pattern's translation symmetry is
    exact: shifting a seed in the invariance direction shifts its polyline
    pointwise.
    """
    b = ctx.beta / TWO_PI
    w = _default_window(ctx, spec)
    out = []
    if region is Region.FORWARD_CONE:
        if spec.seeds is not None:
            seeds = list(spec.seeds)
        else:
            cs = np.linspace(-0.75 * w, 0.75 * w, spec.n_lines)
            seeds = [SpacetimePoint(c, 0.35 * w) for c in cs]
        half = spec.n_samples // 2
        grid = np.geomspace(0.02 * w, w, half)  # |x1| samples, dense near axis
        for s in seeds:
            if s.x1 == 0.0:
                x0 = np.linspace(-w, w, spec.n_samples) + s.x0
                pts = np.column_stack([x0, np.zeros_like(x0)])
                out.append((s, FlowLine(x0 - s.x0, pts)))
                continue
            C = gamma_line_constant(ctx, region, s)
            x1 = grid if s.x1 > 0 else -grid[::-1]
            x0 = C - b * np.log(np.abs(np.sinh(x1 / b)))
            pts = np.column_stack([x0, x1])
            out.append((s, FlowLine(x1, pts)))
    else:
        if spec.seeds is not None:
            seeds = list(spec.seeds)
        else:
            cs = np.linspace(-1.25 * w, 0.25 * w, spec.n_lines)
            seeds = [SpacetimePoint(0.0, c) for c in cs]
        x0 = np.linspace(-w, w, spec.n_samples)
        for s in seeds:
            C = gamma_line_constant(ctx, region, s)
            x1 = C - b * np.log(np.cosh(x0 / b))
            pts = np.column_stack([x0, x1])
            out.append((s, FlowLine(x0, pts)))
    return out


def figure_lines(ctx: ThermalContext, region: Region, flow: str, spec: FigureSpec):
    """(seed, FlowLine) pairs for one figure."""
    if flow == "modular":
        return _modular_figure_lines(ctx, region, spec)
    if flow == "gamma":
        return _gamma_figure_lines(ctx, region, spec)
    raise ValueError(f"flow must be 'modular' or 'gamma', got {flow!r}")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _render_csv(lines) -> str:
    rows = ["line_id,param,x0,x1,xR,xL"]
    for i, (_, ln) in enumerate(lines):
        for r, (x0, x1) in zip(ln.params, ln.points):
            rows.append(
                ",".join([str(i), _fmt(r), _fmt(x0), _fmt(x1), _fmt(x0 + x1), _fmt(x0 - x1)])
            )
    return "\n".join(rows) + "\n"


def _render_json(ctx, region, flow, lines) -> str:
    doc = {
        "region": region.value,
        "flow": flow,
        "beta": ctx.beta,
        "lines": [
            {
                "id": i,
                "seed": [seed.x0, seed.x1],
                "points": [[float(a), float(b)] for a, b in ln.points],
            }
            for i, (seed, ln) in enumerate(lines)
        ],
    }
    return json.dumps(doc, indent=1) + "\n"


def _render_svg(ctx, lines, window: float, stroke_width: float) -> str:
    # world (x1, x0) -> svg (x, -y): time axis points up
    w = window
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(-w)} {_fmt(-w)} {_fmt(2 * w)} {_fmt(2 * w)}">\n'
    )
    cone = (
        f'<line x1="{_fmt(-w)}" y1="{_fmt(-w)}" x2="{_fmt(w)}" y2="{_fmt(w)}" '
        f'stroke="#888" stroke-width="{_fmt(stroke_width / 2)}"/>\n'
        f'<line x1="{_fmt(-w)}" y1="{_fmt(w)}" x2="{_fmt(w)}" y2="{_fmt(-w)}" '
        f'stroke="#888" stroke-width="{_fmt(stroke_width / 2)}"/>\n'
    )
    body = []
    for _, ln in lines:
        pts = " ".join(f"{_fmt(x1)},{_fmt(-x0)}" for x0, x1 in ln.points)
        body.append(
            f'<polyline fill="none" stroke="#000" '
            f'stroke-width="{_fmt(stroke_width)}" points="{pts}"/>\n'
        )
    return head + cone + "".join(body) + "</svg>\n"


def emit_flow_figure(
    ctx: ThermalContext,
    region: Region,
    flow: str,
    path: str,
    fmt: str = "csv",
    spec: FigureSpec = FigureSpec(),
    stroke_width: float = 0.01,
) -> str:
    """Write one flow-pattern dataset (csv, json or svg); returns the path.

    Output is written to a temporary file and renamed, so no partial file is
    left behind on error.
    """
    lines = figure_lines(ctx, region, flow, spec)
    if fmt == "csv":
        text = _render_csv(lines)
    elif fmt == "json":
        text = _render_json(ctx, region, flow, lines)
    elif fmt == "svg":
        w = _default_window(ctx, spec)
        text = _render_svg(ctx, lines, w, stroke_width * ctx.beta)
    else:
        raise ValueError(f"format must be csv, json or svg, got {fmt!r}")
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
    return path
