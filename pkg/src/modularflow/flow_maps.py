"""Half-sided flow maps on a light ray.

Two one-parameter flows act on the half-line algebras at inverse temperature
beta: the modular flow ``phi`` and the positive-generator flow ``psi``.  Both
are affine in the coordinate

    xi_+(x) = +(beta/2pi) (e^{+2pi x/beta} - 1)      (right half-line)
    xi_-(x) = -(beta/2pi) (e^{-2pi x/beta} - 1)      (left half-line)

where the modular flow is pure scaling, xi -> e^{-2pi u} xi (plus direction),
and the positive-generator flow is pure translation, xi -> xi + tau.  All
flows here are evaluated through fused, cancellation-free forms of that
chart conjugation; expm1/log1p keep |x| << beta and |x| >> beta both exact.

beta = inf is a first-class value: the flows degenerate to the linear maps
x -> e^{-2pi u} x and x -> x + tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainViolation

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ThermalContext:
    """Inverse temperature plus shared numerical settings.

    beta:  inverse temperature in (0, inf]; math.inf selects the vacuum maps.
    tol:   default tolerance for internal convergence checks.
    pmax:  momentum cutoff of the field quadratures (default 200/beta).
    npts:  momentum node count (forced odd internally; >= 16).
    """

    beta: float = 1.0
    tol: float = 1e-9
    pmax: float | None = None
    npts: int = 8192

    def __post_init__(self):
        if not (self.beta > 0.0):
            raise ValueError(f"beta must be positive or inf, got {self.beta}")
        if self.pmax is None:
            object.__setattr__(
                self, "pmax", 200.0 / self.beta if math.isfinite(self.beta) else 200.0
            )
        if not self.pmax > 0.0:
            raise ValueError(f"pmax must be positive, got {self.pmax}")
        if self.npts < 16:
            raise ValueError(f"npts must be at least 16, got {self.npts}")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.beta)


class RayDirection(Enum):
    PLUS = "plus"
    MINUS = "minus"


def _require_finite(ctx: ThermalContext, what: str):
    if not ctx.finite:
        raise DomainViolation(f"{what} requires finite beta, got beta=inf")


def xi_chart(ctx: ThermalContext, direction: RayDirection, x):
    """Linearizing coordinate of the half-line flows.

    Strictly increasing; range (-beta/2pi, inf) for PLUS and
    (-inf, beta/2pi) for MINUS.
    """
    _require_finite(ctx, "xi_chart")
    b = ctx.beta / TWO_PI
    x = np.asarray(x, dtype=float)
    if direction is RayDirection.PLUS:
        out = b * np.expm1(x / b)
    else:
        out = -b * np.expm1(-x / b)
    return out if out.ndim else float(out)


def xi_inverse(ctx: ThermalContext, direction: RayDirection, xi):
    """Inverse of xi_chart; raises outside the open range of the chart."""
    _require_finite(ctx, "xi_inverse")
    b = ctx.beta / TWO_PI
    xi = np.asarray(xi, dtype=float)
    if direction is RayDirection.PLUS:
        arg = xi / b
        if np.any(arg <= -1.0):
            raise DomainViolation(
                f"xi out of range: need xi > -beta/(2 pi) = {-b}, got min {np.min(xi)}"
            )
        out = b * np.log1p(arg)
    else:
        arg = -xi / b
        if np.any(arg <= -1.0):
            raise DomainViolation(
                f"xi out of range: need xi < beta/(2 pi) = {b}, got max {np.max(xi)}"
            )
        out = -b * np.log1p(arg)
    return out if out.ndim else float(out)


def _phi_plus(beta: float, u: float, x):
    """Modular flow on the right half-line.

    phi_+(u, x) = (beta/2pi) log{ 1 + e^{-2pi u}(e^{2pi x/beta} - 1) },
    i.e. scaling by e^{-2pi u} in the plus chart.  Two cancellation-free
    forms cover the sign of u:

        u > 0:  b * logaddexp(x/b - 2pi u, log(1 - e^{-2pi u}))
        u < 0:  x - beta u + b * log1p((e^{2pi u} - 1) e^{-x/b})

    with b = beta/2pi.  The first is a sum of exponentials (both terms
    positive), the second isolates the small correction; both stay exact for
    |x| << beta and |x| >> beta.
    """
    b = beta / TWO_PI
    x = np.asarray(x, dtype=float)
    if u == 0.0:
        return x.copy()
    if u > 0.0:
        rest = -math.expm1(-TWO_PI * u)  # 1 - e^{-2pi u} in (0, 1)
        return b * np.logaddexp(x / b - TWO_PI * u, math.log(rest))
    # u < 0: scaled-chart form, exact at the fixed point x = 0; the scaled
    # term e^{-2pi u} expm1(x/b) would overflow for x/b - 2pi u > ~709, where
    # the translation-dominated form takes over
    out = np.empty_like(x)
    big = x / b - TWO_PI * u > 700.0
    if np.any(big):
        rest = -math.expm1(-TWO_PI * u)  # negative for u < 0
        out[big] = x[big] - beta * u + b * np.log1p(rest * np.exp(-x[big] / b))
    small = ~big
    if np.any(small):
        arg = math.exp(-TWO_PI * u) * np.expm1(x[small] / b)
        if np.any(arg <= -1.0):
            floor = b * math.log(-math.expm1(TWO_PI * u))
            raise DomainViolation(
                "modular flow undefined: 1 + e^{-2 pi u}(e^{2 pi x/beta} - 1) "
                f"must be positive; needs x > {floor} at u={u}, got "
                f"x={np.min(x[small])}"
            )
        out[small] = b * np.log1p(arg)
    return out


def modular_flow_ray(ctx: ThermalContext, direction: RayDirection, u: float, x):
    """Point map of the modular flow of the half-line algebra.

    PLUS direction: defined where 1 + e^{-2pi u}(e^{2pi x/beta} - 1) > 0;
    MINUS is the reflection -phi_+(-u, -x).  For beta = inf the maps are the
    dilations e^{-2pi u} x (PLUS) and e^{+2pi u} x (MINUS).
    """
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    if not ctx.finite:
        sign = 1.0 if direction is RayDirection.PLUS else -1.0
        out = math.exp(-TWO_PI * sign * u) * x_arr
    elif direction is RayDirection.PLUS:
        out = _phi_plus(ctx.beta, u, x_arr)
    else:
        out = -_phi_plus(ctx.beta, -u, -x_arr)
    return float(out[0]) if scalar else out


def _psi_plus(beta: float, tau: float, x):
    """Positive-generator flow on the right half-line.

    psi_+(tau, x) = (beta/2pi) log{ e^{2pi x/beta} + 2pi tau/beta },
    i.e. translation by tau in the plus chart.  For tau > 0 this is a
    logaddexp of two positive terms (exact down to results below the
    smallest subnormal); for tau < 0 the correction form
    x + b log1p(r e^{-x/b}) is used on its domain x > b log(-r).
    """
    b = beta / TWO_PI
    x = np.asarray(x, dtype=float)
    if tau == 0.0:
        return x.copy()
    r = tau / b
    if tau > 0.0:
        return b * np.logaddexp(x / b, math.log(r))
    floor = b * math.log(-r)
    if np.any(x <= floor):
        raise DomainViolation(
            "positive-generator flow undefined: 1 + (2 pi tau/beta) "
            f"e^{{-2 pi x/beta}} must be positive; needs x > {floor} at "
            f"tau={tau}, got x={np.min(x)}"
        )
    return x + b * np.log1p(r * np.exp(-x / b))


def gamma_flow_ray(ctx: ThermalContext, direction: RayDirection, tau: float, x):
    """Point map of the positive-generator flow: translation by tau in the chart.

    PLUS direction: defined where 1 + (2pi tau/beta) e^{-2pi x/beta} > 0;
    MINUS (defined where 1 - (2pi tau/beta) e^{+2pi x/beta} > 0) is the
    reflection -psi_+(-tau, -x).  For beta = inf both reduce to x + tau.
    """
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    if not ctx.finite:
        out = x_arr + tau
    elif direction is RayDirection.PLUS:
        out = _psi_plus(ctx.beta, tau, x_arr)
    else:
        out = -_psi_plus(ctx.beta, -tau, -x_arr)
    return float(out[0]) if scalar else out


def check_translation_commutation(ctx: ThermalContext, u: float, t: float, x_grid):
    """Deviation in the point-map form of the translation/modular commutation.

    Conjugating a translation by t with the modular flow at parameter u is a
    translation by phi_+(u, t) followed by the modular flow at
    v = (phi_+(u, t) - t)/beta:

        phi_+(u, phi_+(-u, x) + t) = phi_+(v, x) + phi_+(u, t).

    Returns the maximum absolute deviation over x_grid.
    """
    x = np.asarray(x_grid, dtype=float)
    if not ctx.finite:
        # vacuum form: phi(u, x + t-scaled); both sides reduce to
        # e^{-2pi u}(e^{2pi u} x + t) = x + e^{-2pi u} t
        lhs = math.exp(-TWO_PI * u) * (math.exp(TWO_PI * u) * x + t)
        rhs = x + math.exp(-TWO_PI * u) * t
        return float(np.max(np.abs(lhs - rhs)))
    phi_ut = modular_flow_ray(ctx, RayDirection.PLUS, u, t)
    v = (phi_ut - t) / ctx.beta
    lhs = modular_flow_ray(
        ctx, RayDirection.PLUS, u, modular_flow_ray(ctx, RayDirection.PLUS, -u, x) + t
    )
    rhs = modular_flow_ray(ctx, RayDirection.PLUS, v, x) + phi_ut
    return float(np.max(np.abs(lhs - rhs)))
