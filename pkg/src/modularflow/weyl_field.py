"""Generalized free field on a light ray in a quasi-free thermal state.

The field with scaling index n has one-particle weight p^{2n}; exponentiated
(Weyl) generators obey

    W(f) W(g) = e^{-K(f, g)/2} W(f + g),
    K(f, g)   = int p^{2n+1} ft(-p) gt(p) dp,

with ft(p) = (1/2pi) int e^{-ipx} f(x) dx, and the thermal state at inverse
temperature beta is the Gaussian

    omega(W(f)) = exp(-c * omega2(f, f)),
    omega2(f, g) = int dens(p) ft(-p) gt(p) dp,
    dens(p)      = p^{2n+1} / (1 - e^{-beta p}).

Momentum space is the ground truth for all bilinear forms; the regularized
position kernel is provided as a cross-check only, related to the momentum
pairing by one global constant fixed numerically (see
calibrate_fourier_pair).

All integrals run on a fixed symmetric momentum grid (composite Simpson),
with transforms evaluated by the chirp-z algorithm, so results are
deterministic and bit-stable across runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson, simpson
from scipy.interpolate import CubicSpline
from scipy.signal import czt

from .errors import DomainViolation, QuadratureError, ResolutionError
from .flow_maps import RayDirection, ThermalContext, gamma_flow_ray, modular_flow_ray

TWO_PI = 2.0 * math.pi


# ----------------------------------------------------------------------
# test functions
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    """Real function sampled on a uniform grid with declared support.

    For compact_support=True (the default) the samples must vanish outside
    the declared support interval; transforms of higher-index fields return
    compact_support=False, where the support field records the sampled
    window only.
    """

    __test__ = False  # keep pytest from collecting this as a test class

    samples: np.ndarray
    x0: float
    dx: float
    support: tuple[float, float]
    compact_support: bool = True

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float)  # own copy, frozen below
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        if arr.ndim != 1 or len(arr) < 2:
            raise ValueError("samples must be a 1D array with at least 2 entries")
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        a, b = self.support
        if not a < b:
            raise ValueError(f"support must be a nonempty interval, got {self.support}")
        tol = 1e-6 * self.dx + 1e-12 * max(1.0, abs(a), abs(b))
        lo, hi = self.x0, self.x0 + (len(arr) - 1) * self.dx
        if a < lo - tol or b > hi + tol:
            raise ValueError("grid must cover the declared support")
        interior = np.count_nonzero((self.x > a) & (self.x < b))
        if interior < 8:
            raise ValueError("support must contain at least 8 interior grid nodes")
        if self.compact_support:
            outside = (self.x < a - tol) | (self.x > b + tol)
            if np.any(arr[outside] != 0.0):
                raise ValueError("samples must vanish outside the declared support")

    @cached_property
    def x(self) -> np.ndarray:
        g = self.x0 + self.dx * np.arange(len(self.samples))
        g.setflags(write=False)
        return g

    @cached_property
    def _spline(self) -> CubicSpline:
        return CubicSpline(self.x, self.samples)

    def __call__(self, pts):
        """Evaluate by cubic spline; zero outside the sampled window."""
        pts = np.asarray(pts, dtype=float)
        scalar = pts.ndim == 0
        pts = np.atleast_1d(pts)
        out = np.zeros_like(pts)
        a, b = self.support
        if not self.compact_support:
            a, b = self.x[0], self.x[-1]
        inside = (pts >= a) & (pts <= b)
        if np.any(inside):
            out[inside] = self._spline(pts[inside])
        return float(out[0]) if scalar else out

    @staticmethod
    def bump(
        center: float, halfwidth: float, n: int = 2048, amplitude: float = 1.0
    ) -> "TestFunction":
        """Smooth bump amplitude * exp(-1/(1 - s^2)), s = (x-center)/halfwidth.

        Exactly supported on [center - halfwidth, center + halfwidth].
        """
        if halfwidth <= 0:
            raise ValueError("halfwidth must be positive")
        x = np.linspace(center - halfwidth, center + halfwidth, n)
        s = (x - center) / halfwidth
        vals = np.zeros_like(x)
        inside = np.abs(s) < 1.0
        vals[inside] = amplitude * np.exp(-1.0 / (1.0 - s[inside] ** 2))
        return TestFunction(
            vals, x[0], x[1] - x[0], (center - halfwidth, center + halfwidth)
        )

    def translate(self, t: float) -> "TestFunction":
        """Shift by t: x -> x - t maps onto the same samples (exact)."""
        a, b = self.support
        return replace(self, x0=self.x0 + t, support=(a + t, b + t))

    def scaled(self, factor: float) -> "TestFunction":
        return replace(self, samples=self.samples * factor)

    def to_dict(self) -> dict:
        return {
            "x0": self.x0,
            "dx": self.dx,
            "support": list(self.support),
            "samples": self.samples.tolist(),
            "compact_support": self.compact_support,
        }

    @staticmethod
    def from_dict(d: dict) -> "TestFunction":
        return TestFunction(
            np.asarray(d["samples"], dtype=float),
            float(d["x0"]),
            float(d["dx"]),
            (float(d["support"][0]), float(d["support"][1])),
            bool(d.get("compact_support", True)),
        )

    def save(self, path: str):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @staticmethod
    def load(path: str) -> "TestFunction":
        with open(path) as fh:
            return TestFunction.from_dict(json.load(fh))


@dataclass(frozen=True)
class FieldSpec:
    """Field selector: one-particle weight p^{2n}, scaling dimension n + 1."""

    n: int = 0

    def __post_init__(self):
        if self.n < 0 or self.n != int(self.n):
            raise ValueError(f"scaling index must be a non-negative integer, got {self.n}")


@dataclass(frozen=True)
class StateNormalization:
    """Constant c in omega(W(f)) = exp(-c * omega2(f, f)); c > 0, default 1."""

    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"normalization must be positive, got {self.c}")


# ----------------------------------------------------------------------
# momentum grid and transforms
# ----------------------------------------------------------------------


@lru_cache(maxsize=8)
def _grid_cached(pmax: float, npts: int) -> np.ndarray:
    n = npts | 1  # composite Simpson wants an odd count
    p = np.linspace(-pmax, pmax, n)
    p.setflags(write=False)
    return p


def momentum_grid(ctx: ThermalContext) -> np.ndarray:
    return _grid_cached(ctx.pmax, ctx.npts)


def fourier(f: TestFunction, p: np.ndarray) -> np.ndarray:
    """Transform ft(p) = (1/2pi) int e^{-ipx} f(x) dx on a uniform symmetric grid.

    The grid sum is evaluated with the chirp-z algorithm; since f is smooth
    and vanishes at the sampled window's ends, the plain Riemann sum is
    spectrally accurate.  The grid must be symmetric about 0 with an odd
    node count; only the p >= 0 half is computed and the rest mirrored, so
    conjugate symmetry ft(-p) = conj(ft(p)) holds exactly for the real
    samples stored in a TestFunction.
    """
    p = np.asarray(p, dtype=float)
    if len(p) < 3 or len(p) % 2 == 0:
        raise ValueError("momentum grid needs an odd node count >= 3")
    dp = p[1] - p[0]
    if abs(p[0] + p[-1]) > 1e-9 * max(1.0, abs(p[-1])):
        raise ValueError("momentum grid must be symmetric about 0")
    if np.max(np.abs(np.diff(p) - dp)) > 1e-9 * dp:
        raise ValueError("momentum grid must be uniform")
    m = len(p) // 2 + 1
    half = czt(f.samples, m=m, w=np.exp(-1j * dp * f.dx), a=1.0 + 0.0j)
    half *= np.exp(-1j * p[m - 1 :] * f.x0) * (f.dx / TWO_PI)
    out = np.empty(len(p), dtype=complex)
    out[m - 1 :] = half
    out[: m - 1] = np.conj(half[1:])[::-1]
    return out


def _transform_plus(ctx: ThermalContext, f: TestFunction) -> np.ndarray:
    return fourier(f, momentum_grid(ctx))


def _reverse(t: np.ndarray) -> np.ndarray:
    """ft(p) -> ft(-p) on the symmetric grid."""
    return t[::-1]


def _weight(spec: FieldSpec, p: np.ndarray) -> np.ndarray:
    """Kernel weight p Q(p^2) = p^{2n+1}."""
    return p ** (2 * spec.n + 1)


def two_point_momentum(ctx: ThermalContext, spec: FieldSpec, p):
    """Thermal two-point density p^{2n+1}/(1 - e^{-beta p}).

    The removable singularity at p = 0 evaluates to 1/beta for n = 0 and to
    0 for n >= 1; both tails are handled without overflow.
    """
    if not ctx.finite:
        raise DomainViolation("two-point density requires finite beta")
    p = np.asarray(p, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p).astype(float)
    beta = ctx.beta
    out = np.empty_like(p)
    bp = beta * p
    tiny = np.abs(bp) < 1e-7
    # p/(1 - e^{-beta p}) = (1/beta) (1 + bp/2 + bp^2/12 + O(bp^4))
    base_tiny = (1.0 + bp[tiny] / 2.0 + bp[tiny] ** 2 / 12.0) / beta
    out[tiny] = base_tiny * p[tiny] ** (2 * spec.n)
    rest = ~tiny
    bpr = bp[rest]
    with np.errstate(over="ignore"):
        denom = -np.expm1(-bpr)
    big_neg = bpr < -700.0
    base = np.empty_like(bpr)
    ok = ~big_neg
    base[ok] = p[rest][ok] / denom[ok]
    # beta p << -1: density ~ -p e^{beta p}, underflowing to +0
    base[big_neg] = -p[rest][big_neg] * np.exp(bpr[big_neg])
    out[rest] = base * p[rest] ** (2 * spec.n)
    return float(out[0]) if scalar else out


def two_point_position(ctx: ThermalContext, xi, epsilon: float):
    """Regularized position-space kernel (1/beta^2) sinh^{-2}(pi(xi + i eps)/beta).

    Only the lowest scaling index has this closed form; the asymptotic branch
    avoids complex-overflow artifacts for |xi| >> beta.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not ctx.finite:
        raise DomainViolation("position kernel requires finite beta")
    xi = np.asarray(xi, dtype=float)
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    beta = ctx.beta
    z_re = math.pi * xi / beta
    z_im = math.pi * epsilon / beta
    out = np.empty(xi.shape, dtype=complex)
    mod = np.abs(z_re) < 350.0
    if np.any(mod):
        out[mod] = 1.0 / (beta**2 * np.sinh(z_re[mod] + 1j * z_im) ** 2)
    far = ~mod
    if np.any(far):
        # sinh(z)^2 ~ e^{2|Re z|} e^{2i sgn(Re z) Im z} / 4
        out[far] = (
            4.0
            / beta**2
            * np.exp(-2.0 * np.abs(z_re[far]))
            * np.exp(-2j * np.sign(z_re[far]) * z_im)
        )
    return complex(out.flat[0]) if scalar else out


# narrow smooth bumps reach the default cutoff with relative tails around
# 1e-4; a genuinely unconverged quadrature shows an O(1) tail, which is what
# this guard is for
_TAIL_RTOL = 1e-3


def _tail_check(ctx: ThermalContext, integrand: np.ndarray, what: str):
    n_tail = max(4, len(integrand) // 100)
    tail = max(
        float(np.max(np.abs(integrand[:n_tail]))),
        float(np.max(np.abs(integrand[-n_tail:]))),
    )
    peak = float(np.max(np.abs(integrand)))
    if peak > 0 and tail > _TAIL_RTOL * peak:
        raise QuadratureError(
            f"{what}: integrand tail {tail:.3e} above {_TAIL_RTOL:.0e} * peak "
            f"{peak:.3e} at the momentum cutoff; increase pmax"
        )


def symplectic_K(
    ctx: ThermalContext, spec: FieldSpec, f: TestFunction, g: TestFunction
) -> complex:
    """Symplectic form K(f, g); purely imaginary and antisymmetric on real pairs.

    The integrand is antisymmetrized before summation, which makes
    K(f, g) = -K(g, f) and K(f, f) = 0 hold exactly in the quadrature.
    """
    p = momentum_grid(ctx)
    w = _weight(spec, p)
    tf, tg = _transform_plus(ctx, f), _transform_plus(ctx, g)
    a = w * _reverse(tf) * tg
    b = w * _reverse(tg) * tf
    integrand = 0.5 * (a - b)
    _tail_check(ctx, a, "symplectic form")
    val = simpson(integrand, dx=p[1] - p[0])
    return complex(0.0, float(val.imag))


def omega2(
    ctx: ThermalContext, spec: FieldSpec, f: TestFunction, g: TestFunction
) -> complex:
    """Thermal two-point form omega2(f, g); omega2(f, f) is real and >= 0."""
    p = momentum_grid(ctx)
    dens = two_point_momentum(ctx, spec, p)
    tf, tg = _transform_plus(ctx, f), _transform_plus(ctx, g)
    integrand = dens * _reverse(tf) * tg
    _tail_check(ctx, integrand, "two-point form")
    val = complex(simpson(integrand, dx=p[1] - p[0]))
    if f is g:
        val = complex(val.real, 0.0)
    return val


def _common_grid_difference(f: TestFunction, g: TestFunction) -> TestFunction:
    """f - g as a TestFunction on a grid covering both supports."""
    if (
        f.x0 == g.x0
        and f.dx == g.dx
        and len(f.samples) == len(g.samples)
        and f.support == g.support
    ):
        return replace(f, samples=f.samples - g.samples)
    a = min(f.support[0], g.support[0])
    b = max(f.support[1], g.support[1])
    dx = min(f.dx, g.dx)
    n = int(math.ceil((b - a) / dx)) + 1
    x = np.linspace(a, b, n)
    return TestFunction(f(x) - g(x), a, x[1] - x[0], (a, b))


def weyl_inner(
    ctx: ThermalContext,
    spec: FieldSpec,
    norm: StateNormalization,
    g: TestFunction,
    f: TestFunction,
) -> complex:
    """Gaussian overlap of Weyl vectors, e^{K(g,f)/2} exp(-c omega2(f-g, f-g))."""
    k = symplectic_K(ctx, spec, g, f)
    d = _common_grid_difference(f, g)
    o = omega2(ctx, spec, d, d).real
    return complex(np.exp(k / 2.0 - norm.c * o))


# ----------------------------------------------------------------------
# flow actions on smearing functions
# ----------------------------------------------------------------------


def modular_transform(
    ctx: ThermalContext, u: float, f: TestFunction, clip: bool = False
) -> TestFunction:
    """Smearing-function action of the half-line modular flow.

    The support moves forward along the flow while sample values pull back
    through the inverse point map.  For u < 0 the flow must be defined on
    all of the support (compact support in the right half-line always
    qualifies); with clip=True, u >= 0, functions reaching into the left
    half-line are admitted and the formula vanishes where the flow is
    undefined.
    """
    if not f.compact_support:
        raise ValueError("modular transform needs a compactly supported function")
    a, b = f.support
    if clip and u < 0:
        raise DomainViolation("clipped modular transform is defined for u >= 0 only")
    # domain check at the left support edge (worst case, map is monotone);
    # raises when the admissibility inequality fails
    new_a = modular_flow_ray(ctx, RayDirection.PLUS, u, a)
    new_b = modular_flow_ray(ctx, RayDirection.PLUS, u, b)
    n = len(f.samples)
    y = np.linspace(new_a, new_b, n)
    back = modular_flow_ray(ctx, RayDirection.PLUS, -u, y)
    vals = f(back)
    vals[0] = 0.0
    vals[-1] = 0.0
    return TestFunction(vals, y[0], y[1] - y[0], (new_a, new_b))


def gamma_transform(ctx: ThermalContext, tau: float, f: TestFunction) -> TestFunction:
    """Smearing-function action of the positive-generator flow, tau >= 0.

    The support moves by the flow; at tau >= beta/(2 pi) every compactly
    supported function lands in the right half-line.
    """
    if tau < 0:
        raise DomainViolation("positive-generator transform is defined for tau >= 0")
    if not f.compact_support:
        raise ValueError("transform needs a compactly supported function")
    a, b = f.support
    new_a = gamma_flow_ray(ctx, RayDirection.PLUS, tau, a)
    new_b = gamma_flow_ray(ctx, RayDirection.PLUS, tau, b)
    n = len(f.samples)
    y = np.linspace(new_a, new_b, n)
    back = gamma_flow_ray(ctx, RayDirection.PLUS, -tau, y)
    vals = f(back)
    vals[0] = 0.0
    vals[-1] = 0.0
    return TestFunction(vals, y[0], y[1] - y[0], (new_a, new_b))


# ----------------------------------------------------------------------
# derivatives and higher-index actions
# ----------------------------------------------------------------------


def _spectral_ok(vals: np.ndarray) -> bool:
    spec = np.abs(np.fft.rfft(vals, 2 * len(vals)))
    top = spec[-max(2, len(spec) // 50) :]
    peak = spec.max()
    return peak > 0 and top.max() < 1e-12 * peak


def _derivative_once_fd4(vals: np.ndarray, dx: float) -> np.ndarray:
    out = np.zeros_like(vals)
    out[2:-2] = (
        vals[:-4] - 8.0 * vals[1:-3] + 8.0 * vals[3:-1] - vals[4:]
    ) / (12.0 * dx)
    # one-sided 4th-order stencils at the edges
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * dx)
    for i in (0, 1):
        out[i] = np.dot(c, vals[i : i + 5])
        out[-1 - i] = -np.dot(c, vals[-1 - i : -6 - i : -1])
    return out


def _derivative_values(vals: np.ndarray, dx: float, n: int) -> np.ndarray:
    if _spectral_ok(vals):
        m = 2 * len(vals)
        freq = np.fft.rfftfreq(m, dx) * TWO_PI
        spec = np.fft.rfft(vals, m)
        out = np.fft.irfft(spec * (1j * freq) ** n, m)[: len(vals)]
    else:
        out = np.asarray(vals, dtype=float)
        for _ in range(n):
            out = _derivative_once_fd4(out, dx)
    return out


def nth_derivative(f: TestFunction, n: int) -> TestFunction:
    """n-th derivative on the same grid.

    Spectral differentiation (zero-padded FFT) when the sampled spectrum has
    decayed at the grid's Nyquist band, otherwise repeated 4th-order finite
    differences.
    """
    if n == 0:
        return f
    vals = _derivative_values(f.samples, f.dx, n).copy()
    vals[0] = 0.0
    vals[-1] = 0.0
    return replace(f, samples=vals)


def _resolution_guard(f: TestFunction, n: int, tol: float = 1e-3):
    """Compare against the half-resolution derivative; raise when they disagree."""
    if len(f.samples) < 65:
        raise ResolutionError("grid too coarse for derivative estimation")
    d_full = nth_derivative(f, n)
    d_half = _derivative_values(f.samples[::2], 2.0 * f.dx, n)
    ref = np.max(np.abs(d_full.samples))
    if ref == 0.0:
        return d_full
    dev = np.max(np.abs(d_full.samples[::2] - d_half)) / ref
    if dev > tol:
        raise ResolutionError(
            f"derivative of order {n} unresolved: full/half-grid estimates "
            f"deviate by {dev:.2e} (tolerance {tol:.0e}); refine the grid"
        )
    return d_full


def higher_transform(
    ctx: ThermalContext, n: int, which: str, param: float, f: TestFunction
) -> TestFunction:
    """Flow action on smearing functions of the field with scaling index n.

    For n >= 1 the action is the n-fold iterated integral from 0 of the
    index-0 action on the n-th derivative; the result generally grows like
    x^{n-1} and is returned on an extended grid with compact_support=False.
    Requires supp f inside the positive half-line for n >= 1.
    """
    if which not in ("modular", "gamma"):
        raise ValueError(f"which must be 'modular' or 'gamma', got {which!r}")
    if n == 0:
        if which == "modular":
            return modular_transform(ctx, param, f)
        return gamma_transform(ctx, param, f)
    if f.support[0] <= 0.0:
        raise DomainViolation(
            "higher-index actions need supp f inside the positive half-line"
        )
    deriv = _resolution_guard(f, n)
    if which == "modular":
        moved = modular_transform(ctx, param, deriv)
    else:
        moved = gamma_transform(ctx, param, deriv)
    lo = 0.0
    hi = moved.support[1] + max(
        2.0 * (ctx.beta if ctx.finite else 1.0),
        moved.support[1] - moved.support[0],
        f.support[1] - f.support[0],
    )
    m = min(2 * len(f.samples) + 1, 8193)
    x = np.linspace(lo, hi, m)
    vals = moved(x)
    for _ in range(n):
        vals = cumulative_simpson(vals, x=x, initial=0.0)
    return TestFunction(
        vals, float(x[0]), float(x[1] - x[0]), (float(x[0]), float(x[-1])),
        compact_support=False,
    )


def localization_defect(
    ctx: ThermalContext, n: int, u: float, f: TestFunction, interval: tuple[float, float]
) -> float:
    """Interval integral certifying (dis)localization of the modular action.

    For n >= 1: the integral of the index-0 modular action applied to the
    n-th derivative over the interval.  A nonzero value stable under
    enlarging the interval shows the transformed observable fits in no
    bounded region.  For n = 0 the analogous integral of the derivative of
    the transformed function is returned; it vanishes once the interval
    covers the image support (compact support is preserved).
    """
    if n >= 1:
        if f.support[0] <= 0.0:
            raise DomainViolation(
                "localization defect needs supp f inside the positive half-line"
            )
        integrand = modular_transform(ctx, u, _resolution_guard(f, n))
    else:
        integrand = nth_derivative(modular_transform(ctx, u, f), 1)
    lo = max(interval[0], integrand.support[0])
    hi = min(interval[1], integrand.support[1])
    if lo >= hi:
        return 0.0
    x = np.linspace(lo, hi, 4097)
    return float(simpson(integrand(x), dx=x[1] - x[0]))


# ----------------------------------------------------------------------
# position-space cross-check
# ----------------------------------------------------------------------


def omega2_position(
    ctx: ThermalContext,
    f: TestFunction,
    g: TestFunction,
    epsilon: float,
    boundary: str = "lower",
) -> complex:
    """Two-point form smeared with the regularized position kernel.

    Integrates kernel(y - x) f(x) g(y) using the correlation
    F(s) = int f(x) g(x + s) dx on a grid fine enough to resolve epsilon.
    boundary selects the side of the real axis: "upper" is the kernel as
    written (+i eps), "lower" its complex conjugate, which is the boundary
    value matching the momentum-space pairing.
    """
    if boundary not in ("upper", "lower"):
        raise ValueError(f"boundary must be 'upper' or 'lower', got {boundary!r}")
    # both functions sampled with one exact common step, so the correlation
    # lattice lines up
    dx = min(f.dx, g.dx)

    def on_step(fn: TestFunction):
        a, b = fn.support
        count = int(math.ceil((b - a) / dx - 1e-12)) + 1
        return a, fn(a + dx * np.arange(count))

    af, vf = on_step(f)
    ag, vg = on_step(g)
    corr = np.correlate(vg, vf, mode="full") * dx
    s0 = ag - (af + (len(vf) - 1) * dx)
    s = s0 + np.arange(len(corr)) * dx
    F = CubicSpline(s, corr)
    h = min(dx, epsilon / 16.0)
    n = int(math.ceil((s[-1] - s[0]) / h)) | 1
    sf = np.linspace(s[0], s[-1], n + 1)
    k = two_point_position(ctx, sf, epsilon)
    if boundary == "lower":
        k = np.conj(k)
    return complex(simpson(k * F(sf), dx=sf[1] - sf[0]))


@dataclass(frozen=True)
class FourierPairCalibration:
    """Constant tying the position kernel to the momentum pairing."""

    constant: complex
    max_relative_deviation: float


def _omega2_damped(
    ctx: ThermalContext, spec: FieldSpec, f: TestFunction, g: TestFunction, epsilon: float
) -> complex:
    """Momentum pairing with the e^{-eps p} damping matching the kernel's eps."""
    if epsilon >= ctx.beta:
        raise ValueError("damping scale must stay below beta")
    p = momentum_grid(ctx)
    dens = two_point_momentum(ctx, spec, p) * np.exp(-epsilon * p)
    tf, tg = _transform_plus(ctx, f), _transform_plus(ctx, g)
    return complex(simpson(dens * _reverse(tf) * tg, dx=p[1] - p[0]))


def calibrate_fourier_pair(
    ctx: ThermalContext,
    pairs: list[tuple[TestFunction, TestFunction]],
    epsilon: float,
) -> FourierPairCalibration:
    """Fix the momentum/position constant on the first pair; check the rest.

    The ratio (damped momentum pairing) / (lower-boundary position smearing)
    must not depend on the pair; its spread is reported as
    max_relative_deviation.
    """
    if not pairs:
        raise ValueError("at least one pair is needed")
    spec = FieldSpec(0)
    ratios = []
    for f, g in pairs:
        mom = _omega2_damped(ctx, spec, f, g, epsilon)
        pos = omega2_position(ctx, f, g, epsilon, boundary="lower")
        ratios.append(mom / pos)
    c0 = ratios[0]
    dev = max(abs(r - c0) / abs(c0) for r in ratios)
    return FourierPairCalibration(constant=c0, max_relative_deviation=dev)
