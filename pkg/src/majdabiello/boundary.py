"""The Laplace-transform boundary operator of the linear half-line problem.

For boundary data h (extended by zero to t < 0) the operator

    W1 h(x, t) = (1 / 2 pi) int_0^inf exp(omega rho^{1/3} x) rho_cut(rho^{1/3} x)
                 exp(i rho t) h_hat(rho) d rho,        omega = -sqrt(3)/2 - i/2,

is written in the variable rho = beta^3, where the time oscillation has a
fixed frequency.  ``2 Re W1 h`` solves u_t + u_xxx = 0 on x > 0 with zero
initial data and trace h.  For the dispersion coefficient alpha the spatial
argument is x / alpha^{1/3}, which keeps each rho-mode an exact solution of
u_t + alpha u_xxx = 0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .errors import OffGridTraceWarning, QuadratureTailError, ValidationError
from .extension import HalfLineFunction
from .propagators import rho_cutoff
from .spectral import SpaceTimeField, SpaceTimeGrid

OMEGA = complex(-np.sqrt(3.0) / 2.0, -0.5)
EXPONENT_CAP = np.sqrt(3.0)


@dataclass(frozen=True, eq=False)
class BoundaryQuadrature:
    """Gauss-Legendre nodes and weights in rho for the half-line integral.

    The first panel [0, w] is mapped to beta = rho^{1/3} and split dyadically
    (the integrand is smooth in beta, not in rho); the rest are uniform rho
    panels of width w = pi / t_span, so each panel sees at most half a
    period of exp(i rho t) for |t| <= t_span.
    """

    rho: np.ndarray
    weights: np.ndarray
    panel_width: float
    rho_max: float
    t_span: float
    n_beta: int

    @classmethod
    def for_window(cls, n_beta: int, t_span: float, order: int = 8, dyadic_levels: int = 4) -> "BoundaryQuadrature":
        if n_beta < 4 * order or n_beta % order:
            raise ValidationError(f"n_beta={n_beta} must be a multiple of {order} and at least {4 * order}")
        if not t_span > 0:
            raise ValidationError(f"t_span must be positive, got {t_span}")
        gx, gw = np.polynomial.legendre.leggauss(order)
        width = np.pi / t_span
        panels = n_beta // order
        n_uniform = panels - dyadic_levels - 1
        if n_uniform < 1:
            raise ValidationError("too few quadrature panels for the requested dyadic levels")

        b1 = width ** (1.0 / 3.0)
        edges = np.concatenate([[0.0], b1 * 2.0 ** -np.arange(dyadic_levels - 1, -1, -1.0)])
        betas, beta_w = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            betas.append(0.5 * (b - a) * gx + 0.5 * (a + b))
            beta_w.append(0.5 * (b - a) * gw)
        beta = np.concatenate(betas)
        rho_small = beta**3
        w_small = 3.0 * beta**2 * np.concatenate(beta_w)

        starts = width * np.arange(1, n_uniform + 1)
        rho_big = (starts[:, None] + 0.5 * width * (gx[None, :] + 1.0)).ravel()
        w_big = np.tile(0.5 * width * gw, n_uniform)
        rho = np.concatenate([rho_small, rho_big])
        weights = np.concatenate([w_small, w_big])
        return cls(rho, weights, width, float(width * (n_uniform + 1)), float(t_span), int(n_beta))

    @property
    def beta(self) -> np.ndarray:
        return np.cbrt(self.rho)

    @property
    def beta_max(self) -> float:
        return float(np.cbrt(self.rho_max))


def _moments(rho, delta, count=4):
    """M_m(rho) = int_0^delta s^m exp(-i rho s) ds for m < count."""
    rho = np.asarray(rho, dtype=float)
    z = rho * delta
    out = np.empty((count,) + rho.shape, dtype=complex)
    small = np.abs(z) < 1.0
    zs = -1j * z[small]
    for m in range(count):
        term = np.ones_like(zs)
        acc = term / (m + 1)
        for k in range(1, 30):
            term = term * zs / k
            acc = acc + term / (m + k + 1)
        out[m][small] = acc * delta ** (m + 1)
    rl = rho[~small]
    e = np.exp(-1j * rl * delta)
    prev = (1.0 - e) / (1j * rl)
    out[0][~small] = prev
    for m in range(1, count):
        prev = (m * prev - delta**m * e) / (1j * rl)
        out[m][~small] = prev
    return out


def spline_fourier(h: HalfLineFunction, taus, chunk: int = 256) -> np.ndarray:
    """int_0^X exp(-i tau t) S(t) dt with S the cubic spline through the samples.

    Each cubic piece is integrated exactly, so the only error is the spline
    interpolation error.  This is the transform of the zero extension.
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    spline = h.spline
    coef = spline.c  # shape (4, pieces); highest power first
    starts = spline.x[:-1]
    delta = h.spacing
    out = np.empty(taus.shape, dtype=complex)
    for lo in range(0, taus.size, chunk):
        tau = taus[lo : lo + chunk]
        mom = _moments(tau, delta)  # (4, chunk)
        piece = sum(np.outer(mom[m], coef[3 - m]) for m in range(4))  # (chunk, pieces)
        out[lo : lo + chunk] = np.sum(piece * np.exp(-1j * np.outer(tau, starts)), axis=1)
    return out


def temporal_fourier_halfline(h: HalfLineFunction, taus) -> np.ndarray:
    """Whole-line temporal transform of chi_[0, inf) h."""
    return spline_fourier(h, taus)


@dataclass(frozen=True)
class TailReport:
    rho_max: float
    decay_exponent: float
    tail: float


def tail_estimate(hhat: np.ndarray, quad: BoundaryQuadrature, t_min: float | None = None) -> TailReport:
    """Relative size of the neglected integral over rho > rho_max.

    A power law |h_hat| ~ rho^-p is fitted on [rho_max/2, rho_max].  The
    absolute tail mass |h_hat(R)| R / (p - 1) is compared with the
    oscillatory bound |h_hat(R)| / t_min from one integration by parts, and
    the smaller one is reported relative to int |h_hat|.
    """
    mag = np.abs(hhat)
    total = float(np.sum(quad.weights * mag))
    if total == 0.0:
        return TailReport(quad.rho_max, np.inf, 0.0)
    sel = (quad.rho >= 0.5 * quad.rho_max) & (mag > 0)
    edge = float(mag[-1])
    if np.count_nonzero(sel) >= 2:
        slope = np.polyfit(np.log(quad.rho[sel]), np.log(mag[sel]), 1)[0]
        p = float(-slope)
    else:
        p = np.inf
    mass = edge * quad.rho_max / (p - 1.0) if p > 1.0 else np.inf
    t_min = quad.t_span / 128.0 if t_min is None else t_min
    oscill = edge / t_min
    return TailReport(quad.rho_max, p, min(mass, oscill) / total)


def spatial_kernel(x_scaled, quad: BoundaryQuadrature, conjugate: bool = False) -> np.ndarray:
    """exp(omega beta x) rho_cut(beta x) on the (x, rho) mesh, exponent capped."""
    bx = np.outer(x_scaled, quad.beta)
    omega = np.conj(OMEGA) if conjugate else OMEGA
    expo = omega * bx
    expo = np.minimum(expo.real, EXPONENT_CAP) + 1j * expo.imag
    cut = rho_cutoff(bx)
    return np.where(cut > 0, np.exp(expo) * cut, 0.0)


def _scaled_x(x, alpha):
    if not 0.0 < alpha <= 1.0:
        raise ValidationError(f"dispersion coefficient alpha={alpha} outside (0, 1]")
    return np.asarray(x, dtype=float) / np.cbrt(alpha)


def w1_evaluate(hhat, quad: BoundaryQuadrature, x, t, alpha: float = 1.0) -> np.ndarray:
    """W1 h on the mesh x times t, given h_hat at the quadrature nodes."""
    kern = spatial_kernel(_scaled_x(x, alpha), quad) * (quad.weights * hhat / (2.0 * np.pi))[None, :]
    return kern @ np.exp(1j * np.outer(quad.rho, np.asarray(t, dtype=float)))


def w2_evaluate(hhat_neg, quad: BoundaryQuadrature, x, t, alpha: float = 1.0) -> np.ndarray:
    """The conjugate operator: (1/2pi) int_0^inf e^{conj(omega) beta x} rho_cut e^{-i rho t} h_hat(-rho)."""
    kern = spatial_kernel(_scaled_x(x, alpha), quad, conjugate=True)
    kern = kern * (quad.weights * hhat_neg / (2.0 * np.pi))[None, :]
    return kern @ np.exp(-1j * np.outer(quad.rho, np.asarray(t, dtype=float)))


def check_tail(hhat, quad: BoundaryQuadrature, tail_tol: float, t_min: float | None = None) -> TailReport:
    report = tail_estimate(hhat, quad, t_min)
    if report.tail > tail_tol:
        raise QuadratureTailError(
            f"boundary quadrature tail {report.tail:.3g} exceeds {tail_tol:g} "
            f"(rho_max={report.rho_max:.4g}, decay exponent {report.decay_exponent:.3g}); increase n_beta",
            tail=report.tail,
        )
    return report


def w1_apply(
    h: HalfLineFunction,
    grid: SpaceTimeGrid,
    alpha: float = 1.0,
    quad: BoundaryQuadrature | None = None,
    n_beta: int = 2048,
    tail_tol: float = 0.05,
) -> SpaceTimeField:
    """W1 h at every node of ``grid``; raises QuadratureTailError on a large tail."""
    quad = BoundaryQuadrature.for_window(n_beta, grid.horizon) if quad is None else quad
    hhat = temporal_fourier_halfline(h, quad.rho)
    check_tail(hhat, quad, tail_tol, grid.dt)
    return SpaceTimeField(grid, w1_evaluate(hhat, quad, grid.space.x, grid.t, alpha))


def w0_solve_linear_ibvp(
    h: HalfLineFunction,
    grid: SpaceTimeGrid,
    alpha: float = 1.0,
    quad: BoundaryQuadrature | None = None,
    n_beta: int = 2048,
    tail_tol: float = 0.05,
) -> SpaceTimeField:
    """Real solution 2 Re W1 h of the linear problem with zero initial data and trace h."""
    w1 = w1_apply(h, grid, alpha, quad, n_beta, tail_tol)
    return SpaceTimeField(grid, 2.0 * w1.values.real)


def boundary_trace(F: SpaceTimeField, x0: float = 0.0) -> np.ndarray:
    """F(x0, .): a slice when x0 is a node, else 4-point Lagrange interpolation (flagged)."""
    x = F.grid.space.x
    h = F.grid.space.h
    pos = (x0 - x[0]) / h
    j = int(round(pos))
    if abs(pos - j) < 1e-9 and 0 <= j < x.size:
        return F.values[j].copy()
    warnings.warn(f"trace point x={x0} is off-grid; using 4-point interpolation", OffGridTraceWarning, stacklevel=2)
    base = min(max(int(np.floor(pos)) - 1, 0), x.size - 4)
    nodes = np.arange(base, base + 4)
    out = np.zeros(F.values.shape[1], dtype=F.values.dtype)
    for i in nodes:
        others = nodes[nodes != i]
        weight = np.prod([(pos - k) / (i - k) for k in others])
        out = out + weight * F.values[i]
    return out


def linear_pde_residual(hhat, quad: BoundaryQuadrature, x, t, alpha: float = 1.0, step: float = 0.01) -> np.ndarray:
    """Central-difference u_t + alpha u_xxx for u = 2 Re W1 h at the mesh x times t.

    The operator is evaluated directly at the stencil points, so the
    residual measures the O(step^2) stencil error of an exact solution.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))

    def u(xs, ts):
        return 2.0 * w1_evaluate(hhat, quad, xs, ts, alpha).real

    ut = (u(x, t + step) - u(x, t - step)) / (2.0 * step)
    uxxx = (u(x + 2 * step, t) - 2.0 * u(x + step, t) + 2.0 * u(x - step, t) - u(x - 2 * step, t)) / (2.0 * step**3)
    return ut + alpha * uxxx


def residual_ladder(h: HalfLineFunction, alpha: float = 1.0, steps=(0.01, 0.005, 0.0025), n_beta: int = 2048, t_span: float = 8.0, x=None, t=None):
    """max |residual| on a fixed interior mesh for each stencil step, and the observed orders."""
    quad = BoundaryQuadrature.for_window(n_beta, t_span)
    hhat = temporal_fourier_halfline(h, quad.rho)
    x = np.linspace(0.5, 3.0, 6) if x is None else x
    t = np.linspace(0.5, 3.0, 6) if t is None else t
    errs = np.array([np.abs(linear_pde_residual(hhat, quad, x, t, alpha, k)).max() for k in steps])
    orders = np.log(errs[:-1] / errs[1:]) / np.log(np.asarray(steps[:-1]) / np.asarray(steps[1:]))
    return errs, orders


def trace_recovery_error(
    h: HalfLineFunction, n_beta: int = 2048, t_span: float = 8.0, t_range=(0.1, 3.0), n_t: int = 600, alpha: float = 1.0
) -> float:
    """||(2 Re W1 h)(0, .) - h||_{L^2(t_range)} / ||h||_{L^2(t_range)}."""
    quad = BoundaryQuadrature.for_window(n_beta, t_span)
    hhat = temporal_fourier_halfline(h, quad.rho)
    t = np.linspace(*t_range, n_t)
    trace = 2.0 * w1_evaluate(hhat, quad, [0.0], t, alpha)[0].real
    exact = h(t)
    return float(np.sqrt(trapezoid((trace - exact) ** 2, t) / trapezoid(exact**2, t)))
