"""The integral-equation map for the half-line system and its Picard iteration.

The fixed point (u, v) of

    Gamma_1 = eta W^t u0~ - eta int_0^t W^{t-t'} F dt' + 2 eta Re W1(f - p)
    Gamma_2 = eta W^t_a v0~ - eta int_0^t W^{t-t'}_a G dt' + 2 eta Re W1(g - q)(x / a^{1/3})

with F = eta(t/T) v v_x, G = eta(t/T) (u v)_x and p, q the x = 0 traces of the
first two terms solves

    u_t + u_xxx + v v_x = 0,   v_t + a v_xxx + (u v)_x = 0,   x > 0, 0 < t < T,

with u(x, 0) = u0, v(x, 0) = v0, u(0, t) = f, v(0, t) = g.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .boundary import OMEGA, BoundaryQuadrature, TailReport, check_tail, spline_fourier, spatial_kernel
from .errors import AdmissibilityWarning, ConvergenceError, IncompatibleDataWarning, ValidationError
from .extension import EXTENSIONS, HalfLineFunction, extend, halfline_norm_upper
from .propagators import airy_multiplier, duhamel_spectrum, eta, phi_weights
from .spectral import (
    Grid1D,
    NormSpec,
    SpaceTimeField,
    SpaceTimeGrid,
    SpectralField,
    dealias_mask,
    derivative_multiplier,
    fourier_x,
    inverse_fourier_x,
    spacetime_norm,
)

log = logging.getLogger(__name__)

EXCLUDED_S = (0.5, 1.5)


def exponents(s: float) -> tuple[float, float, float]:
    """(eps, b, gamma) with b = 1/2 - 2 eps, gamma = 1/2 + eps.

    eps is a quarter of the gap 1/2 - max(lower, 7/16), where lower is
    (3 - s)/6 below s = 1/2 and (s + 1)/6 above, so b clears both bounds.
    """
    lower = (3.0 - s) / 6.0 if s < 0.5 else (s + 1.0) / 6.0
    gap = 0.5 - max(lower, 7.0 / 16.0)
    if gap <= 0:
        raise ValidationError(f"no admissible exponent b exists for s={s}")
    eps = gap / 4.0
    return eps, 0.5 - 2.0 * eps, 0.5 + eps


def validate_s(s: float) -> None:
    if not 0.0 < s < 2.0 or any(np.isclose(s, e, rtol=0, atol=1e-12) for e in EXCLUDED_S):
        raise ValidationError(
            f"s={s:g} excluded: the local well-posedness result requires 0<s<2 with s != 1/2, 3/2"
        )


def validate_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha={alpha:g} excluded: the coupling parameter must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    alpha: float
    s: float
    u0: HalfLineFunction
    v0: HalfLineFunction
    f: HalfLineFunction
    g: HalfLineFunction
    compat_tol: float = 1e-10

    @property
    def compatibility(self) -> tuple[bool, bool]:
        return (
            abs(self.u0.boundary_value - self.f.boundary_value) <= self.compat_tol,
            abs(self.v0.boundary_value - self.g.boundary_value) <= self.compat_tol,
        )

    def validate(self) -> "ProblemSpec":
        validate_alpha(self.alpha)
        validate_s(self.s)
        if not all(self.compatibility):
            if self.s > 0.5:
                raise ValidationError(
                    "s>1/2 requires compatible data u0(0)=f(0), v0(0)=g(0) "
                    f"(mismatch {self.u0.boundary_value - self.f.boundary_value:.3g}, "
                    f"{self.v0.boundary_value - self.g.boundary_value:.3g})"
                )
            warnings.warn("initial and boundary data disagree at the corner", IncompatibleDataWarning, stacklevel=2)
        return self

    def perturbed(self, delta: float, w_space: HalfLineFunction, w_time: HalfLineFunction) -> "ProblemSpec":
        return replace(
            self,
            u0=self.u0 + w_space.scaled(delta),
            v0=self.v0 + w_space.scaled(delta),
            f=self.f + w_time.scaled(delta),
            g=self.g + w_time.scaled(delta),
        )


@dataclass(frozen=True)
class SolverParams:
    T: float = 0.1
    n_x: int = 512
    n_t: int = 256
    L: float = 20.0
    window_factor: float = 4.0
    n_beta: int = 2048
    picard_tol: float = 1e-10
    max_iters: int = 50
    max_halvings: int = 4
    extension: str = "auto"
    tail_tol: float = 0.05
    taper_boundary: bool = True
    dealias: bool = True
    eps: float | None = None
    free_box_factor: int = 4

    def validate(self) -> "SolverParams":
        if not 0.0 < self.T < 1.0:
            raise ValidationError(f"local time T={self.T} must lie in (0, 1)")
        if self.window_factor < 2.0:
            raise ValidationError("the stored time window must be at least 2 T")
        if self.picard_tol <= 0 or self.max_iters < 1:
            raise ValidationError("picard_tol must be positive and max_iters at least 1")
        if self.extension != "auto" and self.extension not in EXTENSIONS:
            raise ValidationError(f"unknown extension {self.extension!r}; expected auto or one of {EXTENSIONS}")
        if self.free_box_factor < 1 or self.max_halvings < 0:
            raise ValidationError("free_box_factor must be at least 1 and max_halvings non-negative")
        self.grid()
        return self

    def grid(self, T: float | None = None) -> SpaceTimeGrid:
        T = self.T if T is None else T
        return SpaceTimeGrid(Grid1D(self.n_x, self.L), self.n_t, self.window_factor * T)

    def exponents(self, s: float) -> tuple[float, float, float]:
        if self.eps is None:
            return exponents(s)
        eps = self.eps
        b = 0.5 - 2.0 * eps
        lower = (3.0 - s) / 6.0 if s < 0.5 else (s + 1.0) / 6.0
        if not max(lower, 7.0 / 16.0) <= b < 0.5:
            raise ValidationError(f"eps={eps} gives b={b} outside the admissible range for s={s}")
        if np.isclose(b, 7.0 / 16.0):
            warnings.warn("b = 7/16 sits on the admissible boundary", AdmissibilityWarning, stacklevel=2)
        return eps, b, 0.5 + eps


@dataclass
class IterationReport:
    differences_u: list = field(default_factory=list)
    differences_v: list = field(default_factory=list)
    ratios: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    accepted_T: float = float("nan")
    attempts: list = field(default_factory=list)
    fixed_point_residual: float = float("nan")
    boundary_error_u: float = float("nan")
    boundary_error_v: float = float("nan")
    initial_error_u: float = float("nan")
    initial_error_v: float = float("nan")
    pde_residual: float = float("nan")

    @property
    def differences(self) -> list:
        return [a + b for a, b in zip(self.differences_u, self.differences_v)]

    def eventually_contracting(self, tail: int = 3) -> bool:
        r = [x for x in self.ratios if np.isfinite(x)]
        if not r:
            return self.converged
        return all(x < 1.0 for x in r[-tail:])

    def as_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items()}
        out["differences"] = self.differences
        return out


def y_norm(F: SpaceTimeField, s: float, b: float, gamma: float, alpha: float = 1.0) -> float:
    """Sum realization of the X^{s,b}_alpha intersect V^gamma norm."""
    kind = "Xsb" if alpha == 1.0 else "Xsb_alpha"
    return spacetime_norm(F, NormSpec(kind, s=s, b=b, alpha=alpha)) + spacetime_norm(
        F, NormSpec("Vgamma", gamma=gamma)
    )


def assemble_forcings(u: SpaceTimeField, v: SpaceTimeField, T: float, dealias: bool = True):
    """F = eta(t/T) (1/2) d_x(v^2) and G = eta(t/T) d_x(u v), returned as x-spectra.

    Inputs and products are filtered by the 2/3 rule when ``dealias`` is set.
    """
    space = u.grid.space
    mask = dealias_mask(space)[:, None] if dealias else np.ones((space.n, 1), bool)
    uh = fourier_x(u.values, space, axis=0) * mask
    vh = fourier_x(v.values, space, axis=0) * mask
    uf = inverse_fourier_x(uh, space, axis=0).real
    vf = inverse_fourier_x(vh, space, axis=0).real
    cut = eta(u.grid.t / T)[None, :]
    dx = derivative_multiplier(space, 1)[:, None] * mask
    F_hat = dx * fourier_x(0.5 * vf * vf, space, axis=0) * cut
    G_hat = dx * fourier_x(uf * vf, space, axis=0) * cut
    return F_hat, G_hat


def forcing_fields(u, v, T, dealias=True):
    F_hat, G_hat = assemble_forcings(u, v, T, dealias)
    space = u.grid.space
    return (
        SpaceTimeField(u.grid, inverse_fourier_x(F_hat, space, axis=0).real),
        SpaceTimeField(u.grid, inverse_fourier_x(G_hat, space, axis=0).real),
    )


class SolveContext:
    """Everything that stays fixed during one Picard solve at a given T."""

    def __init__(self, spec: ProblemSpec, params: SolverParams, T: float, boundary: bool = True):
        self.spec = spec
        self.params = params
        self.T = T
        self.boundary = boundary
        self.grid = grid = params.grid(T)
        self.eps, self.b, self.gamma_exp = params.exponents(spec.s)
        space = grid.space
        self.eta_t = eta(grid.t)

        if params.extension == "auto":
            self.ext_u = halfline_norm_upper(spec.u0, min(spec.s, 2.0)).extension
            self.ext_v = halfline_norm_upper(spec.v0, min(spec.s, 2.0)).extension
        else:
            self.ext_u = self.ext_v = params.extension
        # The free flow of the extended data runs on a larger box with the same
        # spacing, so fast left-going waves cannot wrap around into x > 0.
        factor = int(params.free_box_factor) if boundary else 1
        self.free_grid = Grid1D(space.n * factor, space.L * factor)
        self._offset = (self.free_grid.n - space.n) // 2
        self.u0_ext = extend(spec.u0, self.free_grid, self.ext_u)
        self.v0_ext = extend(spec.v0, self.free_grid, self.ext_v)
        self.lin_u = self.free_flow(self.u0_ext, 1.0, grid.t) * self.eta_t[None, :]
        self.lin_v = self.free_flow(self.v0_ext, spec.alpha, grid.t) * self.eta_t[None, :]

        k0 = grid.t_origin
        self.t_half = np.append(grid.t[k0:], grid.horizon)
        self.t_half[0] = 0.0
        self.taper = eta(self.t_half / (2.0 * T)) if params.taper_boundary else np.ones_like(self.t_half)
        self.f_nodes = spec.f(self.t_half)
        self.g_nodes = spec.g(self.t_half)
        self.tails: dict[str, TailReport] = {}
        self.hhat: dict[str, np.ndarray] = {}

        if boundary:
            self.quad = BoundaryQuadrature.for_window(params.n_beta, grid.horizon)
            E = np.exp(1j * np.outer(self.quad.rho, grid.t))
            scale = self.quad.weights / (2.0 * np.pi)
            self._Ku = spatial_kernel(space.x, self.quad) * scale[None, :]
            self._Kv = spatial_kernel(space.x / np.cbrt(spec.alpha), self.quad) * scale[None, :]
            self._E = E

    def free_flow(self, initial: SpectralField, c: float, times, derivative: int = 0) -> np.ndarray:
        """W^t_c applied to ``initial`` (on the free-flow box), restricted to the solver grid."""
        big = initial.grid
        spec = initial.spectrum[:, None] * airy_multiplier(big.xi[:, None], np.asarray(times)[None, :], c)
        if derivative:
            spec = spec * derivative_multiplier(big, derivative)[:, None]
        values = inverse_fourier_x(spec, big, axis=0).real
        offset = (big.n - self.grid.space.n) // 2
        return values[offset : offset + self.grid.space.n]

    def restrict(self, hat_big, derivative: int = 0) -> np.ndarray:
        """Real values on the solver grid of a spectrum given on the free-flow box."""
        if derivative:
            hat_big = hat_big * derivative_multiplier(self.free_grid, derivative)[:, None]
        values = inverse_fourier_x(hat_big, self.free_grid, axis=0).real
        return values[self._offset : self._offset + self.grid.space.n]

    def embed(self, hat_small) -> np.ndarray:
        """Zero-pad a solver-grid field (given by its x-spectrum) into the free-flow box."""
        if self._offset == 0:
            return hat_small
        values = inverse_fourier_x(hat_small, self.grid.space, axis=0)
        big = np.zeros((self.free_grid.n,) + values.shape[1:], dtype=complex)
        big[self._offset : self._offset + self.grid.space.n] = values
        return fourier_x(big, self.free_grid, axis=0)

    def duhamel_big(self, forcing_hat, c):
        """Embedded forcing and its Duhamel integral, both as free-box spectra."""
        fb = self.embed(forcing_hat)
        free_st = SpaceTimeGrid(self.free_grid, self.grid.n_time, self.grid.horizon)
        return fb, duhamel_spectrum(fb, free_st, c)

    def duhamel(self, forcing_hat, c):
        return self.restrict(self.duhamel_big(forcing_hat, c)[1])

    def boundary_term(self, data_nodes, trace, kernel, name):
        k0 = self.grid.t_origin
        values = np.append(data_nodes[:-1] - trace[k0:], 0.0) * self.taper
        h = HalfLineFunction(self.t_half, values, check_decay=False)
        hhat = spline_fourier(h, self.quad.rho)
        self.hhat[name] = hhat
        self.tails[name] = check_tail(hhat, self.quad, self.params.tail_tol, self.grid.dt)
        return 2.0 * ((kernel * hhat[None, :]) @ self._E).real

    def gamma(self, u: SpaceTimeField, v: SpaceTimeField, forcing: bool = True):
        grid = self.grid
        base_u = self.lin_u.copy()
        base_v = self.lin_v.copy()
        if forcing:
            F_hat, G_hat = assemble_forcings(u, v, self.T, self.params.dealias)
            base_u -= self.eta_t[None, :] * self.duhamel(F_hat, 1.0)
            base_v -= self.eta_t[None, :] * self.duhamel(G_hat, self.spec.alpha)
        if self.boundary:
            j0 = grid.space.origin
            p, q = base_u[j0], base_v[j0]
            base_u += self.eta_t[None, :] * self.boundary_term(self.f_nodes, p, self._Ku, "u")
            base_v += self.eta_t[None, :] * self.boundary_term(self.g_nodes, q, self._Kv, "v")
        return SpaceTimeField(grid, base_u), SpaceTimeField(grid, base_v)

    def ynorms(self, u, v):
        return (
            y_norm(u, self.spec.s, self.b, self.gamma_exp, 1.0),
            y_norm(v, self.spec.s, self.b, self.gamma_exp, self.spec.alpha),
        )


def boundary_corrections(ctx: SolveContext, u: SpaceTimeField, v: SpaceTimeField):
    """p, q: x = 0 traces of the linear-plus-Duhamel parts of both components."""
    F_hat, G_hat = assemble_forcings(u, v, ctx.T, ctx.params.dealias)
    j0 = ctx.grid.space.origin
    p = ctx.lin_u[j0] - ctx.eta_t * ctx.duhamel(F_hat, 1.0)[j0]
    q = ctx.lin_v[j0] - ctx.eta_t * ctx.duhamel(G_hat, ctx.spec.alpha)[j0]
    return p, q


def gamma_map(u, v, ctx: SolveContext):
    return ctx.gamma(u, v)


@dataclass(eq=False)
class Solution:
    u: SpaceTimeField
    v: SpaceTimeField
    report: IterationReport
    spec: ProblemSpec
    params: SolverParams
    context: SolveContext

    @property
    def grid(self) -> SpaceTimeGrid:
        return self.u.grid

    @property
    def T(self) -> float:
        return self.report.accepted_T


def _iterate(ctx: SolveContext, report: IterationReport):
    zero = SpaceTimeField.zeros(ctx.grid)
    u, v = ctx.gamma(zero, zero, forcing=False)
    tol = ctx.params.picard_tol
    prev = None
    for it in range(1, ctx.params.max_iters + 1):
        nu, nv = ctx.gamma(u, v)
        du, dv = ctx.ynorms(nu - u, nv - v)
        scale = sum(ctx.ynorms(nu, nv))
        d = du + dv
        report.differences_u.append(du)
        report.differences_v.append(dv)
        report.ratios.append(d / prev if prev else float("nan"))
        log.debug("Picard iteration %d: difference %.3e", it, d)
        u, v = nu, nv
        report.iterations = it
        if d <= tol * scale or d == 0.0:
            report.converged = True
            return u, v
        if prev is not None and it >= 4 and (d > 1e3 * report.differences[0] or not np.isfinite(d)):
            break
        if it >= 6 and all(r >= 1.0 for r in report.ratios[-3:]):
            break
        prev = d
    return u, v


def picard_solve(spec: ProblemSpec, params: SolverParams, boundary: bool = True) -> Solution:
    """Iterate Gamma from the data-only guess; halve T on failure (up to max_halvings)."""
    spec.validate()
    params.validate()
    T = params.T
    attempts = []
    for attempt in range(params.max_halvings + 1):
        ctx = SolveContext(spec, params, T, boundary=boundary)
        report = IterationReport()
        u, v = _iterate(ctx, report)
        attempts.append({"T": T, "differences": report.differences, "ratios": report.ratios})
        if report.converged:
            report.accepted_T = T
            report.attempts = attempts
            solution = Solution(u, v, report, spec, params, ctx)
            fill_residuals(solution)
            return solution
        log.info("Picard iteration did not converge at T=%g; halving", T)
        T *= 0.5
    raise ConvergenceError(
        f"Picard iteration failed to converge after {params.max_halvings} halvings of T "
        f"(last ratios {report.ratios[-3:]})",
        differences=report.differences,
        ratios=report.ratios,
        attempts=attempts,
    )


def solve_whole_line(u0: SpectralField, v0: SpectralField, alpha: float, params: SolverParams, s: float = 1.0):
    """The whole-line initial value problem: the same map with the boundary terms removed."""
    validate_alpha(alpha)
    space = u0.grid
    params = replace(params, n_x=space.n, L=space.L)
    zero = HalfLineFunction(np.linspace(0.0, 1.0, 8), np.zeros(8))
    spec = ProblemSpec(alpha, s, zero, zero, zero, zero)
    for attempt in range(params.max_halvings + 1):
        T = params.T * 0.5**attempt
        ctx = SolveContext(spec, replace(params, extension="zero"), T, boundary=False)
        ctx.u0_ext, ctx.v0_ext = u0, v0
        ctx.lin_u = ctx.free_flow(u0, 1.0, ctx.grid.t) * ctx.eta_t[None, :]
        ctx.lin_v = ctx.free_flow(v0, alpha, ctx.grid.t) * ctx.eta_t[None, :]
        report = IterationReport()
        u, v = _iterate(ctx, report)
        if report.converged:
            report.accepted_T = T
            return Solution(u, v, report, spec, params, ctx)
    raise ConvergenceError("whole-line Picard iteration failed to converge", report.differences, report.ratios)


@dataclass(frozen=True)
class QuadrantView:
    """A field restricted to [0, inf) x [0, T] (grid nodes only)."""

    x: np.ndarray
    t: np.ndarray
    values: np.ndarray


def restrict_to_quadrant(F: SpaceTimeField, T: float) -> QuadrantView:
    grid = F.grid
    xs = grid.space.x >= 0
    ts = (grid.t >= 0) & (grid.t <= T * (1 + 1e-12))
    return QuadrantView(grid.space.x[xs], grid.t[ts], F.values[np.ix_(xs, ts)])


def _relative_l2(a, b, spacing):
    denom = np.sqrt(spacing * np.sum(np.abs(b) ** 2))
    diff = np.sqrt(spacing * np.sum(np.abs(a - b) ** 2))
    return float(diff / denom) if denom > 0 else float(diff)


def pde_residuals(sol: "Solution"):
    """Residuals of both equations at the time midpoints t_k + dt/2 in (0, T), x >= 0.

    The solution is evaluated off the time grid from its own representation:
    the free flow exactly, the Duhamel term by a half step of the same
    piecewise-linear forcing, and the boundary term by direct quadrature.
    Space and time derivatives are exact, so the only nonzero contribution
    is v v_x at the midpoint minus the interpolated dealiased forcing, which
    is the consistency error of the time discretization and the dealiasing.

    Returns (x, t_mid, R_u, R_v) with arrays shaped (n_x >= 0, n_mid).
    """
    ctx = sol.context
    grid = ctx.grid
    space = grid.space
    alpha = ctx.spec.alpha
    T = sol.report.accepted_T
    dt = grid.dt
    k0 = grid.t_origin
    ks = np.arange(k0, grid.n_time - 1)
    ks = ks[grid.t[ks] + 0.5 * dt < T * (1 + 1e-12)]
    if ks.size == 0:
        empty = np.zeros((int(np.count_nonzero(space.x >= 0)), 0))
        return space.x[space.x >= 0], np.zeros(0), empty, empty
    t_mid = grid.t[ks] + 0.5 * dt
    eta_mid = eta(t_mid)[None, :]
    F_hat, G_hat = assemble_forcings(sol.u, sol.v, ctx.T, ctx.params.dealias)
    xs = space.x >= 0

    def whole_line(initial: SpectralField, forcing_hat, c):
        fb, D = ctx.duhamel_big(forcing_hat, c)
        omega = c * ctx.free_grid.xi[:, None] ** 3
        z = 1j * omega * (0.5 * dt)
        e0, e1 = phi_weights(z)
        f_mid = 0.5 * (fb[:, ks] + fb[:, ks + 1])
        d_mid = (np.exp(z) * D[:, ks] + 0.5 * dt * (e1 * fb[:, ks] + (e0 - e1) * f_mid)) * eta_mid
        val = ctx.free_flow(initial, c, t_mid) * eta_mid - ctx.restrict(d_mid)
        der = ctx.free_flow(initial, c, t_mid, 1) * eta_mid - ctx.restrict(d_mid, 1)
        avg = ctx.restrict(f_mid)
        return val[xs], der[xs], avg[xs]

    u, ux, f_avg = whole_line(ctx.u0_ext, F_hat, 1.0)
    v, vx, g_avg = whole_line(ctx.v0_ext, G_hat, alpha)
    if ctx.boundary and ctx.hhat:
        E = np.exp(1j * np.outer(ctx.quad.rho, t_mid))
        for name, c, kern in (("u", 1.0, ctx._Ku), ("v", np.cbrt(alpha), ctx._Kv)):
            k = kern[xs] * ctx.hhat[name][None, :]
            val = 2.0 * (k @ E).real * eta_mid
            der = 2.0 * ((k * (OMEGA * ctx.quad.beta / c)[None, :]) @ E).real * eta_mid
            if name == "u":
                u, ux = u + val, ux + der
            else:
                v, vx = v + val, vx + der
    Ru = v * vx - f_avg
    Rv = ux * v + u * vx - g_avg
    return space.x[xs], t_mid, Ru, Rv


def discretization_defect(sol: "Solution") -> float:
    """Absolute defect of a solve on the physical quadrant, summed over u and v:

        ||u(., 0) - u0||_{L^2(x>0)} + ||u(0, .) - f||_{L^2(0,T)} + T max_t ||R_u(., t)||_{L^2(x>0)}

    The interior residual alone misses the boundary-quadrature truncation,
    because every quadrature node is an exact solution of the linear equation;
    that error shows up in the initial and boundary defects instead.
    """
    grid = sol.grid
    T = sol.report.accepted_T
    j0, k0 = grid.space.origin, grid.t_origin
    xsel = grid.space.x >= 0
    tsel = (grid.t >= 0) & (grid.t <= T * (1 + 1e-12))
    total = 0.0
    for field_, init, trace in ((sol.u, sol.spec.u0, sol.spec.f), (sol.v, sol.spec.v0, sol.spec.g)):
        e0 = field_.values[xsel, k0] - init(grid.space.x[xsel])
        eb = field_.values[j0, tsel] - trace(grid.t[tsel])
        total += np.sqrt(grid.space.h * np.sum(e0**2)) + np.sqrt(grid.dt * np.sum(eb**2))
    _, _, Ru, Rv = pde_residuals(sol)
    if Ru.size:
        total += T * np.sqrt(grid.space.h * np.sum(Ru**2 + Rv**2, axis=0)).max()
    return float(total)


def interior_residual_floor(sol: "Solution") -> float:
    """(T max_t ||R(., t)||_{L^2(x>0)})^2 from the interior residual only."""
    _, _, Ru, Rv = pde_residuals(sol)
    if Ru.size == 0:
        return 0.0
    per_t = np.sqrt(sol.grid.space.h * np.sum(Ru**2 + Rv**2, axis=0))
    return float((sol.report.accepted_T * per_t.max()) ** 2)


def residual_floor(*solutions: "Solution") -> float:
    """Squared sum of the discretization defects: by the triangle inequality, the
    level below which the difference energy of these runs cannot be resolved."""
    return float(sum(discretization_defect(s) for s in solutions) ** 2)


def fill_residuals(sol: Solution) -> None:
    """Boundary, initial, fixed-point and PDE residuals of a converged solve."""
    ctx, rep = sol.context, sol.report
    grid = sol.grid
    T = rep.accepted_T
    j0, k0 = grid.space.origin, grid.t_origin
    tsel = (grid.t >= 0) & (grid.t <= T * (1 + 1e-12))
    for name, field_, data in (("u", sol.u, sol.spec.f), ("v", sol.v, sol.spec.g)):
        setattr(rep, f"boundary_error_{name}", _relative_l2(field_.values[j0, tsel], data(grid.t[tsel]), grid.dt))
    xsel = grid.space.x >= 0
    for name, field_, data in (("u", sol.u, sol.spec.u0), ("v", sol.v, sol.spec.v0)):
        setattr(rep, f"initial_error_{name}", _relative_l2(field_.values[xsel, k0], data(grid.space.x[xsel]), grid.space.h))
    gu, gv = ctx.gamma(sol.u, sol.v)
    diff = sum(ctx.ynorms(gu - sol.u, gv - sol.v))
    scale = sum(ctx.ynorms(sol.u, sol.v))
    rep.fixed_point_residual = diff / scale if scale > 0 else diff
    _, _, Ru, Rv = pde_residuals(sol)
    rep.pde_residual = float(np.sqrt(grid.space.h * grid.dt * np.sum(Ru**2 + Rv**2))) if Ru.size else 0.0
