"""Grids, Fourier conventions and discrete norm functionals.

Conventions
-----------
The forward transform is continuum-normalized,

    g_hat(xi) = int e^{-i x xi} g(x) dx  ~  h * sum_j g(x_j) e^{-i xi x_j},

and the inverse carries the 1/(2 pi).  Every Fourier-side norm is taken with
the Plancherel measure d xi / (2 pi) per transformed variable, so that
``||g||_{H^0} == ||g||_{L^2}`` for the physical-space L^2 norm.  The
Japanese bracket is <xi> = 1 + |xi|.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ValidationError

NORM_KINDS = ("Hs", "Xsb", "Xsb_alpha", "Vgamma", "MixedLpLq")


def bracket(x):
    return 1.0 + np.abs(x)


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid on [-L, L) with ``n`` nodes; x = 0 is node n // 2."""

    n: int
    L: float

    def __post_init__(self):
        if not _is_power_of_two(int(self.n)):
            raise ValidationError(f"n_points must be a power of two, got {self.n}")
        if not self.L > 0:
            raise ValidationError(f"box half-width must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.n

    @cached_property
    def x(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.n)

    @cached_property
    def xi(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.h)

    @property
    def dxi(self) -> float:
        return np.pi / self.L

    @property
    def origin(self) -> int:
        return self.n // 2

    @cached_property
    def _shift(self) -> np.ndarray:
        # e^{-i xi x_0} with x_0 = -L
        return np.exp(1j * self.xi * self.L)

    def refined(self, factor: int = 2) -> "Grid1D":
        return Grid1D(self.n * factor, self.L)

    def enlarged(self, factor: int = 2) -> "Grid1D":
        return Grid1D(self.n * factor, self.L * factor)


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Product grid: ``space`` times uniform t-nodes on [-horizon, horizon)."""

    space: Grid1D
    n_time: int
    horizon: float

    def __post_init__(self):
        if self.n_time < 2 or self.n_time % 2:
            raise ValidationError("n_time must be a positive even integer so that t = 0 is a node")
        if not self.horizon > 0:
            raise ValidationError(f"time horizon must be positive, got {self.horizon}")

    @property
    def dt(self) -> float:
        return 2.0 * self.horizon / self.n_time

    @cached_property
    def t(self) -> np.ndarray:
        return -self.horizon + self.dt * np.arange(self.n_time)

    @cached_property
    def tau(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_time, d=self.dt)

    @property
    def dtau(self) -> float:
        return np.pi / self.horizon

    @property
    def t_origin(self) -> int:
        return self.n_time // 2

    @property
    def cell_measure(self) -> float:
        """Frequency cell d xi * d tau used by every discrete space-time norm."""
        return self.space.dxi * self.dtau

    @cached_property
    def _shift(self) -> np.ndarray:
        return np.exp(1j * self.tau * self.horizon)

    def describe(self) -> dict:
        return {
            "n_x": self.space.n,
            "L": self.space.L,
            "h": self.space.h,
            "n_t": self.n_time,
            "T_grid": self.horizon,
            "dt": self.dt,
            "dxi": self.space.dxi,
            "dtau": self.dtau,
            "cell_measure": self.cell_measure,
        }


def fourier_x(values, grid: Grid1D, axis: int = 0) -> np.ndarray:
    """Continuum-normalized transform of ``values`` along ``axis``."""
    shape = [1] * np.ndim(values)
    shape[axis] = grid.n
    spec = np.fft.fft(values, axis=axis)
    return grid.h * spec * grid._shift.reshape(shape)


def inverse_fourier_x(spectrum, grid: Grid1D, axis: int = 0) -> np.ndarray:
    shape = [1] * np.ndim(spectrum)
    shape[axis] = grid.n
    return np.fft.ifft(spectrum * np.conj(grid._shift).reshape(shape), axis=axis) / grid.h


def fourier_t(values, grid: SpaceTimeGrid, axis: int = -1) -> np.ndarray:
    shape = [1] * np.ndim(values)
    shape[axis] = grid.n_time
    spec = np.fft.fft(values, axis=axis)
    return grid.dt * spec * grid._shift.reshape(shape)


def inverse_fourier_t(spectrum, grid: SpaceTimeGrid, axis: int = -1) -> np.ndarray:
    shape = [1] * np.ndim(spectrum)
    shape[axis] = grid.n_time
    return np.fft.ifft(spectrum * np.conj(grid._shift).reshape(shape), axis=axis) / grid.dt


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Samples of a function of x on a :class:`Grid1D`."""

    grid: Grid1D
    values: np.ndarray

    @classmethod
    def from_spectrum(cls, grid: Grid1D, spectrum) -> "SpectralField":
        field = cls(grid, inverse_fourier_x(np.asarray(spectrum, dtype=complex), grid))
        field.__dict__["spectrum"] = np.asarray(spectrum, dtype=complex)
        return field

    @classmethod
    def from_function(cls, grid: Grid1D, func) -> "SpectralField":
        return cls(grid, np.asarray(func(grid.x)))

    @cached_property
    def spectrum(self) -> np.ndarray:
        return forward_fourier(self)

    @property
    def real(self) -> "SpectralField":
        return SpectralField(self.grid, np.real(self.values))


@dataclass(frozen=True, eq=False)
class SpaceTimeField:
    """Samples on a :class:`SpaceTimeGrid`; ``values`` has shape (n_x, n_t)."""

    grid: SpaceTimeGrid
    values: np.ndarray

    def __post_init__(self):
        expected = (self.grid.space.n, self.grid.n_time)
        if np.shape(self.values) != expected:
            raise ValidationError(f"values shape {np.shape(self.values)} != grid shape {expected}")

    @classmethod
    def from_spectrum(cls, grid: SpaceTimeGrid, spectrum) -> "SpaceTimeField":
        spectrum = np.asarray(spectrum, dtype=complex)
        values = inverse_fourier_t(inverse_fourier_x(spectrum, grid.space, axis=0), grid, axis=1)
        field = cls(grid, values)
        field.__dict__["spectrum"] = spectrum
        return field

    @classmethod
    def zeros(cls, grid: SpaceTimeGrid) -> "SpaceTimeField":
        return cls(grid, np.zeros((grid.space.n, grid.n_time)))

    @cached_property
    def spectrum(self) -> np.ndarray:
        return fourier_t(fourier_x(self.values, self.grid.space, axis=0), self.grid, axis=1)

    def slice_t(self, k: int) -> SpectralField:
        return SpectralField(self.grid.space, self.values[:, k])

    def __add__(self, other: "SpaceTimeField") -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.values + other.values)

    def __sub__(self, other: "SpaceTimeField") -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.values - other.values)


def forward_fourier(f: SpectralField) -> np.ndarray:
    return fourier_x(f.values, f.grid)


def inverse_fourier(spectrum, grid: Grid1D) -> np.ndarray:
    return inverse_fourier_x(spectrum, grid)


def l2_norm(values, spacing: float) -> float:
    return float(np.sqrt(spacing * np.sum(np.abs(values) ** 2)))


def sobolev_norm(f: SpectralField, s: float) -> float:
    """``|| <xi>^s g_hat ||`` with the Plancherel measure d xi / 2 pi."""
    if not -2.0 <= s <= 4.0:
        raise ValidationError(f"Sobolev index {s} outside the supported range [-2, 4]")
    weight = bracket(f.grid.xi) ** s
    total = np.sum(np.abs(weight * f.spectrum) ** 2) * f.grid.dxi / (2.0 * np.pi)
    return float(np.sqrt(total))


@dataclass(frozen=True)
class NormSpec:
    """Which space-time norm to evaluate; fields irrelevant to ``kind`` are ignored."""

    kind: str
    s: float = 0.0
    b: float = 0.0
    gamma: float = 0.5
    alpha: float = 1.0
    p: float = 2.0
    q: float = 2.0

    def __post_init__(self):
        if self.kind not in NORM_KINDS:
            raise ValidationError(f"unknown norm kind {self.kind!r}; expected one of {NORM_KINDS}")
        if self.kind == "Xsb_alpha" and not 0.0 < self.alpha <= 1.0:
            raise ValidationError(f"dispersion coefficient alpha={self.alpha} outside (0, 1]")
        if self.kind == "MixedLpLq":
            for name in ("p", "q"):
                value = getattr(self, name)
                if not 1.0 <= value <= np.inf:
                    raise ValidationError(f"exponent {name}={value} outside [1, inf]")


def fourier_weight(grid: SpaceTimeGrid, spec: NormSpec) -> np.ndarray:
    """The multiplier w(xi, tau) of a Fourier-side norm on the (n_x, n_t) mesh."""
    xi = grid.space.xi[:, None]
    tau = grid.tau[None, :]
    if spec.kind == "Hs":
        return np.broadcast_to(bracket(xi) ** spec.s, (grid.space.n, grid.n_time))
    if spec.kind in ("Xsb", "Xsb_alpha"):
        alpha = 1.0 if spec.kind == "Xsb" else spec.alpha
        return bracket(xi) ** spec.s * bracket(tau - alpha * xi**3) ** spec.b
    if spec.kind == "Vgamma":
        return (np.abs(xi) <= 1.0) * bracket(tau) ** spec.gamma
    raise ValidationError(f"{spec.kind} is not a Fourier-side norm")


def _lp(values, spacing, p, axis):
    if np.isinf(p):
        return np.max(np.abs(values), axis=axis)
    return (spacing * np.sum(np.abs(values) ** p, axis=axis)) ** (1.0 / p)


def mixed_norm(values, grid: SpaceTimeGrid, p: float, q: float) -> float:
    """||u||_{L^p_x L^q_t}: inner norm in t, outer in x; L^inf is a grid maximum."""
    inner = _lp(values, grid.dt, q, axis=1)
    return float(_lp(inner, grid.space.h, p, axis=0))


def spacetime_norm(F: SpaceTimeField, spec: NormSpec) -> float:
    grid = F.grid
    if spec.kind == "MixedLpLq":
        return mixed_norm(F.values, grid, spec.p, spec.q)
    weight = fourier_weight(grid, spec)
    total = np.sum(np.abs(weight * F.spectrum) ** 2) * grid.cell_measure / (4.0 * np.pi**2)
    return float(np.sqrt(total))


def temporal_sobolev_profile(F: SpaceTimeField, sigma: float) -> np.ndarray:
    """||F(x, .)||_{H^sigma_t} for every spatial node x."""
    grid = F.grid
    spec_t = fourier_t(F.values, grid, axis=1)
    weight = bracket(grid.tau)[None, :] ** sigma
    return np.sqrt(np.sum(np.abs(weight * spec_t) ** 2, axis=1) * grid.dtau / (2.0 * np.pi))


def derivative_multiplier(grid: Grid1D, order: int = 1) -> np.ndarray:
    mult = (1j * grid.xi) ** order
    if order % 2:
        mult[grid.n // 2] = 0.0  # Nyquist mode has no consistent odd derivative
    return mult


def spectral_derivative(f: SpectralField, order: int = 1) -> SpectralField:
    return SpectralField.from_spectrum(f.grid, derivative_multiplier(f.grid, order) * f.spectrum)


def dealias_mask(grid: Grid1D) -> np.ndarray:
    """2/3-rule mask: keep |k| <= n/3 in index units."""
    k = np.abs(np.fft.fftfreq(grid.n, d=1.0 / grid.n))
    return k <= grid.n / 3.0


def band_limited_interpolate(f: SpectralField, points) -> np.ndarray:
    """Evaluate the trigonometric interpolant of ``f`` at arbitrary points."""
    points = np.atleast_1d(np.asarray(points, dtype=float))
    grid = f.grid
    spec = f.spectrum.copy()
    nyq = grid.n // 2
    # split the Nyquist mode symmetrically so real data interpolate to real values
    phase = np.exp(1j * np.outer(points, grid.xi))
    total = phase @ spec
    total -= 0.5 * spec[nyq] * (np.exp(1j * points * grid.xi[nyq]) - np.exp(-1j * points * grid.xi[nyq]))
    return total / (2.0 * grid.L)
