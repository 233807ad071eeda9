"""Half-line data and their extensions to the whole line."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline

from .errors import ValidationError
from .spectral import Grid1D, SpectralField, sobolev_norm

EXTENSIONS = ("zero", "reflect1", "reflect2", "reflect3")


@dataclass(frozen=True, eq=False)
class HalfLineFunction:
    """Samples of a function on a uniform grid over [0, X_max].

    The samples must have decayed below ``decay_tol`` (relative to the peak)
    at the right end, so treating the function as zero beyond X_max is safe.
    """

    coords: np.ndarray
    samples: np.ndarray
    s: float = 0.0
    decay_tol: float = 1e-8
    check_decay: bool = field(default=True, repr=False)

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "samples", samples)
        if coords.ndim != 1 or coords.shape != samples.shape or coords.size < 4:
            raise ValidationError("half-line data need matching 1-D coordinates and samples (at least 4)")
        if coords[0] != 0.0:
            raise ValidationError(f"half-line data must start at 0, got {coords[0]}")
        steps = np.diff(coords)
        if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * steps.mean():
            raise ValidationError("half-line coordinates must be uniform and increasing")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("half-line samples contain non-finite values")
        if self.check_decay:
            peak = max(np.max(np.abs(samples)), 1.0)
            if abs(samples[-1]) > self.decay_tol * peak:
                raise ValidationError(
                    f"data have not decayed by X_max={coords[-1]:g}: |h(X_max)|={abs(samples[-1]):.3g}"
                )

    @classmethod
    def from_callable(cls, func, x_max: float, n: int = 2049, s: float = 0.0, **kwargs) -> "HalfLineFunction":
        coords = np.linspace(0.0, x_max, n)
        return cls(coords, np.asarray(func(coords), dtype=float) * np.ones_like(coords), s=s, **kwargs)

    @classmethod
    def from_csv(cls, path, s: float = 0.0, **kwargs) -> "HalfLineFunction":
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or len(header) < 2:
                raise ValidationError(f"{path}: a two-column header row is required")
            try:
                float(header[0])
            except ValueError:
                pass
            else:
                raise ValidationError(f"{path}: first row must be a header, found numbers")
            rows = [r for r in reader if r and any(c.strip() for c in r)]
        try:
            data = np.array([[float(r[0]), float(r[1])] for r in rows])
        except (ValueError, IndexError) as exc:
            raise ValidationError(f"{path}: could not parse numeric rows ({exc})") from None
        if data.size == 0:
            raise ValidationError(f"{path}: no data rows")
        return cls(data[:, 0], data[:, 1], s=s, **kwargs)

    @property
    def x_max(self) -> float:
        return float(self.coords[-1])

    @property
    def spacing(self) -> float:
        return float(self.coords[1] - self.coords[0])

    @property
    def boundary_value(self) -> float:
        return float(self.samples[0])

    @cached_property
    def spline(self) -> CubicSpline:
        return CubicSpline(self.coords, self.samples)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = (x >= 0.0) & (x <= self.x_max)
        out[inside] = self.spline(x[inside])
        return out

    def derivative_at_zero(self, order: int) -> float:
        return float(self.spline(0.0, order))

    def with_samples(self, samples) -> "HalfLineFunction":
        return HalfLineFunction(self.coords, samples, s=self.s, decay_tol=self.decay_tol, check_decay=self.check_decay)

    def __add__(self, other: "HalfLineFunction") -> "HalfLineFunction":
        if not np.array_equal(self.coords, other.coords):
            raise ValidationError("cannot add half-line functions on different grids")
        return self.with_samples(self.samples + other.samples)

    def scaled(self, factor: float) -> "HalfLineFunction":
        return self.with_samples(factor * self.samples)

    def l2_norm(self) -> float:
        """Trapezoid L^2(0, X_max) norm of the spline interpolant's samples."""
        return float(np.sqrt(trapezoid(self.samples**2, self.coords)))


def reflection_coefficients(order: int) -> np.ndarray:
    """a_k with sum_k a_k (-k)^j = 1 for j = 0..order (k = 1..order+1)."""
    if order not in (1, 2, 3):
        raise ValidationError(f"reflection order must be 1, 2 or 3, got {order}")
    k = np.arange(1, order + 2, dtype=float)
    vander = np.vander(-k, order + 1, increasing=True).T
    return np.linalg.solve(vander, np.ones(order + 1))


def extend_zero(h: HalfLineFunction, grid: Grid1D) -> SpectralField:
    """chi_(0,inf) h on the whole-line grid; the node x = 0 takes the mean h(0)/2."""
    x = grid.x
    values = np.where(x > 0, h(x), 0.0)
    values[x == 0] = 0.5 * h.boundary_value
    return SpectralField(grid, values)


def extend_smooth(h: HalfLineFunction, grid: Grid1D, order: int = 1) -> SpectralField:
    """Reflection extension matching derivatives 0..order at x = 0."""
    a = reflection_coefficients(order)
    x = grid.x
    values = np.where(x >= 0, h(x), 0.0)
    neg = x < 0
    values[neg] = sum(ak * h(-(k + 1) * x[neg]) for k, ak in enumerate(a))
    return SpectralField(grid, values)


def extend(h: HalfLineFunction, grid: Grid1D, kind: str) -> SpectralField:
    if kind == "zero":
        return extend_zero(h, grid)
    if kind in EXTENSIONS:
        return extend_smooth(h, grid, int(kind[-1]))
    raise ValidationError(f"unknown extension {kind!r}; expected one of {EXTENSIONS}")


def zero_extension_admissible(h: HalfLineFunction, s: float, tol: float = 1e-10) -> bool:
    """Zero extension is bounded in H^s for s < 1/2, and for 1/2 < s < 3/2 when h(0) = 0."""
    if s < 0.5:
        return True
    if s < 1.5 and s != 0.5:
        return abs(h.boundary_value) <= tol
    return False


def default_grid(h: HalfLineFunction) -> Grid1D:
    n = 1 << int(np.ceil(np.log2(2 * (h.samples.size - 1))))
    return Grid1D(n, h.x_max)


def extension_norm(h: HalfLineFunction, s: float, kind: str, grid: Grid1D | None = None) -> float:
    grid = default_grid(h) if grid is None else grid
    return sobolev_norm(extend(h, grid, kind), s)


@dataclass(frozen=True)
class HalfLineNorm:
    """An upper bound for the half-line H^s norm and the extension achieving it."""

    value: float
    extension: str
    is_upper_bound: bool = True

    def __float__(self):
        return self.value


def halfline_norm_upper(h: HalfLineFunction, s: float, grid: Grid1D | None = None) -> HalfLineNorm:
    """Minimum of the whole-line H^s norm over the fixed extension menu."""
    if not 0.0 <= s <= 2.0:
        raise ValidationError(f"half-line Sobolev index {s} outside [0, 2]")
    grid = default_grid(h) if grid is None else grid
    menu = [k for k in EXTENSIONS if k != "zero" or zero_extension_admissible(h, s)]
    values = {k: extension_norm(h, s, k, grid) for k in menu}
    best = min(menu, key=lambda k: (values[k], EXTENSIONS.index(k)))
    return HalfLineNorm(values[best], best)
