"""Conserved quantities of the whole-line system and their drift along a solve."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..spectral import SpectralField, spectral_derivative

QUANTITY_NAMES = ("mass_u", "mass_v", "energy", "hamiltonian")


@dataclass(frozen=True)
class ConservedQuantities:
    mass_u: float
    mass_v: float
    energy: float
    hamiltonian: float

    def as_array(self) -> np.ndarray:
        return np.array([self.mass_u, self.mass_v, self.energy, self.hamiltonian])


def conserved_quantities(u: SpectralField, v: SpectralField, alpha: float) -> ConservedQuantities:
    """int u, int v, int u^2 + v^2 and H = (1/2) int u_x^2 + a v_x^2 - u v^2 (grid quadrature)."""
    h = u.grid.h
    uu = np.real(u.values)
    vv = np.real(v.values)
    ux = np.real(spectral_derivative(u).values)
    vx = np.real(spectral_derivative(v).values)
    return ConservedQuantities(
        float(h * uu.sum()),
        float(h * vv.sum()),
        float(h * np.sum(uu**2 + vv**2)),
        float(0.5 * h * np.sum(ux**2 + alpha * vx**2 - uu * vv**2)),
    )


@dataclass
class DriftReport:
    times: np.ndarray
    series: np.ndarray  # (n_times, 4)
    drift: dict

    def passes(self, tolerances: dict) -> bool:
        return all(self.drift[k] < tol for k, tol in tolerances.items())


def conservation_drift(solution, alpha: float, T: float | None = None) -> DriftReport:
    """max_t |Q(t) - Q(0)| / max(|Q(0)|, 1) over the time nodes in [0, T]."""
    grid = solution.grid
    T = solution.report.accepted_T if T is None else T
    ks = np.nonzero((grid.t >= 0) & (grid.t <= T * (1 + 1e-12)))[0]
    series = np.array(
        [
            conserved_quantities(
                SpectralField(grid.space, solution.u.values[:, k]),
                SpectralField(grid.space, solution.v.values[:, k]),
                alpha,
            ).as_array()
            for k in ks
        ]
    )
    ref = series[0]
    rel = np.abs(series - ref).max(axis=0) / np.maximum(np.abs(ref), 1.0)
    return DriftReport(grid.t[ks], series, dict(zip(QUANTITY_NAMES, map(float, rel))))
