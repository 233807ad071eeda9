"""Difference energy of two solutions on the physical quadrant and its Gronwall fit."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ..errors import AdmissibilityWarning, ValidationError
from ..extension import HalfLineFunction, halfline_norm_upper

I_FLOOR = 1e-14


@dataclass
class EnergyMonitor:
    t: np.ndarray
    I: np.ndarray
    dI: np.ndarray
    M: np.ndarray
    gronwall_ratio: float
    fitted_C: float
    s: float
    hypothesis_met: bool

    @property
    def max_I(self) -> float:
        return float(self.I.max()) if self.I.size else 0.0

    def summary(self) -> dict:
        return {
            "max_I": self.max_I,
            "I0": float(self.I[0]) if self.I.size else 0.0,
            "gronwall_ratio": self.gronwall_ratio,
            "fitted_C": self.fitted_C,
            "s": self.s,
            "hypothesis_met": self.hypothesis_met,
        }


def _halfline_hs(x, values, s) -> float:
    h = HalfLineFunction(x, values, check_decay=False)
    return halfline_norm_upper(h, min(max(s, 0.0), 2.0)).value


def difference_energy_monitor(sol_a, sol_b, s: float | None = None, norm_stride: int = 1) -> EnergyMonitor:
    """I(t) = ||u - u'||^2 + ||v - v'||^2 over x >= 0 for the nodes t in [0, T].

    The Gronwall ratio is max_t I'(t) / (M(t) I(t)) over nodes with I > 1e-14,
    with M the largest of the four half-line H^s norms and I' from centered
    differences (second-order one-sided at the ends).  The fitted constant is
    max_t log(I(t) / I(0)) / int_0^t M, the smallest C with I <= I(0) e^{C int M}.
    """
    grid = sol_a.grid
    if sol_b.grid != grid:
        raise ValidationError("the two solutions must share a space-time grid")
    s = sol_a.spec.s if s is None else s
    met = s > 1.5
    if not met:
        warnings.warn(f"s={s:g} <= 3/2: the difference-energy inequality is not covered", AdmissibilityWarning, stacklevel=2)
    T = min(sol_a.report.accepted_T, sol_b.report.accepted_T)
    xs = grid.space.x >= 0
    ks = np.nonzero((grid.t >= 0) & (grid.t <= T * (1 + 1e-12)))[0]
    x = grid.space.x[xs]
    h = grid.space.h
    t = grid.t[ks]
    du = sol_a.u.values[np.ix_(xs, ks)] - sol_b.u.values[np.ix_(xs, ks)]
    dv = sol_a.v.values[np.ix_(xs, ks)] - sol_b.v.values[np.ix_(xs, ks)]
    I = h * (np.sum(du**2, axis=0) + np.sum(dv**2, axis=0)) - 0.5 * h * (du[0] ** 2 + dv[0] ** 2)
    if t.size < 3:
        raise ValidationError("the monitor needs at least three time nodes in [0, T]")
    dI = np.gradient(I, t, edge_order=2)

    sample = np.arange(0, t.size, max(1, norm_stride))
    if sample[-1] != t.size - 1:
        sample = np.append(sample, t.size - 1)
    M_sample = np.array(
        [
            max(_halfline_hs(x, sol.values[xs, ks[k]], s) for sol in (sol_a.u, sol_a.v, sol_b.u, sol_b.v))
            for k in sample
        ]
    )
    M = np.interp(t, t[sample], M_sample)

    active = I > I_FLOOR
    ratio = float(np.max(dI[active] / (M[active] * I[active]))) if np.any(active) else 0.0
    fitted = 0.0
    if I[0] > I_FLOOR:
        integral = cumulative_trapezoid(M, t, initial=0.0)
        pos = integral > 0
        fitted = float(np.max(np.log(np.maximum(I[pos], I_FLOOR) / I[0]) / integral[pos])) if np.any(pos) else 0.0
    return EnergyMonitor(t, I, dI, M, ratio, fitted, s, met)
