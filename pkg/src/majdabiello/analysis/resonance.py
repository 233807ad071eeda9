"""Resonance roots of the three-wave modulation function and frequency regions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class ResonanceRoots:
    alpha: float
    r1: float
    r2: float

    @property
    def vieta(self) -> float:
        """Common value of r1 + r2 and r1 * r2."""
        return 3.0 * self.alpha / (self.alpha - 1.0)

    def vieta_residuals(self) -> tuple[float, float]:
        return abs(self.r1 + self.r2 - self.vieta), abs(self.r1 * self.r2 - self.vieta)

    @property
    def c_max(self) -> float:
        """Upper end of the admissible window 1 < c < sqrt(|r2 / r1|)."""
        return float(np.sqrt(abs(self.r2 / self.r1)))


def resonance_roots(alpha: float, check: bool = True) -> ResonanceRoots:
    """r_{1,2} = (3a -/+ sqrt(3a(4 - a))) / (2(a - 1)) for 0 < a < 1."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha={alpha:g} excluded: the coupling parameter must lie in (0, 1)")
    root = np.sqrt(3.0 * alpha * (4.0 - alpha))
    den = 2.0 * (alpha - 1.0)
    roots = ResonanceRoots(alpha, (3.0 * alpha - root) / den, (3.0 * alpha + root) / den)
    if check:
        if not (0.0 < roots.r1 < 1.0 and roots.r2 < 0.0):
            raise ArithmeticError(f"root sign pattern violated at alpha={alpha}: {roots}")
        scale = max(1.0, abs(roots.vieta))
        if max(roots.vieta_residuals()) > 1e-12 * scale:
            raise ArithmeticError(f"Vieta relations violated at alpha={alpha}: {roots.vieta_residuals()}")
    return roots


def modulation_sides(alpha, xi1, xi2, tau1, tau2, variant: int = 1):
    """Both sides of the modulation identity with xi = xi1 + xi2, tau = tau1 + tau2.

    variant 1: (tau - xi^3) - (tau1 - a xi1^3) - (tau2 - a xi2^3)
               = (a - 1) xi (xi - r1 xi1)(xi - r2 xi1)
    variant 2: (tau1 - xi1^3) + (tau2 - a xi2^3) - (tau - a xi^3)
               = (a - 1) r1 r2 xi1 (xi - xi1 / r1)(xi - xi1 / r2)
    """
    roots = resonance_roots(alpha)
    r1, r2 = roots.r1, roots.r2
    xi1, xi2, tau1, tau2 = map(np.asarray, (xi1, xi2, tau1, tau2))
    xi = xi1 + xi2
    tau = tau1 + tau2
    if variant == 1:
        lhs = (tau - xi**3) - (tau1 - alpha * xi1**3) - (tau2 - alpha * xi2**3)
        rhs = (alpha - 1.0) * xi * (xi - r1 * xi1) * (xi - r2 * xi1)
    elif variant == 2:
        lhs = (tau1 - xi1**3) + (tau2 - alpha * xi2**3) - (tau - alpha * xi**3)
        rhs = (alpha - 1.0) * r1 * r2 * xi1 * (xi - xi1 / r1) * (xi - xi1 / r2)
    else:
        raise ValidationError(f"identity variant must be 1 or 2, got {variant}")
    return lhs, rhs


def resonance_identity_residual(alpha, xi1, xi2, tau1, tau2, variant: int = 1, relative: bool = False):
    """|LHS - RHS|; with ``relative`` divided by |xi|^3 + |xi1|^3 + |xi2|^3 + |tau1| + |tau2| + 1."""
    lhs, rhs = modulation_sides(alpha, xi1, xi2, tau1, tau2, variant)
    res = np.abs(lhs - rhs)
    if relative:
        xi1, xi2 = np.asarray(xi1), np.asarray(xi2)
        scale = np.abs(xi1 + xi2) ** 3 + np.abs(xi1) ** 3 + np.abs(xi2) ** 3 + np.abs(tau1) + np.abs(tau2) + 1.0
        res = res / scale
    return res


def region_classify(xi, xi1, alpha: float, c: float):
    """'A' near xi = r1 xi1, 'B' near xi = r2 xi1, otherwise 'C' (vectorized)."""
    roots = resonance_roots(alpha)
    if not 1.0 < c < roots.c_max:
        raise ValidationError(f"c={c:g} inadmissible: need 1 < c < sqrt(|r2/r1|) = {roots.c_max:.6g}")
    axi = np.abs(np.asarray(xi, dtype=float))
    xi1 = np.asarray(xi1, dtype=float)
    in_a = (np.abs(roots.r1 * xi1) / c < axi) & (axi < c * np.abs(roots.r1 * xi1))
    in_b = (np.abs(roots.r2 * xi1) / c < axi) & (axi < c * np.abs(roots.r2 * xi1))
    if np.any(in_a & in_b):
        raise ArithmeticError("regions A and B overlap despite an admissible c")
    out = np.where(in_a, "A", np.where(in_b, "B", "C"))
    return out.item() if out.ndim == 0 else out
