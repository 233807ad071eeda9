"""Airy groups, the Duhamel integral and the canonical smooth cutoffs."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .spectral import (
    SpaceTimeField,
    SpaceTimeGrid,
    SpectralField,
    fourier_x,
    inverse_fourier_x,
)


def _psi(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    a = _psi(x)
    b = _psi(1.0 - np.asarray(x, dtype=float))
    return a / (a + b)


def eta(t):
    """Canonical bump: identically 1 on [-1, 1], supported in [-2, 2]."""
    return smooth_step(2.0 - np.abs(np.asarray(t, dtype=float)))


def rho_cutoff(x):
    """Identically 1 on [0, inf), zero on (-inf, -2], smooth in between."""
    return smooth_step((np.asarray(x, dtype=float) + 2.0) / 2.0)


def _check_c(c):
    if not 0.0 < c <= 1.0:
        raise ValidationError(f"dispersion coefficient c={c} outside (0, 1]")


def airy_multiplier(xi, t, c: float = 1.0):
    return np.exp(1j * c * np.asarray(t) * np.asarray(xi) ** 3)


def airy_evolve(f: SpectralField, t: float, c: float = 1.0) -> SpectralField:
    """W^t_c f: multiply the spectrum by exp(i c t xi^3)."""
    _check_c(c)
    return SpectralField.from_spectrum(f.grid, f.spectrum * airy_multiplier(f.grid.xi, t, c))


def linear_flow(f: SpectralField, grid: SpaceTimeGrid, c: float = 1.0) -> SpaceTimeField:
    """W^t_c f sampled at every time node of ``grid``."""
    _check_c(c)
    if f.grid != grid.space:
        raise ValidationError("initial field and space-time grid use different spatial grids")
    spec = f.spectrum[:, None] * airy_multiplier(grid.space.xi[:, None], grid.t[None, :], c)
    return SpaceTimeField(grid, inverse_fourier_x(spec, grid.space, axis=0))


def phi_weights(z):
    """E0 = (e^z - 1)/z and E1 = (e^z (z - 1) + 1)/z^2, series near z = 0."""
    z = np.asarray(z, dtype=complex)
    e0 = np.empty_like(z)
    e1 = np.empty_like(z)
    small = np.abs(z) < 0.25
    zs = z[small]
    term0 = np.ones_like(zs)
    term1 = np.ones_like(zs)
    s0 = np.zeros_like(zs)
    s1 = np.zeros_like(zs)
    for k in range(18):
        # term0 = z^k/(k+1)!, term1 = z^k/k!
        s0 += term0
        s1 += term1 / (k + 2)
        term0 = term0 * zs / (k + 2)
        term1 = term1 * zs / (k + 1)
    e0[small] = s0
    e1[small] = s1
    zl = z[~small]
    ez = np.exp(zl)
    e0[~small] = (ez - 1.0) / zl
    e1[~small] = (ez * (zl - 1.0) + 1.0) / zl**2
    return e0, e1


def duhamel_spectrum(forcing_hat: np.ndarray, grid: SpaceTimeGrid, c: float = 1.0) -> np.ndarray:
    """Per-mode int_0^t exp(i c xi^3 (t - t')) F_hat(xi, t') dt' on the time nodes.

    ``forcing_hat`` is the x-transform of the forcing, shape (n_x, n_t).  The
    forcing is taken piecewise linear between nodes and each step's phase is
    integrated exactly, which reduces to the composite trapezoid rule in the
    non-oscillatory limit.
    """
    omega = c * grid.space.xi**3
    out = np.zeros_like(forcing_hat, dtype=complex)
    k0 = grid.t_origin
    dt = grid.dt
    for delta, ks in ((dt, range(k0, grid.n_time - 1)), (-dt, range(k0, 0, -1))):
        z = 1j * omega * delta
        rot = np.exp(z)
        e0, e1 = phi_weights(z)
        w_old = delta * e1
        w_new = delta * (e0 - e1)
        step = 1 if delta > 0 else -1
        for k in ks:
            out[:, k + step] = rot * out[:, k] + w_old * forcing_hat[:, k] + w_new * forcing_hat[:, k + step]
    return out


def duhamel_integral(forcing: SpaceTimeField, c: float = 1.0) -> SpaceTimeField:
    """int_0^t W^{t-t'}_c F(t') dt' at every node; t < 0 integrates backward."""
    _check_c(c)
    grid = forcing.grid
    fhat = fourier_x(forcing.values, grid.space, axis=0)
    return SpaceTimeField(grid, inverse_fourier_x(duhamel_spectrum(fhat, grid, c), grid.space, axis=0))


def time_cutoff(F: SpaceTimeField, scale: float = 1.0) -> SpaceTimeField:
    """Pointwise multiplication by eta(t / scale)."""
    if not scale > 0:
        raise ValidationError(f"cutoff scale must be positive, got {scale}")
    return SpaceTimeField(F.grid, F.values * eta(F.grid.t / scale)[None, :])
