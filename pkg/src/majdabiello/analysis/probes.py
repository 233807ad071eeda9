"""Random-ensemble probes of the linear and bilinear space-time estimates.

Each probe evaluates left-norm / right-norm for many random fields and
reports the largest ratio: the estimates only assert boundedness, so the
empirical constant and its stability under grid changes are what is tested.
Fields are defined in the continuum (sums of Gaussian wavepackets) and
sampled on the probe grid, so enlarging the box changes only truncation.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import AdmissibilityWarning, ValidationError
from ..propagators import airy_multiplier, eta
from ..spectral import (
    Grid1D,
    NormSpec,
    SpaceTimeField,
    SpaceTimeGrid,
    SpectralField,
    bracket,
    fourier_x,
    inverse_fourier_t,
    inverse_fourier_x,
    mixed_norm,
    sobolev_norm,
    spacetime_norm,
    temporal_sobolev_profile,
)

BILINEAR = ("bil_1", "bil_2", "bil_3", "bil_4")
LINEAR = ("kato", "kato_trace", "strichartz4", "sobolev", "katop")
PROBE_KINDS = BILINEAR + LINEAR


@dataclass(frozen=True)
class ProbeGrid:
    n_x: int = 128
    L: float = 24.0
    n_t: int = 512
    horizon: float = 8.0

    def grid(self) -> SpaceTimeGrid:
        return SpaceTimeGrid(Grid1D(self.n_x, self.L), self.n_t, self.horizon)

    def doubled(self) -> "ProbeGrid":
        """Twice the box in x and t at the same spacing."""
        return ProbeGrid(2 * self.n_x, 2 * self.L, 2 * self.n_t, 2 * self.horizon)


@dataclass(frozen=True)
class EstimateProbeConfig:
    which: str
    s: float = 1.0
    b: float = 0.46
    gamma: float = 0.51
    alpha: float = 0.5
    ensemble: int = 200
    seed: int = 0
    n_packets: int = 6
    decay_range: tuple = (1.0, 3.0)
    xi_max: float = 2.0
    theta: float = 0.0
    p: float = 4.0
    plus: float = 0.01  # the epsilon in exponents written as a+ in the estimates

    def __post_init__(self):
        if self.which not in PROBE_KINDS:
            raise ValidationError(f"unknown estimate {self.which!r}; expected one of {PROBE_KINDS}")
        if self.ensemble < 1 or self.n_packets < 1:
            raise ValidationError("ensemble size and packet count must be positive")
        lo, hi = self.decay_range
        if not 0 < lo <= hi:
            raise ValidationError(f"decay exponent range {self.decay_range} must satisfy 0 < lo <= hi")
        if self.plus <= 0:
            raise ValidationError("the epsilon in a+ exponents must be positive")
        if self.which in BILINEAR:
            self._check_bilinear()
        elif self.which == "strichartz4":
            if not 0.0 <= self.theta <= 0.125 or not self.b > 0.375:
                raise ValidationError(f"the L^4 estimate needs 0 <= theta <= 1/8 and b > 3/8 (theta={self.theta}, b={self.b})")
        elif self.which == "katop":
            if not 2.0 < self.p < np.inf:
                raise ValidationError(f"the L^p_x L^2_t estimate needs 2 < p < inf, got p={self.p}")
        elif self.which == "kato_trace" and not 0.0 <= self.s <= 2.0:
            raise ValidationError(f"the temporal trace probe supports 0 <= s <= 2, got s={self.s}")

    def _check_bilinear(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"alpha={self.alpha:g} excluded: the coupling parameter must lie in (0, 1)")
        if self.which in ("bil_1", "bil_2"):
            if not self.s > 0:
                raise ValidationError(f"{self.which} needs s > 0, got s={self.s}")
            lower = max((3.0 - self.s) / 6.0, 7.0 / 16.0)
        else:
            if not 0.5 < self.s < 2.0:
                raise ValidationError(f"{self.which} needs 1/2 < s < 2, got s={self.s}")
            lower = max((self.s + 1.0) / 6.0, 7.0 / 16.0)
        boundary = np.isclose(self.b, 7.0 / 16.0) and np.isclose(lower, 7.0 / 16.0)
        if boundary:
            warnings.warn("b = 7/16 sits on the admissible boundary", AdmissibilityWarning, stacklevel=3)
        elif not lower < self.b < 0.5:
            raise ValidationError(f"{self.which} needs {lower:.6g} < b < 1/2, got b={self.b}")
        if not self.gamma > 0.5:
            raise ValidationError(f"{self.which} needs gamma > 1/2, got gamma={self.gamma}")


@dataclass
class EnsembleStats:
    which: str
    ratios: np.ndarray
    seed: int
    grid: dict = field(default_factory=dict)

    @property
    def valid(self) -> np.ndarray:
        return self.ratios[np.isfinite(self.ratios)]

    @property
    def n_skipped(self) -> int:
        return int(np.count_nonzero(~np.isfinite(self.ratios)))

    @property
    def max(self) -> float:
        return float(self.valid.max()) if self.valid.size else float("nan")

    @property
    def mean(self) -> float:
        return float(self.valid.mean()) if self.valid.size else float("nan")

    @property
    def argmax_member(self) -> int:
        """Index i of the largest ratio; the member's generator is default_rng([seed, i])."""
        if not self.valid.size:
            return -1
        return int(np.nanargmax(np.where(np.isfinite(self.ratios), self.ratios, -np.inf)))

    def summary(self) -> dict:
        return {
            "which": self.which,
            "max": self.max,
            "mean": self.mean,
            "argmax_member": self.argmax_member,
            "seed": self.seed,
            "n": int(self.ratios.size),
            "skipped": self.n_skipped,
            "grid": self.grid,
        }


# ---------------------------------------------------------------- field generators

# packet centres lie in |x| <= PACKET_SPREAD, |t| <= 1 whatever the box size
PACKET_SPREAD = 6.0


def packet_parameters(rng: np.random.Generator, c: float, n_packets: int, decay_range, xi_max: float) -> dict:
    """Random wavepacket centres near tau = c xi^3 with power-law amplitudes."""
    p_xi, p_tau = rng.uniform(*decay_range, size=2)
    xi0 = rng.uniform(-xi_max, xi_max, n_packets)
    offset = rng.normal(0.0, 2.0, n_packets)
    tau0 = c * xi0**3 + offset
    amp = bracket(xi0) ** -p_xi * bracket(offset) ** -p_tau
    return {
        "xi0": xi0,
        "tau0": tau0,
        "amp": amp * np.exp(2j * np.pi * rng.uniform(size=n_packets)),
        "sx": rng.uniform(0.5, 1.0, n_packets),
        "st": rng.uniform(1.0, 2.0, n_packets),
        "x0": rng.uniform(-PACKET_SPREAD, PACKET_SPREAD, n_packets),
        "t0": rng.uniform(-1.0, 1.0, n_packets),
    }


def packet_field(grid: SpaceTimeGrid, params: dict, real: bool = True) -> SpaceTimeField:
    """Sum of Gaussian wavepackets amp e^{i(xi0 x + tau0 t)} e^{-(sx (x - x0))^2/2 - (st (t - t0))^2/2}."""
    x = grid.space.x[:, None]
    t = grid.t[:, None]
    # every packet separates into an x factor times a t factor
    fx = params["amp"] * np.exp(-0.5 * (params["sx"] * (x - params["x0"])) ** 2 + 1j * params["xi0"] * x)
    ft = np.exp(-0.5 * (params["st"] * (t - params["t0"])) ** 2 + 1j * params["tau0"] * t)
    values = fx @ ft.T
    return SpaceTimeField(grid, values.real if real else values)


def gaussian_parameters(rng: np.random.Generator) -> dict:
    return {"amp": rng.uniform(0.5, 2.0), "width": rng.uniform(0.75, 2.0), "x0": rng.uniform(-3.0, 3.0)}


def gaussian_data(space: Grid1D, params: dict) -> SpectralField:
    x = space.x
    return SpectralField(space, params["amp"] * np.exp(-0.5 * ((x - params["x0"]) / params["width"]) ** 2))


# ---------------------------------------------------------------- single-field ratios


def _xsb(F: SpaceTimeField, s, b, c) -> float:
    kind = "Xsb" if c == 1.0 else "Xsb_alpha"
    return spacetime_norm(F, NormSpec(kind, s=s, b=b, alpha=c))


def _intersection(F: SpaceTimeField, s, b, gamma, c) -> float:
    return _xsb(F, s, b, c) + spacetime_norm(F, NormSpec("Vgamma", gamma=gamma))


def _dx_product(a: SpaceTimeField, b: SpaceTimeField) -> SpaceTimeField:
    grid = a.grid
    spec = 1j * grid.space.xi[:, None] * SpaceTimeField(grid, a.values * b.values).spectrum
    return SpaceTimeField.from_spectrum(grid, spec)


def bilinear_ratio(config: EstimateProbeConfig, u: SpaceTimeField | None, v: SpaceTimeField) -> float:
    """Left norm over the product of right norms; nan when the denominator vanishes."""
    s, b, gamma, alpha = config.s, config.b, config.gamma, config.alpha
    which = config.which
    if which in ("bil_1", "bil_3"):
        left_field = _dx_product(v, v)
        right = _xsb(v, s, b, alpha) ** 2
    elif which in ("bil_2", "bil_4"):
        if u is None:
            raise ValidationError(f"{which} needs both fields u and v")
        left_field = _dx_product(u, v)
        right = _intersection(u, s, b, gamma, 1.0) * _intersection(v, s, b, gamma, alpha)
    else:
        raise ValidationError(f"{which} is not a bilinear estimate")
    if which in ("bil_1", "bil_2"):
        ls, lb = s, -b
    else:
        ls, lb = 0.5 + config.plus, (2.0 * s - 1.0) / 6.0 - b
    c = 1.0 if which in ("bil_1", "bil_3") else alpha
    left = _xsb(left_field, ls, lb, c)
    return left / right if right > 0 else float("nan")


def _multiplier_field(f: SpaceTimeField, mult: np.ndarray) -> np.ndarray:
    grid = f.grid
    spec = f.spectrum * mult
    return inverse_fourier_t(inverse_fourier_x(spec, grid.space, axis=0), grid, axis=1)


def _l2_spacetime(f: SpaceTimeField) -> float:
    return mixed_norm(f.values, f.grid, 2.0, 2.0)


def spacetime_linear_ratio(config: EstimateProbeConfig, f: SpaceTimeField) -> float:
    """Ratios of the estimates whose right side is ||f_hat||_{L^2_{xi, tau}}."""
    grid = f.grid
    xi = grid.space.xi[:, None]
    tau = grid.tau[None, :]
    which = config.which
    if which == "strichartz4":
        mult = np.abs(xi) ** config.theta / bracket(tau - xi**3) ** config.b
        p, q = 4.0, 4.0
    elif which == "sobolev":
        mult = np.ones_like(xi) / bracket(tau) ** (0.5 + config.plus)
        p, q = 2.0, np.inf
    elif which == "katop":
        p = config.p
        mult = np.abs(xi) ** ((p - 2.0) / p) / bracket(tau - xi**3) ** ((p - 2.0) / (2.0 * p) + config.plus)
        q = 2.0
    else:
        raise ValidationError(f"{which} is not a space-time linear estimate")
    right = _l2_spacetime(f)
    if right == 0:
        return float("nan")
    return mixed_norm(_multiplier_field(f, mult), grid, p, q) / right


def _free_flow(u0: SpectralField, grid: SpaceTimeGrid, derivative: int, box: Grid1D) -> np.ndarray:
    """W^t u0 (or its x-derivative) computed on ``box`` and restricted to ``grid.space``."""
    spec = u0.spectrum[:, None] * airy_multiplier(box.xi[:, None], grid.t[None, :])
    if derivative:
        spec = spec * (1j * box.xi[:, None]) ** derivative
    values = inverse_fourier_x(spec, box, axis=0).real
    off = (box.n - grid.space.n) // 2
    return values[off : off + grid.space.n]


def kato_ratio(config: EstimateProbeConfig, u0: SpectralField, grid: SpaceTimeGrid) -> float:
    """max_x ||d_x W^t u0||_{L^2_t} / ||u0||_{L^2} (kato) or the temporal-trace version.

    ``u0`` lives on an enlarged box with the probe spacing; the flow runs
    there so that waves leaving the probe box do not wrap back in.
    """
    box = u0.grid
    if config.which == "kato":
        values = _free_flow(u0, grid, 1, box)
        right = sobolev_norm(u0, 0.0)
        left = mixed_norm(values, grid, np.inf, 2.0)
    elif config.which == "kato_trace":
        values = _free_flow(u0, grid, 0, box) * eta(grid.t)[None, :]
        right = sobolev_norm(u0, config.s)
        left = float(temporal_sobolev_profile(SpaceTimeField(grid, values), (config.s + 1.0) / 3.0).max())
    else:
        raise ValidationError(f"{config.which} is not a free-flow estimate")
    return left / right if right > 0 else float("nan")


# ---------------------------------------------------------------- ensembles

KATO_BOX_FACTOR = 4


def member_rng(seed: int, member: int) -> np.random.Generator:
    return np.random.default_rng([seed, member])


def _member_ratio(config: EstimateProbeConfig, grid: SpaceTimeGrid, member: int) -> float:
    rng = member_rng(config.seed, member)
    which = config.which
    if which in BILINEAR:
        pv = packet_parameters(rng, config.alpha, config.n_packets, config.decay_range, config.xi_max)
        v = packet_field(grid, pv)
        u = None
        if which in ("bil_2", "bil_4"):
            pu = packet_parameters(rng, 1.0, config.n_packets, config.decay_range, config.xi_max)
            u = packet_field(grid, pu)
        return bilinear_ratio(config, u, v)
    if which in ("kato", "kato_trace"):
        box = grid.space.enlarged(KATO_BOX_FACTOR)
        return kato_ratio(config, gaussian_data(box, gaussian_parameters(rng)), grid)
    pf = packet_parameters(rng, 1.0, config.n_packets, config.decay_range, config.xi_max)
    return spacetime_linear_ratio(config, packet_field(grid, pf))


def _run(config: EstimateProbeConfig, grid: SpaceTimeGrid, threads: int) -> np.ndarray:
    members = range(config.ensemble)
    if threads <= 1:
        return np.array([_member_ratio(config, grid, i) for i in members])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.array(list(pool.map(lambda i: _member_ratio(config, grid, i), members)))


def bilinear_ratio_probe(config: EstimateProbeConfig, probe_grid: ProbeGrid | None = None, threads: int = 1) -> EnsembleStats:
    if config.which not in BILINEAR:
        raise ValidationError(f"{config.which} is not a bilinear estimate")
    probe_grid = ProbeGrid() if probe_grid is None else probe_grid
    ratios = _run(config, probe_grid.grid(), threads)
    return EnsembleStats(config.which, ratios, config.seed, asdict(probe_grid))


def linear_estimate_probe(config: EstimateProbeConfig, probe_grid: ProbeGrid | None = None, threads: int = 1) -> EnsembleStats:
    if config.which not in LINEAR:
        raise ValidationError(f"{config.which} is not a linear estimate")
    probe_grid = ProbeGrid() if probe_grid is None else probe_grid
    ratios = _run(config, probe_grid.grid(), threads)
    return EnsembleStats(config.which, ratios, config.seed, asdict(probe_grid))


def probe(config: EstimateProbeConfig, probe_grid: ProbeGrid | None = None, threads: int = 1) -> EnsembleStats:
    if config.which in BILINEAR:
        return bilinear_ratio_probe(config, probe_grid, threads)
    return linear_estimate_probe(config, probe_grid, threads)
