"""The eight acceptance criteria, each at its stated tolerance and runtime budget.

Each test prints one ``ACCEPTANCE k ... PASS|FAIL`` line.  Run with ``-m "not slow"``
to skip them.
"""

import time
import warnings
from dataclasses import replace

import numpy as np
import pytest

from majdabiello import HalfLineFunction, ProblemSpec, SolverParams, picard_solve, solve_whole_line
from majdabiello.analysis import (
    BILINEAR,
    EstimateProbeConfig,
    ProbeGrid,
    conservation_drift,
    difference_energy_monitor,
    probe,
    resonance_identity_residual,
    resonance_roots,
)
from majdabiello.boundary import residual_ladder, trace_recovery_error
from majdabiello.propagators import airy_evolve
from majdabiello.solver import residual_floor
from majdabiello.spectral import Grid1D, SpectralField, l2_norm

pytestmark = pytest.mark.slow


def report(capsys, k, name, passed, detail, elapsed):
    with capsys.disabled():
        print(f"\nACCEPTANCE {k} {name}: {'PASS' if passed else 'FAIL'} ({detail}; {elapsed:.1f} s)")
    assert passed, detail


def data(amplitude=0.1, s=0.0):
    return HalfLineFunction.from_callable(lambda x: amplitude * np.exp(-((x - 1.0) ** 2)), 20.0, 2049, s=s)


PERTURBATION = HalfLineFunction.from_callable(lambda x: np.exp(-(x**2) / 2) * np.cos(x), 20.0, 2049)


def test_propagator_exactness(capsys):
    start = time.perf_counter()
    g = Grid1D(128, 10.0)
    worst = 0.0
    for j in (1, 7, -20, 50):
        xi = g.xi[g.origin + j]
        mode = SpectralField.from_function(g, lambda x: np.exp(1j * xi * x))
        for c in (1.0, 0.5, 0.899):
            for t in (0.05, -0.3, 1.7):
                exact = np.exp(1j * c * t * xi**3) * mode.values
                worst = max(worst, np.abs(airy_evolve(mode, t, c).values - exact).max())
    rng = np.random.default_rng(0)
    band = np.abs(g.xi) < 0.6 * np.abs(g.xi).max()
    unit, group = 0.0, 0.0
    for _ in range(100):
        spec = (rng.normal(size=g.n) + 1j * rng.normal(size=g.n)) * band
        f = SpectralField.from_spectrum(g, spec)
        c = rng.uniform(0.1, 1.0)
        t1, t2 = rng.uniform(-2, 2, size=2)
        norm = l2_norm(f.values, g.h)
        unit = max(unit, abs(l2_norm(airy_evolve(f, t1, c).values, g.h) - norm) / norm)
        both = airy_evolve(airy_evolve(f, t1, c), t2, c).values
        group = max(group, np.abs(both - airy_evolve(f, t1 + t2, c).values).max() / np.abs(f.values).max())
    elapsed = time.perf_counter() - start
    ok = max(worst, unit, group) < 1e-12 and elapsed < 10
    report(capsys, 1, "propagator exactness", ok, f"phase {worst:.1e}, unitarity {unit:.1e}, group {group:.1e}", elapsed)


def test_resonance_algebra(capsys):
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    for alpha in (0.25, 0.5, 0.899):
        xi1, xi2 = rng.uniform(-50, 50, size=(2, 10_000))
        tau1, tau2 = rng.uniform(-1e4, 1e4, size=(2, 10_000))
        for variant in (1, 2):
            res = resonance_identity_residual(alpha, xi1, xi2, tau1, tau2, variant, relative=True)
            worst = max(worst, float(np.max(res)))
    signs = True
    vieta = 0.0
    for alpha in rng.uniform(1e-3, 1 - 1e-3, size=1000):
        r = resonance_roots(alpha, check=False)
        signs &= 0 < r.r1 < 1 and r.r2 < 0
        vieta = max(vieta, max(r.vieta_residuals()) / max(1.0, abs(r.vieta)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and signs and vieta < 1e-12 and elapsed < 5
    report(capsys, 2, "resonance algebra", ok, f"identity {worst:.1e}, Vieta {vieta:.1e}, signs {signs}", elapsed)


def test_boundary_operator(capsys):
    start = time.perf_counter()
    h = HalfLineFunction.from_callable(lambda t: np.exp(-t) * np.sin(t), 40.0, 4097)
    errs = [trace_recovery_error(h, n) for n in (1024, 2048, 4096)]
    halving = all(b <= 0.5 * a for a, b in zip(errs, errs[1:]))
    ladder, orders = residual_ladder(h)
    ladder_half, orders_half = residual_ladder(h, alpha=0.5)
    stencil = min(orders.min(), orders_half.min()) > 1.8
    elapsed = time.perf_counter() - start
    ok = errs[1] < 1e-3 and halving and stencil and elapsed < 120
    detail = f"trace {errs[0]:.2e}/{errs[1]:.2e}/{errs[2]:.2e}, stencil orders {np.round(np.r_[orders, orders_half], 2)}"
    report(capsys, 3, "boundary operator", ok, detail, elapsed)


def test_fixed_point(capsys):
    start = time.perf_counter()
    d = data(s=1.0)
    sol = picard_solve(ProblemSpec(0.5, 1.0, d, d, d, d), SolverParams())
    rep = sol.report
    residuals = (rep.boundary_error_u, rep.boundary_error_v, rep.initial_error_u, rep.initial_error_v, rep.fixed_point_residual)
    elapsed = time.perf_counter() - start
    ok = rep.converged and rep.accepted_T <= 0.1 and rep.eventually_contracting() and max(residuals) < 5e-3 and elapsed < 600
    detail = f"T={rep.accepted_T}, {rep.iterations} iterations, last ratios {np.round(rep.ratios[-3:], 3)}, max residual {max(residuals):.1e}"
    report(capsys, 4, "fixed point", ok, detail, elapsed)


def test_conservation(capsys):
    start = time.perf_counter()
    g = Grid1D(512, 20.0)
    u0 = SpectralField(g, 0.1 * np.exp(-((g.x - 1) ** 2)))
    v0 = SpectralField(g, 0.1 * np.exp(-((g.x + 1) ** 2)))
    drifts = [conservation_drift(solve_whole_line(u0, v0, 0.5, SolverParams(T=0.1, n_t=n)), 0.5).drift for n in (256, 512)]
    tol = {"mass_u": 1e-6, "mass_v": 1e-6, "energy": 1e-6, "hamiltonian": 1e-4}
    within = all(drifts[0][k] < v for k, v in tol.items())
    decreasing = all(drifts[1][k] < drifts[0][k] for k in ("energy", "hamiltonian"))
    elapsed = time.perf_counter() - start
    ok = within and decreasing and elapsed < 300
    detail = ", ".join(f"{k} {drifts[0][k]:.1e}->{drifts[1][k]:.1e}" for k in tol)
    report(capsys, 5, "conservation", ok, detail, elapsed)


def test_continuous_dependence(capsys):
    start = time.perf_counter()
    d = data(s=1.0)
    spec = ProblemSpec(0.5, 1.0, d, d, d, d)
    params = SolverParams()
    base = picard_solve(spec, params)
    responses = []
    for delta in (1e-2, 1e-3, 1e-4):
        other = picard_solve(spec.perturbed(delta, PERTURBATION, PERTURBATION), params)
        assert other.T == base.T
        responses.append(sum(base.context.ynorms(other.u - base.u, other.v - base.v)) / delta)
    spread = max(responses) / min(responses)
    elapsed = time.perf_counter() - start
    ok = spread < 2 and elapsed < 1800
    report(capsys, 6, "continuous dependence", ok, f"responses {np.round(responses, 4)}, spread {spread:.4f}", elapsed)


def test_estimate_probes(capsys):
    start = time.perf_counter()
    grid = ProbeGrid()
    lines, ok = [], True
    for which in BILINEAR:
        config = EstimateProbeConfig(which, s=1.0, b=0.46, gamma=0.51, alpha=0.5, ensemble=200, seed=0)
        first = probe(config, grid, threads=4)
        doubled = probe(config, grid.doubled(), threads=4)
        rerun = probe(replace(config, ensemble=20), grid, threads=1)
        same = np.array_equal(rerun.ratios, first.ratios[:20])
        ratio = doubled.max / first.max
        ok &= np.isfinite(first.max) and np.isfinite(doubled.max) and same and abs(ratio - 1) <= 0.2
        lines.append(f"{which} {first.max:.4f}/{doubled.max:.4f}")
    linear = {"kato": EstimateProbeConfig("kato", s=1.0, ensemble=100), "strichartz4": EstimateProbeConfig("strichartz4", b=0.4, theta=0.0, ensemble=100)}
    for which, config in linear.items():
        first = probe(config, grid, threads=4)
        doubled = probe(config, grid.doubled(), threads=4)
        ratio = doubled.max / first.max
        ok &= np.isfinite(first.max) and abs(ratio - 1) <= 0.2
        lines.append(f"{which} {first.max:.4f}/{doubled.max:.4f}")
    elapsed = time.perf_counter() - start
    report(capsys, 7, "estimate probes", ok and elapsed < 1200, ", ".join(lines), elapsed)


def test_uniqueness_echo(capsys):
    start = time.perf_counter()
    d = data()
    spec = ProblemSpec(0.5, 1.8, d, d, d, d)
    params = SolverParams(extension="reflect1")
    a = picard_solve(spec, params)
    b = picard_solve(spec, replace(params, extension="reflect2"))
    twin = difference_energy_monitor(a, b)
    floor = residual_floor(a, b)
    fitted = []
    for delta in (1e-3, 1e-4):
        c = picard_solve(spec.perturbed(delta, PERTURBATION, PERTURBATION), params)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            fitted.append(difference_energy_monitor(a, c).fitted_C)
    stable = abs(fitted[0] - fitted[1]) <= 0.1 * max(abs(fitted[0]), abs(fitted[1]))
    elapsed = time.perf_counter() - start
    ok = twin.max_I < floor and stable and elapsed < 1200
    detail = f"max I {twin.max_I:.1e} < floor {floor:.1e}, fitted C {fitted[0]:.4f}/{fitted[1]:.4f}"
    report(capsys, 8, "uniqueness echo", ok, detail, elapsed)
