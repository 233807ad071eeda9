import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gaussian_data
from majdabiello import ProblemSpec, SolverParams, picard_solve
from majdabiello.analysis import (
    EstimateProbeConfig,
    ProbeGrid,
    bilinear_ratio,
    bilinear_ratio_probe,
    conserved_quantities,
    difference_energy_monitor,
    linear_estimate_probe,
    region_classify,
    resonance_identity_residual,
    resonance_roots,
)
from majdabiello.analysis.probes import kato_ratio, spacetime_linear_ratio
from majdabiello.errors import AdmissibilityWarning, ValidationError
from majdabiello.spectral import Grid1D, SpaceTimeField, SpaceTimeGrid, SpectralField

# ---------------------------------------------------------------- resonance


def test_roots_at_one_half():
    # (3a -/+ sqrt(3a(4-a))) / (2(a-1)) at a = 1/2: (1.5 -/+ sqrt(5.25)) / (-1)
    r = resonance_roots(0.5)
    assert r.r1 == pytest.approx(np.sqrt(5.25) - 1.5, abs=1e-14)
    assert r.r2 == pytest.approx(-np.sqrt(5.25) - 1.5, abs=1e-14)
    assert r.r1 == pytest.approx(0.79129, abs=1e-5)
    assert r.r2 == pytest.approx(-3.79129, abs=1e-5)


def test_roots_at_0899():
    r = resonance_roots(0.899)
    assert r.r1 == pytest.approx(0.965118, abs=1e-6)
    assert r.r2 == pytest.approx(-27.668, abs=1e-3)
    assert max(r.vieta_residuals()) < 1e-12 * abs(r.vieta)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 0.99))
def test_root_invariants(alpha):
    r = resonance_roots(alpha)
    assert 0 < r.r1 < 1 and r.r2 < 0
    assert r.r1 + r.r2 == pytest.approx(3 * alpha / (alpha - 1), rel=1e-12)
    assert r.r1 * r.r2 == pytest.approx(3 * alpha / (alpha - 1), rel=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 1.0, 1.5, -0.2])
def test_alpha_outside_range(alpha):
    with pytest.raises(ValidationError):
        resonance_roots(alpha)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.899])
def test_identity_special_points(alpha):
    # xi1 = 1, xi2 = 0: both sides of the first identity equal alpha - 1
    assert resonance_identity_residual(alpha, 1.0, 0.0, 0.3, -0.2, 1) < 1e-14
    # xi1 = 0: both sides of the second identity vanish
    assert resonance_identity_residual(alpha, 0.0, 2.0, 0.7, 0.1, 2) < 1e-12


@settings(max_examples=100, deadline=None)
@given(
    st.sampled_from([0.25, 0.5, 0.899]),
    st.floats(-100, 100),
    st.floats(-100, 100),
    st.floats(-1e4, 1e4),
    st.floats(-1e4, 1e4),
    st.sampled_from([1, 2]),
)
def test_identities_hold(alpha, xi1, xi2, tau1, tau2, variant):
    assert resonance_identity_residual(alpha, xi1, xi2, tau1, tau2, variant, relative=True) < 1e-9


def test_identity_variant_validated():
    with pytest.raises(ValidationError):
        resonance_identity_residual(0.5, 1, 1, 1, 1, 3)


def test_region_examples():
    assert region_classify(0.79, 1.0, 0.5, 1.5) == "A"
    assert region_classify(-3.79, 1.0, 0.5, 1.5) == "B"
    assert region_classify(10.0, 1.0, 0.5, 1.5) == "C"


def test_inadmissible_c():
    with pytest.raises(ValidationError):
        region_classify(1.0, 1.0, 0.5, 1.0)
    with pytest.raises(ValidationError):
        region_classify(1.0, 1.0, 0.5, 3.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.02, 0.98), st.floats(0.0, 1.0), st.floats(-50, 50))
def test_regions_partition(alpha, frac, xi1):
    r = resonance_roots(alpha)
    c = 1.0 + frac * 0.999 * (r.c_max - 1.0)
    if c <= 1.0:
        return
    xs = np.linspace(-2 * c * abs(r.r2 * xi1) - 1, 2 * c * abs(r.r2 * xi1) + 1, 2001)
    labels = region_classify(xs, xi1, alpha, c)
    assert set(labels) <= {"A", "B", "C"}


# ---------------------------------------------------------------- conservation


def test_conserved_quantities_of_gaussian():
    g = Grid1D(512, 20.0)
    u = SpectralField(g, np.exp(-(g.x**2) / 2))
    zero = SpectralField(g, np.zeros(512))
    q = conserved_quantities(u, zero, 0.5)
    assert q.mass_u == pytest.approx(np.sqrt(2 * np.pi), rel=1e-13)
    assert q.energy == pytest.approx(np.sqrt(np.pi), rel=1e-13)
    # H = (1/2) int x^2 e^{-x^2} = sqrt(pi)/4
    assert q.hamiltonian == pytest.approx(np.sqrt(np.pi) / 4, rel=1e-13)
    assert conserved_quantities(zero, zero, 0.5).as_array().tolist() == [0, 0, 0, 0]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 255), st.integers(0, 2**32 - 1))
def test_conserved_quantities_translation_invariant(shift, seed):
    rng = np.random.default_rng(seed)
    g = Grid1D(256, 20.0)
    c1, c2 = rng.uniform(-5, 5, 2)
    u = SpectralField(g, np.exp(-((g.x - c1) ** 2)))
    v = SpectralField(g, 0.5 * np.exp(-((g.x - c2) ** 2) / 2))
    a = conserved_quantities(u, v, 0.3).as_array()
    b = conserved_quantities(SpectralField(g, np.roll(u.values, shift)), SpectralField(g, np.roll(v.values, shift)), 0.3)
    assert np.allclose(a, b.as_array(), rtol=0, atol=1e-10)


# ---------------------------------------------------------------- probes

GRID = SpaceTimeGrid(Grid1D(64, 12.0), 64, 4.0)


def mode(grid, m, k):
    """exp(i(xi x + tau t)) at spatial index m and temporal index k."""
    xi, tau = grid.space.xi[m], grid.tau[k]
    x, t = grid.space.x[:, None], grid.t[None, :]
    return SpaceTimeField(grid, np.exp(1j * (xi * x + tau * t))), xi, tau


def br(x):
    return 1 + abs(x)


def unit_norm(grid):
    # the X^{s,b} norm of a unit-amplitude mode divided by its Fourier weight
    return 2 * np.sqrt(grid.space.L * grid.horizon)


@pytest.mark.parametrize("which", ["bil_1", "bil_3"])
def test_single_mode_bilinear_closed_form(which):
    cfg = EstimateProbeConfig(which, s=1.0, b=0.46, gamma=0.51, alpha=0.5)
    v, xi, tau = mode(GRID, 3, 2)
    N = unit_norm(GRID)
    if which == "bil_1":
        left_w = br(2 * xi) ** 1.0 * br(2 * tau - 8 * xi**3) ** -0.46
    else:
        left_w = br(2 * xi) ** 0.51 * br(2 * tau - 8 * xi**3) ** (1 / 6 - 0.46)
    expected = abs(2 * xi) * N * left_w / (N * br(xi) * br(tau - 0.5 * xi**3) ** 0.46) ** 2
    assert bilinear_ratio(cfg, None, v) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("which", ["bil_2", "bil_4"])
def test_single_mode_bilinear_closed_form_mixed(which):
    cfg = EstimateProbeConfig(which, s=1.0, b=0.46, gamma=0.51, alpha=0.5)
    u, xi1, tau1 = mode(GRID, 1, 3)  # |xi1| = pi/12 <= 1 so V^gamma contributes
    v, xi2, tau2 = mode(GRID, 5, -2)
    xi, tau = xi1 + xi2, tau1 + tau2
    N = unit_norm(GRID)
    right_u = br(xi1) * br(tau1 - xi1**3) ** 0.46 + br(tau1) ** 0.51
    right_v = br(xi2) * br(tau2 - 0.5 * xi2**3) ** 0.46 + (abs(xi2) <= 1) * br(tau2) ** 0.51
    if which == "bil_2":
        left_w = br(xi) * br(tau - 0.5 * xi**3) ** -0.46
    else:
        left_w = br(xi) ** 0.51 * br(tau - 0.5 * xi**3) ** (1 / 6 - 0.46)
    expected = abs(xi) * left_w / (N * right_u * right_v)
    assert bilinear_ratio(cfg, u, v) == pytest.approx(expected, rel=1e-10)


def test_single_mode_strichartz_closed_form():
    cfg = EstimateProbeConfig("strichartz4", theta=0.0, b=0.4)
    f, xi, tau = mode(GRID, 4, 7)
    area = 4 * GRID.space.L * GRID.horizon
    expected = br(tau - xi**3) ** -0.4 * area ** (-0.25)
    assert spacetime_linear_ratio(cfg, f) == pytest.approx(expected, rel=1e-10)


def test_zero_fields_are_skipped():
    zero = SpaceTimeField.zeros(GRID)
    assert np.isnan(bilinear_ratio(EstimateProbeConfig("bil_1"), None, zero))
    assert np.isnan(spacetime_linear_ratio(EstimateProbeConfig("sobolev"), zero))
    box = GRID.space.enlarged(4)
    assert np.isnan(kato_ratio(EstimateProbeConfig("kato"), SpectralField(box, np.zeros(box.n)), GRID))


def test_kato_ratio_below_exact_constant():
    # ||d_x W^t u0||_{L^2_t(R)} = ||u0|| / sqrt(3) at every x; a finite window sees less
    grid = SpaceTimeGrid(Grid1D(128, 24.0), 512, 8.0)
    box = grid.space.enlarged(4)
    u0 = SpectralField(box, np.exp(-(box.x**2) / 2))
    r = kato_ratio(EstimateProbeConfig("kato"), u0, grid)
    assert 0.45 < r < 1 / np.sqrt(3)


SMALL_PROBE = ProbeGrid(64, 24.0, 256, 8.0)


def test_probes_deterministic_and_thread_safe():
    cfg = EstimateProbeConfig("bil_2", ensemble=8, seed=11)
    a = bilinear_ratio_probe(cfg, SMALL_PROBE)
    b = bilinear_ratio_probe(cfg, SMALL_PROBE, threads=3)
    assert np.array_equal(a.ratios, b.ratios)
    assert a.max == b.max and a.argmax_member == b.argmax_member
    c = bilinear_ratio_probe(EstimateProbeConfig("bil_2", ensemble=8, seed=12), SMALL_PROBE)
    assert not np.array_equal(a.ratios, c.ratios)


def test_linear_probe_summary():
    stats = linear_estimate_probe(EstimateProbeConfig("katop", ensemble=5), SMALL_PROBE)
    s = stats.summary()
    assert s["n"] == 5 and s["skipped"] == 0 and np.isfinite(s["max"])
    with pytest.raises(ValidationError):
        linear_estimate_probe(EstimateProbeConfig("bil_1", ensemble=5), SMALL_PROBE)


def test_probe_config_constraints():
    with pytest.raises(ValidationError):
        EstimateProbeConfig("bil_1", b=0.40)
    with pytest.raises(ValidationError):
        EstimateProbeConfig("bil_3", s=0.3)
    with pytest.raises(ValidationError):
        EstimateProbeConfig("bil_2", gamma=0.5)
    with pytest.raises(ValidationError):
        EstimateProbeConfig("strichartz4", theta=0.2)
    with pytest.raises(ValidationError):
        EstimateProbeConfig("katop", p=2.0)
    with pytest.raises(ValidationError):
        EstimateProbeConfig("nonsense")
    with pytest.warns(AdmissibilityWarning):
        EstimateProbeConfig("bil_1", s=1.0, b=7 / 16)


# ---------------------------------------------------------------- energy monitor


@pytest.fixture(scope="module")
def small_pair():
    d = gaussian_data()
    spec = ProblemSpec(0.5, 1.8, d, d, d, d)
    params = SolverParams(n_x=256, n_t=128, n_beta=1024)
    return picard_solve(spec, params)


def test_identical_solutions_have_zero_energy(small_pair):
    mon = difference_energy_monitor(small_pair, small_pair)
    assert np.all(mon.I == 0) and mon.gronwall_ratio == 0.0
    assert mon.hypothesis_met


def test_low_regularity_is_flagged(small_pair):
    with pytest.warns(AdmissibilityWarning):
        mon = difference_energy_monitor(small_pair, small_pair, s=1.0)
    assert not mon.hypothesis_met
