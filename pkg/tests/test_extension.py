import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from majdabiello.errors import ValidationError
from majdabiello.extension import (
    HalfLineFunction,
    extend,
    extension_norm,
    halfline_norm_upper,
    reflection_coefficients,
    zero_extension_admissible,
)
from majdabiello.spectral import Grid1D


def exp_decay(n=4097, x_max=40.0):
    return HalfLineFunction.from_callable(lambda t: np.exp(-t), x_max, n)


@pytest.mark.parametrize(
    "order, expected",
    [(1, [3.0, -2.0]), (2, [6.0, -8.0, 3.0]), (3, [10.0, -20.0, 15.0, -4.0])],
)
def test_reflection_coefficients(order, expected):
    # hand solution of sum_k a_k (-k)^j = 1, j = 0..order
    assert np.allclose(reflection_coefficients(order), expected, atol=1e-12)


def test_reflection_order_validated():
    with pytest.raises(ValidationError):
        reflection_coefficients(4)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_smooth_extension_matches_derivatives(order):
    h = HalfLineFunction.from_callable(lambda t: np.exp(-t) * np.cos(2 * t), 30.0, 6001)
    a = reflection_coefficients(order)

    def extended(x):
        return sum(ak * h(-(k + 1) * x) for k, ak in enumerate(a))

    # derivatives of the reflected branch at 0-: d^j/dx^j sum a_k h(-(k+1)x) = sum a_k (-(k+1))^j h^(j)(0)
    for j in range(order + 1):
        left = sum(ak * (-(k + 1)) ** j for k, ak in enumerate(a)) * h.derivative_at_zero(j)
        assert left == pytest.approx(h.derivative_at_zero(j), rel=1e-9, abs=1e-9)
    grid = Grid1D(1024, 30.0)
    field = extend(h, grid, f"reflect{order}")
    neg = grid.x < 0
    assert np.allclose(field.values[neg], extended(grid.x[neg]))


def test_halfline_validation():
    x = np.linspace(0, 1, 10)
    with pytest.raises(ValidationError):
        HalfLineFunction(x + 0.1, np.zeros(10))
    with pytest.raises(ValidationError):
        HalfLineFunction(x**2, np.zeros(10))
    with pytest.raises(ValidationError):
        HalfLineFunction(x, np.ones(10))  # has not decayed
    with pytest.raises(ValidationError):
        HalfLineFunction(x, np.full(10, np.nan), check_decay=False)


def test_csv_requires_header(tmp_path):
    good = tmp_path / "good.csv"
    good.write_text("t,h\n" + "\n".join(f"{t},{np.exp(-t) * 0}" for t in np.linspace(0, 1, 5)))
    h = HalfLineFunction.from_csv(good)
    assert h.samples.size == 5
    bad = tmp_path / "bad.csv"
    bad.write_text("0,1\n1,0\n")
    with pytest.raises(ValidationError):
        HalfLineFunction.from_csv(bad)


def test_zero_extension_l2_norm():
    # ||chi e^{-t}||_{L^2}^2 = 1/2.  The node x = 0 carries h(0)/2, so the grid sum
    # misses h/4 of the trapezoid weight there: norm^2 = 1/2 - h/4 + O(h^2).
    h = exp_decay()
    for n in (8192, 32768):
        grid = Grid1D(n, 40.0)
        value = extension_norm(h, 0.0, "zero", grid)
        assert abs(value - 1 / np.sqrt(2)) < 2e-3
        assert value == pytest.approx(np.sqrt(0.5 - grid.h / 4), abs=5e-5)


def test_zero_extension_admissibility():
    h = exp_decay()
    assert zero_extension_admissible(h, 0.3)
    assert not zero_extension_admissible(h, 1.0)
    g = HalfLineFunction.from_callable(lambda t: t * np.exp(-t), 40.0, 4097)
    assert zero_extension_admissible(g, 1.0)
    assert not zero_extension_admissible(g, 1.6)


def test_upper_norm_is_menu_minimum():
    h = HalfLineFunction.from_callable(lambda t: np.exp(-t) * np.sin(t), 40.0, 4097)
    result = halfline_norm_upper(h, 0.6)
    values = {k: extension_norm(h, 0.6, k) for k in ("zero", "reflect1", "reflect2", "reflect3")}
    assert result.value == pytest.approx(min(values.values()))
    # h(0) = 0 keeps the zero extension admissible and it wins here
    assert result.extension == "zero"
    assert result.is_upper_bound


def test_upper_norm_excludes_zero_when_inadmissible():
    result = halfline_norm_upper(exp_decay(), 1.0)
    assert result.extension != "zero"
    with pytest.raises(ValidationError):
        halfline_norm_upper(exp_decay(), 2.5)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 2.0), st.floats(0.5, 3.0))
def test_half_line_arithmetic(a, b):
    h = exp_decay(513, 40.0)
    g = h.scaled(a) + h.scaled(b)
    assert np.allclose(g.samples, (a + b) * h.samples)
