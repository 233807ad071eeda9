import numpy as np
import pytest

from majdabiello import HalfLineFunction, ProblemSpec, SolverParams, picard_solve


def gaussian_data(amplitude=0.1, centre=1.0, x_max=20.0, n=2049):
    return HalfLineFunction.from_callable(lambda x: amplitude * np.exp(-((x - centre) ** 2)), x_max, n)


@pytest.fixture(scope="session")
def reference_spec():
    d = gaussian_data()
    return ProblemSpec(0.5, 1.0, d, d, d, d)


@pytest.fixture(scope="session")
def reference_solution(reference_spec):
    return picard_solve(reference_spec, SolverParams())
