"""Spectral solver for the Majda-Biello system on the half line, with estimate probes."""

from .boundary import BoundaryQuadrature, w0_solve_linear_ibvp, w1_apply, boundary_trace
from .errors import (
    AdmissibilityWarning,
    ConvergenceError,
    IncompatibleDataWarning,
    MajdaBielloError,
    NumericsWarning,
    OffGridTraceWarning,
    QuadratureTailError,
    ValidationError,
)
from .extension import HalfLineFunction, HalfLineNorm, extend, halfline_norm_upper
from .propagators import airy_evolve, duhamel_integral, eta, linear_flow, time_cutoff
from .solver import (
    IterationReport,
    ProblemSpec,
    Solution,
    SolverParams,
    boundary_corrections,
    gamma_map,
    picard_solve,
    restrict_to_quadrant,
    solve_whole_line,
)
from .spectral import (
    Grid1D,
    NormSpec,
    SpaceTimeField,
    SpaceTimeGrid,
    SpectralField,
    forward_fourier,
    inverse_fourier,
    sobolev_norm,
    spacetime_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
