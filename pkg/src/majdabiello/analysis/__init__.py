"""Resonance algebra, conserved quantities, estimate probes and the difference-energy monitor."""

from .conservation import ConservedQuantities, DriftReport, conservation_drift, conserved_quantities
from .energy import EnergyMonitor, difference_energy_monitor
from .probes import (
    BILINEAR,
    LINEAR,
    PROBE_KINDS,
    EnsembleStats,
    EstimateProbeConfig,
    ProbeGrid,
    bilinear_ratio,
    bilinear_ratio_probe,
    linear_estimate_probe,
    probe,
)
from .resonance import ResonanceRoots, region_classify, resonance_identity_residual, resonance_roots

__all__ = [
    "BILINEAR",
    "LINEAR",
    "PROBE_KINDS",
    "ConservedQuantities",
    "DriftReport",
    "EnergyMonitor",
    "EnsembleStats",
    "EstimateProbeConfig",
    "ProbeGrid",
    "ResonanceRoots",
    "bilinear_ratio",
    "bilinear_ratio_probe",
    "conservation_drift",
    "conserved_quantities",
    "difference_energy_monitor",
    "linear_estimate_probe",
    "probe",
    "region_classify",
    "resonance_identity_residual",
    "resonance_roots",
]
