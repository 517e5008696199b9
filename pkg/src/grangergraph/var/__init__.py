"""Graphical time series models: VAR(p, G), nonlinear simulators and empirical tests."""

from .estimator import GraphicalVAR
from .inference import TestReport, check_statement, test_contemp, test_noncausal, test_regime
from .model import (
    TimeSeries,
    VarModel,
    Violation,
    companion_matrix,
    fit_var,
    is_stationary,
    power_iteration_radius,
    random_var,
    simulate_var,
    validate_var,
)
from .nonlinear import (
    CATALOG,
    SpikeModelParams,
    ThresholdModelParams,
    counterexample_graphs,
    counterexample_report,
    simulate_additive,
    simulate_spike,
    simulate_threshold,
)

__all__ = [
    "GraphicalVAR",
    "TestReport",
    "check_statement",
    "test_contemp",
    "test_noncausal",
    "test_regime",
    "TimeSeries",
    "VarModel",
    "Violation",
    "companion_matrix",
    "fit_var",
    "is_stationary",
    "power_iteration_radius",
    "random_var",
    "simulate_var",
    "validate_var",
    "CATALOG",
    "SpikeModelParams",
    "ThresholdModelParams",
    "counterexample_graphs",
    "counterexample_report",
    "simulate_additive",
    "simulate_spike",
    "simulate_threshold",
]
