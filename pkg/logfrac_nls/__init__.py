"""Pseudo-spectral simulator for the logarithmic fractional Schroedinger equation, with a verification harness."""
from .grid import (
    BoundaryGuardError,
    ComplexField,
    Grid,
    GridError,
    GridMismatchError,
    NonFiniteFieldError,
    SpectralField,
    forward,
    inner_product,
    inverse,
    make_grid,
    sample,
)
from .fractional_ops import (
    CostGuardError,
    FractionalOrder,
    MomentOrder,
    commutator_apply,
    commutator_norm_estimate,
    frac_laplacian,
    gagliardo_seminorm_sq,
    half_power,
    linear_propagator,
    singular_integral_laplacian,
    weight_multiply,
)
from .log_nonlinearity import (
    CouplingConstant,
    F_split,
    RegularizationLevel,
    check_holder_log,
    check_log_growth,
    check_log_lipschitz,
    g_eps,
    mu_eps,
    nonlinear_phase_flow,
    theta_cutoff,
)
from .observables import (
    ObservableRecord,
    ObservableSeries,
    energy,
    energy_eps,
    h1_seminorm,
    hs_seminorm,
    mass,
    momentum,
    w2_defect,
    weighted_norm,
)
from .integrator import IntegrationError, SimParams, Trajectory, evolve, order_test, step, time_derivative
from .sim_types import ExperimentConfig, ExperimentReport, Verdict
from .config import ConfigError, build_config
from .experiments import EXPERIMENTS, CutoffZeta, run_experiment

# PDF rendering is optional
try:
    from .render_report import render_report_pdf
except ImportError as e:
    print(f"[WARN] PDF report rendering unavailable: {e}")
    print(f"       Install dependencies: pip install reportlab")
    render_report_pdf = None


__all__ = [
    "Grid", "ComplexField", "SpectralField", "make_grid", "sample", "forward", "inverse", "inner_product",
    "GridError", "GridMismatchError", "NonFiniteFieldError", "BoundaryGuardError",
    "FractionalOrder", "MomentOrder", "CostGuardError",
    "frac_laplacian", "half_power", "linear_propagator", "gagliardo_seminorm_sq",
    "singular_integral_laplacian", "weight_multiply", "commutator_apply", "commutator_norm_estimate",
    "RegularizationLevel", "CouplingConstant", "g_eps", "nonlinear_phase_flow", "mu_eps", "theta_cutoff",
    "F_split", "check_log_lipschitz", "check_log_growth", "check_holder_log",
    "ObservableRecord", "ObservableSeries", "mass", "momentum", "energy", "energy_eps",
    "hs_seminorm", "h1_seminorm", "weighted_norm", "w2_defect",
    "SimParams", "Trajectory", "IntegrationError", "step", "evolve", "time_derivative", "order_test",
    "ExperimentConfig", "ExperimentReport", "Verdict", "ConfigError", "build_config",
    "EXPERIMENTS", "CutoffZeta", "run_experiment", "render_report_pdf",
]
