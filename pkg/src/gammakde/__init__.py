"""Gamma-kernel estimation of densities and their derivatives on [0, inf).

The estimator places a gamma density at each evaluation point, with the
shape parameter tied to the point so that no kernel mass ever falls below
zero.  Alongside the estimator itself the package carries its asymptotic
moment expansions, three data-independent bandwidth rules built from them,
and a reproducible simulation harness.

Layout
------
kernels      gamma kernel and its derivative in the evaluation point
estimator    sample container and grid evaluation of the two estimators
refdens      reference densities (Maxwell, chi-square) and exact sampling
asymptotics  bias/variance/MSE/MISE expansions and bandwidth selectors
harness      experiment configs, replication engine, JSON/CSV reports
specfun      log-gamma, digamma, Stirling gamma ratio (self-contained)
numerics     adaptive quadrature on (0, inf), bisection, golden section
cli          `gammakde` command line front end
"""

from .asymptotics import (
    BandwidthConstants,
    BandwidthReport,
    MiseIntegrals,
    PointwiseBandwidth,
    RefinedBandwidth,
    bandwidth_report,
    bias_boundary,
    bias_interior,
    chen_bandwidth,
    chen_constants,
    curvature_term,
    global_bandwidth_plugin,
    mise_integrals,
    mise_leading,
    mse_leading,
    pointwise_optimal,
    refined_bandwidth,
    squared_kernel_constant,
    squared_kernel_constant_stirling,
    variance_leading,
)
from .estimator import (
    GridEvaluation,
    Sample,
    SampleMeta,
    density_at,
    derivative_at,
    evaluate_on_grid,
    load_grid_csv,
    save_grid_csv,
)
from .harness import (
    BandwidthSelectionError,
    ConfigError,
    ConvergenceConfig,
    ConvergenceResult,
    ExperimentConfig,
    ExperimentReport,
    FixedBandwidth,
    GridSpec,
    MomentCheckConfig,
    MomentCheckReport,
    asymptotic_moment_check,
    convergence_study,
    run_experiment,
    write_report,
)
from .kernels import Branch, KernelShape, kernel_value, kernel_x_derivative, shape_params
from .numerics import (
    IntegrationError,
    NoRootError,
    QuadratureResult,
    central_difference,
    find_root,
    integrate_semi_infinite,
    minimize_scalar,
)
from .refdens import (
    ChiSquareParams,
    MaxwellParams,
    PdfDerivs,
    ReferenceDensity,
    chi_square_pdf_derivs,
    chi_square_reference,
    derived_seed,
    load_sample,
    maxwell_cdf,
    maxwell_pdf_derivs,
    maxwell_reference,
    reference_for,
    sample,
    save_sample,
)
from .specfun import digamma, log_gamma, stirling_ratio

__version__ = "0.1.0"

__all__ = [
    "BandwidthConstants",
    "BandwidthReport",
    "BandwidthSelectionError",
    "Branch",
    "ChiSquareParams",
    "ConfigError",
    "ConvergenceConfig",
    "ConvergenceResult",
    "ExperimentConfig",
    "ExperimentReport",
    "FixedBandwidth",
    "GridEvaluation",
    "GridSpec",
    "IntegrationError",
    "KernelShape",
    "MaxwellParams",
    "MiseIntegrals",
    "MomentCheckConfig",
    "MomentCheckReport",
    "NoRootError",
    "PdfDerivs",
    "PointwiseBandwidth",
    "QuadratureResult",
    "ReferenceDensity",
    "RefinedBandwidth",
    "Sample",
    "SampleMeta",
    "asymptotic_moment_check",
    "bandwidth_report",
    "bias_boundary",
    "bias_interior",
    "central_difference",
    "chen_bandwidth",
    "chen_constants",
    "chi_square_pdf_derivs",
    "chi_square_reference",
    "convergence_study",
    "curvature_term",
    "density_at",
    "derivative_at",
    "derived_seed",
    "digamma",
    "evaluate_on_grid",
    "find_root",
    "global_bandwidth_plugin",
    "integrate_semi_infinite",
    "kernel_value",
    "kernel_x_derivative",
    "load_grid_csv",
    "load_sample",
    "log_gamma",
    "maxwell_cdf",
    "maxwell_pdf_derivs",
    "maxwell_reference",
    "minimize_scalar",
    "mise_integrals",
    "mise_leading",
    "mse_leading",
    "pointwise_optimal",
    "reference_for",
    "refined_bandwidth",
    "run_experiment",
    "sample",
    "save_grid_csv",
    "save_sample",
    "shape_params",
    "squared_kernel_constant",
    "squared_kernel_constant_stirling",
    "stirling_ratio",
    "variance_leading",
    "write_report",
]
