"""Numerical Finsleroid-Finsler geometry engine.

Metric structures parametrized by a charge g over warped backgrounds,
closed-form connections and curvature tensors on Landsberg spaces, the
conserved tensor built from curvature contractions, and the corrected
cosmology of the induced field equations.
"""

from .background import (
    BFieldFrame,
    LandsbergData,
    ScaleFactor,
    WarpedBackground,
    load_background,
)
from .connection import (
    ConnectionCoeffs,
    SprayBundle,
    connection_coeffs,
    covariant_derivative,
    finsler_gamma,
    geodesic_trace_csv,
    integrate_geodesic,
    osculate,
    spray,
    spray_components,
    spray_generic,
)
from .conserved import (
    CoefficientExpansion,
    ConservedBundle,
    SkewPart,
    SpecialScalars,
    coefficient_expansion,
    conservation_residuals,
    conserved_bundle,
    hydrodynamic_pressure_scalar,
    osculated_current,
    rho_tensor,
    skew_part,
    special_case_scalars,
    sum_tensor_reconstruction,
)
from .cosmology import (
    Closure,
    CosmoState,
    continuity_residual,
    deceleration_from_pressure,
    dust_invariant_drift,
    energy_density,
    evolve,
    pressure,
    pressure_conserved,
    states_from_scale_factor,
    trajectory_csv,
    zero_pressure_charge,
)
from .curvature import (
    CurvatureBundle,
    curvature_tensors,
    cyclic_identity_check,
    deviation_closed,
    deviation_generic,
    scalar_isotropic_closed,
)
from .metric import (
    EPS_POLE,
    FinsleroidCharge,
    FinsleroidScalars,
    LineElement,
    cartan,
    classify_sector,
    indicatrix_curvature,
    metric_function,
    metric_tensor,
    scalars,
)
from .numerics import (
    ChartBoundary,
    ConfigError,
    DiffConfig,
    FinsleroidError,
    GridTooCoarse,
    PoleProximity,
    RecollapseBoundary,
    SectorViolation,
)
from .verification import (
    SUITES,
    TOLERANCES,
    IdentityRecord,
    SuiteReport,
    VerificationCell,
    fixture_records,
    run_all,
    run_suite,
    sample_line_elements,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # background
    "BFieldFrame", "LandsbergData", "ScaleFactor", "WarpedBackground", "load_background",
    # metric
    "EPS_POLE", "FinsleroidCharge", "FinsleroidScalars", "LineElement",
    "cartan", "classify_sector", "indicatrix_curvature", "metric_function",
    "metric_tensor", "scalars",
    # connection
    "ConnectionCoeffs", "SprayBundle", "connection_coeffs", "covariant_derivative",
    "finsler_gamma", "geodesic_trace_csv", "integrate_geodesic", "osculate",
    "spray", "spray_components", "spray_generic",
    # curvature
    "CurvatureBundle", "curvature_tensors", "cyclic_identity_check",
    "deviation_closed", "deviation_generic", "scalar_isotropic_closed",
    # conserved
    "CoefficientExpansion", "ConservedBundle", "SkewPart", "SpecialScalars",
    "coefficient_expansion", "conservation_residuals", "conserved_bundle",
    "hydrodynamic_pressure_scalar", "osculated_current", "rho_tensor",
    "skew_part", "special_case_scalars", "sum_tensor_reconstruction",
    # cosmology
    "Closure", "CosmoState", "continuity_residual", "deceleration_from_pressure",
    "dust_invariant_drift", "energy_density", "evolve", "pressure",
    "pressure_conserved", "states_from_scale_factor", "trajectory_csv",
    "zero_pressure_charge",
    # verification
    "SUITES", "TOLERANCES", "IdentityRecord", "SuiteReport", "VerificationCell",
    "fixture_records", "run_all", "run_suite", "sample_line_elements",
    # exceptions
    "ChartBoundary", "ConfigError", "DiffConfig", "FinsleroidError",
    "GridTooCoarse", "PoleProximity", "RecollapseBoundary", "SectorViolation",
]
