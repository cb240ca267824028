"""Tsallis-q entanglement entropy, monogamy residuals, and convex-roof tools
for multiqubit and small qudit systems (total dimension up to 64)."""

from .analysis import (
    DerivativeSample,
    SignScanReport,
    critical_q,
    curvature_limit_at_max_c,
    find_root_q,
    holds_power_bound,
    holds_sum_power_bound,
    scan_sign,
    tee_curvature,
    tee_curvature_wrt_c,
    tee_sq_curvature,
)
from .errors import DomainError, PartitionError, QRangeError, StateFormatError
from .linalg import (
    hermitian_eigensystem,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    psd_sqrt,
)
from .measures import (
    ANALYTIC_Q_MAX,
    ANALYTIC_Q_MIN,
    ConcurrenceValue,
    QParam,
    TeeEstimate,
    as_q,
    binary_entropy,
    concurrence_pure,
    concurrence_two_qubit,
    ef_two_qubit,
    spin_flip_two_qubit,
    tee_2xd,
    tee_from_concurrence_sq,
    tee_pure,
    tee_two_qubit,
    tsallis_entropy,
)
from .monogamy import (
    IndicatorResult,
    MonogamyReport,
    alpha_residual,
    ckw_check,
    example3_residual,
    example4_residual,
    example5_residual,
    hierarchical_check,
    indicator,
    random_biseparable_mixture,
    tee_sq_residual,
    w_indicator_closed_form,
)
from .qstate import (
    Decomposition,
    DensityMatrix,
    PureState,
    example3_state,
    example4_state,
    example5_state,
    generalized_w,
    ghz,
    load_state,
    random_pure_state,
    reduced_density,
    save_state,
    w_state,
)
from .roof import (
    RoofConfig,
    RoofResult,
    concurrence_cost,
    decomposition_from_isometry,
    indicator_summand_cost,
    minimize_roof,
    roof_concurrence,
    tee_cost,
)

__version__ = "0.1.0"

__all__ = [
    "ANALYTIC_Q_MAX",
    "ANALYTIC_Q_MIN",
    "ConcurrenceValue",
    "Decomposition",
    "DensityMatrix",
    "DerivativeSample",
    "DomainError",
    "IndicatorResult",
    "MonogamyReport",
    "PartitionError",
    "PureState",
    "QParam",
    "QRangeError",
    "RoofConfig",
    "RoofResult",
    "SignScanReport",
    "StateFormatError",
    "TeeEstimate",
    "alpha_residual",
    "as_q",
    "binary_entropy",
    "ckw_check",
    "concurrence_cost",
    "concurrence_pure",
    "concurrence_two_qubit",
    "critical_q",
    "curvature_limit_at_max_c",
    "decomposition_from_isometry",
    "ef_two_qubit",
    "example3_residual",
    "example3_state",
    "example4_residual",
    "example4_state",
    "example5_residual",
    "example5_state",
    "find_root_q",
    "generalized_w",
    "ghz",
    "hermitian_eigensystem",
    "hermitian_eigenvalues",
    "hierarchical_check",
    "holds_power_bound",
    "holds_sum_power_bound",
    "indicator",
    "indicator_summand_cost",
    "kron",
    "load_state",
    "minimize_roof",
    "partial_trace",
    "psd_sqrt",
    "random_biseparable_mixture",
    "random_pure_state",
    "reduced_density",
    "roof_concurrence",
    "save_state",
    "scan_sign",
    "spin_flip_two_qubit",
    "tee_2xd",
    "tee_cost",
    "tee_curvature",
    "tee_curvature_wrt_c",
    "tee_from_concurrence_sq",
    "tee_pure",
    "tee_sq_curvature",
    "tee_sq_residual",
    "tee_two_qubit",
    "tsallis_entropy",
    "w_indicator_closed_form",
    "w_state",
]
