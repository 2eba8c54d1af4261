"""Entanglement-assisted BPSK receivers over a lossy thermal channel.

Photon statistics, threshold detection, and capacity figures of merit
for the amplifier, conjugator and hybrid receiver designs.
"""

from .capacity import (
    BinaryChannel,
    CapacityResult,
    binary_mutual_information,
    ea_capacity,
    g_thermal,
    gaussian_vs_nb_capacity_error,
    holevo_capacity,
    homodyne_capacity,
    information_rate,
    mode_count,
    ultimate_capacity,
)
from .detection import (
    DEFAULT_UNEQUAL_PRIORS,
    DetectionModel,
    EQUAL_PRIORS,
    GAUSSIAN_APPROX,
    NEGATIVE_BINOMIAL,
    OH,
    OPA_IDLER,
    OPA_RETURN,
    OPC,
    Priors,
    RECEIVERS,
    ThresholdResult,
    equal_prior_threshold_gaussian,
    error_probability,
    optimal_threshold,
    pe_surface,
    pe_sweep,
    receiver_mode_stats,
    threshold_balance_root,
)
from .errors import (
    ConvergenceError,
    DegenerateInputError,
    InvalidParameterError,
    UnsupportedConfigurationError,
)
from .photostats import (
    GaussianParams,
    NegBinParams,
    erf,
    erfc,
    gaussian_cdf,
    log_gamma,
    nb_cdf,
    nb_pmf,
    reg_inc_beta,
    std_normal_cdf,
)
from .receivers import (
    BALANCED_BPSK,
    ChannelParams,
    DEFAULT_PARAMS,
    IDLER_PORT,
    ModeStats,
    OhConfig,
    RETURN_PORT,
    oh_mean,
    oh_mode_stats,
    opa_mode_stats,
    opc_mode_stats,
    return_idler_covariance,
    tmsv_covariance,
)

__version__ = "0.1.0"

__all__ = [
    "BALANCED_BPSK",
    "BinaryChannel",
    "CapacityResult",
    "ChannelParams",
    "ConvergenceError",
    "DEFAULT_PARAMS",
    "DEFAULT_UNEQUAL_PRIORS",
    "DegenerateInputError",
    "DetectionModel",
    "EQUAL_PRIORS",
    "GAUSSIAN_APPROX",
    "GaussianParams",
    "IDLER_PORT",
    "InvalidParameterError",
    "ModeStats",
    "NEGATIVE_BINOMIAL",
    "NegBinParams",
    "OH",
    "OPA_IDLER",
    "OPA_RETURN",
    "OPC",
    "OhConfig",
    "Priors",
    "RECEIVERS",
    "RETURN_PORT",
    "ThresholdResult",
    "UnsupportedConfigurationError",
    "binary_mutual_information",
    "ea_capacity",
    "equal_prior_threshold_gaussian",
    "erf",
    "erfc",
    "error_probability",
    "g_thermal",
    "gaussian_cdf",
    "gaussian_vs_nb_capacity_error",
    "holevo_capacity",
    "homodyne_capacity",
    "information_rate",
    "log_gamma",
    "mode_count",
    "nb_cdf",
    "nb_pmf",
    "oh_mean",
    "oh_mode_stats",
    "opa_mode_stats",
    "opc_mode_stats",
    "optimal_threshold",
    "pe_surface",
    "pe_sweep",
    "receiver_mode_stats",
    "reg_inc_beta",
    "return_idler_covariance",
    "std_normal_cdf",
    "threshold_balance_root",
    "tmsv_covariance",
    "ultimate_capacity",
]
