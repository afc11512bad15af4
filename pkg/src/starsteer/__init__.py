"""Star-network quantum steering detection toolkit.

Build source states and star networks, evaluate the steering and
genuine-steering inequalities under the fixed GHZ-basis central
measurement, locate violation thresholds, and certify the classical
bounds against explicit hidden-state models.
"""

from .correlators import (
    Assemblage,
    assemblage,
    correlator,
    correlator_dense,
    correlator_fast,
    correlator_from_probabilities,
    joint_probability,
)
from .errors import (
    DimensionMismatchError,
    InputError,
    InvalidSettingError,
    NoCrossingError,
    NonHermitianError,
    NumericsError,
    PsdViolationError,
    SizeLimitError,
    SteeringToolError,
)
from .inequalities import (
    InequalityId,
    InequalityReport,
    applicable_ids,
    bound_value,
    eval_theorem1,
    eval_theorem2,
    eval_theorem3,
    eval_theorem4,
    evaluate,
)
from .linalg import kron, kron_all, max_eigenvalue, min_eigenvalue, partial_trace
from .measurements import (
    FixedMeasurement,
    MubTriple,
    SettingString,
    default_mub,
    ghz_projectors,
    index_sets,
    setting_class,
    sign_exponent,
    y_operator,
    y_pauli_string,
)
from .oracle import (
    Bipartition,
    LhsModel,
    bipartitions,
    lemma_norm_check,
    maximize_blhs_n3,
    maximize_nlhs,
)
from .states import (
    StarNetwork,
    TwoQubitSource,
    assemble_global,
    correlation_svd,
    make_bell_diagonal,
    make_general,
    make_raw,
    make_werner,
    network_from_dict,
    network_from_json,
    star_network,
    werner_family,
    werner_network,
)
from .thresholds import (
    GENUINE_ENTANGLEMENT_N3,
    N_LOCALITY_3SET,
    N_LOCALITY_4SET,
    ThresholdResult,
    bisect_threshold,
    reproduction_table,
    solve_genuine_equation,
    solve_odd_n_equation,
    werner_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "Assemblage",
    "Bipartition",
    "DimensionMismatchError",
    "FixedMeasurement",
    "GENUINE_ENTANGLEMENT_N3",
    "InequalityId",
    "InequalityReport",
    "InputError",
    "InvalidSettingError",
    "LhsModel",
    "MubTriple",
    "N_LOCALITY_3SET",
    "N_LOCALITY_4SET",
    "NoCrossingError",
    "NonHermitianError",
    "NumericsError",
    "PsdViolationError",
    "SettingString",
    "SizeLimitError",
    "StarNetwork",
    "SteeringToolError",
    "ThresholdResult",
    "TwoQubitSource",
    "applicable_ids",
    "assemblage",
    "assemble_global",
    "bipartitions",
    "bisect_threshold",
    "bound_value",
    "correlation_svd",
    "correlator",
    "correlator_dense",
    "correlator_fast",
    "correlator_from_probabilities",
    "default_mub",
    "eval_theorem1",
    "eval_theorem2",
    "eval_theorem3",
    "eval_theorem4",
    "evaluate",
    "ghz_projectors",
    "index_sets",
    "joint_probability",
    "kron",
    "kron_all",
    "lemma_norm_check",
    "make_bell_diagonal",
    "make_general",
    "make_raw",
    "make_werner",
    "max_eigenvalue",
    "maximize_blhs_n3",
    "maximize_nlhs",
    "min_eigenvalue",
    "network_from_dict",
    "network_from_json",
    "partial_trace",
    "reproduction_table",
    "setting_class",
    "sign_exponent",
    "solve_genuine_equation",
    "solve_odd_n_equation",
    "star_network",
    "werner_family",
    "werner_network",
    "werner_threshold",
    "y_operator",
    "y_pauli_string",
]
