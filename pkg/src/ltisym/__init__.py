"""Symmetry and symmetrizability analysis for square LTI systems.

The package decides whether a linear time-invariant system with equally many
inputs and outputs is symmetric, whether a static input/output gain can make
it symmetric, produces nonsingular certificate matrices witnessing this,
synthesizes the gains and symmetric realizations with prescribed signature,
enumerates all achievable signatures, and emits the closed-form optimal
output-feedback controller for relaxation-type systems.
"""

__version__ = "0.1.0"

from .control import (
    ControllerResult,
    SimulationResult,
    optimal_controller,
    relaxation_check,
    simulate_closed_loop,
)
from .exceptions import (
    Defective,
    DimensionError,
    ExhaustedRetries,
    IllPosedLoop,
    Infeasible,
    LtisymError,
    MinimalityError,
    NotPositiveDefinite,
    NotSymmetricMatrix,
    NotSymmetrizable,
    ParseError,
    PatternLimitExceeded,
    PreconditionFailed,
    SingularA,
    SingularBlock,
    SingularResolvent,
    SingularTransform,
    SingularityError,
    SolverFailure,
    UnstableLoopWarning,
    WrongStructure,
)
from .spectral import (
    EigStructure,
    Inertia,
    eig_structure,
    inertia,
    kernel,
    khatri_rao,
    matrix_rank,
)
from .statespace import (
    StateSpace,
    SystemMatrix,
    TankParams,
    apply_io_transform,
    dump_system,
    is_minimal,
    load_system,
    quadruple_tank,
    random_symmetric_system,
    sample_points,
    split_system_matrix,
    system_matrix,
    transfer_eval,
)
from .symmetrizability import (
    NecessaryVerdict,
    SolutionSubspace,
    SymmetrizabilityCertificate,
    achievable_signatures,
    certificate_from_json,
    certificate_from_kernel_vector,
    certificate_relative_residuals,
    certificate_to_json,
    complete_symmetrizability,
    decide_distinct_real,
    gains_from_Q,
    necessary_test,
    solution_subspace,
    symmetrize,
)
from .symmetry import (
    SignConstraintGraph,
    SignatureMatrix,
    check_external_symmetry,
    check_internal_symmetry,
    sign_consistency,
    split_signature,
)

__all__ = [
    "__version__",
    # statespace
    "StateSpace", "SystemMatrix", "TankParams", "system_matrix",
    "split_system_matrix", "load_system", "dump_system", "transfer_eval",
    "apply_io_transform", "quadruple_tank", "random_symmetric_system",
    "is_minimal", "sample_points",
    # symmetry
    "SignatureMatrix", "SignConstraintGraph", "sign_consistency",
    "check_internal_symmetry", "check_external_symmetry", "split_signature",
    # spectral
    "EigStructure", "Inertia", "eig_structure", "khatri_rao", "kernel",
    "inertia", "matrix_rank",
    # symmetrizability
    "NecessaryVerdict", "SolutionSubspace", "SymmetrizabilityCertificate",
    "necessary_test", "solution_subspace", "decide_distinct_real",
    "complete_symmetrizability", "gains_from_Q", "symmetrize",
    "achievable_signatures", "certificate_from_kernel_vector",
    "certificate_to_json", "certificate_from_json",
    "certificate_relative_residuals",
    # control
    "ControllerResult", "SimulationResult", "relaxation_check",
    "optimal_controller", "simulate_closed_loop",
    # errors
    "LtisymError", "ParseError", "DimensionError", "SingularityError",
    "SingularResolvent", "SingularTransform", "SingularBlock", "SingularA",
    "MinimalityError", "Defective", "WrongStructure", "NotSymmetrizable",
    "Infeasible", "NotSymmetricMatrix", "NotPositiveDefinite",
    "PatternLimitExceeded", "SolverFailure", "PreconditionFailed",
    "ExhaustedRetries", "IllPosedLoop", "UnstableLoopWarning",
]
