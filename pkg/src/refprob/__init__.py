"""Quantum states as probability vectors over one 3-design reference measurement."""
from .designs import (
    DesignCertificate,
    WeightedEnsemble,
    frame_potential,
    is_t_design,
    moment_operator,
    mub_qubit,
    sic_qubit,
    stabilizer_states,
)
from .exceptions import (
    DimensionError,
    InputError,
    PreconditionError,
    RefprobError,
    UnsupportedConfiguration,
    ValidationError,
)
from .kernels import BACKEND
from .refdevice import (
    ReferenceDevice,
    born_matrix,
    born_rule,
    device_from_design,
    in_col_P,
    operator_of_probs,
    probs_of_state,
    project_col_P,
)
from .statespace import (
    ObservableAssignment,
    TripleTensor,
    ValidityReport,
    agreement_bounds,
    agreement_probability,
    jordan_L,
    moment_joint_probs,
    observable_lift,
    observable_project,
    pure_scalar_residuals,
    pure_vector_residual,
    renyi_entropy,
    second_moment_observable,
    trace_powers_from_probs,
    triple_tensor,
    validity_check,
    variance_bound,
)

__version__ = "0.1.0"
