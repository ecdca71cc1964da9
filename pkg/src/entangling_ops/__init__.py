"""Entangling operations, their Choi operators, and cheap non-local phase gates."""

from ._kernels import BACKEND
from .channels import (
    ChoiOperator,
    Classification,
    EntanglingVerdict,
    QuantumChannel,
    TraceFlag,
    apply_channel,
    apply_via_choi,
    choi_of_channel,
    classify,
    ppt_check,
    project_implement,
)
from .gates import (
    binary_phase,
    binary_phase_approx,
    canonicalize,
    commuting_factorization,
    gate_cost,
    pauli_decompose,
    phase_gate,
)
from .operator import (
    Operator,
    embed,
    expm_hermitian,
    hermitian_eig,
    partial_trace,
    partial_transpose,
    permute,
    tensor,
)
from .protocol import (
    CounterOutcomes,
    ScriptedOutcomes,
    bell_measurement_branches,
    capability_constant,
    capability_ratio,
    expected_cost,
    f_infinity,
    f_series,
    monte_carlo,
    run_protocol,
    simulate_step,
)
from .states import (
    PureState,
    bell_state,
    entropy_of_entanglement,
    max_entangled,
    resource_state,
    schmidt,
)

__version__ = "0.1.0"
