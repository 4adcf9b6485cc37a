from .bitsim import run_bits
from .io import (
    format_diagonal,
    format_state,
    load_diagonal,
    load_state,
    parse_diagonal,
    parse_state,
    save_diagonal,
    save_state,
)
from .metrics import (
    DiagonalSpec,
    ancilla_clean_weight,
    check_within,
    circuit_columns,
    diagonal_op_norm_error,
    extract_diagonal,
    l2_phase_min_distance,
    operator_error,
    state_error,
)
from .sparse_state import SparseState, run, run_basis

__all__ = [
    "run_bits",
    "format_diagonal",
    "format_state",
    "load_diagonal",
    "parse_diagonal",
    "save_diagonal",
    "load_state",
    "parse_state",
    "save_state",
    "DiagonalSpec",
    "ancilla_clean_weight",
    "check_within",
    "circuit_columns",
    "diagonal_op_norm_error",
    "extract_diagonal",
    "l2_phase_min_distance",
    "operator_error",
    "state_error",
    "SparseState",
    "run",
    "run_basis",
]
