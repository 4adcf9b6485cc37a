from .sequence import (
    GateSequenceTable,
    build_sequence_table,
    controlled_ladder,
    emit_ladder,
    emit_word_select,
    phase_unit,
)
from .singles import emit_tensor_singles, group_size, synth_batched, synth_tensor_singles, tensor_matrix
from .synth import emit_block_diag, emit_diagonal, synth_block_diag, synth_diagonal

__all__ = [
    "GateSequenceTable",
    "build_sequence_table",
    "controlled_ladder",
    "emit_ladder",
    "emit_word_select",
    "phase_unit",
    "emit_tensor_singles",
    "group_size",
    "synth_batched",
    "synth_tensor_singles",
    "tensor_matrix",
    "emit_block_diag",
    "emit_diagonal",
    "synth_block_diag",
    "synth_diagonal",
]
