from .hamming import emit_hamming, synth_hamming, weight_width
from .oracle import (
    choose_split,
    emit_oracle,
    emit_phase_oracle,
    emit_zero_reflection,
    synth_oracle,
    synth_phase_oracle,
    toffoli_bound,
)
from .tables import (
    PhaseTable,
    TruthTable,
    load_phase_table,
    load_truth_table,
    moebius,
    parse_phase_table,
    parse_truth_table,
)

__all__ = [
    "emit_hamming",
    "synth_hamming",
    "weight_width",
    "choose_split",
    "emit_oracle",
    "emit_phase_oracle",
    "emit_zero_reflection",
    "synth_oracle",
    "synth_phase_oracle",
    "toffoli_bound",
    "PhaseTable",
    "TruthTable",
    "load_phase_table",
    "load_truth_table",
    "moebius",
    "parse_phase_table",
    "parse_truth_table",
]
