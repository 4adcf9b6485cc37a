from .circuit import Circuit, QubitPool, gate_counts
from .gates import Gate, GateKind
from .io import load_circuit, parse, save_circuit, serialize
from .macros import C_CCX, C_CH, C_CT, clifford_count, expand_macros, t_count
from .report import CSV_COLUMNS, SynthReport

__all__ = [
    "Circuit",
    "QubitPool",
    "gate_counts",
    "Gate",
    "GateKind",
    "load_circuit",
    "parse",
    "save_circuit",
    "serialize",
    "C_CCX",
    "C_CH",
    "C_CT",
    "clifford_count",
    "expand_macros",
    "t_count",
    "CSV_COLUMNS",
    "SynthReport",
]
