"""tforge: Clifford+T synthesis of states, diagonals and oracles with low T-count."""

from .boolean import PhaseTable, TruthTable, synth_hamming, synth_oracle, synth_phase_oracle
from .circuit import Circuit, Gate, GateKind, SynthReport, expand_macros, t_count
from .config import SynthConfig
from .diagonal import (
    synth_batched,
    synth_block_diag,
    synth_diagonal,
    synth_tensor_singles,
)
from .errors import TForgeError
from .simulation import DiagonalSpec, SparseState, extract_diagonal, run, state_error
from .squbit import HTWord, approx_state, approx_su2
from .state import TargetState, synth_mass, synth_state, synth_state_lks

from importlib.metadata import version

__version__ = version("tforge")
