from .amplify import amplitude_amplify, emit_amplification
from .baseline import conditional_states, synth_state_lks
from .flatten import CoarseApprox, coarse_approx, fwht, hadamard_transform, khintchine_samples
from .lcu import AAPlan, build_lcu, emit_v, ideal_flag_amplitude, round_amplitude, rounds_for
from .mass import synth_mass, weight_diagonal
from .refine import RefinementPlan, levels_needed, refine
from .synth import peel_phases, synth_state
from .target import TargetState, as_target

__all__ = [
    "amplitude_amplify",
    "emit_amplification",
    "conditional_states",
    "synth_state_lks",
    "CoarseApprox",
    "coarse_approx",
    "fwht",
    "hadamard_transform",
    "khintchine_samples",
    "AAPlan",
    "build_lcu",
    "emit_v",
    "ideal_flag_amplitude",
    "round_amplitude",
    "rounds_for",
    "synth_mass",
    "weight_diagonal",
    "RefinementPlan",
    "levels_needed",
    "refine",
    "peel_phases",
    "synth_state",
    "TargetState",
    "as_target",
]
