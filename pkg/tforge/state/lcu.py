"""Linear combination of coarse states behind a flag register.

The circuit V acts on the state register B (n qubits), a level register A
(log2 T qubits) and one flag qubit f:

    A-layer and G          prepare sum_k a_k |k> on A and G|0> on f
    H^n, oracle 1, H^n     apply B1 of level k when A holds k
    oracle 2               apply B2 of level k
    A-layer adjoint

Projecting onto A = 0 and f = 0 leaves g * sum_k |a_k|^2 phi_k on B, whose
norm is the flag amplitude xi. Only the moduli |a_k| matter, so each A qubit
is prepared by a single-qubit state word. The flag rotation G lowers xi to
sin(pi / (4k + 2)) for an integer k, which k rounds of amplification turn
into amplitude 1.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..boolean.oracle import emit_phase_oracle
from ..boolean.tables import PhaseTable
from ..circuit.circuit import Circuit, QubitPool
from ..config import SynthConfig
from ..errors import FlagAmplitudeError
from ..squbit.htword import HTWord, emit_word
from ..squbit.search import approx_state
from .refine import RefinementPlan

logger = logging.getLogger(__name__)


def round_amplitude(k: int) -> float:
    """Flag amplitude that k rounds of amplification map exactly to 1."""
    return math.sin(math.pi / (4 * k + 2))


def rounds_for(xi: float, k_max: int = None) -> int:
    """Smallest k >= 1 with sin(pi / (4k + 2)) <= xi.

    Raises:
        FlagAmplitudeError: If no k up to ``k_max`` qualifies.
    """
    k_max = SynthConfig.k_max if k_max is None else k_max
    for k in range(1, k_max + 1):
        if round_amplitude(k) <= xi + 1e-15:
            return k
    raise FlagAmplitudeError(
        f"flag amplitude too small: xi={xi:.4f} below sin(pi/{4 * k_max + 2})={round_amplitude(k_max):.4f}"
    )


@dataclass
class AAPlan:
    """Amplification schedule for a flagged preparation circuit.

    Attributes:
        t (int): Width of the flag register (level register plus flag qubit).
        xi (float): Amplitude of the flagged component of V|0>.
        rounds (int): Number of amplification rounds k.
        good_qubits (list of int): Qubits that are |0> on the flagged component.
        all_qubits (list of int): Every qubit V acts on besides clean scratch.
    """

    t: int
    xi: float
    rounds: int
    good_qubits: List[int]
    all_qubits: List[int]

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError(f"Amplification needs at least one round, got {self.rounds}")

    @property
    def target_amplitude(self) -> float:
        return round_amplitude(self.rounds)


def level_amplitudes(beta: float, s: int) -> List[np.ndarray]:
    """Single-qubit states whose product has amplitudes proportional to beta**(k/2)."""
    out = []
    for bit in range(s):
        v = np.array([1.0, beta ** (2**bit / 2)])
        out.append(v / np.linalg.norm(v))
    return out


def level_probabilities(columns: List[np.ndarray], T: int) -> np.ndarray:
    """Probabilities of each level k from the prepared single-qubit columns."""
    p = np.ones(T)
    k = np.arange(T)
    for bit, col in enumerate(columns):
        p = p * np.abs(col[(k >> bit) & 1]) ** 2
    return p


def flagged_vector(plan: RefinementPlan, probabilities: np.ndarray) -> np.ndarray:
    states = np.array([level.state() for level in plan.levels])
    return probabilities @ states


def ideal_flag_amplitude(plan: RefinementPlan) -> float:
    """Flag amplitude before G when every level weight is exact."""
    w = plan.weights()
    return float(np.linalg.norm(flagged_vector(plan, w / w.sum())))


def emit_v(circ: Circuit, pool: QubitPool, plan: RefinementPlan, state_qubits, level_qubits, flag: int, level_words: List[HTWord], flag_word: HTWord) -> None:
    """Append the preparation slice V on the given registers."""
    state_qubits, level_qubits = list(state_qubits), list(level_qubits)
    prepare = Circuit(circ.width, circ.input_count)
    for word, q in zip(level_words, level_qubits):
        emit_word(prepare, word, q)
    circ.compose(prepare)
    emit_word(circ, flag_word, flag)
    merged = state_qubits + level_qubits
    size = len(merged)
    first = PhaseTable(size, np.concatenate([level.b1.signs for level in plan.levels]))
    second = PhaseTable(size, np.concatenate([level.b2.signs for level in plan.levels]))
    circ.h_layer(state_qubits)
    emit_phase_oracle(circ, pool, merged, first)
    circ.h_layer(state_qubits)
    emit_phase_oracle(circ, pool, merged, second)
    circ.compose(prepare.adjoint())


def build_lcu(plan: RefinementPlan, layer_eps: float) -> Tuple[Circuit, AAPlan]:
    """Build V for ``plan`` with every single-qubit word within ``layer_eps``.

    The state register is qubits 0..n-1, the level register follows, then the
    flag qubit. The returned AAPlan records the flag amplitude measured from
    the words actually chosen.
    """
    if layer_eps <= 0:
        raise ValueError(f"Layer precision must be positive, got {layer_eps}")
    n, s, T = plan.n, plan.register_width, plan.T
    level_words = [approx_state(v, layer_eps) for v in level_amplitudes(plan.beta, s)]
    columns = [w.matrix()[:, 0] for w in level_words]
    probabilities = level_probabilities(columns, T)
    base = float(np.linalg.norm(flagged_vector(plan, probabilities)))
    rounds = rounds_for(base)
    g0 = min(1.0, round_amplitude(rounds) / base)
    flag_word = approx_state(np.array([g0, math.sqrt(max(0.0, 1 - g0**2))]), layer_eps)
    xi = abs(flag_word.matrix()[0, 0]) * base

    state_qubits = list(range(n))
    level_qubits = list(range(n, n + s))
    flag = n + s
    circ = Circuit(n + s + 1, n, label=f"lcu n={n} T={T}")
    pool = QubitPool(circ)
    emit_v(circ, pool, plan, state_qubits, level_qubits, flag, level_words, flag_word)
    aa = AAPlan(s + 1, xi, rounds, level_qubits + [flag], state_qubits + level_qubits + [flag])
    logger.debug(
        f"build_lcu: T={T}, xi before flag {base:.6f}, after {xi:.6f} "
        f"(target {aa.target_amplitude:.6f}), {rounds} rounds"
    )
    return circ.freeze(), aa
