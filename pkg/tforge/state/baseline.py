"""Qubit-by-qubit state preparation from conditional marginals.

Qubit k is rotated to its marginal conditioned on the value j of qubits
0..k-1. Every rotation is a single-qubit state word selected by a
gate-sequence table, and a final diagonal fixes the phases left by the
words together with the phases of the target.
"""

import logging
import time
from typing import Dict, List, Tuple

import numpy as np

from ..circuit.circuit import Circuit, QubitPool
from ..circuit.report import SynthReport
from ..config import SynthConfig
from ..diagonal.sequence import GateSequenceTable, emit_word_select
from ..diagonal.synth import emit_diagonal
from ..simulation.metrics import DiagonalSpec, ancilla_clean_weight, state_error
from ..simulation.sparse_state import run_basis
from ..squbit.htword import HTWord, emit_word
from ..squbit.search import approx_state
from .target import StateInput, as_target

logger = logging.getLogger(__name__)

_ZERO_MARGINAL = 1e-15


def conditional_states(probabilities: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Single-qubit targets for qubit k, one per value of qubits 0..k-1.

    Returns:
        tuple: States of shape (2**k, 2) and a mask of branches with zero weight,
        whose state is |0>.
    """
    marginals = probabilities.reshape(-1, 2, 2**k).sum(axis=0)
    total = marginals.sum(axis=0)
    empty = total < _ZERO_MARGINAL
    states = np.sqrt(marginals / np.where(empty, 1.0, total)).T
    states[empty] = (1.0, 0.0)
    return states, empty


def level_precision(eps: float, n: int, k: int) -> float:
    """Word precision at level k; the levels share eps/2."""
    return max(SynthConfig.eps_min, eps / 4 / 2 ** (n - 1 - k))


def _level_words(states: np.ndarray, eps: float) -> List[HTWord]:
    memo: Dict[tuple, HTWord] = {}
    words = []
    for v in states:
        key = tuple(np.round(v, 12))
        if key not in memo:
            memo[key] = HTWord() if key == (1.0, 0.0) else approx_state(v, eps)
        words.append(memo[key])
    return words


def synth_state_lks(psi: StateInput, eps: float) -> Tuple[Circuit, SynthReport]:
    """Prepare ``psi`` one qubit at a time within l2 error ``eps``.

    Args:
        psi (TargetState or array-like): Normalized amplitudes.
        eps (float): Precision in [eps_min, 1/2].

    Returns:
        tuple: The circuit and its SynthReport.
    """
    target = as_target(psi)
    if not SynthConfig.eps_min <= eps <= 0.5:
        raise ValueError(f"Epsilon {eps} outside [{SynthConfig.eps_min}, 1/2]")
    started = time.perf_counter()
    n = target.n
    circ = Circuit(n, n, label=f"state-lks n={n} eps={eps:g}")
    pool = QubitPool(circ)
    probabilities = np.abs(target.amplitudes) ** 2
    x = np.arange(2**n)
    prepared = np.ones(2**n, dtype=complex)
    zero_branches = 0
    for k in range(n):
        states, empty = conditional_states(probabilities, k)
        zero_branches += int(empty.sum())
        words = _level_words(states, level_precision(eps, n, k))
        if k == 0:
            emit_word(circ, words[0], 0)
        else:
            # The ladder applies the transpose of each stored word.
            table = GateSequenceTable.from_words([w.transpose() for w in words])
            emit_word_select(circ, pool, list(range(k)), k, table)
        columns = np.array([w.matrix()[:, 0] for w in words])
        prepared *= columns[x & (2**k - 1), (x >> k) & 1]
    reached = np.abs(target.amplitudes) > _ZERO_MARGINAL
    phases = np.where(reached, np.angle(target.amplitudes) - np.angle(prepared), 0.0)
    emit_diagonal(circ, pool, list(range(n)), DiagonalSpec(n, phases), eps / 2)
    error = 0.0
    extras = {"zero_branches": zero_branches}
    if SynthConfig.verify:
        out = run_basis(circ, 0)
        error = state_error(out, target.amplitudes)
        extras["ancilla_weight"] = ancilla_clean_weight(out, n)
    report = SynthReport.for_circuit("state-lks", circ, started, error, **extras)
    logger.info(f"State (qubit by qubit) n={n}: {report}")
    return circ.freeze(), report
