"""Fixed-round amplitude amplification of a flagged preparation."""

import logging
from typing import Sequence

from ..boolean.oracle import emit_zero_reflection
from ..circuit.circuit import Circuit, QubitPool
from ..circuit.gates import Gate
from .lcu import AAPlan

logger = logging.getLogger(__name__)


def emit_amplification(circ: Circuit, pool: QubitPool, v_gates: Sequence[Gate], aa: AAPlan) -> None:
    """Append ``aa.rounds`` rounds after a copy of V already in ``circ``.

    Each round reflects about the unflagged subspace, undoes V, reflects about
    |0> on every register and reapplies V. Both reflections are exact; the
    global sign (-1)**rounds is dropped.
    """
    v_gates = list(v_gates)
    for _ in range(aa.rounds):
        emit_zero_reflection(circ, pool, aa.good_qubits)
        for gate in reversed(v_gates):
            circ.append(gate.adjoint())
        emit_zero_reflection(circ, pool, aa.all_qubits)
        for gate in v_gates:
            circ.append(gate)


def amplitude_amplify(V: Circuit, aa: AAPlan) -> Circuit:
    """Return V followed by ``aa.rounds`` amplification rounds."""
    out = V.copy()
    out.label = f"{V.label} amplified k={aa.rounds}"
    # Scratch qubits of V are clean between its applications.
    pool = QubitPool(out, reusable=range(max(aa.all_qubits) + 1, V.width))
    emit_amplification(out, pool, V.gates, aa)
    logger.debug(f"amplitude_amplify: {aa.rounds} rounds, width {out.width}")
    return out.freeze()
