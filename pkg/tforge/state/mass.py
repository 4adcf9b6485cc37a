"""m copies of one single-qubit unitary through Hamming-weight diagonals.

With U = A H B H C, U^(x)m = A^(x)m H^m B^(x)m H^m C^(x)m, and a diagonal
D = diag(e^{i p0}, e^{i p1}) raised to the m-th tensor power multiplies |x>
by e^{i((m - c) p0 + c p1)} with c = wt(x). Each power is applied by writing
c into a small register, applying a diagonal on that register and erasing c.
"""

import logging

import numpy as np

from ..boolean.hamming import emit_hamming, weight_width
from ..circuit.circuit import Circuit, QubitPool
from ..config import SynthConfig
from ..diagonal.singles import tensor_matrix
from ..diagonal.synth import emit_diagonal
from ..simulation.metrics import DiagonalSpec, check_within, operator_error
from ..squbit.euler import euler_hdh

logger = logging.getLogger(__name__)


def weight_diagonal(D: np.ndarray, m: int) -> DiagonalSpec:
    """Diagonal on the weight register giving phase (m - c) p0 + c p1 at value c."""
    p0, p1 = np.angle(D[0, 0]), np.angle(D[1, 1])
    width = weight_width(m)
    c = np.arange(2**width)
    phases = np.where(c <= m, (m - c) * p0 + c * p1, 0.0)
    return DiagonalSpec(width, phases)


def emit_weight_stage(circ: Circuit, pool: QubitPool, qubits, spec: DiagonalSpec, eps: float) -> None:
    """Apply diag(e^{i spec.phases[wt(x)]}) to ``qubits``; skipped for the identity."""
    if spec.is_identity():
        return
    weight = pool.allocate(spec.n)
    emit_hamming(circ, pool, qubits, weight)
    emit_diagonal(circ, pool, weight, spec, eps)
    emit_hamming(circ, pool, qubits, weight)
    pool.release(weight)


def synth_mass(U, m: int, eps: float) -> Circuit:
    """Compile U applied to each of m qubits within operator error ``eps``.

    Args:
        U (array-like): 2x2 unitary.
        m (int): Number of copies, m >= 1.
        eps (float): Precision; each of the three stages gets eps/3.
    """
    if m < 1:
        raise ValueError(f"Need at least one copy, got m={m}")
    U = np.asarray(U, dtype=complex).reshape(2, 2)
    a, b, c = euler_hdh(U)
    qubits = list(range(m))
    circ = Circuit(m, m, label=f"mass m={m}")
    pool = QubitPool(circ)
    stage_b = weight_diagonal(b, m)
    if stage_b.is_identity():
        emit_weight_stage(circ, pool, qubits, weight_diagonal(a @ c, m), eps)
    else:
        emit_weight_stage(circ, pool, qubits, weight_diagonal(c, m), eps / 3)
        circ.h_layer(qubits)
        emit_weight_stage(circ, pool, qubits, stage_b, eps / 3)
        circ.h_layer(qubits)
        emit_weight_stage(circ, pool, qubits, weight_diagonal(a, m), eps / 3)
    if SynthConfig.verify and m <= SynthConfig.max_qubits_dense:
        error = check_within(operator_error(circ, tensor_matrix([U] * m), m), eps, f"mass m={m}")
        logger.info(f"Mass m={m}: {len(circ)} gates, width {circ.width}, error {error:.3e}")
    return circ.freeze()
