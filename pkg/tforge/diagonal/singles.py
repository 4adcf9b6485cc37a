"""Tensor products of single-qubit unitaries through three diagonals."""

import functools
import logging
import math
from typing import List, Sequence

import numpy as np

from ..circuit.circuit import Circuit, QubitPool
from ..config import SynthConfig
from ..simulation.metrics import DiagonalSpec, check_within, operator_error
from ..squbit.euler import euler_hdh
from .synth import emit_diagonal

logger = logging.getLogger(__name__)


def tensor_matrix(units: Sequence[np.ndarray]) -> np.ndarray:
    """Dense U_0 (x) ... (x) U_{m-1} with qubit i as bit i of the index."""
    return functools.reduce(np.kron, [np.asarray(u, dtype=complex) for u in reversed(units)])


def _product_diagonal(diagonals: List[np.ndarray]) -> DiagonalSpec:
    m = len(diagonals)
    angles = np.angle(np.array([[d[0, 0], d[1, 1]] for d in diagonals]))
    bits = (np.arange(2**m)[:, None] >> np.arange(m)) & 1
    return DiagonalSpec(m, angles[np.arange(m), bits].sum(axis=1))


def emit_tensor_singles(circ: Circuit, pool: QubitPool, qubits: Sequence[int], units, eps: float) -> None:
    """Append U_0 (x) ... (x) U_{m-1} on ``qubits`` as A H^m B H^m C.

    When every unit is diagonal the middle factor vanishes and A C is emitted
    as a single diagonal at the full budget.
    """
    qubits = list(qubits)
    units = [np.asarray(u, dtype=complex).reshape(2, 2) for u in units]
    if len(units) != len(qubits) or not units:
        raise ValueError(f"Need one unitary per qubit, got {len(units)} for {len(qubits)}")
    parts = [euler_hdh(u) for u in units]
    a, b, c = (_product_diagonal([p[i] for p in parts]) for i in range(3))
    if b.is_identity():
        emit_diagonal(circ, pool, qubits, DiagonalSpec(a.n, a.phases + c.phases), eps)
        return
    emit_diagonal(circ, pool, qubits, c, eps / 3)
    circ.h_layer(qubits)
    emit_diagonal(circ, pool, qubits, b, eps / 3)
    circ.h_layer(qubits)
    emit_diagonal(circ, pool, qubits, a, eps / 3)


def _verify(circ: Circuit, units, eps: float, name: str) -> None:
    m = len(units)
    if SynthConfig.verify and m <= SynthConfig.max_qubits_dense:
        error = check_within(operator_error(circ, tensor_matrix(units), m), eps, f"{name} m={m}")
        logger.info(f"{name} m={m}: {len(circ)} gates, width {circ.width}, error {error:.3e}")


def synth_tensor_singles(units, eps: float) -> Circuit:
    """Compile U_0 (x) ... (x) U_{m-1} on qubits 0..m-1 within ``eps``."""
    m = len(units)
    if m < 1:
        raise ValueError("Need at least one single-qubit unitary")
    circ = Circuit(m, m, label=f"tensor singles m={m}")
    emit_tensor_singles(circ, QubitPool(circ), range(m), units, eps)
    _verify(circ, units, eps, "Tensor singles")
    return circ.freeze()


def group_size(eps: float) -> int:
    """Units per group, max(1, ceil(log2(log2(1/eps))))."""
    if eps <= 0:
        raise ValueError(f"Epsilon must be positive, got {eps}")
    bits = math.log2(1.0 / eps)
    if bits <= 1:
        return 1
    return max(1, math.ceil(math.log2(bits)))


def synth_batched(units, eps: float) -> Circuit:
    """Compile m single-qubit unitaries in groups of ``group_size(eps)``.

    Each of the K = ceil(m / g) groups is a tensor-product synthesis at eps / K,
    so the total error stays within ``eps``.
    """
    m = len(units)
    if m < 1:
        raise ValueError("Need at least one single-qubit unitary")
    g = group_size(eps)
    groups = math.ceil(m / g)
    circ = Circuit(m, m, label=f"batched m={m} g={g}")
    pool = QubitPool(circ)
    for start in range(0, m, g):
        chunk = list(range(start, min(m, start + g)))
        emit_tensor_singles(circ, pool, chunk, [units[q] for q in chunk], eps / groups)
    logger.debug(f"Batched m={m}: {groups} groups of {g}")
    _verify(circ, units, eps, "Batched singles")
    return circ.freeze()
