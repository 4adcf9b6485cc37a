"""Diagonal unitaries and block-diagonal single-qubit unitaries.

A diagonal D = diag(e^{i theta_j}) on n qubits is implemented through
D' = D (x) |0><0| + D^dagger (x) |1><1| on one extra working qubit: block j of
D' is the determinant-one unitary diag(e^{i theta_j}, e^{-i theta_j}), so a
single table of H/T words (one per block) applied by a controlled ladder
realizes every block at once. The working qubit starts and ends in |0>.
"""

import logging
import time
from typing import List, Sequence, Tuple

import numpy as np

from ..boolean.oracle import emit_phase_oracle
from ..boolean.tables import PhaseTable
from ..circuit.circuit import Circuit, QubitPool
from ..circuit.report import SynthReport
from ..config import SynthConfig
from ..simulation.metrics import DiagonalSpec, check_within, diagonal_op_norm_error, extract_diagonal, operator_error
from ..squbit.euler import euler_hdh
from ..squbit.search import approx_su2
from .sequence import GateSequenceTable, build_sequence_table, emit_word_select

logger = logging.getLogger(__name__)


def emit_diagonal(circ: Circuit, pool: QubitPool, qubits: Sequence[int], spec: DiagonalSpec, eps: float):
    """Append an approximation of ``spec`` on ``qubits`` (qubit i is bit i of the index).

    Returns:
        GateSequenceTable or None: The table used, or None when a shortcut applied.
    """
    qubits = list(qubits)
    if len(qubits) != spec.n:
        raise ValueError(f"{len(qubits)} qubits for a diagonal on {spec.n}")
    if spec.is_identity():
        return None
    if spec.is_boolean():
        emit_phase_oracle(circ, pool, qubits, PhaseTable.from_phases(spec.phases))
        return None
    table = build_sequence_table(spec, eps)
    work = pool.allocate_one()
    emit_word_select(circ, pool, qubits, work, table)
    pool.release(work)
    return table


def synth_diagonal(spec: DiagonalSpec, eps: float) -> Tuple[Circuit, SynthReport]:
    """Compile a diagonal unitary to Clifford+T within operator-norm error ``eps``.

    Args:
        spec (DiagonalSpec): Target phases, 2**n of them.
        eps (float): Precision in [eps_min, 1].

    Returns:
        tuple: The circuit (n inputs, ancillas after) and its SynthReport.
    """
    if not SynthConfig.eps_min <= eps <= 1:
        raise ValueError(f"Epsilon {eps} outside [{SynthConfig.eps_min}, 1]")
    started = time.perf_counter()
    circ = Circuit(spec.n, spec.n, label=f"diagonal n={spec.n} eps={eps:g}")
    pool = QubitPool(circ)
    table = emit_diagonal(circ, pool, range(spec.n), spec, eps)
    error = 0.0
    if SynthConfig.verify:
        got = extract_diagonal(circ, spec.n, tol=eps**2 + 1e-9)
        error = check_within(diagonal_op_norm_error(got, spec), eps, f"diagonal n={spec.n}")
    extras = {"route": "identity" if spec.is_identity() else "boolean" if table is None else "ladder"}
    if table is not None:
        extras.update(
            K_pad=table.K_pad,
            ladder_t_count=table.ladder_t_count(),
            max_word_error=table.max_error,
        )
    report = SynthReport.for_circuit("diagonal", circ, started, error, **extras)
    logger.info(f"Diagonal n={spec.n}: {report}")
    return circ.freeze(), report


def _block_matrix(units: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Dense operator of diag(U_0, ..., U_{2^n - 1}); the target qubit is the top bit."""
    size = 2**n
    full = np.zeros((2 * size, 2 * size), dtype=complex)
    for j, u in enumerate(units):
        for y in range(2):
            for x in range(2):
                full[j + y * size, j + x * size] = u[y, x]
    return full


def _block_phases(diagonals: List[np.ndarray], n: int) -> DiagonalSpec:
    """Diagonal over n + 1 qubits with entry j + (x << n) = diagonals[j][x, x]."""
    values = np.array([[d[0, 0], d[1, 1]] for d in diagonals])
    return DiagonalSpec(n + 1, np.angle(values.T.reshape(-1)))


def _check_units(units) -> Tuple[List[np.ndarray], int]:
    units = [np.asarray(u, dtype=complex).reshape(2, 2) for u in units]
    n = int(round(np.log2(len(units)))) if units else -1
    if n < 0 or 2**n != len(units):
        raise ValueError(f"Need 2**n single-qubit unitaries, got {len(units)}")
    for j, u in enumerate(units):
        if not np.allclose(u.conj().T @ u, np.eye(2), atol=1e-10):
            raise ValueError(f"Block {j} is not unitary")
    return units, n


def emit_block_diag(circ: Circuit, pool: QubitPool, controls: Sequence[int], target: int, units, eps: float, method: str = "hbh") -> None:
    """Append diag(U_j) acting on ``target`` conditioned on the ``controls`` value j."""
    units, n = _check_units(units)
    qubits = list(controls) + [target]
    if method == "hbh":
        parts = [euler_hdh(u) for u in units]
        a, b, c = (_block_phases([p[i] for p in parts], n) for i in range(3))
        emit_diagonal(circ, pool, qubits, c, eps / 3)
        if not b.is_identity():
            circ.h(target)
            emit_diagonal(circ, pool, qubits, b, eps / 3)
            circ.h(target)
        emit_diagonal(circ, pool, qubits, a, eps / 3)
    elif method == "detfix":
        dets = np.array([np.linalg.det(u) for u in units])
        fixes = [np.diag([1.0, d]) for d in dets]
        # The ladder applies the transpose of each stored word.
        words = [approx_su2((np.linalg.inv(p) @ u).T, eps / 2) for p, u in zip(fixes, units)]
        emit_word_select(circ, pool, controls, target, GateSequenceTable.from_words(words))
        emit_diagonal(circ, pool, qubits, _block_phases(fixes, n), eps / 2)
    else:
        raise ValueError(f"Invalid method '{method}'. Must be 'hbh' or 'detfix'")


def synth_block_diag(units, eps: float, method: str = "hbh") -> Circuit:
    """Compile diag(U_0, ..., U_{2^n - 1}) over n controls and one target qubit.

    Controls are qubits 0..n-1 and the target is qubit n. On |j>|x> with clean
    ancillas the circuit outputs |j>(U'_j|x>) with ||U'_j - U_j|| <= eps.

    Args:
        units (sequence of array-like): 2**n unitaries.
        eps (float): Precision.
        method (str): "hbh" uses three diagonals around two H gates; "detfix"
            applies determinant-one words by a ladder and fixes the determinant
            with one diagonal.
    """
    units, n = _check_units(units)
    circ = Circuit(n + 1, n + 1, label=f"block diagonal n={n} {method}")
    pool = QubitPool(circ)
    emit_block_diag(circ, pool, list(range(n)), n, units, eps, method)
    if SynthConfig.verify and n + 1 <= SynthConfig.max_qubits_dense:
        error = check_within(operator_error(circ, _block_matrix(units, n), n + 1), eps, f"block diagonal n={n}")
        logger.info(f"Block diagonal n={n} ({method}): error {error:.3e}")
    return circ.freeze()
