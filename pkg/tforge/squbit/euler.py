"""A H B H C decomposition of single-qubit unitaries with diagonal A, B, C."""

from typing import Tuple

import numpy as np

_DEGENERATE = 1e-12


def rz(angle: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def euler_hdh(U) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split a unitary as U = A H B H C with diagonal unitaries A, B, C.

    Uses U = e^{i phi} Rz(alpha) Rx(beta) Rz(gamma) and H Rz(beta) H = Rx(beta), so
    A = e^{i phi} Rz(alpha), B = Rz(beta) and C = Rz(gamma). When U is diagonal
    (or anti-diagonal) gamma is fixed to 0, giving C = I.

    Args:
        U (array-like): 2x2 unitary matrix.

    Returns:
        tuple of np.ndarray: The diagonal matrices (A, B, C).
    """
    U = np.asarray(U, dtype=complex).reshape(2, 2)
    if not np.allclose(U.conj().T @ U, np.eye(2), atol=1e-10):
        raise ValueError("euler_hdh requires a unitary matrix")
    global_phase = np.sqrt(np.linalg.det(U))
    V = U / global_phase
    v00, v10 = V[0, 0], V[1, 0]
    beta = 2 * np.arctan2(abs(v10), abs(v00))
    if abs(v10) < _DEGENERATE:
        alpha, gamma = -2 * np.angle(v00), 0.0
    elif abs(v00) < _DEGENERATE:
        alpha, gamma = 2 * (np.angle(v10) + np.pi / 2), 0.0
    else:
        total = -2 * np.angle(v00)
        diff = 2 * (np.angle(v10) + np.pi / 2)
        alpha, gamma = (total + diff) / 2, (total - diff) / 2
    A = global_phase * rz(alpha)
    return A, rz(beta), rz(gamma)
