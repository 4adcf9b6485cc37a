"""Distances and verification metrics for synthesized circuits."""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..circuit.circuit import Circuit
from ..errors import NotDiagonalError, PrecisionUnreachableError
from .sparse_state import SparseState, run_basis

logger = logging.getLogger(__name__)

StateLike = Union[SparseState, np.ndarray]


@dataclass
class DiagonalSpec:
    """A diagonal unitary diag(exp(i*phases)) on ``n`` qubits.

    ``moduli`` and ``leakage`` are filled when the diagonal was measured from an
    approximate circuit: the modulus of each diagonal entry and the probability
    mass that left the expected basis product.
    """

    n: int
    phases: np.ndarray
    moduli: Optional[np.ndarray] = None
    leakage: Optional[np.ndarray] = None

    def __post_init__(self):
        self.phases = np.asarray(self.phases, dtype=float).reshape(-1)
        if len(self.phases) != 2**self.n:
            raise ValueError(f"Expected {2 ** self.n} phases for n={self.n}, got {len(self.phases)}")

    @classmethod
    def zeros(cls, n: int) -> "DiagonalSpec":
        return cls(n, np.zeros(2**n))

    def entries(self) -> np.ndarray:
        values = np.exp(1j * self.phases)
        if self.moduli is not None:
            values = values * self.moduli
        return values

    def is_boolean(self, tol: float = 1e-12) -> bool:
        """True when every phase is a multiple of pi."""
        r = np.mod(self.phases, np.pi)
        return bool(np.all(np.minimum(r, np.pi - r) < tol))

    def is_identity(self, tol: float = 1e-12) -> bool:
        r = np.mod(self.phases, 2 * np.pi)
        return bool(np.all(np.minimum(r, 2 * np.pi - r) < tol))


def _overlap(a: StateLike, b: StateLike) -> complex:
    if isinstance(a, SparseState) and isinstance(b, SparseState):
        if a.width != b.width:
            raise ValueError(f"Width mismatch: {a.width} vs {b.width}")
        small, large = (a, b) if len(a.amps) <= len(b.amps) else (b, a)
        inner = sum(np.conj(small.amps[k]) * large.amps.get(k, 0) for k in small.amps)
        return inner if small is a else np.conj(inner)
    if isinstance(a, SparseState):
        a = a.to_dense()
    if isinstance(b, SparseState):
        b = b.to_dense()
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"Shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def l2_phase_min_distance(a: StateLike, b: StateLike) -> float:
    """Minimum over global phases of the l2 distance between two normalized states."""
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * abs(_overlap(a, b)))))


def state_error(output: SparseState, target: np.ndarray) -> float:
    """Phase-minimized distance between ``output`` and ``target`` tensored with clean ancillas."""
    n = int(round(np.log2(len(target))))
    restricted = output.to_dense(n)
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * abs(np.vdot(restricted, target)))))


def ancilla_clean_weight(s: SparseState, input_count: int) -> float:
    """Probability mass on keys whose ancilla bits are not all zero."""
    return float(sum(abs(a) ** 2 for k, a in s.amps.items() if k >> input_count))


def extract_diagonal(c: Circuit, n: int = None, tol: float = 1e-9) -> DiagonalSpec:
    """Measure the diagonal implemented by ``c`` on its first ``n`` qubits.

    Runs each basis input with clean ancillas and reads back the amplitude of
    the same key. Raises NotDiagonalError when more than ``tol`` probability
    leaks to any other key.
    """
    n = c.input_count if n is None else n
    if n > c.width:
        raise ValueError(f"n={n} exceeds circuit width {c.width}")
    phases = np.zeros(2**n)
    moduli = np.ones(2**n)
    leakage = np.zeros(2**n)
    for j in range(2**n):
        out = run_basis(c, j)
        amp = out.amps.get(j, 0j)
        leak = max(0.0, sum(abs(a) ** 2 for k, a in out.amps.items() if k != j))
        if leak > tol:
            raise NotDiagonalError(f"not diagonal: input {j} leaks {leak:.3e} off its basis state")
        phases[j] = np.angle(amp)
        moduli[j] = abs(amp)
        leakage[j] = leak
    return DiagonalSpec(n, phases, moduli, leakage)


def diagonal_op_norm_error(got: DiagonalSpec, want: DiagonalSpec) -> float:
    """Operator-norm distance between two diagonals, max_j |got_j - want_j|.

    Leakage recorded in ``got`` is added to each column in quadrature, which
    keeps the value an exact operator norm of the measured restriction.
    """
    if got.n != want.n:
        raise ValueError(f"Qubit count mismatch: {got.n} vs {want.n}")
    diff = np.abs(got.entries() - want.entries()) ** 2
    if got.leakage is not None:
        diff = diff + got.leakage
    return float(np.sqrt(np.max(diff)))


def circuit_columns(c: Circuit, n: int):
    """Run every basis input of the first ``n`` qubits; return the sparse outputs."""
    return [run_basis(c, j) for j in range(2**n)]


def operator_error(c: Circuit, target: np.ndarray, n: int = None) -> float:
    """Spectral-norm distance between ``c`` (restricted to clean ancillas) and ``target``.

    Output columns include any amplitude left on dirty ancillas, so the value
    bounds the error of the full isometry.
    """
    n = c.input_count if n is None else n
    target = np.asarray(target, dtype=complex)
    if target.shape != (2**n, 2**n):
        raise ValueError(f"Target shape {target.shape} does not match n={n}")
    columns = circuit_columns(c, n)
    keys = sorted(set(range(2**n)).union(*(out.amps.keys() for out in columns)))
    row = {k: i for i, k in enumerate(keys)}
    diff = np.zeros((len(keys), 2**n), dtype=complex)
    for j, out in enumerate(columns):
        for k, a in out.amps.items():
            diff[row[k], j] += a
        diff[: 2**n, j] -= target[:, j]
    return float(np.linalg.norm(diff, 2))


def check_within(error: float, eps: float, what: str) -> float:
    """Return ``error`` after checking a measured error against its tolerance.

    Raises:
        PrecisionUnreachableError: If ``error`` exceeds ``eps``.
    """
    if error > eps * (1 + 1e-9) + 1e-12:
        raise PrecisionUnreachableError(f"precision unreachable: {what} error {error:.3e} exceeds {eps:.3e}")
    return error
