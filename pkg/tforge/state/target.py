"""Target states for state preparation."""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

_NORM_TOL = 1e-10


@dataclass
class TargetState:
    """A normalized n-qubit state given by its 2**n amplitudes.

    Index bit i is qubit i.
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if len(self.amplitudes) != 2**self.n:
            raise ValueError(f"Expected {2 ** self.n} amplitudes for n={self.n}, got {len(self.amplitudes)}")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1) > _NORM_TOL:
            raise ValueError(f"Target state is not normalized: norm {norm:.12f}")

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "TargetState":
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = int(round(np.log2(len(amplitudes))))
        if 2**n != len(amplitudes):
            raise ValueError(f"Amplitude count {len(amplitudes)} is not a power of two")
        return cls(n, amplitudes)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, real: bool = False) -> "TargetState":
        """Haar-like random state from normalized Gaussian amplitudes."""
        v = rng.normal(size=2**n)
        if not real:
            v = v + 1j * rng.normal(size=2**n)
        return cls(n, v / np.linalg.norm(v))

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "TargetState":
        v = np.zeros(2**n, dtype=complex)
        v[index] = 1
        return cls(n, v)

    def basis_index(self, tol: float = 1e-12) -> Optional[int]:
        """Index x when the state is e^{i phi}|x>, else None."""
        x = int(np.argmax(np.abs(self.amplitudes)))
        if abs(abs(self.amplitudes[x]) - 1) < tol:
            return x
        return None

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.amplitudes.imag) < tol))

    def real_vector(self) -> np.ndarray:
        if not self.is_real():
            raise ValueError("State has complex amplitudes; peel its phases first")
        return self.amplitudes.real.copy()


StateInput = Union[TargetState, np.ndarray, list]


def as_target(psi: StateInput) -> TargetState:
    if isinstance(psi, TargetState):
        return psi
    return TargetState.from_amplitudes(psi)
