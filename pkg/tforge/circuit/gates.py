"""Gate vocabulary for Clifford+T circuits.

Qubit 0 is the least significant bit of a basis index throughout the package.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

logger = logging.getLogger(__name__)

_UNITARY_TOL = 1e-10


class GateKind(Enum):
    """Gate kinds with their arity.

    CCX, CH, CT and CTDG are macros with a fixed Clifford+T expansion. SQ1 is a
    placeholder for an arbitrary single-qubit unitary that must be replaced
    before the circuit is emitted.
    """

    H = ("H", 1)
    T = ("T", 1)
    TDG = ("TDG", 1)
    S = ("S", 1)
    SDG = ("SDG", 1)
    X = ("X", 1)
    Y = ("Y", 1)
    Z = ("Z", 1)
    CX = ("CX", 2)
    CZ = ("CZ", 2)
    SWAP = ("SWAP", 2)
    CCX = ("CCX", 3)
    CH = ("CH", 2)
    CT = ("CT", 2)
    CTDG = ("CTDG", 2)
    SQ1 = ("SQ1", 1)

    def __init__(self, label: str, n_qubits: int):
        self.label = label
        self.n_qubits = n_qubits

    @classmethod
    def from_label(cls, label: str) -> "GateKind":
        for kind in cls:
            if kind.label == label.upper():
                return kind
        raise KeyError(f"Unknown gate '{label}'")

    @property
    def is_macro(self) -> bool:
        return self in (GateKind.CCX, GateKind.CH, GateKind.CT, GateKind.CTDG)


_ADJOINT = {
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.CT: GateKind.CTDG,
    GateKind.CTDG: GateKind.CT,
}

_W = np.exp(1j * np.pi / 4)
_S2 = 1 / np.sqrt(2)

# Single-qubit matrices, rows indexed by the output bit.
SINGLE_QUBIT_MATRICES = {
    GateKind.H: np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    GateKind.T: np.array([[1, 0], [0, _W]], dtype=complex),
    GateKind.TDG: np.array([[1, 0], [0, np.conj(_W)]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}

# Target operation of the controlled single-qubit macros.
CONTROLLED_TARGETS = {
    GateKind.CX: GateKind.X,
    GateKind.CZ: GateKind.Z,
    GateKind.CH: GateKind.H,
    GateKind.CT: GateKind.T,
    GateKind.CTDG: GateKind.TDG,
}


@dataclass(frozen=True)
class Gate:
    """A gate applied to a tuple of qubit indices.

    For controlled gates the first qubit is the control; for CCX the first two
    are controls and the last is the target. ``matrix`` is only used by SQ1 and
    stores the four entries row-major.
    """

    kind: GateKind
    qubits: Tuple[int, ...]
    matrix: Tuple[complex, ...] = ()

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        if len(qubits) != self.kind.n_qubits:
            raise ValueError(
                f"{self.kind.label} expects {self.kind.n_qubits} qubits, got {len(qubits)}"
            )
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"{self.kind.label} qubits must be distinct: {qubits}")
        if any(q < 0 for q in qubits):
            raise ValueError(f"Negative qubit index in {qubits}")
        if self.kind is GateKind.SQ1:
            if len(self.matrix) != 4:
                raise ValueError("SQ1 requires a 2x2 matrix")
            m = self.unitary()
            if not np.allclose(m @ m.conj().T, np.eye(2), atol=_UNITARY_TOL):
                raise ValueError("SQ1 matrix is not unitary")
            object.__setattr__(self, "matrix", tuple(complex(v) for v in self.matrix))
        elif self.matrix:
            raise ValueError(f"{self.kind.label} does not take a matrix")

    @classmethod
    def sq1(cls, qubit: int, matrix) -> "Gate":
        """Create a single-qubit placeholder from a 2x2 array."""
        m = np.asarray(matrix, dtype=complex).reshape(4)
        return cls(GateKind.SQ1, (qubit,), tuple(m))

    def unitary(self) -> np.ndarray:
        """Return the 2x2 matrix of a single-qubit gate."""
        if self.kind is GateKind.SQ1:
            return np.array(self.matrix, dtype=complex).reshape(2, 2)
        if self.kind in SINGLE_QUBIT_MATRICES:
            return SINGLE_QUBIT_MATRICES[self.kind]
        raise ValueError(f"{self.kind.label} is not a single-qubit gate")

    def adjoint(self) -> "Gate":
        if self.kind is GateKind.SQ1:
            return Gate.sq1(self.qubits[0], self.unitary().conj().T)
        return Gate(_ADJOINT.get(self.kind, self.kind), self.qubits)

    def shifted(self, mapping) -> "Gate":
        """Return the gate with qubits relabelled through ``mapping``."""
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.matrix)

    def to_line(self) -> str:
        """Serialize to one text line."""
        qubits = " ".join(str(q) for q in self.qubits)
        if self.kind is GateKind.SQ1:
            values = " ".join(f"{v.real!r} {v.imag!r}" for v in self.matrix)
            return f"SQ1 {qubits} {values}"
        return f"{self.kind.label} {qubits}"

    def __str__(self) -> str:
        return self.to_line()
