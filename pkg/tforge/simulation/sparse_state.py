"""Dictionary-backed sparse state vector simulation.

Basis keys are integers with qubit 0 as the least significant bit. Permutation
gates rewrite keys without branching; the controlled macros (CCX, CH, CT, CTDG)
and SQ1 placeholders are applied through their defining matrices, which equal
their primitive expansions exactly.
"""

import logging
from typing import Dict, Iterable, Optional

import numpy as np

from ..circuit.circuit import Circuit
from ..circuit.gates import CONTROLLED_TARGETS, SINGLE_QUBIT_MATRICES, Gate, GateKind
from ..config import SynthConfig

logger = logging.getLogger(__name__)

_NORM_TOL = 1e-9


class SparseState:
    """A normalized state stored as ``{basis index: amplitude}``.

    Attributes:
        width (int): Number of qubits.
        amps (dict): Non-zero amplitudes keyed by basis index.
        prune (float): Amplitudes with smaller modulus are dropped after branching gates.
    """

    def __init__(self, width: int, amps: Optional[Dict[int, complex]] = None, prune: float = None):
        if width < 0:
            raise ValueError(f"Invalid width {width}")
        self.width = int(width)
        self.prune = SynthConfig.prune if prune is None else prune
        self.amps: Dict[int, complex] = {}
        if amps:
            for key, amp in amps.items():
                if key < 0 or key >> self.width:
                    raise ValueError(f"Basis index {key} out of range for width {self.width}")
                if amp != 0:
                    self.amps[int(key)] = complex(amp)

    @classmethod
    def basis(cls, width: int, index: int = 0) -> "SparseState":
        return cls(width, {index: 1.0})

    @classmethod
    def from_dense(cls, vector, width: int = None) -> "SparseState":
        vector = np.asarray(vector, dtype=complex)
        n = int(round(np.log2(len(vector))))
        if 2**n != len(vector):
            raise ValueError(f"Dense vector length {len(vector)} is not a power of two")
        width = n if width is None else width
        return cls(width, {int(i): v for i, v in enumerate(vector) if v != 0})

    def to_dense(self, n: int = None) -> np.ndarray:
        """Return amplitudes of the first ``n`` qubits; other bits must be zero."""
        n = self.width if n is None else n
        out = np.zeros(2**n, dtype=complex)
        for key, amp in self.amps.items():
            if key >> n:
                continue
            out[key] = amp
        return out

    def copy(self) -> "SparseState":
        state = SparseState(self.width, prune=self.prune)
        state.amps = dict(self.amps)
        return state

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amps.values())))

    def widen(self, width: int) -> "SparseState":
        if width < self.width:
            raise ValueError(f"Cannot shrink state from {self.width} to {width} qubits")
        self.width = width
        return self

    def _prune(self) -> None:
        if self.prune > 0:
            self.amps = {k: a for k, a in self.amps.items() if abs(a) >= self.prune}

    def _apply_single(self, q: int, m: np.ndarray, control_mask: int = 0) -> None:
        bit = 1 << q
        out: Dict[int, complex] = {}
        m00, m01, m10, m11 = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        for key, amp in self.amps.items():
            if key & control_mask != control_mask:
                out[key] = out.get(key, 0) + amp
                continue
            if key & bit:
                k0, k1 = key ^ bit, key
                a0, a1 = m01 * amp, m11 * amp
            else:
                k0, k1 = key, key | bit
                a0, a1 = m00 * amp, m10 * amp
            if a0 != 0:
                out[k0] = out.get(k0, 0) + a0
            if a1 != 0:
                out[k1] = out.get(k1, 0) + a1
        self.amps = out
        self._prune()

    def _apply_phase(self, mask: int, phase: complex) -> None:
        for key in self.amps:
            if key & mask == mask:
                self.amps[key] *= phase

    def _permute(self, fn) -> None:
        self.amps = {fn(k): a for k, a in self.amps.items()}

    def apply(self, gate: Gate) -> "SparseState":
        """Apply one gate in place and return the state."""
        kind = gate.kind
        qs = gate.qubits
        if max(qs) >= self.width:
            raise ValueError(f"Gate '{gate}' outside state width {self.width}")
        if kind is GateKind.X:
            b = 1 << qs[0]
            self._permute(lambda k: k ^ b)
        elif kind is GateKind.CX:
            c, t = 1 << qs[0], 1 << qs[1]
            self._permute(lambda k: k ^ t if k & c else k)
        elif kind is GateKind.CCX:
            c = (1 << qs[0]) | (1 << qs[1])
            t = 1 << qs[2]
            self._permute(lambda k: k ^ t if k & c == c else k)
        elif kind is GateKind.SWAP:
            a, b = qs

            def swap(k):
                ba, bb = (k >> a) & 1, (k >> b) & 1
                if ba != bb:
                    k ^= (1 << a) | (1 << b)
                return k

            self._permute(swap)
        elif kind in (GateKind.Z, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG):
            self._apply_phase(1 << qs[0], SINGLE_QUBIT_MATRICES[kind][1, 1])
        elif kind is GateKind.CZ:
            self._apply_phase((1 << qs[0]) | (1 << qs[1]), -1)
        elif kind in (GateKind.CT, GateKind.CTDG):
            target = CONTROLLED_TARGETS[kind]
            self._apply_phase((1 << qs[0]) | (1 << qs[1]), SINGLE_QUBIT_MATRICES[target][1, 1])
        elif kind is GateKind.CH:
            self._apply_single(qs[1], SINGLE_QUBIT_MATRICES[GateKind.H], control_mask=1 << qs[0])
        else:
            self._apply_single(qs[0], gate.unitary())
        return self

    def run(self, gates: Iterable[Gate]) -> "SparseState":
        for gate in gates:
            self.apply(gate)
        norm = self.norm()
        if abs(norm - 1.0) > _NORM_TOL:
            logger.warning(f"State norm drifted to {norm:.12f}")
        return self

    def __len__(self) -> int:
        return len(self.amps)

    def __repr__(self) -> str:
        return f"SparseState(width={self.width}, support={len(self.amps)})"


def run(c: Circuit, state: SparseState) -> SparseState:
    """Apply ``c`` to a copy of ``state``.

    The controlled macros act through their defining matrices; the result equals
    running ``expand_macros(c)`` with the scratch qubit of controlled-T removed.
    """
    if state.width != c.width:
        raise ValueError(f"State width {state.width} does not match circuit width {c.width}")
    return state.copy().run(c.gates)


def run_basis(c: Circuit, index: int = 0) -> SparseState:
    """Run ``c`` on a computational basis state."""
    return run(c, SparseState.basis(c.width, index))
