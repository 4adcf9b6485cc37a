"""Circuit container and ancilla allocation."""

import logging
from collections import Counter
from typing import Iterable, List, Sequence

from .gates import Gate, GateKind

logger = logging.getLogger(__name__)


class Circuit:
    """An ordered gate list over ``width`` qubits.

    The first ``input_count`` qubits are inputs; every other qubit is an ancilla
    that starts in |0> and must be returned to |0>.

    A circuit is a builder until ``freeze`` is called; after that every method
    that would add gates or qubits raises. The synthesizers return frozen
    circuits. ``copy`` and ``adjoint`` always return new, unfrozen circuits.

    Attributes:
        width (int): Total number of qubits.
        input_count (int): Number of input qubits (a prefix of the register).
        gates (list of Gate): Gates in application order.
        label (str): Free text carried into reports and files.
        frozen (bool): Whether gates can still be added.
    """

    def __init__(self, width: int, input_count: int = None, gates: Iterable[Gate] = (), label: str = ""):
        if input_count is None:
            input_count = width
        if not (width >= input_count >= 0):
            raise ValueError(f"Invalid register sizes: width={width}, input_count={input_count}")
        self.width = int(width)
        self.input_count = int(input_count)
        self.label = label
        self.gates: Sequence[Gate] = []
        self.frozen = False
        for gate in gates:
            self.append(gate)

    def freeze(self) -> "Circuit":
        """Finish construction and return the circuit; the gate list becomes a tuple."""
        self.frozen = True
        self.gates = tuple(self.gates)
        return self

    def _check_open(self) -> None:
        if self.frozen:
            raise ValueError(f"Circuit '{self.label}' is frozen; extend a copy() instead")

    def append(self, gate: Gate) -> "Circuit":
        self._check_open()
        if max(gate.qubits) >= self.width:
            raise ValueError(
                f"Gate '{gate}' uses qubit {max(gate.qubits)} outside width {self.width}"
            )
        self.gates.append(gate)
        return self

    def add(self, kind, *qubits) -> "Circuit":
        """Append a gate given by kind (or label) and qubit indices."""
        if isinstance(kind, str):
            kind = GateKind.from_label(kind)
        return self.append(Gate(kind, tuple(qubits)))

    def h(self, q):
        return self.add(GateKind.H, q)

    def t(self, q):
        return self.add(GateKind.T, q)

    def tdg(self, q):
        return self.add(GateKind.TDG, q)

    def s(self, q):
        return self.add(GateKind.S, q)

    def sdg(self, q):
        return self.add(GateKind.SDG, q)

    def x(self, q):
        return self.add(GateKind.X, q)

    def z(self, q):
        return self.add(GateKind.Z, q)

    def cx(self, c, t):
        return self.add(GateKind.CX, c, t)

    def cz(self, a, b):
        return self.add(GateKind.CZ, a, b)

    def ccx(self, c0, c1, t):
        return self.add(GateKind.CCX, c0, c1, t)

    def ch(self, c, t):
        return self.add(GateKind.CH, c, t)

    def ct(self, c, t):
        return self.add(GateKind.CT, c, t)

    def sq1(self, q, matrix):
        return self.append(Gate.sq1(q, matrix))

    def h_layer(self, qubits: Sequence[int]) -> "Circuit":
        for q in qubits:
            self.h(q)
        return self

    def mark(self) -> int:
        """Return a position usable with ``uncompute_from``."""
        return len(self.gates)

    def uncompute_from(self, mark: int) -> "Circuit":
        """Append the adjoint of every gate added since ``mark``."""
        block = self.gates[mark:]
        for gate in reversed(block):
            self.append(gate.adjoint())
        return self

    def widen(self, width: int) -> "Circuit":
        if width > self.width:
            self._check_open()
            self.width = int(width)
        return self

    def compose(self, other: "Circuit") -> "Circuit":
        """Append the gates of ``other`` (same qubit numbering), widening as needed."""
        self.widen(other.width)
        for gate in other.gates:
            self.append(gate)
        return self

    def adjoint(self) -> "Circuit":
        """Return the inverse circuit: gates reversed and individually inverted."""
        return Circuit(
            self.width,
            self.input_count,
            (g.adjoint() for g in reversed(self.gates)),
            label=self.label,
        )

    def copy(self) -> "Circuit":
        return Circuit(self.width, self.input_count, self.gates, label=self.label)

    def gate_counts(self) -> Counter:
        """Return a histogram of gate labels."""
        return Counter(g.kind.label for g in self.gates)

    def has_placeholders(self) -> bool:
        return any(g.kind is GateKind.SQ1 for g in self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.width == other.width
            and self.input_count == other.input_count
            and tuple(self.gates) == tuple(other.gates)
        )

    def __repr__(self) -> str:
        return (
            f"Circuit(width={self.width}, input_count={self.input_count}, "
            f"gates={len(self.gates)}, label={self.label!r})"
        )


def gate_counts(c: Circuit) -> Counter:
    """Per-kind gate histogram of a circuit."""
    return c.gate_counts()


class QubitPool:
    """Allocator for ancilla qubits of a circuit under construction.

    Fresh ancillas are appended past the current width of the circuit; released
    ancillas are reused before the circuit grows again. Callers must return
    ancillas to |0> before releasing them.
    """

    def __init__(self, circuit: Circuit, reusable: Iterable[int] = ()):
        self.circuit = circuit
        # Qubits already past the inputs that are known to be clean.
        self._free: List[int] = sorted(reusable, reverse=True)
        self._in_use = set()
        self.high_water = circuit.width

    def allocate(self, count: int = 1) -> List[int]:
        qubits = []
        for _ in range(count):
            if self._free:
                q = self._free.pop()
            else:
                q = self.circuit.width
                self.circuit.widen(q + 1)
            self._in_use.add(q)
            qubits.append(q)
        self.high_water = max(self.high_water, self.circuit.width)
        return qubits

    def allocate_one(self) -> int:
        return self.allocate(1)[0]

    def release(self, qubits) -> None:
        if isinstance(qubits, int):
            qubits = [qubits]
        for q in qubits:
            if q not in self._in_use:
                raise ValueError(f"Qubit {q} is not an allocated ancilla")
            self._in_use.remove(q)
            # Lowest index first on reuse.
            self._free.append(q)
        self._free.sort(reverse=True)

    @property
    def in_use(self) -> int:
        return len(self._in_use)

    @property
    def ancilla_count(self) -> int:
        return self.high_water - self.circuit.input_count

    def __repr__(self) -> str:
        return f"QubitPool(width={self.circuit.width}, in_use={self.in_use}, free={len(self._free)})"
