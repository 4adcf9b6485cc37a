"""Per-synthesis report records."""

import time
from dataclasses import asdict, dataclass, field

from .circuit import Circuit
from .gates import GateKind
from .macros import clifford_count, t_count

CSV_COLUMNS = [
    "task",
    "n",
    "epsilon",
    "instance",
    "seed",
    "t_count",
    "clifford_count",
    "ancillas",
    "measured_error",
    "wall_ms",
]


@dataclass
class SynthReport:
    """Cost and accuracy of one synthesized circuit.

    ``t_count`` counts T and T-dagger gates of the macro-expanded circuit;
    ``ancilla_count`` counts qubits beyond the inputs, including the scratch
    qubit used by controlled-T expansions.
    """

    task: str
    t_count: int
    clifford_count: int
    ancilla_count: int
    measured_error: float = 0.0
    wall_time: float = 0.0
    seed: int = None
    extras: dict = field(default_factory=dict)

    @classmethod
    def for_circuit(cls, task: str, circuit: Circuit, started: float, error: float = 0.0, seed=None, **extras):
        """Build a report from a finished circuit; ``started`` is a ``time.perf_counter`` value."""
        scratch = any(g.kind in (GateKind.CT, GateKind.CTDG) for g in circuit.gates)
        return cls(
            task=task,
            t_count=t_count(circuit),
            clifford_count=clifford_count(circuit),
            ancilla_count=circuit.width - circuit.input_count + int(scratch),
            measured_error=float(error),
            wall_time=time.perf_counter() - started,
            seed=seed,
            extras=dict(extras),
        )

    def as_row(self, n: int, epsilon: float, instance: int = 0) -> dict:
        """Return the report as a CSV row keyed by ``CSV_COLUMNS``."""
        return {
            "task": self.task,
            "n": n,
            "epsilon": epsilon,
            "instance": instance,
            "seed": self.seed if self.seed is not None else "",
            "t_count": self.t_count,
            "clifford_count": self.clifford_count,
            "ancillas": self.ancilla_count,
            "measured_error": self.measured_error,
            "wall_ms": round(self.wall_time * 1000.0, 3),
        }

    def as_dict(self) -> dict:
        return asdict(self)

    def __str__(self) -> str:
        return (
            f"{self.task}: T-count {self.t_count}, Clifford {self.clifford_count}, "
            f"ancillas {self.ancilla_count}, error {self.measured_error:.3e}, "
            f"{self.wall_time:.2f}s"
        )
