"""Line-oriented text format for circuits.

The first non-comment line is the header ``QUBITS <width> INPUTS <input_count>``;
every following line is one gate: the upper-case gate name followed by decimal
qubit indices. SQ1 lines carry eight further numbers, the real and imaginary
parts of the matrix entries in row-major order. Lines starting with ``#`` are
comments.
"""

import logging
from pathlib import Path
from typing import Union

from ..errors import CircuitParseError
from .circuit import Circuit
from .gates import Gate, GateKind

logger = logging.getLogger(__name__)


def serialize(c: Circuit) -> str:
    lines = []
    if c.label:
        lines.append(f"# {c.label}")
    lines.append(f"QUBITS {c.width} INPUTS {c.input_count}")
    lines.extend(g.to_line() for g in c.gates)
    return "\n".join(lines) + "\n"


def _parse_gate(tokens, lineno) -> Gate:
    try:
        kind = GateKind.from_label(tokens[0])
    except KeyError as e:
        raise CircuitParseError(f"unknown gate '{tokens[0]}'", lineno) from e
    n = kind.n_qubits
    expected = n + (8 if kind is GateKind.SQ1 else 0)
    if len(tokens) - 1 != expected:
        raise CircuitParseError(
            f"{kind.label} expects {expected} operands, got {len(tokens) - 1}", lineno
        )
    try:
        qubits = tuple(int(t) for t in tokens[1 : n + 1])
        if kind is GateKind.SQ1:
            values = [float(t) for t in tokens[n + 1 :]]
            matrix = [complex(values[i], values[i + 1]) for i in range(0, 8, 2)]
            return Gate.sq1(qubits[0], matrix)
        return Gate(kind, qubits)
    except ValueError as e:
        raise CircuitParseError(str(e), lineno) from e


def parse(text: str) -> Circuit:
    """Parse circuit text; raises CircuitParseError with the offending line number."""
    circuit = None
    label = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if circuit is None and not label:
                label = line[1:].strip()
            continue
        tokens = line.split()
        if circuit is None:
            if len(tokens) != 4 or tokens[0] != "QUBITS" or tokens[2] != "INPUTS":
                raise CircuitParseError("expected header 'QUBITS <width> INPUTS <inputs>'", lineno)
            try:
                circuit = Circuit(int(tokens[1]), int(tokens[3]), label=label)
            except ValueError as e:
                raise CircuitParseError(str(e), lineno) from e
            continue
        gate = _parse_gate(tokens, lineno)
        try:
            circuit.append(gate)
        except ValueError as e:
            raise CircuitParseError(str(e), lineno) from e
    if circuit is None:
        raise CircuitParseError("missing header")
    return circuit


def save_circuit(c: Circuit, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize(c), encoding="utf-8")
    logger.info(f"Wrote {len(c)} gates on {c.width} qubits to {path}")


def load_circuit(path: Union[str, Path]) -> Circuit:
    return parse(Path(path).read_text(encoding="utf-8"))
