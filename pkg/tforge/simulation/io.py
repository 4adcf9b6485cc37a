"""Text formats for target states and diagonal specs.

States: ``QUBITS <n>`` then ``<index> <re> <im>`` lines.
Diagonals: ``N <n>`` then 2**n phase angles in radians, one per line.
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from ..errors import CircuitParseError
from .metrics import DiagonalSpec

logger = logging.getLogger(__name__)

_LOAD_NORM_TOL = 1e-6


def parse_state(text: str) -> np.ndarray:
    """Parse state text into a dense normalized vector; unlisted entries are zero."""
    vector = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if vector is None:
            if len(tokens) != 2 or tokens[0] != "QUBITS":
                raise CircuitParseError("expected header 'QUBITS <n>'", lineno)
            try:
                n = int(tokens[1])
            except ValueError as e:
                raise CircuitParseError(str(e), lineno) from e
            if n < 0:
                raise CircuitParseError(f"negative qubit count {n}", lineno)
            vector = np.zeros(2**n, dtype=complex)
            continue
        if len(tokens) != 3:
            raise CircuitParseError("expected '<index> <re> <im>'", lineno)
        try:
            index = int(tokens[0])
            if index < 0:
                raise IndexError(f"negative index {index}")
            vector[index] = complex(float(tokens[1]), float(tokens[2]))
        except (ValueError, IndexError) as e:
            raise CircuitParseError(f"bad amplitude line: {e}", lineno) from e
    if vector is None:
        raise CircuitParseError("missing header")
    norm = np.linalg.norm(vector)
    if abs(norm - 1.0) > _LOAD_NORM_TOL:
        raise ValueError(f"State is not normalized: norm {norm:.9f}")
    return vector / norm


def format_state(vector) -> str:
    vector = np.asarray(vector, dtype=complex)
    n = int(round(np.log2(len(vector))))
    lines = [f"QUBITS {n}"]
    lines.extend(f"{i} {v.real!r} {v.imag!r}" for i, v in enumerate(vector) if v != 0)
    return "\n".join(lines) + "\n"


def load_state(path: Union[str, Path]) -> np.ndarray:
    return parse_state(Path(path).read_text(encoding="utf-8"))


def save_state(vector, path: Union[str, Path]) -> None:
    Path(path).write_text(format_state(vector), encoding="utf-8")


def parse_diagonal(text: str) -> DiagonalSpec:
    n, phases = None, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 2 or tokens[0] != "N" or not tokens[1].isdigit():
                raise CircuitParseError("expected header 'N <n>'", lineno)
            n = int(tokens[1])
            continue
        try:
            phases.append(float(line))
        except ValueError as e:
            raise CircuitParseError(f"bad phase: {line!r}", lineno) from e
    if n is None:
        raise CircuitParseError("missing header")
    if len(phases) != 2**n:
        raise CircuitParseError(f"expected {2 ** n} phases, got {len(phases)}")
    return DiagonalSpec(n, phases)


def format_diagonal(spec: DiagonalSpec) -> str:
    return f"N {spec.n}\n" + "".join(f"{p!r}\n" for p in spec.phases.tolist())


def load_diagonal(path: Union[str, Path]) -> DiagonalSpec:
    return parse_diagonal(Path(path).read_text(encoding="utf-8"))


def save_diagonal(spec: DiagonalSpec, path: Union[str, Path]) -> None:
    Path(path).write_text(format_diagonal(spec), encoding="utf-8")
