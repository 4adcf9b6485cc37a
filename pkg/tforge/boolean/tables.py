"""Truth tables and phase tables with their text formats."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, Union

import numpy as np

from ..errors import CircuitParseError

logger = logging.getLogger(__name__)


def moebius(values: np.ndarray) -> np.ndarray:
    """Algebraic normal form of Boolean columns over the leading axis.

    ``values`` has shape (2**n, ...) with 0/1 entries; entry S of the result is
    the coefficient of the monomial prod_{i in S} x_i.
    """
    anf = np.array(values, dtype=np.uint8) & 1
    size = anf.shape[0]
    rest = anf.shape[1:]
    h = 1
    while h < size:
        view = anf.reshape((-1, 2, h) + rest)
        view[:, 1] ^= view[:, 0]
        anf = view.reshape((size,) + rest)
        h *= 2
    return anf


@dataclass
class TruthTable:
    """A Boolean function f: {0,1}^n -> {0,1}^b.

    ``bits[x, i]`` is output bit i on input x; input bit j is qubit j of x.
    """

    n: int
    b: int
    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8).reshape(2**self.n, self.b)
        if self.b < 1:
            raise ValueError(f"Truth table needs at least one output bit, got b={self.b}")
        if np.any(self.bits > 1):
            raise ValueError("Truth table entries must be 0 or 1")

    @classmethod
    def from_function(cls, n: int, b: int, fn: Callable[[int], int]) -> "TruthTable":
        """Tabulate ``fn`` whose integer result holds output bit i at position i."""
        values = np.array([fn(x) for x in range(2**n)], dtype=np.int64)
        bits = (values[:, None] >> np.arange(b)) & 1
        return cls(n, b, bits)

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "TruthTable":
        """Build from binary strings; character i of row x is output bit i."""
        n = int(round(np.log2(len(rows))))
        if 2**n != len(rows):
            raise ValueError(f"Row count {len(rows)} is not a power of two")
        b = len(rows[0]) if rows else 0
        bits = np.array([[int(ch) for ch in row] for row in rows], dtype=np.uint8)
        return cls(n, b, bits)

    @classmethod
    def random(cls, n: int, b: int, rng: np.random.Generator) -> "TruthTable":
        return cls(n, b, rng.integers(0, 2, size=(2**n, b)))

    def value(self, x: int) -> int:
        return int(np.dot(self.bits[x].astype(np.int64), 1 << np.arange(self.b)))

    def rows(self):
        return ["".join(str(v) for v in row) for row in self.bits]

    def anf(self) -> np.ndarray:
        """ANF coefficients, shape (2**n, b)."""
        return moebius(self.bits)

    def to_text(self) -> str:
        return f"N {self.n} B {self.b}\n" + "\n".join(self.rows()) + "\n"


@dataclass
class PhaseTable:
    """A diagonal with +1/-1 entries on n qubits."""

    n: int
    signs: np.ndarray

    def __post_init__(self):
        self.signs = np.asarray(self.signs, dtype=np.int8).reshape(-1)
        if len(self.signs) != 2**self.n:
            raise ValueError(f"Expected {2 ** self.n} signs for n={self.n}, got {len(self.signs)}")
        if not np.all(np.abs(self.signs) == 1):
            raise ValueError("Phase table entries must be +1 or -1")

    @classmethod
    def ones(cls, n: int) -> "PhaseTable":
        return cls(n, np.ones(2**n, dtype=np.int8))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "PhaseTable":
        return cls(n, rng.choice(np.array([1, -1], dtype=np.int8), size=2**n))

    @classmethod
    def from_phases(cls, phases, tol: float = 1e-9) -> "PhaseTable":
        """Build from phases that are multiples of pi."""
        phases = np.asarray(phases, dtype=float)
        n = int(round(np.log2(len(phases))))
        signs = np.where(np.abs(np.cos(phases) + 1) < tol, -1, 1)
        return cls(n, signs)

    def indicator(self) -> TruthTable:
        """One-output truth table marking the -1 entries."""
        return TruthTable(self.n, 1, (self.signs < 0).astype(np.uint8))

    def is_trivial(self) -> bool:
        return bool(np.all(self.signs == 1))

    def to_text(self) -> str:
        return f"N {self.n}\n" + "\n".join("+" if s > 0 else "-" for s in self.signs) + "\n"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.signs, other.signs)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_truth_table(text: str) -> TruthTable:
    lines = list(_content_lines(text))
    if not lines:
        raise CircuitParseError("missing header")
    lineno, header = lines[0]
    tokens = header.split()
    if len(tokens) != 4 or tokens[0] != "N" or tokens[2] != "B":
        raise CircuitParseError("expected header 'N <n> B <b>'", lineno)
    n, b = int(tokens[1]), int(tokens[3])
    rows = []
    for lineno, line in lines[1:]:
        if len(line) != b or set(line) - {"0", "1"}:
            raise CircuitParseError(f"expected {b} binary characters", lineno)
        rows.append(line)
    if len(rows) != 2**n:
        raise CircuitParseError(f"expected {2 ** n} rows, got {len(rows)}")
    return TruthTable.from_rows(rows)


def parse_phase_table(text: str) -> PhaseTable:
    lines = list(_content_lines(text))
    if not lines:
        raise CircuitParseError("missing header")
    lineno, header = lines[0]
    tokens = header.split()
    if len(tokens) != 2 or tokens[0] != "N":
        raise CircuitParseError("expected header 'N <n>'", lineno)
    n = int(tokens[1])
    signs = []
    for lineno, line in lines[1:]:
        if line not in ("+", "-"):
            raise CircuitParseError("expected '+' or '-'", lineno)
        signs.append(1 if line == "+" else -1)
    if len(signs) != 2**n:
        raise CircuitParseError(f"expected {2 ** n} rows, got {len(signs)}")
    return PhaseTable(n, signs)


def load_truth_table(path: Union[str, Path]) -> TruthTable:
    return parse_truth_table(Path(path).read_text(encoding="utf-8"))


def load_phase_table(path: Union[str, Path]) -> PhaseTable:
    return parse_phase_table(Path(path).read_text(encoding="utf-8"))
