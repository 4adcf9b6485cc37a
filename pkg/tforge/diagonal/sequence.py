"""Gate-sequence tables and the controlled H/T ladder.

A table row records, for one value of the control register, the H/T word to
apply to a target qubit. The rows are computed into a sequence register by a
Boolean oracle F, the ladder applies CH and CT gates controlled by the
register bits, and F is applied again to clear the register.

The ladder applies column 0 first: a row encoding the word w implements the
transpose of matrix(w) on the target. Diagonal targets are symmetric, so their
words are used as they are; general targets are stored as transposed words.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from ..boolean.oracle import emit_oracle
from ..boolean.tables import TruthTable
from ..circuit.circuit import Circuit, QubitPool
from ..circuit.macros import C_CH, C_CT
from ..simulation.metrics import DiagonalSpec
from ..squbit.htword import HTWord, decode_word, encode_word, word_error
from ..squbit.search import approx_su2

logger = logging.getLogger(__name__)


@dataclass
class GateSequenceTable:
    """Encoded H/T words for every control value.

    Attributes:
        n (int): Control register width.
        K_pad (int): Blocks per row after padding.
        rows (list of str): 2**n bit strings of length 2 * K_pad.
        word_errors (np.ndarray, optional): Per-row approximation error.
    """

    n: int
    K_pad: int
    rows: List[str]
    word_errors: np.ndarray = None

    def __post_init__(self):
        if len(self.rows) != 2**self.n:
            raise ValueError(f"Expected {2 ** self.n} rows, got {len(self.rows)}")
        for row in self.rows:
            if len(row) != 2 * self.K_pad:
                raise ValueError(f"Row length {len(row)} does not match K_pad={self.K_pad}")

    @classmethod
    def from_words(cls, words: Sequence[HTWord], errors=None) -> "GateSequenceTable":
        n = int(round(np.log2(len(words))))
        K_pad = max((w.K for w in words), default=0)
        rows = [encode_word(w, K_pad) for w in words]
        return cls(n, K_pad, rows, None if errors is None else np.asarray(errors, dtype=float))

    def words(self) -> List[HTWord]:
        return [decode_word(row) for row in self.rows]

    def active_columns(self) -> List[int]:
        """Bit columns that are set in at least one row."""
        return [c for c in range(2 * self.K_pad) if any(row[c] == "1" for row in self.rows)]

    def truth_table(self, columns: Sequence[int]) -> TruthTable:
        bits = [[int(row[c]) for c in columns] for row in self.rows]
        return TruthTable(self.n, len(columns), np.array(bits, dtype=np.uint8).reshape(2**self.n, len(columns)))

    def ladder_t_count(self) -> int:
        return sum(C_CH if c % 2 == 0 else C_CT for c in self.active_columns())

    @property
    def max_error(self) -> float:
        return 0.0 if self.word_errors is None or len(self.word_errors) == 0 else float(np.max(self.word_errors))


def phase_unit(theta: float) -> np.ndarray:
    """The determinant-one unitary diag(e^{i theta}, e^{-i theta})."""
    return np.diag([np.exp(1j * theta), np.exp(-1j * theta)])


def build_sequence_table(spec: DiagonalSpec, eps: float) -> GateSequenceTable:
    """Approximate every block diag(e^{i theta_j}, e^{-i theta_j}) of ``spec`` within ``eps``."""
    memo: Dict[float, HTWord] = {}
    words, errors = [], []
    for theta in np.mod(spec.phases, 2 * np.pi):
        key = float(theta)
        if key not in memo:
            memo[key] = approx_su2(phase_unit(key), eps)
        words.append(memo[key])
        errors.append(word_error(memo[key], phase_unit(key)))
    table = GateSequenceTable.from_words(words, errors)
    logger.debug(
        f"Sequence table n={spec.n}: {len(memo)} distinct words, K_pad={table.K_pad}, "
        f"max error {table.max_error:.3e}"
    )
    return table


def controlled_ladder(K_pad: int, seq_register: Sequence[int], target: int) -> Circuit:
    """Alternating CH / CT gates: column 2l controls H, column 2l + 1 controls T.

    Args:
        K_pad (int): Number of blocks.
        seq_register (sequence of int): 2 * K_pad control qubits.
        target (int): Target qubit.

    Returns:
        Circuit: The ladder on the smallest width holding every qubit.
    """
    if len(seq_register) != 2 * K_pad:
        raise ValueError(f"Sequence register needs {2 * K_pad} qubits, got {len(seq_register)}")
    width = max(list(seq_register) + [target]) + 1
    circ = Circuit(width, width, label=f"ladder K={K_pad}")
    emit_ladder(circ, dict(enumerate(seq_register)), target)
    return circ.freeze()


def emit_ladder(circ: Circuit, register: Dict[int, int], target: int) -> None:
    """Append the ladder for the columns in ``register`` (column -> control qubit)."""
    for c in sorted(register):
        if c % 2 == 0:
            circ.ch(register[c], target)
        else:
            circ.ct(register[c], target)


def emit_word_select(circ: Circuit, pool: QubitPool, controls: Sequence[int], target: int, table: GateSequenceTable) -> None:
    """Apply the transpose of row j's word to ``target`` when the controls hold j.

    Only columns set in some row get a sequence qubit; an all-identity table
    emits nothing.
    """
    if len(controls) != table.n:
        raise ValueError(f"{len(controls)} controls for a table on {table.n} qubits")
    columns = table.active_columns()
    if not columns:
        return
    seq = pool.allocate(len(columns))
    oracle = table.truth_table(columns)
    emit_oracle(circ, pool, list(controls), seq, oracle)
    emit_ladder(circ, dict(zip(columns, seq)), target)
    emit_oracle(circ, pool, list(controls), seq, oracle)
    pool.release(seq)
