"""H/T words and their bit encoding for gate-sequence tables."""

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from ..circuit.gates import SINGLE_QUBIT_MATRICES, GateKind
from ..errors import WordOverflowError
from .ring import ExactMatrix

_H = SINGLE_QUBIT_MATRICES[GateKind.H]
_T = SINGLE_QUBIT_MATRICES[GateKind.T]


@dataclass(frozen=True)
class HTWord:
    """The product H^a1 T^b1 ... H^aK T^bK of K blocks.

    ``pairs`` holds the (a, b) bits of each block, leftmost factor first.
    """

    pairs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        for a, b in pairs:
            if a not in (0, 1) or b not in (0, 1):
                raise ValueError(f"Block bits must be 0 or 1, got {(a, b)}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def K(self) -> int:
        return len(self.pairs)

    @property
    def t_count(self) -> int:
        return sum(b for _, b in self.pairs)

    @property
    def h_count(self) -> int:
        return sum(a for a, _ in self.pairs)

    def matrix(self) -> np.ndarray:
        m = np.eye(2, dtype=complex)
        for a, b in self.pairs:
            if a:
                m = m @ _H
            if b:
                m = m @ _T
        return m

    def exact_matrix(self) -> ExactMatrix:
        m = ExactMatrix.identity()
        h, t = ExactMatrix.hadamard(), ExactMatrix.t_gate()
        for a, b in self.pairs:
            if a:
                m = m @ h
            if b:
                m = m @ t
        return m

    def det_power(self) -> int:
        """Exponent m with det(matrix) = omega**m; det H = -1 and det T = omega."""
        return (4 * self.h_count + self.t_count) % 8

    def stripped(self) -> "HTWord":
        """Drop identity (0, 0) blocks."""
        return HTWord(tuple(p for p in self.pairs if p != (0, 0)))

    def transpose(self) -> "HTWord":
        """Word whose matrix is the transpose of this one, at most one block longer.

        H and T are symmetric, so the transpose reverses the factors; the
        reversed T^bK H^aK ... T^b1 H^a1 is regrouped into H^a T^b blocks.
        """
        if not self.pairs:
            return self
        a = [p[0] for p in self.pairs]
        b = [p[1] for p in self.pairs]
        K = self.K
        blocks = [(0, b[K - 1])]
        for i in range(K - 1, 0, -1):
            blocks.append((a[i], b[i - 1]))
        blocks.append((a[0], 0))
        return HTWord(tuple(blocks)).stripped()

    def __add__(self, other: "HTWord") -> "HTWord":
        return HTWord(self.pairs + other.pairs)

    def gates(self) -> Iterable[GateKind]:
        """Gate kinds in application order (rightmost factor first)."""
        for a, b in reversed(self.pairs):
            if b:
                yield GateKind.T
            if a:
                yield GateKind.H

    def __len__(self) -> int:
        return self.K

    def __str__(self) -> str:
        return " ".join(("H" if a else "") + ("T" if b else "") or "I" for a, b in self.pairs)


def encode_word(w: HTWord, K_pad: int) -> str:
    """Interleave the block bits as a1 b1 a2 b2 ... padded with identity blocks."""
    if w.K > K_pad:
        raise WordOverflowError(f"Word of {w.K} blocks does not fit in {K_pad} blocks")
    pairs = list(w.pairs) + [(0, 0)] * (K_pad - w.K)
    return "".join(f"{a}{b}" for a, b in pairs)


def decode_word(bits: str) -> HTWord:
    if len(bits) % 2:
        raise ValueError(f"Encoded word has odd length {len(bits)}")
    if set(bits) - {"0", "1"}:
        raise ValueError(f"Encoded word must be binary: {bits!r}")
    return HTWord(tuple((int(bits[i]), int(bits[i + 1])) for i in range(0, len(bits), 2)))


def op_norm_2x2(d: np.ndarray) -> np.ndarray:
    """Spectral norms of a stack of 2x2 matrices (shape (..., 2, 2))."""
    fro2 = np.sum(np.abs(d) ** 2, axis=(-2, -1))
    det = d[..., 0, 0] * d[..., 1, 1] - d[..., 0, 1] * d[..., 1, 0]
    disc = np.sqrt(np.maximum(fro2**2 - 4 * np.abs(det) ** 2, 0.0))
    return np.sqrt((fro2 + disc) / 2)


def word_error(w: HTWord, U) -> float:
    """Operator-norm distance between the word and ``U`` with no phase quotient."""
    return float(op_norm_2x2(w.matrix() - np.asarray(U, dtype=complex)))


def state_word_error(w: HTWord, target) -> float:
    """Phase-minimized distance between w|0> and a normalized single-qubit state."""
    overlap = abs(np.vdot(np.asarray(target, dtype=complex), w.matrix()[:, 0]))
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * overlap)))


def emit_word(circ, w: HTWord, qubit: int) -> None:
    """Append the gates of ``w`` on one qubit so that it applies matrix(w)."""
    for kind in w.gates():
        circ.add(kind, qubit)
