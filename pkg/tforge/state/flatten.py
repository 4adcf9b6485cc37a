"""Coarse approximation of real states by two Boolean phase oracles.

For a real unit vector psi and a sign table B2, let t = H^n B2 psi. Choosing
B1 = sign(t) makes phi = B2 H^n B1 H^n |0^n> satisfy

    <phi|psi> = ||t||_1 / sqrt(2**n),

so the search only needs a B2 whose transform has a large l1 norm. Random
sign tables reach 1/sqrt(2) in expectation, which the search exploits.
"""

import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..boolean.tables import PhaseTable
from ..config import SynthConfig
from ..errors import FlatteningFailedError

logger = logging.getLogger(__name__)

FLAT_TARGET = 1 / np.sqrt(2)


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform over the leading axis."""
    out = np.array(values, dtype=float)
    size = out.shape[0]
    h = 1
    while h < size:
        view = out.reshape((-1, 2, h) + out.shape[1:])
        a = view[:, 0].copy()
        view[:, 0] += view[:, 1]
        view[:, 1] = a - view[:, 1]
        out = view.reshape(out.shape)
        h *= 2
    return out


def hadamard_transform(values: np.ndarray) -> np.ndarray:
    """H^n applied to a vector of 2**n entries."""
    values = np.asarray(values, dtype=float)
    return fwht(values) / np.sqrt(len(values))


@dataclass
class CoarseApprox:
    """The state B2 H^n B1 H^n |0^n> and its overlap with the state it approximates.

    Attributes:
        b1 (PhaseTable): Signs applied between the two Hadamard layers.
        b2 (PhaseTable): Signs applied last.
        overlap (float): Real overlap with the approximated direction.
    """

    b1: PhaseTable
    b2: PhaseTable
    overlap: float

    @property
    def n(self) -> int:
        return self.b1.n

    def state(self) -> np.ndarray:
        """Dense real amplitudes of the approximating state."""
        size = 2**self.n
        return self.b2.signs * fwht(self.b1.signs.astype(float)) / size

    @classmethod
    def from_signs(cls, b2_signs: np.ndarray, direction: np.ndarray) -> "CoarseApprox":
        """Complete a B2 table with the optimal B1 for ``direction``."""
        n = int(round(np.log2(len(direction))))
        transformed = hadamard_transform(b2_signs * direction)
        b1 = np.where(transformed < 0, -1, 1)
        overlap = float(np.sum(np.abs(transformed)) / np.sqrt(len(direction)))
        return cls(PhaseTable(n, b1), PhaseTable(n, b2_signs), overlap)


def _candidates(size: int, budget: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    yield np.ones(size, dtype=np.int8)
    for _ in range(budget - 1):
        yield rng.choice(np.array([1, -1], dtype=np.int8), size=size)


def all_sign_tables(size: int) -> np.ndarray:
    """Every sign table with a +1 first entry, shape (2**(size - 1), size)."""
    codes = np.arange(2 ** (size - 1))[:, None]
    bits = (codes >> np.arange(size - 1)) & 1
    return np.concatenate([np.ones((len(codes), 1), dtype=np.int8), (1 - 2 * bits).astype(np.int8)], axis=1)


def exhaustive_approx(psi: np.ndarray) -> CoarseApprox:
    """Best coarse approximation over every B2 (B2 and -B2 give the same state up to sign)."""
    tables = all_sign_tables(len(psi))
    transformed = fwht((tables * psi).T) / np.sqrt(len(psi))
    best = int(np.argmax(np.sum(np.abs(transformed), axis=0)))
    return CoarseApprox.from_signs(tables[best], psi)


def polish(candidate: CoarseApprox, psi: np.ndarray, rounds: int = 8) -> CoarseApprox:
    """Alternate the optimal B2 for the current B1 and the optimal B1 for that B2.

    Neither step lowers the overlap.
    """
    for _ in range(rounds):
        flat = fwht(candidate.b1.signs.astype(float))
        b2 = np.where(psi * flat < 0, -1, 1).astype(np.int8)
        better = CoarseApprox.from_signs(b2, psi)
        if better.overlap <= candidate.overlap + 1e-15:
            break
        candidate = better
    return candidate


def coarse_approx(psi: np.ndarray, budget: int = None, rng: np.random.Generator = None, gamma_min: float = None) -> CoarseApprox:
    """Search sign tables for a coarse approximation of a real unit vector.

    Up to ``SynthConfig.exhaustive_qubits`` qubits every table is tried and
    the best one returned. Otherwise the all-plus table is tried first, then
    up to ``budget - 1`` random tables, each improved by ``polish``; the search
    stops at the first candidate reaching 1/sqrt(2).

    Args:
        psi (np.ndarray): Real amplitudes, norm 1.
        budget (int, optional): Number of candidates; ``SynthConfig.flatten_budget`` by default.
        rng (np.random.Generator, optional): Source of random tables.
        gamma_min (float, optional): Smallest acceptable overlap.

    Raises:
        FlatteningFailedError: When the best overlap found is below ``gamma_min``.
    """
    psi = np.asarray(psi)
    if np.iscomplexobj(psi):
        if np.any(np.abs(psi.imag) > 1e-12):
            raise ValueError("coarse_approx needs real amplitudes")
        psi = psi.real
    psi = psi.astype(float)
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise ValueError(f"Direction is not normalized: {np.linalg.norm(psi):.12f}")
    budget = SynthConfig.flatten_budget if budget is None else budget
    if budget < 1:
        raise ValueError(f"Budget must be at least 1, got {budget}")
    gamma_min = SynthConfig.gamma_min if gamma_min is None else gamma_min
    rng = np.random.default_rng(SynthConfig.seed) if rng is None else rng
    if len(psi) <= 2**SynthConfig.exhaustive_qubits:
        best = exhaustive_approx(psi)
        tried = 2 ** (len(psi) - 1)
    else:
        best = None
        tried = 0
        for signs in _candidates(len(psi), budget, rng):
            tried += 1
            candidate = polish(CoarseApprox.from_signs(signs, psi), psi)
            if best is None or candidate.overlap > best.overlap:
                best = candidate
            if best.overlap >= FLAT_TARGET:
                break
    if best.overlap < gamma_min:
        raise FlatteningFailedError(
            f"flattening failed: best overlap {best.overlap:.4f} below {gamma_min} after {tried} tables"
        )
    logger.debug(f"coarse_approx: overlap {best.overlap:.4f} after {tried} tables")
    return best


def khintchine_samples(psi: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Values ||H^n B psi||_1 / sqrt(2**n) for ``count`` uniformly random sign tables B."""
    psi = np.asarray(psi, dtype=float)
    signs = rng.choice(np.array([1.0, -1.0]), size=(count, len(psi)))
    transformed = fwht((signs * psi).T) / np.sqrt(len(psi))
    return np.sum(np.abs(transformed), axis=0) / np.sqrt(len(psi))
