"""Exact arithmetic in the ring Z[1/sqrt(2), omega], omega = exp(i*pi/4).

An element is stored as integer coefficients (x0, x1, x2, x3) of
x0 + x1*omega + x2*omega**2 + x3*omega**3 together with a denominator
exponent k, the value being that sum divided by sqrt(2)**k. The canonical form
has the smallest k, which makes the integer representation unique.

The vectorized helpers operate on arrays whose last axis holds the four
coefficients; they are used to build the word database without floating-point
deduplication.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

OMEGA = np.exp(1j * np.pi / 4)
_OMEGA_POWERS = OMEGA ** np.arange(4)


def omega_mul(x: np.ndarray) -> np.ndarray:
    """Multiply by omega (omega**4 = -1)."""
    return np.stack([-x[..., 3], x[..., 0], x[..., 1], x[..., 2]], axis=-1)


def sqrt2_mul(x: np.ndarray) -> np.ndarray:
    """Multiply by sqrt(2) = omega - omega**3."""
    return np.stack(
        [x[..., 1] - x[..., 3], x[..., 0] + x[..., 2], x[..., 1] + x[..., 3], x[..., 2] - x[..., 0]],
        axis=-1,
    )


def canonicalize(x: np.ndarray, k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Reduce matrices of ring entries to the smallest common denominator exponent.

    Args:
        x (np.ndarray): Integer array of shape (N, E, 4), E entries per matrix.
        k (np.ndarray): Denominator exponents of shape (N,).

    Returns:
        tuple: Canonical (x, k). A matrix is reduced while every entry is
        divisible by sqrt(2), i.e. sqrt(2) times the entry has even coefficients.
    """
    x = x.copy()
    k = k.copy()
    while True:
        doubled = sqrt2_mul(x)
        mask = (k > 0) & np.all(doubled % 2 == 0, axis=(1, 2))
        if not mask.any():
            return x, k
        x[mask] = doubled[mask] // 2
        k[mask] -= 1


def to_complex(x: np.ndarray, k) -> np.ndarray:
    """Evaluate ring elements as complex numbers; ``k`` broadcasts against x[..., 0]."""
    values = x.astype(float) @ _OMEGA_POWERS
    return values / np.sqrt(2.0) ** np.asarray(k, dtype=float)


@dataclass(frozen=True)
class ZOmega:
    """An element of Z[omega]."""

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0

    @property
    def coeffs(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __add__(self, other: "ZOmega") -> "ZOmega":
        return ZOmega(*(p + q for p, q in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ZOmega") -> "ZOmega":
        return ZOmega(*(p - q for p, q in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "ZOmega":
        return ZOmega(*(-p for p in self.coeffs))

    def __mul__(self, other: "ZOmega") -> "ZOmega":
        out = [0, 0, 0, 0]
        for i, p in enumerate(self.coeffs):
            for j, q in enumerate(other.coeffs):
                if i + j < 4:
                    out[i + j] += p * q
                else:
                    out[i + j - 4] -= p * q
        return ZOmega(*out)

    def conj(self) -> "ZOmega":
        return ZOmega(self.a, -self.d, -self.c, -self.b)

    def times_sqrt2(self) -> "ZOmega":
        return ZOmega(self.b - self.d, self.a + self.c, self.b + self.d, self.c - self.a)

    def divisible_by_sqrt2(self) -> bool:
        return all(v % 2 == 0 for v in self.times_sqrt2().coeffs)

    def div_sqrt2(self) -> "ZOmega":
        if not self.divisible_by_sqrt2():
            raise ValueError(f"{self} is not divisible by sqrt(2)")
        return ZOmega(*(v // 2 for v in self.times_sqrt2().coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __complex__(self) -> complex:
        return complex(np.dot(self.coeffs, _OMEGA_POWERS))

    @classmethod
    def omega_power(cls, m: int) -> "ZOmega":
        m %= 8
        coeffs = [0, 0, 0, 0]
        coeffs[m % 4] = 1 if m < 4 else -1
        return cls(*coeffs)


ONE = ZOmega(1)
ZERO = ZOmega()


@dataclass(frozen=True)
class ExactMatrix:
    """A 2x2 matrix with entries in Z[omega] over a common sqrt(2)**k denominator."""

    entries: Tuple[ZOmega, ZOmega, ZOmega, ZOmega]
    k: int = 0

    def __post_init__(self):
        entries, k = self.entries, self.k
        while k > 0 and all(e.divisible_by_sqrt2() for e in entries):
            entries = tuple(e.div_sqrt2() for e in entries)
            k -= 1
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "k", k)

    @classmethod
    def identity(cls) -> "ExactMatrix":
        return cls((ONE, ZERO, ZERO, ONE))

    @classmethod
    def hadamard(cls) -> "ExactMatrix":
        return cls((ONE, ONE, ONE, -ONE), 1)

    @classmethod
    def t_gate(cls) -> "ExactMatrix":
        return cls((ONE, ZERO, ZERO, ZOmega.omega_power(1)))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return ExactMatrix((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h), self.k + other.k)

    def determinant(self) -> Tuple[ZOmega, int]:
        """Return (numerator, exponent) with det = numerator / sqrt(2)**exponent."""
        a, b, c, d = self.entries
        num, k = a * d - b * c, 2 * self.k
        while k > 0 and num.divisible_by_sqrt2():
            num, k = num.div_sqrt2(), k - 1
        return num, k

    def to_numpy(self) -> np.ndarray:
        values = [complex(e) for e in self.entries]
        return np.array(values, dtype=complex).reshape(2, 2) / np.sqrt(2.0) ** self.k

    def key(self) -> Tuple:
        return (self.k,) + tuple(e.coeffs for e in self.entries)
