"""Geometric refinement of a real state into a weighted sum of coarse states.

Starting from r_0 = psi, every level approximates the normalized residual by
a coarse state phi_j and subtracts gamma * beta**j * phi_j. As long as every
overlap is at least gamma <= 1/sqrt(2), the residual norms obey
||r_j|| <= beta**j with beta = sqrt(1 - gamma**2), so

    psi ~ zeta * sum_j beta**j phi_j

with zeta = gamma. When a residual vanishes at level j*, the first j* levels
reproduce psi exactly and later levels repeat them cyclically; zeta is
rescaled to keep the sum equal to psi.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from ..config import SynthConfig
from ..errors import FlatteningFailedError, PrecisionUnreachableError
from .flatten import FLAT_TARGET, CoarseApprox, coarse_approx
from .target import StateInput, as_target

logger = logging.getLogger(__name__)

RESIDUAL_ZERO = 1e-12
EXACT_OVERLAP = 1 - 1e-12

Approximator = Callable[[np.ndarray, int], CoarseApprox]


@dataclass
class RefinementPlan:
    """Levels and weights of a refinement.

    Attributes:
        levels (list of CoarseApprox): One coarse state per level, T of them;
            with a cycle of length j_star, level k repeats level k mod j_star.
        zeta (float): Scale with psi ~ zeta * sum_k beta**k * phi_k.
        beta (float): sqrt(1 - gamma_star**2).
        gamma_star (float): Overlap guaranteed at every level.
        T (int): Number of levels, a power of two.
        j_star (int, optional): Level at which the residual vanished.
        residual_norms (list of float): ||r_j|| for every computed level.
        error (float): ||psi - zeta * sum_k beta**k * phi_k||.
    """

    levels: List[CoarseApprox]
    zeta: float
    beta: float
    gamma_star: float
    T: int
    j_star: Optional[int] = None
    residual_norms: List[float] = field(default_factory=list)
    error: float = 0.0

    def __post_init__(self):
        if self.T < 1 or self.T & (self.T - 1):
            raise ValueError(f"Level count {self.T} is not a power of two")
        if len(self.levels) != self.T:
            raise ValueError(f"Expected {self.T} levels, got {len(self.levels)}")

    @property
    def n(self) -> int:
        return self.levels[0].n

    @property
    def register_width(self) -> int:
        """Qubits needed to index the levels."""
        return self.T.bit_length() - 1

    @property
    def is_exact(self) -> bool:
        """A single level reproducing the state on its own."""
        return self.T == 1 and self.beta == 0.0

    def weights(self) -> np.ndarray:
        return self.beta ** np.arange(self.T)

    def reconstruction(self) -> np.ndarray:
        states = np.array([level.state() for level in self.levels])
        return self.zeta * self.weights() @ states


def levels_needed(gamma: float, beta: float, eps_core: float, min_levels: int = 1) -> int:
    """Smallest power of two P >= min_levels with (gamma / (1 - beta)) * beta**(P / 2) <= eps_core."""
    P = 1 << max(0, math.ceil(math.log2(max(1, min_levels))))
    if beta == 0:
        return P
    while gamma / (1 - beta) * beta ** (P / 2) > eps_core:
        P *= 2
    return P


def _cycle_zeta(gamma: float, beta: float, j_star: int, P: int) -> float:
    t = P // j_star
    if t == 0:
        return gamma
    return gamma * (1 - beta**j_star) / (1 - beta ** (t * j_star))


def _expand(levels, beta, gamma, j_star, P, psi):
    chosen = [levels[k % j_star] if j_star else levels[k] for k in range(P)]
    zeta = _cycle_zeta(gamma, beta, j_star, P) if j_star else gamma
    states = np.array([c.state() for c in chosen])
    error = float(np.linalg.norm(psi - zeta * (beta ** np.arange(P)) @ states))
    return chosen, zeta, error


def refine(
    psi: StateInput,
    eps_core: float,
    budget: int = None,
    rng: np.random.Generator = None,
    approximator: Approximator = None,
    gamma: float = None,
    min_levels: int = 1,
) -> RefinementPlan:
    """Decompose a real state into geometrically weighted coarse states.

    Args:
        psi (TargetState or array-like): Real normalized amplitudes.
        eps_core (float): Reconstruction tolerance in (0, 1/2].
        budget (int, optional): Sign tables tried per level.
        rng (np.random.Generator, optional): Randomness for the sign-table search.
        approximator (callable, optional): ``approximator(direction, level)``
            returning a CoarseApprox; ``coarse_approx`` by default.
        gamma (float, optional): Fix the guaranteed overlap instead of adapting it.
        min_levels (int): Lower bound on the level count.

    Returns:
        RefinementPlan: The smallest power-of-two plan whose measured
        reconstruction error is within ``eps_core``.

    Raises:
        FlatteningFailedError: When a level's overlap falls below the floor.
        PrecisionUnreachableError: When even the largest plan misses ``eps_core``.
    """
    target = as_target(psi)
    psi = target.real_vector()
    if not 0 < eps_core <= 0.5:
        raise ValueError(f"Core tolerance {eps_core} outside (0, 1/2]")
    rng = np.random.default_rng(SynthConfig.seed) if rng is None else rng
    if approximator is None:
        def approximator(direction, level):
            return coarse_approx(direction, budget, rng)

    first = approximator(psi, 0)
    if gamma is None and float(first.state() @ psi) >= EXACT_OVERLAP:
        logger.debug("refine: state is exactly coarse")
        return RefinementPlan([first], 1.0, 0.0, 1.0, 1, j_star=1, residual_norms=[1.0, 0.0])

    fixed = gamma is not None
    gamma_star = gamma if fixed else FLAT_TARGET
    if not 0 < gamma_star <= FLAT_TARGET + 1e-12:
        raise ValueError(f"gamma {gamma_star} outside (0, 1/sqrt(2)]")
    while True:
        beta = math.sqrt(1 - gamma_star**2)
        T_max = levels_needed(gamma_star, beta, eps_core, min_levels)
        levels, norms, j_star = [], [1.0], None
        residual = psi.copy()
        restart = False
        for j in range(T_max):
            direction = residual / norms[-1]
            approx = first if j == 0 else approximator(direction, j)
            overlap = float(approx.state() @ direction)
            if overlap < gamma_star - 1e-12:
                if fixed:
                    raise FlatteningFailedError(
                        f"flattening failed: level {j} overlap {overlap:.4f} below gamma {gamma_star:.4f}"
                    )
                if overlap < SynthConfig.gamma_min:
                    raise FlatteningFailedError(
                        f"flattening failed: level {j} overlap {overlap:.4f} below {SynthConfig.gamma_min}"
                    )
                logger.debug(f"refine: lowering gamma to {overlap:.4f} at level {j}")
                gamma_star = overlap
                restart = True
                break
            levels.append(approx)
            residual = residual - gamma_star * beta**j * approx.state()
            norms.append(float(np.linalg.norm(residual)))
            if norms[-1] < RESIDUAL_ZERO:
                j_star = j + 1
                break
        if not restart:
            break

    P = 1 << max(0, math.ceil(math.log2(max(1, min_levels))))
    while True:
        chosen, zeta, error = _expand(levels, beta, gamma_star, j_star, P, psi)
        if error <= eps_core or P >= T_max:
            break
        P *= 2
    if error > eps_core:
        raise PrecisionUnreachableError(
            f"precision unreachable: reconstruction error {error:.3e} exceeds {eps_core:.3e} at T={P}"
        )
    plan = RefinementPlan(chosen, zeta, beta, gamma_star, P, j_star, norms, error)
    logger.debug(
        f"refine: T={plan.T}, gamma={gamma_star:.4f}, beta={beta:.4f}, zeta={zeta:.4f}, "
        f"j*={j_star}, error {error:.3e}"
    )
    return plan
