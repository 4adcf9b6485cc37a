"""Clifford+T state preparation through flattening, refinement and amplification."""

import logging
import time
from typing import Tuple

import numpy as np

from ..boolean.oracle import emit_phase_oracle
from ..circuit.circuit import Circuit, QubitPool
from ..circuit.report import SynthReport
from ..config import SynthConfig
from ..diagonal.synth import emit_diagonal
from ..simulation.metrics import DiagonalSpec, ancilla_clean_weight, check_within, state_error
from ..simulation.sparse_state import run_basis
from .amplify import emit_amplification
from .lcu import build_lcu, ideal_flag_amplitude, rounds_for
from .refine import RefinementPlan, refine
from .target import StateInput, TargetState, as_target

logger = logging.getLogger(__name__)

_ZERO_AMPLITUDE = 1e-15


def peel_phases(psi: StateInput) -> Tuple[DiagonalSpec, TargetState]:
    """Split a state into a phase diagonal and a real nonnegative state.

    Zero amplitudes get phase 0.
    """
    target = as_target(psi)
    amps = target.amplitudes
    moduli = np.abs(amps)
    phases = np.where(moduli > _ZERO_AMPLITUDE, np.angle(amps), 0.0)
    return DiagonalSpec(target.n, phases), TargetState(target.n, moduli / np.linalg.norm(moduli))


def _check_eps(eps: float) -> None:
    if not SynthConfig.eps_min <= eps <= 0.5:
        raise ValueError(f"Epsilon {eps} outside [{SynthConfig.eps_min}, 1/2]")


def _verify(circ: Circuit, target: TargetState) -> Tuple[float, float]:
    out = run_basis(circ, 0)
    return state_error(out, target.amplitudes), ancilla_clean_weight(out, target.n)


def layer_precision(eps_layers: float, rounds: int, register_width: int) -> float:
    """Precision of each single-qubit word when V is applied 1 + 2 * rounds times."""
    per_word = eps_layers / (2 * (1 + 2 * rounds)) / (register_width + 1)
    if per_word < SynthConfig.eps_min:
        logger.warning(f"Word precision {per_word:.2e} clamped to {SynthConfig.eps_min:.0e}")
        per_word = SynthConfig.eps_min
    return per_word


def emit_coarse_state(circ: Circuit, pool: QubitPool, qubits, plan: RefinementPlan) -> None:
    """Prepare the single level of an exact plan directly from |0>."""
    level = plan.levels[0]
    circ.h_layer(qubits)
    emit_phase_oracle(circ, pool, qubits, level.b1)
    circ.h_layer(qubits)
    emit_phase_oracle(circ, pool, qubits, level.b2)


def synth_state(psi: StateInput, eps: float, seed: int = None) -> Tuple[Circuit, SynthReport]:
    """Compile a circuit preparing ``psi`` from |0^n> within l2 error ``eps``.

    The phases are split off and applied last by a diagonal (eps/6). The real
    part is refined into coarse states (eps/6 reconstruction, at most eps/3 on
    the normalized state), combined behind a flag register and amplified;
    the single-qubit words of that stage share the remaining eps/2.

    Args:
        psi (TargetState or array-like): Normalized amplitudes.
        eps (float): Precision in [eps_min, 1/2].
        seed (int, optional): Seed of the sign-table search; ``SynthConfig.seed`` by default.

    Returns:
        tuple: The circuit (n inputs, ancillas after) and its SynthReport.

    Raises:
        PrecisionUnreachableError: If a word search fails or, with
            ``SynthConfig.verify``, the simulated error exceeds ``eps``.
    """
    target = as_target(psi)
    _check_eps(eps)
    seed = SynthConfig.seed if seed is None else seed
    started = time.perf_counter()
    n = target.n
    circ = Circuit(n, n, label=f"state n={n} eps={eps:g}")
    extras = {}
    basis = target.basis_index()
    if basis is not None:
        for q in range(n):
            if basis >> q & 1:
                circ.x(q)
        extras["route"] = "basis"
    else:
        phases, real = peel_phases(target)
        plan = refine(real, eps / 6, rng=np.random.default_rng(seed))
        extras.update(route="coarse" if plan.is_exact else "lcu", levels=plan.T, gamma=plan.gamma_star, j_star=plan.j_star)
        if plan.is_exact:
            pool = QubitPool(circ)
            emit_coarse_state(circ, pool, list(range(n)), plan)
        else:
            s = plan.register_width
            estimate = rounds_for(ideal_flag_amplitude(plan))
            V, aa = build_lcu(plan, layer_precision(eps / 2, estimate, s))
            if aa.rounds != estimate:
                logger.debug(f"Rounds changed from {estimate} to {aa.rounds} after word selection")
            circ.compose(V)
            pool = QubitPool(circ, reusable=range(n + s + 1, circ.width))
            emit_amplification(circ, pool, V.gates, aa)
            extras.update(rounds=aa.rounds, xi=aa.xi)
        emit_diagonal(circ, pool, list(range(n)), phases, eps / 6)
    error = 0.0
    if SynthConfig.verify:
        error, dirty = _verify(circ, target)
        check_within(error, eps, f"state n={n}")
        extras["ancilla_weight"] = dirty
    report = SynthReport.for_circuit("state", circ, started, error, seed, **extras)
    logger.info(f"State n={n}: {report}")
    return circ.freeze(), report
