"""
Tests for state preparation.

Covers target states, sign-table flattening, geometric refinement, the flagged
linear combination with amplitude amplification, the end-to-end compiler, the
qubit-by-qubit baseline and the Hamming-weight route for repeated unitaries.
"""

import math
import sys

import numpy as np
import pytest
from scipy.linalg import hadamard
from scipy.optimize import brentq

from tforge.boolean import PhaseTable
from tforge.circuit import Circuit, QubitPool
from tforge.diagonal import tensor_matrix
from tforge.errors import FlagAmplitudeError, FlatteningFailedError, PrecisionUnreachableError
from tforge.simulation import operator_error, run_basis, state_error
from tforge.state import (
    AAPlan,
    CoarseApprox,
    TargetState,
    amplitude_amplify,
    build_lcu,
    coarse_approx,
    conditional_states,
    hadamard_transform,
    ideal_flag_amplitude,
    khintchine_samples,
    levels_needed,
    peel_phases,
    refine,
    round_amplitude,
    rounds_for,
    synth_mass,
    synth_state,
    synth_state_lks,
    weight_diagonal,
)
from tforge.state import mass
from tforge.state import synth as state_synth
from tforge.state.flatten import FLAT_TARGET, all_sign_tables, exhaustive_approx, polish
from tforge.state.lcu import level_amplitudes, level_probabilities
from tforge.state.synth import emit_coarse_state, layer_precision

T_GATE = np.diag([1, np.exp(1j * np.pi / 4)])
H_GATE = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
MIXED_SIGNS = np.array([1, 1, 1, 1, 1, 1, -1, -1])

CYCLE_TABLES = [
    (MIXED_SIGNS, np.ones(8, dtype=np.int8)),
    ([1, 1, 1, 1, 1, 1, 1, -1], [1, -1, 1, 1, -1, 1, 1, 1]),
    ([1, -1, 1, 1, 1, 1, -1, 1], [1, 1, -1, 1, 1, -1, 1, 1]),
]


def _random_coarse(n, rng):
    return CoarseApprox(PhaseTable.random(n, rng), PhaseTable.random(n, rng), 1.0)


def _flagged_weight(state, n):
    return sum(abs(a) ** 2 for k, a in state.amps.items() if k >> n == 0)


def _cycle_case(b1, b2):
    """Two coarse levels |000> and B2 H B1 H |000> that reproduce psi exactly.

    gamma solves gamma^2 (1 + beta^2 + 2 beta c) = 1 with c the overlap of
    the two levels, so the residual vanishes after the second level.
    """
    phi0 = CoarseApprox(PhaseTable.ones(3), PhaseTable.ones(3), 1.0)
    phi1 = CoarseApprox(PhaseTable(3, b1), PhaseTable(3, b2), 0.5)
    c = float(phi0.state() @ phi1.state())

    def norm_gap(g):
        b = math.sqrt(1 - g**2)
        return g**2 * (1 + b**2 + 2 * b * c) - 1

    gamma = brentq(norm_gap, 0.3, 1 / math.sqrt(2), xtol=1e-15)
    beta = math.sqrt(1 - gamma**2)
    psi = gamma * (phi0.state() + beta * phi1.state())
    return psi, gamma, beta, [phi0, phi1]


@pytest.fixture
def two_level_case():
    """A state that two coarse levels reproduce exactly at gamma below 1/sqrt(2).

    Level 1 is H B H |000> with overlap 1/2 against level 0.
    """
    return _cycle_case(MIXED_SIGNS, np.ones(8, dtype=np.int8))


class TestTargetState:
    """Test suite for TargetState."""

    def test_normalization_checked(self):
        """Amplitudes must have norm 1."""
        with pytest.raises(ValueError, match="not normalized"):
            TargetState(1, [1, 1])

    def test_power_of_two(self):
        """The length must be a power of two."""
        with pytest.raises(ValueError, match="not a power of two"):
            TargetState.from_amplitudes([1, 0, 0])

    def test_random_and_basis(self):
        """Random states are not basis states; basis states report their index."""
        psi = TargetState.random(3, np.random.default_rng(0))
        assert np.isclose(np.linalg.norm(psi.amplitudes), 1)
        assert psi.basis_index() is None
        assert TargetState.basis(3, 6).basis_index() == 6
        assert TargetState(1, [0, -1j]).basis_index() == 1

    def test_real_vector(self):
        """Complex states must have their phases peeled first."""
        with pytest.raises(ValueError, match="peel its phases"):
            TargetState(1, [0.6, 0.8j]).real_vector()
        psi = TargetState.random(2, np.random.default_rng(1), real=True)
        assert psi.is_real()


class TestFlatten:
    """Test suite for sign-table flattening."""

    def test_hadamard_transform(self):
        """The fast transform matches the dense Hadamard matrix."""
        v = np.random.default_rng(2).normal(size=8)
        assert np.allclose(hadamard_transform(v), hadamard(8) @ v / np.sqrt(8))

    def test_overlap_identity(self):
        """The stored overlap equals the inner product with the built state."""
        rng = np.random.default_rng(3)
        psi = rng.normal(size=16)
        psi /= np.linalg.norm(psi)
        for _ in range(5):
            approx = CoarseApprox.from_signs(rng.choice([1, -1], size=16), psi)
            assert np.isclose(approx.overlap, approx.state() @ psi)
            assert np.isclose(np.linalg.norm(approx.state()), 1)

    def test_basis_state_is_coarse(self):
        """A basis state is its own coarse approximation."""
        psi = np.zeros(8)
        psi[0] = 1
        approx = coarse_approx(psi, rng=np.random.default_rng(0))
        assert np.isclose(approx.overlap, 1)
        assert np.allclose(approx.state(), psi)

    def test_random_state_reaches_floor(self):
        """Sampled tables reach the overlap floor on five qubits."""
        psi = TargetState.random(5, np.random.default_rng(4), real=True).real_vector()
        approx = coarse_approx(psi, rng=np.random.default_rng(5))
        assert approx.overlap >= 0.63

    def test_failure(self):
        """An unreachable floor raises."""
        psi = TargetState.random(4, np.random.default_rng(6), real=True).real_vector()
        with pytest.raises(FlatteningFailedError, match="flattening failed"):
            coarse_approx(psi, budget=4, rng=np.random.default_rng(0), gamma_min=0.99)

    def test_rejects_complex(self):
        """Complex directions are rejected."""
        with pytest.raises(ValueError, match="real amplitudes"):
            coarse_approx(np.array([0.6, 0.8j]))

    def test_random_tables_average_above_floor(self):
        """Random tables average at least 1/sqrt(2)."""
        psi = TargetState.random(6, np.random.default_rng(7), real=True).real_vector()
        samples = khintchine_samples(psi, 2000, np.random.default_rng(8))
        assert samples.mean() >= 1 / np.sqrt(2) - 0.02
        assert samples.max() <= 1 + 1e-12

    @pytest.mark.parametrize("n", [3, 4])
    def test_random_coarse_state_found(self, n):
        """Every sign table is searched on small registers, so coarse states are recovered exactly."""
        rng = np.random.default_rng(3)
        psi = _random_coarse(n, rng).state()
        approx = coarse_approx(psi, rng=np.random.default_rng(0))
        assert approx.overlap == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(approx.state(), psi)

    def test_exhaustive_beats_sampling(self):
        """The exhaustive search is at least as good as any sampled table."""
        psi = TargetState.random(3, np.random.default_rng(13), real=True).real_vector()
        best = exhaustive_approx(psi)
        for signs in all_sign_tables(8):
            assert CoarseApprox.from_signs(signs, psi).overlap <= best.overlap + 1e-12
        assert best.overlap >= FLAT_TARGET - 1e-12

    def test_sign_tables_are_distinct(self):
        """All 2**(N-1) tables with a leading +1 are listed once."""
        tables = all_sign_tables(4)
        assert tables.shape == (8, 4)
        assert np.all(tables[:, 0] == 1)
        assert len({tuple(t) for t in tables}) == 8

    def test_polish_never_lowers_overlap(self):
        """Alternating the two tables keeps or raises the overlap."""
        rng = np.random.default_rng(14)
        psi = TargetState.random(6, rng, real=True).real_vector()
        for _ in range(5):
            start = CoarseApprox.from_signs(rng.choice([1, -1], size=64), psi)
            assert polish(start, psi).overlap >= start.overlap - 1e-12


class TestRefine:
    """Test suite for geometric refinement."""

    def test_levels_needed(self):
        """Level counts are powers of two above the requested minimum."""
        g = b = 1 / math.sqrt(2)
        assert levels_needed(g, b, 0.1) == 32
        assert levels_needed(g, b, 0.1, min_levels=64) == 64
        assert levels_needed(1.0, 0.0, 0.1, min_levels=3) == 4

    def test_exact_plan(self):
        """A coarse target is one level with j* = 1."""
        phi = CoarseApprox(PhaseTable(3, MIXED_SIGNS), PhaseTable.ones(3), 0.0).state()
        b2 = np.where(phi < 0, -1, 1)
        psi = np.abs(phi)
        plan = refine(psi, 0.05, approximator=lambda d, j: CoarseApprox.from_signs(b2, d))
        assert plan.is_exact
        assert plan.j_star == 1
        assert plan.T == 1
        assert np.allclose(plan.reconstruction(), psi)

    def test_cycle_of_two_levels(self, two_level_case):
        """Two exact levels repeat with a rescaled zeta."""
        psi, gamma, beta, levels = two_level_case
        plan = refine(psi, 0.05, approximator=lambda d, j: levels[j], gamma=gamma, min_levels=8)
        assert plan.j_star == 2
        assert plan.T == 8
        assert plan.register_width == 3
        assert np.isclose(plan.zeta, gamma * (1 - beta**2) / (1 - beta**8))
        assert plan.error < 1e-9
        assert np.allclose(plan.reconstruction(), psi)

    def test_residuals_contract(self):
        """Residual norms stay below beta**j."""
        psi = TargetState.random(3, np.random.default_rng(9), real=True).real_vector()
        plan = refine(np.abs(psi), 0.05, rng=np.random.default_rng(10))
        assert plan.T & (plan.T - 1) == 0
        assert plan.error <= 0.05
        assert plan.gamma_star <= 1 / math.sqrt(2) + 1e-12
        for j, norm in enumerate(plan.residual_norms):
            assert norm <= plan.beta**j + 1e-9
        assert np.isclose(np.linalg.norm(plan.reconstruction() - np.abs(psi)), plan.error)

    def test_weak_levels_fail(self):
        """Levels below the fixed gamma or the floor raise."""
        uniform = np.full(8, 1 / np.sqrt(8))
        basis = CoarseApprox(PhaseTable.ones(3), PhaseTable.ones(3), 0.0)
        with pytest.raises(FlatteningFailedError, match="below gamma"):
            refine(uniform, 0.05, approximator=lambda d, j: basis, gamma=0.7)
        with pytest.raises(FlatteningFailedError):
            refine(uniform, 0.05, approximator=lambda d, j: basis)

    def test_parameter_ranges(self):
        """eps and gamma outside their ranges raise."""
        psi = np.array([0.6, 0.8])
        with pytest.raises(ValueError, match="outside \\(0, 1/2\\]"):
            refine(psi, 0.9)
        with pytest.raises(ValueError, match="gamma"):
            refine(psi, 0.1, gamma=0.9)

    @pytest.mark.parametrize("n", [3, 4])
    def test_random_coarse_state_is_one_level(self, n):
        """A state B2 H B1 H |0> is refined into a single exact level."""
        phi = _random_coarse(n, np.random.default_rng(3)).state()
        plan = refine(phi, 0.05)
        assert plan.is_exact
        assert plan.j_star == 1
        assert plan.T == 1
        assert np.allclose(plan.reconstruction(), phi)

    @pytest.mark.parametrize("b1,b2", CYCLE_TABLES)
    def test_cycling_residuals(self, b1, b2):
        """Residuals vanish at level 2 and every norm respects beta**j."""
        psi, gamma, beta, levels = _cycle_case(np.array(b1), np.array(b2))
        plan = refine(psi, 0.05, approximator=lambda d, j: levels[j], gamma=gamma, min_levels=4)
        assert plan.j_star == 2
        assert plan.T == 4
        assert len(plan.residual_norms) == 3
        for j, norm in enumerate(plan.residual_norms):
            assert norm <= beta**j + 1e-9
        assert [level.b1 for level in plan.levels] == [levels[k % 2].b1 for k in range(4)]
        assert plan.error < 1e-9

    def test_reconstruction_miss_raises(self, monkeypatch):
        """A plan whose reconstruction misses the tolerance raises."""
        refine_stage = sys.modules["tforge.state.refine"]
        monkeypatch.setattr(
            refine_stage, "_expand", lambda levels, beta, gamma, j_star, P, psi: (levels[:1] * P, gamma, 1.0)
        )
        psi = np.abs(TargetState.random(3, np.random.default_rng(15), real=True).real_vector())
        with pytest.raises(PrecisionUnreachableError, match="reconstruction error 1.000e\\+00"):
            refine(psi, 0.05)


class TestFlaggedCombination:
    """Test suite for the flagged linear combination and amplification."""

    def test_round_amplitudes(self):
        """Rounds are picked from sin(pi / (4k + 2))."""
        assert np.isclose(round_amplitude(1), 0.5)
        assert rounds_for(0.5) == 1
        assert rounds_for(0.4) == 2
        with pytest.raises(FlagAmplitudeError, match="flag amplitude too small"):
            rounds_for(0.01, k_max=4)
        with pytest.raises(ValueError, match="at least one round"):
            AAPlan(1, 0.5, 0, [0], [0])

    def test_level_probabilities(self):
        """Level weights are proportional to beta**k."""
        beta = 0.8
        p = level_probabilities(level_amplitudes(beta, 3), 8)
        assert np.isclose(p.sum(), 1)
        assert np.allclose(p / p[0], beta ** np.arange(8))

    def test_flag_amplitude_matches_simulation(self, two_level_case):
        """The recorded xi is the simulated flagged amplitude."""
        psi, gamma, _, levels = two_level_case
        plan = refine(psi, 0.05, approximator=lambda d, j: levels[j], gamma=gamma, min_levels=8)
        V, aa = build_lcu(plan, 0.01)
        out = run_basis(V, 0)
        assert np.isclose(math.sqrt(_flagged_weight(out, 3)), aa.xi, atol=1e-9)
        assert aa.rounds == rounds_for(ideal_flag_amplitude(plan))
        direction = out.to_dense(3)
        assert abs(np.vdot(direction / np.linalg.norm(direction), psi)) > 0.99

    def test_amplification_follows_rotation(self, two_level_case):
        """k rounds rotate the flagged amplitude to sin((2k + 1) theta)."""
        psi, gamma, _, levels = two_level_case
        plan = refine(psi, 0.05, approximator=lambda d, j: levels[j], gamma=gamma, min_levels=8)
        V, aa = build_lcu(plan, 0.01)
        amplified = amplitude_amplify(V, aa)
        expected = math.sin((2 * aa.rounds + 1) * math.asin(aa.xi)) ** 2
        weight = _flagged_weight(run_basis(amplified, 0), 3)
        assert weight == pytest.approx(expected, abs=1e-9)
        assert weight > 0.99

    def test_flat_target_plan(self):
        """At gamma = 1/sqrt(2) the flag amplitude needs two rounds and leaks at most the budget squared."""
        psi = np.abs(TargetState.random(3, np.random.default_rng(16), real=True).real_vector())
        plan = refine(psi, 0.05, gamma=FLAT_TARGET)
        assert plan.gamma_star == FLAT_TARGET
        xi = ideal_flag_amplitude(plan)
        assert xi >= 0.33
        assert rounds_for(xi) == 2
        budget = 0.05
        V, aa = build_lcu(plan, layer_precision(budget, 2, plan.register_width))
        assert aa.rounds == 2
        weight = _flagged_weight(run_basis(amplitude_amplify(V, aa), 0), 3)
        assert 1 - weight <= budget**2


class TestSynthState:
    """Test suite for the end-to-end state compiler."""

    def test_peel_phases(self):
        """The phases move to a diagonal and the moduli stay."""
        phases, real = peel_phases([0.6, 0, 0, -0.8j])
        assert np.allclose(phases.phases, [0, 0, 0, -np.pi / 2])
        assert np.allclose(real.amplitudes, [0.6, 0, 0, 0.8])

    def test_basis_route(self):
        """Basis states compile to X gates only."""
        circ, report = synth_state(TargetState.basis(3, 5), 0.1)
        assert report.extras["route"] == "basis"
        assert [g.to_line() for g in circ.gates] == ["X 0", "X 2"]
        assert report.t_count == 0

    def test_coarse_route_gates(self):
        """An exact plan is two Hadamard layers around two oracles."""
        level = CoarseApprox(PhaseTable(3, MIXED_SIGNS), PhaseTable.ones(3), 1.0)
        psi = level.state()
        plan = refine(psi, 0.05, approximator=lambda d, j: CoarseApprox.from_signs(np.ones(8, dtype=np.int8), d))
        assert plan.is_exact
        circ = Circuit(3)
        emit_coarse_state(circ, QubitPool(circ), range(3), plan)
        assert state_error(run_basis(circ, 0), psi) < 1e-9

    @pytest.mark.parametrize("n,seed", [(2, 0), (3, 1)])
    def test_random_state_within_eps(self, n, seed):
        """Random complex states meet eps = 0.1."""
        psi = TargetState.random(n, np.random.default_rng(100 + seed))
        circ, report = synth_state(psi, 0.1, seed=seed)
        assert report.extras["route"] in ("coarse", "lcu")
        assert report.measured_error <= 0.1
        assert state_error(run_basis(circ, 0), psi.amplitudes) <= 0.1

    def test_eps_range(self):
        """eps above 1/2 is rejected."""
        with pytest.raises(ValueError, match="outside"):
            synth_state([0.6, 0.8], 0.7)

    def test_coarse_state_takes_one_level(self):
        """A signed coarse state on four qubits needs one level and no amplification."""
        phi = _random_coarse(4, np.random.default_rng(3)).state()
        circ, report = synth_state(phi, 0.05)
        assert report.extras["route"] == "coarse"
        assert report.extras["levels"] == 1
        assert report.extras["j_star"] == 1
        assert "rounds" not in report.extras
        assert state_error(run_basis(circ, 0), phi) < 1e-9

    @pytest.mark.parametrize("n,seed", [(3, 2), (4, 3)])
    def test_random_state_at_one_percent(self, n, seed):
        """Random complex states compile end to end at eps = 1e-2."""
        psi = TargetState.random(n, np.random.default_rng(200 + seed))
        circ, report = synth_state(psi, 1e-2, seed=seed)
        assert report.measured_error <= 1e-2
        assert report.extras["ancilla_weight"] < 1e-9
        assert state_error(run_basis(circ, 0), psi.amplitudes) <= 1e-2

    def test_five_qubits(self):
        """Five qubits go through the sampled sign-table search."""
        psi = TargetState.random(5, np.random.default_rng(17))
        _, report = synth_state(psi, 0.05, seed=4)
        assert report.extras["route"] == "lcu"
        assert report.measured_error <= 0.05

    def test_missing_phases_raise(self, monkeypatch):
        """Dropping the phase diagonal is caught by verification."""
        monkeypatch.setattr(state_synth, "emit_diagonal", lambda *args: None)
        with pytest.raises(PrecisionUnreachableError, match="state n=2 error"):
            synth_state([0.6, 0, 0, 0.8j], 0.1)


class TestBaseline:
    """Test suite for qubit-by-qubit preparation."""

    def test_conditional_states_of_product(self):
        """A product state has the same conditional state on every branch."""
        p0, p1 = 0.3, 0.8
        probabilities = np.kron([1 - p1, p1], [1 - p0, p0])
        states, empty = conditional_states(probabilities, 1)
        assert not empty.any()
        assert np.allclose(states, np.sqrt([[1 - p1, p1], [1 - p1, p1]]))

    def test_random_state_within_eps(self):
        """The baseline meets eps = 0.1 on three qubits."""
        psi = TargetState.random(3, np.random.default_rng(12))
        _, report = synth_state_lks(psi, 0.1)
        assert report.measured_error <= 0.1

    def test_zero_branches(self):
        """Branches with zero weight are left at |0>."""
        psi = np.array([1, 0, 1j, 0]) / np.sqrt(2)
        circ, report = synth_state_lks(psi, 0.1)
        assert report.extras["zero_branches"] == 1
        assert state_error(run_basis(circ, 0), psi) <= 0.1

    def test_random_state_at_one_percent(self):
        """The baseline meets eps = 1e-2 on four qubits."""
        psi = TargetState.random(4, np.random.default_rng(18))
        circ, report = synth_state_lks(psi, 1e-2)
        assert report.measured_error <= 1e-2
        assert state_error(run_basis(circ, 0), psi.amplitudes) <= 1e-2


class TestMass:
    """Test suite for m copies of one single-qubit unitary."""

    def test_weight_diagonal(self):
        """Phases follow the Hamming weight."""
        spec = weight_diagonal(T_GATE, 3)
        assert spec.n == 2
        assert np.allclose(spec.phases, np.pi / 4 * np.arange(4))

    def test_diagonal_unit(self):
        """m copies of T meet eps."""
        circ = synth_mass(T_GATE, 3, 0.1)
        assert operator_error(circ, tensor_matrix([T_GATE] * 3), 3) <= 0.1

    def test_general_unit(self):
        """A non-diagonal unit goes through three weight stages."""
        circ = synth_mass(H_GATE @ T_GATE, 2, 0.15)
        assert operator_error(circ, tensor_matrix([H_GATE @ T_GATE] * 2), 2) <= 0.15

    def test_needs_a_copy(self):
        """Zero copies are rejected."""
        with pytest.raises(ValueError, match="at least one copy"):
            synth_mass(T_GATE, 0, 0.1)

    def test_missing_diagonal_raises(self, monkeypatch):
        """Verification raises when a weight stage is dropped."""
        monkeypatch.setattr(mass, "emit_diagonal", lambda *args: None)
        with pytest.raises(PrecisionUnreachableError, match="mass m=3"):
            synth_mass(T_GATE, 3, 0.1)
