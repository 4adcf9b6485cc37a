"""
Tests for diagonal synthesis, gate-sequence tables, block diagonals and tensor products.
"""

import numpy as np
import pytest
from scipy.stats import unitary_group

from tforge.circuit import Circuit, QubitPool
from tforge.diagonal import singles
from tforge.diagonal import synth as diagonal_synth
from tforge.diagonal import (
    GateSequenceTable,
    build_sequence_table,
    controlled_ladder,
    emit_word_select,
    group_size,
    phase_unit,
    synth_batched,
    synth_block_diag,
    synth_diagonal,
    synth_tensor_singles,
    tensor_matrix,
)
from tforge.errors import PrecisionUnreachableError
from tforge.simulation import DiagonalSpec, diagonal_op_norm_error, extract_diagonal, operator_error, run_basis
from tforge.squbit import HTWord, word_error

T = np.diag([1, np.exp(1j * np.pi / 4)])


def _block_reference(units):
    size = len(units)
    full = np.zeros((2 * size, 2 * size), dtype=complex)
    for j, u in enumerate(units):
        for y in range(2):
            for x in range(2):
                full[j + y * size, j + x * size] = u[y, x]
    return full


class TestSequenceTable:
    """Test suite for gate-sequence tables and the controlled ladder."""

    def test_rows_are_padded(self):
        """Short words are padded with identity blocks."""
        words = [HTWord(((1, 1),)), HTWord(((0, 1), (1, 0))), HTWord(), HTWord(((1, 0),))]
        table = GateSequenceTable.from_words(words)
        assert table.n == 2
        assert table.K_pad == 2
        assert table.rows == ["1100", "0110", "0000", "1000"]
        assert table.active_columns() == [0, 1, 2]
        assert table.ladder_t_count() == 2 + 15 + 2

    def test_row_length_checked(self):
        """Rows must match the register width."""
        with pytest.raises(ValueError, match="does not match K_pad"):
            GateSequenceTable(1, 2, ["1100", "11"])

    def test_words_decode(self):
        """Stored rows decode back to their words."""
        words = [HTWord(((1, 1), (0, 1))), HTWord(((1, 0), (0, 0)))]
        table = GateSequenceTable.from_words(words)
        assert [w.stripped() for w in table.words()] == [w.stripped() for w in words]

    def test_build_reuses_equal_phases(self):
        """Equal phases share one search."""
        spec = DiagonalSpec(2, [0.3, 1.2, 0.3, 0.3])
        table = build_sequence_table(spec, 0.1)
        assert table.rows[0] == table.rows[2] == table.rows[3]
        for w, theta in zip(table.words(), spec.phases):
            assert word_error(w, phase_unit(theta)) <= 0.1 + 1e-12
        assert table.max_error <= 0.1

    def test_ladder_gates(self):
        """Columns alternate controlled H and controlled T."""
        circ = controlled_ladder(1, [0, 1], 2)
        assert [g.to_line() for g in circ.gates] == ["CH 0 2", "CT 1 2"]

    def test_ladder_applies_hadamard(self):
        """One set H column applies a Hadamard to the target."""
        circ = controlled_ladder(1, [0, 1], 2)
        out = run_basis(circ, 0b001)
        assert np.allclose(out.to_dense(), np.eye(8)[1] / np.sqrt(2) + np.eye(8)[5] / np.sqrt(2))

    def test_ladder_register_size(self):
        """The register must hold two columns per block."""
        with pytest.raises(ValueError, match="needs 4 qubits"):
            controlled_ladder(2, [0, 1], 2)

    def test_word_select_controls(self):
        """The word selected by the index is applied to the target."""
        circ = Circuit(2)
        table = GateSequenceTable.from_words([HTWord(((1, 0),))] * 4)
        with pytest.raises(ValueError, match="controls for a table on 2"):
            emit_word_select(circ, QubitPool(circ), [0], 1, table)

    def test_word_select_clears_register(self):
        """The sequence register returns to zero on every input."""
        words = [HTWord(((1, 0),)), HTWord(), HTWord(((0, 1),)), HTWord(((1, 1),))]
        circ = Circuit(3)
        emit_word_select(circ, QubitPool(circ), [0, 1], 2, GateSequenceTable.from_words(words))
        for j, w in enumerate(words):
            out = run_basis(circ, j)
            column = w.matrix().T[:, 0]
            assert np.allclose(out.to_dense(3), column[0] * np.eye(8)[j] + column[1] * np.eye(8)[j + 4])


class TestSynthDiagonal:
    """Test suite for diagonal synthesis."""

    def test_identity_route(self):
        """The identity compiles to an empty circuit."""
        circ, report = synth_diagonal(DiagonalSpec(3, np.full(8, 2 * np.pi)), 0.1)
        assert len(circ) == 0
        assert report.extras["route"] == "identity"
        assert report.t_count == 0

    def test_boolean_route_is_exact(self):
        """Sign-only phases go through an exact phase oracle."""
        phases = np.pi * np.array([0, 1, 1, 0, 1, 0, 0, 0])
        circ, report = synth_diagonal(DiagonalSpec(3, phases), 0.1)
        assert report.extras["route"] == "boolean"
        assert report.measured_error < 1e-9

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_random_within_eps(self, n):
        """Random diagonals meet eps = 0.1."""
        rng = np.random.default_rng(20 + n)
        spec = DiagonalSpec(n, rng.uniform(0, 2 * np.pi, 2**n))
        circ, report = synth_diagonal(spec, 0.1)
        assert report.extras["route"] == "ladder"
        assert report.measured_error <= 0.1
        got = extract_diagonal(circ, n, tol=1.0)
        assert diagonal_op_norm_error(got, spec) <= 0.1

    def test_smaller_eps(self):
        """A two-qubit diagonal meets eps = 0.01."""
        spec = DiagonalSpec(2, [0.1, 0.7, 2.0, -1.3])
        _, report = synth_diagonal(spec, 0.01)
        assert report.measured_error <= 0.01

    @pytest.mark.parametrize("n", [3, 6])
    def test_random_at_one_percent(self, n):
        """Random diagonals compile end to end at eps = 1e-2."""
        rng = np.random.default_rng(3 + n)
        spec = DiagonalSpec(n, rng.uniform(0, 2 * np.pi, 2**n))
        circ, report = synth_diagonal(spec, 1e-2)
        assert report.measured_error <= 1e-2
        assert report.extras["max_word_error"] <= 1e-2
        got = extract_diagonal(circ, n, tol=1e-4 + 1e-9)
        assert diagonal_op_norm_error(got, spec) <= 1e-2

    def test_mismeasured_circuit_raises(self, monkeypatch):
        """A diagonal that misses eps raises instead of returning."""
        monkeypatch.setattr(diagonal_synth, "emit_diagonal", lambda *args: None)
        spec = DiagonalSpec(2, [0.1, 0.7, 2.0, -1.3])
        with pytest.raises(PrecisionUnreachableError, match="diagonal n=2 error"):
            synth_diagonal(spec, 0.01)

    def test_eps_range(self):
        """eps below the floor is rejected."""
        with pytest.raises(ValueError, match="outside"):
            synth_diagonal(DiagonalSpec(1, [0, 1]), 1e-9)


class TestBlockDiag:
    """Test suite for block-diagonal single-qubit unitaries."""

    @pytest.mark.parametrize("method", ["hbh", "detfix"])
    def test_within_eps(self, method):
        """Both methods meet eps on one control."""
        units = [unitary_group.rvs(2, random_state=s) for s in (1, 2)]
        circ = synth_block_diag(units, 0.1, method)
        assert operator_error(circ, _block_reference(units), 2) <= 0.1

    def test_two_controls(self):
        """Four units behind two controls meet eps."""
        units = [unitary_group.rvs(2, random_state=s) for s in range(4)]
        circ = synth_block_diag(units, 0.15)
        assert operator_error(circ, _block_reference(units), 3) <= 0.15

    def test_invalid_inputs(self):
        """Unit count, unitarity and method are checked."""
        with pytest.raises(ValueError, match="Need 2\\*\\*n"):
            synth_block_diag([np.eye(2)] * 3, 0.1)
        with pytest.raises(ValueError, match="not unitary"):
            synth_block_diag([np.eye(2), np.ones((2, 2))], 0.1)
        with pytest.raises(ValueError, match="Invalid method"):
            synth_block_diag([np.eye(2), np.eye(2)], 0.1, "other")

    def test_missing_gates_raise(self, monkeypatch):
        """Verification raises when the emitted block diagonal misses eps."""
        monkeypatch.setattr(diagonal_synth, "emit_block_diag", lambda *args: None)
        units = [unitary_group.rvs(2, random_state=s) for s in (5, 6)]
        with pytest.raises(PrecisionUnreachableError, match="block diagonal n=1"):
            synth_block_diag(units, 0.1)


class TestSingles:
    """Test suite for tensor products and batched singles."""

    def test_tensor_matrix_ordering(self):
        """Unit 0 acts on the least significant bit."""
        X = np.array([[0, 1], [1, 0]])
        full = tensor_matrix([X, np.eye(2)])
        assert full[1, 0] == 1
        assert full[2, 0] == 0

    def test_diagonal_units(self):
        """Diagonal units need no Hadamards on the data qubits."""
        circ = synth_tensor_singles([T, T], 0.1)
        assert operator_error(circ, tensor_matrix([T, T]), 2) <= 0.1
        assert not any(g.kind.label == "H" and g.qubits[0] < 2 for g in circ.gates)

    def test_general_units(self):
        """General units meet eps on two qubits."""
        units = [unitary_group.rvs(2, random_state=s) for s in (3, 4)]
        circ = synth_tensor_singles(units, 0.1)
        assert operator_error(circ, tensor_matrix(units), 2) <= 0.1

    def test_missing_gates_raise(self, monkeypatch):
        """Verification raises when the emitted tensor product misses eps."""
        monkeypatch.setattr(singles, "emit_tensor_singles", lambda *args: None)
        with pytest.raises(PrecisionUnreachableError, match="Tensor singles m=2"):
            synth_tensor_singles([T, T], 0.1)

    def test_group_size(self):
        """Group size grows like log log(1/eps)."""
        assert group_size(1e-4) == 4
        assert group_size(0.1) == 2
        assert group_size(0.5) == 1
        with pytest.raises(ValueError, match="positive"):
            group_size(0)

    def test_batched(self):
        """Grouped units meet eps."""
        units = [unitary_group.rvs(2, random_state=s) for s in range(3)]
        circ = synth_batched(units, 0.1)
        assert operator_error(circ, tensor_matrix(units), 3) <= 0.1
