"""
Tests for configuration, benchmark grids and the command-line front end.
"""

import json
import os
import tempfile

import numpy as np
import pandas as pd
import pytest

from tforge import bench
from tforge.boolean import TruthTable, synth_oracle
from tforge.circuit import CSV_COLUMNS, load_circuit
from tforge.cli import EXIT_ERROR, EXIT_MISMATCH, build_reference, main
from tforge.config import SynthConfig
from tforge.simulation import DiagonalSpec


@pytest.fixture
def restore_config():
    """Put the class-level configuration back after a test changes it."""
    saved = SynthConfig.as_dict()
    yield SynthConfig
    SynthConfig.from_config(saved)


class TestSynthConfig:
    """Test suite for SynthConfig."""

    def test_unknown_key(self, restore_config):
        """Unknown keys are rejected."""
        with pytest.raises(KeyError, match="Unknown configuration keys"):
            SynthConfig.from_config({"bogus": 1})

    def test_update_and_cast(self, restore_config):
        """Values are cast to the type of the default."""
        SynthConfig.from_config({"k_max": "5", "eps_min": 1e-4})
        assert SynthConfig.k_max == 5
        assert SynthConfig.eps_min == 1e-4

    def test_json_round_trip(self, restore_config):
        """A saved configuration restores every key."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "config.json")
            text = SynthConfig.to_json(path)
            assert json.loads(text)["half_depth"] == SynthConfig.half_depth
            SynthConfig.from_config({"flatten_budget": 7})
            SynthConfig.from_file(path)
        assert SynthConfig.flatten_budget == json.loads(text)["flatten_budget"]

    def test_search_keys(self, restore_config):
        """Correction radius, prefix count and the exhaustive cutoff are configurable."""
        SynthConfig.from_config({"refine_radius": "0.05", "refine_prefixes": 64, "exhaustive_qubits": 3})
        assert SynthConfig.refine_radius == 0.05
        assert SynthConfig.refine_prefixes == 64
        assert SynthConfig.as_dict()["exhaustive_qubits"] == 3
        assert "Refine radius:     0.05" in str(SynthConfig())

    def test_caps(self):
        """Each task has its own feasibility cap."""
        assert SynthConfig.cap_for("state-lks") == SynthConfig.max_qubits_state
        with pytest.raises(ValueError, match="Invalid task"):
            SynthConfig.cap_for("unknown")


class TestBenchGrid:
    """Test suite for grid parsing and cell ordering."""

    def test_parse(self):
        """Ranges expand and cells are ordered n, then eps, then instance."""
        grid = bench.BenchGrid.from_string("diagonal", "n=2..4,6 eps=1e-1,1e-2; instances=2 seed=9")
        assert grid.n_values == [2, 3, 4, 6]
        assert grid.eps_values == [0.1, 0.01]
        assert grid.instances == 2
        assert grid.seed == 9
        cells = grid.cells()
        assert cells[:3] == [(2, 0.1, 0), (2, 0.1, 1), (2, 0.01, 0)]
        assert len(cells) == 16

    def test_oracle_ignores_eps(self):
        """Oracle grids have a single placeholder eps."""
        grid = bench.BenchGrid.from_string("oracle", "n=3 b=2")
        assert grid.eps_values == [0.0]
        assert grid.b == 2

    def test_invalid_entries(self):
        """Bad grid keys, tokens, tasks and eps values raise."""
        with pytest.raises(ValueError, match="Unknown grid keys"):
            bench.BenchGrid.from_string("state", "n=2 depth=3")
        with pytest.raises(ValueError, match="not key=value"):
            bench.BenchGrid.from_string("state", "n=2 eps")
        with pytest.raises(ValueError, match="Invalid task"):
            bench.BenchGrid("teleport")
        with pytest.raises(ValueError, match="outside"):
            bench.BenchGrid("state", [2], [0.9])

    def test_state_tasks_share_instances(self):
        """Both state tasks draw the same target for a cell."""
        a = bench.make_instance("state", 3, bench.cell_rng(1, "state", 3, 0))
        b = bench.make_instance("state-lks", 3, bench.cell_rng(1, "state-lks", 3, 0))
        assert np.allclose(a.amplitudes, b.amplitudes)


class TestBenchRuns:
    """Test suite for running cells, measuring and fitting."""

    def test_empty_grid(self):
        """An empty grid still has the CSV columns."""
        frame = bench.run_grid(bench.BenchGrid("diagonal"), progress=False)
        assert frame.empty
        assert list(frame.columns) == CSV_COLUMNS
        summary = bench.fit_scaling(frame, "diagonal")
        assert summary["cells"] == 0

    def test_cells_above_cap_are_skipped(self):
        """Cells wider than the cap are left out."""
        grid = bench.BenchGrid("oracle", [2, 3], max_qubits=2)
        frame = bench.run_grid(grid, progress=False)
        assert frame["n"].tolist() == [2]

    def test_oracle_grid(self):
        """Oracle cells are exact."""
        grid = bench.BenchGrid.from_string("oracle", "n=2..4 instances=2 seed=3")
        frame = bench.run_grid(grid, progress=False)
        assert len(frame) == 6
        assert (frame["measured_error"] == 0).all()
        assert frame["n"].tolist() == [2, 2, 3, 3, 4, 4]

    def test_diagonal_cell(self):
        """A diagonal cell fills every CSV column."""
        row = bench.run_cell("diagonal", 2, 0.1, 0, seed=4)
        assert row["task"] == "diagonal"
        assert row["measured_error"] <= 0.1
        assert set(row) == set(CSV_COLUMNS)

    def test_measure_oracle(self):
        """A corrupted output bit is counted as a mismatch."""
        table = TruthTable.random(3, 2, np.random.default_rng(0))
        circ = synth_oracle(table)
        assert bench.measure("oracle", circ, table) == 0.0
        assert bench.measure("oracle", circ.copy().x(3), table) == 1.0

    def test_fit_recovers_model(self):
        """Exact model data gives back its coefficients."""
        rows = []
        for n in (2, 3, 4, 5):
            for eps in (1e-1, 1e-2, 1e-3):
                log_eps = np.log2(1 / eps)
                rows.append({"n": n, "epsilon": eps, "t_count": 3 * np.sqrt(2**n * log_eps) + 2 * log_eps + 5})
        summary = bench.fit_scaling(pd.DataFrame(rows), "diagonal")
        assert summary["coef_sqrt"] == pytest.approx(3)
        assert summary["coef_log"] == pytest.approx(2)
        assert summary["coef_const"] == pytest.approx(5)
        assert summary["max_rel_residual"] < 1e-9

    def test_fit_needs_cells(self):
        """Too few cells leave the coefficients undefined."""
        frame = pd.DataFrame([{"n": 2, "epsilon": 0.1, "t_count": 10}])
        summary = bench.fit_scaling(frame, "state")
        assert summary["cells"] == 1
        assert np.isnan(summary["coef_sqrt"])

    def test_write_results(self):
        """The summary lands next to the results file."""
        frame = pd.DataFrame([dict.fromkeys(CSV_COLUMNS, 0)])
        summary = bench.fit_scaling(frame.assign(task="oracle"), "oracle")
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "run.csv")
            bench.write_results(frame, summary, out)
            assert pd.read_csv(out).shape == (1, len(CSV_COLUMNS))
            assert os.path.exists(os.path.join(tmp, "run.summary.csv"))


class TestCli:
    """Test suite for the tforge command."""

    def test_synth_then_verify(self):
        """A written circuit verifies, and a wrong expected error is a mismatch."""
        with tempfile.TemporaryDirectory() as tmp:
            circuit = os.path.join(tmp, "d.txt")
            report = os.path.join(tmp, "d.csv")
            args = ["diagonal", "--n", "2", "--seed", "5"]
            assert main(["synth", *args, "--eps", "0.1", "--out", circuit, "--report", report]) == 0
            assert load_circuit(circuit).input_count == 2
            row = pd.read_csv(report).iloc[0]
            assert row["task"] == "diagonal"
            assert main(["verify", *args, "--circuit", circuit, "--eps", "0.1"]) == 0
            assert main(["verify", *args, "--circuit", circuit, "--expect", "0.75"]) == EXIT_MISMATCH
            expect = str(row["measured_error"])
            assert main(["verify", *args, "--circuit", circuit, "--expect", expect]) == 0

    def test_oracle_from_table_file(self):
        """An oracle built from a table file verifies exactly."""
        table = TruthTable.from_function(2, 1, lambda x: x == 3)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "and.tt")
            with open(path, "w") as f:
                f.write(table.to_text())
            circuit = os.path.join(tmp, "and.txt")
            assert main(["synth", "oracle", "--table", path, "--out", circuit]) == 0
            assert main(["verify", "oracle", "--table", path, "--circuit", circuit, "--eps", "0"]) == 0

    def test_diagonal_phases_flag(self, capsys):
        """Without --out the circuit goes to stdout."""
        assert main(["synth", "diagonal", "--n", "1", "--phases", "0,3.141592653589793"]) == 0
        assert "QUBITS" in capsys.readouterr().out

    def test_bench_writes_csv_and_summary(self):
        """The bench command writes results and a summary."""
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "oracle.csv")
            assert main(["bench", "oracle", "--grid", "n=2..3 instances=2", "--out", out, "--quiet"]) == 0
            frame = pd.read_csv(out)
            assert len(frame) == 4
            assert list(frame.columns) == CSV_COLUMNS
            summary = pd.read_csv(os.path.join(tmp, "oracle.summary.csv"))
            assert summary["cells"].iloc[0] == 2

    def test_missing_size(self):
        """A task without --n or an input file fails."""
        assert main(["synth", "state", "--eps", "0.1"]) == EXIT_ERROR

    def test_cap_enforced(self):
        """Requests above the cap fail."""
        assert main(["synth", "diagonal", "--n", "14", "--eps", "0.1"]) == EXIT_ERROR

    def test_bad_config_file(self):
        """An unknown key in --config is an error."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "c.json")
            with open(path, "w") as f:
                json.dump({"bogus": 1}, f)
            assert main(["-cc", path, "synth", "oracle", "--n", "2"]) == EXIT_ERROR


def test_diagonal_reference_from_phases():
    """--phases builds the diagonal directly."""
    args = type("Args", (), {"task": "diagonal", "seed": 0, "input": None, "n": 1, "phases": "0,1"})()
    spec = build_reference(args)
    assert isinstance(spec, DiagonalSpec)
    assert np.allclose(spec.phases, [0, 1])
