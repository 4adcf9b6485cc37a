"""Benchmark grids, independent verification and T-count scaling fits."""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.stats import unitary_group
from tqdm import tqdm

from .boolean.oracle import synth_oracle
from .boolean.tables import TruthTable
from .circuit.circuit import Circuit
from .circuit.report import CSV_COLUMNS, SynthReport
from .config import SynthConfig
from .diagonal.singles import synth_batched, tensor_matrix
from .diagonal.synth import synth_diagonal
from .simulation.bitsim import run_bits
from .simulation.metrics import DiagonalSpec, diagonal_op_norm_error, extract_diagonal, operator_error, state_error
from .simulation.sparse_state import run_basis
from .state.baseline import synth_state_lks
from .state.mass import synth_mass
from .state.synth import synth_state
from .state.target import TargetState

logger = logging.getLogger(__name__)

TASKS = ("state", "state-lks", "diagonal", "batched", "mass", "oracle")
SUMMARY_COLUMNS = ["task", "model", "coef_sqrt", "coef_log", "coef_const", "max_rel_residual", "cells"]


@dataclass
class BenchGrid:
    """Cells (n, epsilon, instance) of one benchmark task.

    For ``batched`` and ``mass`` the size n is the number of single-qubit
    unitaries m; for ``oracle`` epsilon is unused and ``b`` sets the output width.
    """

    task: str
    n_values: List[int] = field(default_factory=list)
    eps_values: List[float] = field(default_factory=list)
    instances: int = 1
    seed: int = None
    b: int = 1
    max_qubits: Optional[int] = None

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"Invalid task '{self.task}'. Must be one of {list(TASKS)}")
        if self.seed is None:
            self.seed = SynthConfig.seed
        if self.task == "oracle" and not self.eps_values:
            self.eps_values = [0.0]
        if self.task != "oracle":
            for eps in self.eps_values:
                if not SynthConfig.eps_min <= eps <= 0.5:
                    raise ValueError(f"Epsilon {eps} outside [{SynthConfig.eps_min}, 1/2]")
        if self.instances < 1:
            raise ValueError(f"Instances must be at least 1, got {self.instances}")

    @classmethod
    def from_string(cls, task: str, text: str, **kwargs) -> "BenchGrid":
        """Parse ``"n=2..8 eps=1e-1,1e-2 instances=3 seed=0 b=1"`` (``;`` also separates)."""
        values: Dict[str, str] = {}
        for token in text.replace(";", " ").split():
            if "=" not in token:
                raise ValueError(f"Grid entry '{token}' is not key=value")
            key, value = token.split("=", 1)
            values[key.strip()] = value.strip()
        unknown = set(values) - {"n", "eps", "instances", "seed", "b"}
        if unknown:
            raise ValueError(f"Unknown grid keys {sorted(unknown)}")
        grid = dict(kwargs)
        grid["n_values"] = _parse_ints(values.get("n", ""))
        grid["eps_values"] = [float(v) for v in values.get("eps", "").split(",") if v]
        for key in ("instances", "seed", "b"):
            if key in values:
                grid[key] = int(values[key])
        return cls(task, **grid)

    @property
    def cap(self) -> int:
        return SynthConfig.cap_for(self.task) if self.max_qubits is None else self.max_qubits

    def cells(self) -> List[Tuple[int, float, int]]:
        return [
            (n, eps, i)
            for n in sorted(self.n_values)
            for eps in sorted(self.eps_values, reverse=True)
            for i in range(self.instances)
        ]


def _parse_ints(text: str) -> List[int]:
    out = []
    for part in filter(None, text.split(",")):
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def cell_rng(seed: int, task: str, n: int, instance: int) -> np.random.Generator:
    """Per-instance generator; state and state-lks share instances."""
    family = 0 if task.startswith("state") else TASKS.index(task)
    return np.random.default_rng([seed, family, n, instance])


def make_instance(task: str, n: int, rng: np.random.Generator, b: int = 1):
    """Random reference object for a benchmark cell."""
    if task in ("state", "state-lks"):
        return TargetState.random(n, rng)
    if task == "diagonal":
        return DiagonalSpec(n, rng.uniform(0, 2 * np.pi, 2**n))
    if task == "batched":
        return [unitary_group.rvs(2, random_state=rng) for _ in range(n)]
    if task == "mass":
        return unitary_group.rvs(2, random_state=rng)
    if task == "oracle":
        return TruthTable.random(n, b, rng)
    raise ValueError(f"Invalid task '{task}'")


def measure(task: str, circuit: Circuit, reference, m: int = None) -> float:
    """Recompute the error of ``circuit`` against ``reference`` by simulation.

    Oracles report the fraction of inputs with a wrong output or a dirty ancilla.
    """
    if task in ("state", "state-lks"):
        target = reference if isinstance(reference, TargetState) else TargetState.from_amplitudes(reference)
        return state_error(run_basis(circuit, 0), target.amplitudes)
    if task == "diagonal":
        got = extract_diagonal(circuit, reference.n, tol=1.0)
        return diagonal_op_norm_error(got, reference)
    if task == "batched":
        return operator_error(circuit, tensor_matrix(reference), len(reference))
    if task == "mass":
        return operator_error(circuit, tensor_matrix([reference] * m), m)
    if task == "oracle":
        n = reference.n
        wrong = 0
        for x in range(2**n):
            out = run_bits(circuit, x)
            if out != x | (reference.value(x) << n):
                wrong += 1
        return wrong / 2**n
    raise ValueError(f"Invalid task '{task}'")


def synth_task(task: str, reference, eps: float, n: int = None, seed: int = None) -> Tuple[Circuit, SynthReport]:
    """Run the synthesis of ``task`` and return the circuit with a report."""
    started = time.perf_counter()
    if task == "state":
        return synth_state(reference, eps, seed=seed)
    if task == "state-lks":
        return synth_state_lks(reference, eps)
    if task == "diagonal":
        return synth_diagonal(reference, eps)
    if task == "oracle":
        circ = synth_oracle(reference)
    elif task == "batched":
        circ = synth_batched(reference, eps)
    elif task == "mass":
        circ = synth_mass(reference, n, eps)
    else:
        raise ValueError(f"Invalid task '{task}'")
    error = measure(task, circ, reference, n) if SynthConfig.verify else 0.0
    return circ, SynthReport.for_circuit(task, circ, started, error, seed)


def run_cell(task: str, n: int, eps: float, instance: int, seed: int, b: int = 1, config: dict = None) -> dict:
    """Synthesize one benchmark instance and return its CSV row."""
    if config is not None:
        SynthConfig.from_config(config)
    reference = make_instance(task, n, cell_rng(seed, task, n, instance), b)
    _, report = synth_task(task, reference, eps, n, seed)
    report.seed = seed
    return report.as_row(n, eps, instance)


def run_grid(grid: BenchGrid, jobs: int = 1, progress: bool = True) -> pd.DataFrame:
    """Run every feasible cell; rows are ordered by (n, epsilon, instance)."""
    cells = []
    for n, eps, i in grid.cells():
        if n > grid.cap:
            logger.warning(f"Skipping {grid.task} n={n} eps={eps:g}: above the cap of {grid.cap} qubits")
            continue
        cells.append((n, eps, i))
    if grid.max_qubits is not None and grid.max_qubits > SynthConfig.cap_for(grid.task):
        logger.warning(f"Cap for {grid.task} raised to {grid.max_qubits} qubits")
    config = SynthConfig.as_dict()
    rows = {}
    bar = tqdm(total=len(cells), desc=grid.task, disable=not progress)
    if jobs > 1 and cells:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                pool.submit(run_cell, grid.task, n, eps, i, grid.seed, grid.b, config): (n, eps, i)
                for n, eps, i in cells
            }
            for future in as_completed(futures):
                rows[futures[future]] = future.result()
                bar.update()
    else:
        for n, eps, i in cells:
            rows[(n, eps, i)] = run_cell(grid.task, n, eps, i, grid.seed, grid.b)
            bar.update()
    bar.close()
    ordered = [rows[key] for key in cells]
    return pd.DataFrame(ordered, columns=CSV_COLUMNS)


def fit_scaling(frame: pd.DataFrame, task: str, b: int = 1) -> dict:
    """Least-squares fit of the mean T-count per (n, epsilon) cell.

    The model is a * sqrt(2**n * log2(1/eps)) + b * log2(1/eps) + c, or
    a * sqrt(b * 2**n) + c for oracles.
    """
    result = dict.fromkeys(SUMMARY_COLUMNS, float("nan"))
    result["task"] = task
    if frame.empty:
        result.update(model="none", cells=0)
        return result
    cells = frame.groupby(["n", "epsilon"], as_index=False)["t_count"].mean()
    n = cells["n"].to_numpy(dtype=float)
    y = cells["t_count"].to_numpy(dtype=float)
    if task == "oracle":
        X = np.column_stack([np.sqrt(b * 2**n), np.ones_like(n)])
        model = "a*sqrt(b*2^n)+c"
    else:
        log_eps = np.log2(1 / cells["epsilon"].to_numpy(dtype=float))
        X = np.column_stack([np.sqrt(2**n * log_eps), log_eps, np.ones_like(n)])
        model = "a*sqrt(2^n*log2(1/eps))+b*log2(1/eps)+c"
    result.update(model=model, cells=len(cells))
    if len(cells) < X.shape[1]:
        logger.warning(f"Scaling fit for {task} needs {X.shape[1]} cells, got {len(cells)}")
        return result
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    pred = X @ coef
    positive = y > 0
    residual = np.abs(pred - y)[positive] / y[positive]
    result["coef_sqrt"] = float(coef[0])
    if task == "oracle":
        result["coef_const"] = float(coef[1])
    else:
        result["coef_log"] = float(coef[1])
        result["coef_const"] = float(coef[2])
    result["max_rel_residual"] = float(residual.max()) if residual.size else 0.0
    return result


def write_results(frame: pd.DataFrame, summary: dict, out: Union[str, Path, None]) -> None:
    """Write the CSV to ``out`` (stdout when None) and the summary next to it."""
    if out is None:
        print(frame.to_csv(index=False), end="")
        return
    out = Path(out)
    frame.to_csv(out, index=False)
    summary_path = out.with_name(out.stem + ".summary.csv")
    pd.DataFrame([summary], columns=SUMMARY_COLUMNS).to_csv(summary_path, index=False)
    logger.info(f"Wrote {len(frame)} rows to {out} and the scaling summary to {summary_path}")


def log_summary(summary: dict) -> None:
    if math.isnan(summary.get("max_rel_residual", float("nan"))):
        logger.info(f"{summary['task']}: no scaling fit ({summary['cells']} cells)")
    else:
        logger.info(
            f"{summary['task']}: {summary['model']} fit over {summary['cells']} cells, "
            f"max relative residual {summary['max_rel_residual']:.1%}"
        )
