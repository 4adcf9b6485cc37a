"""Command-line front end: ``tforge synth|verify|bench``."""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np
from scipy.stats import unitary_group

from . import bench
from .boolean.tables import TruthTable, load_truth_table
from .circuit.gates import SINGLE_QUBIT_MATRICES, GateKind
from .circuit.io import load_circuit, save_circuit, serialize
from .circuit.report import CSV_COLUMNS
from .config import SynthConfig
from .errors import TForgeError
from .simulation.io import load_diagonal, load_state
from .simulation.metrics import DiagonalSpec
from .state.target import TargetState

logger = logging.getLogger(__name__)

EXIT_ERROR = 1
EXIT_MISMATCH = 2


def _single_qubit(label: str) -> np.ndarray:
    kind = GateKind.from_label(label)
    if kind not in SINGLE_QUBIT_MATRICES:
        raise ValueError(f"Gate '{label}' is not a fixed single-qubit gate")
    return SINGLE_QUBIT_MATRICES[kind]


def build_reference(args):
    """Target of a synth or verify command, from files, flags or the seed."""
    task = args.task
    rng = np.random.default_rng(args.seed)
    if task in ("state", "state-lks"):
        if args.input:
            return TargetState.from_amplitudes(load_state(args.input))
        _require(args.n, "--n or --input")
        return TargetState.random(args.n, rng)
    if task == "diagonal":
        if args.input:
            return load_diagonal(args.input)
        _require(args.n, "--n, --phases or --input")
        if args.phases:
            return DiagonalSpec(args.n, [float(p) for p in args.phases.split(",")])
        return DiagonalSpec(args.n, rng.uniform(0, 2 * np.pi, 2**args.n))
    if task == "oracle":
        if args.table:
            return load_truth_table(args.table)
        _require(args.n, "--n or --table")
        return TruthTable.random(args.n, args.b, rng)
    _require(args.n, "--n")
    if task == "mass":
        return _single_qubit(args.gate) if args.gate else unitary_group.rvs(2, random_state=rng)
    if task == "batched":
        if args.gate:
            return [_single_qubit(args.gate)] * args.n
        return [unitary_group.rvs(2, random_state=rng) for _ in range(args.n)]
    raise ValueError(f"Invalid task '{task}'")


def _require(value, what: str) -> None:
    if value is None:
        raise ValueError(f"Missing {what}")


def _size(task: str, reference) -> int:
    if task in ("state", "state-lks", "diagonal", "oracle"):
        return reference.n
    return len(reference) if task == "batched" else None


def _check_cap(task: str, n: int, max_qubits) -> None:
    cap = SynthConfig.cap_for(task)
    if max_qubits is not None:
        if max_qubits > cap:
            logger.warning(f"Cap for {task} raised from {cap} to {max_qubits} qubits")
        cap = max_qubits
    if n is not None and n > cap:
        raise ValueError(f"{task} with {n} qubits exceeds the cap of {cap}; use --max-qubits to override")


def cmd_synth(args) -> int:
    reference = build_reference(args)
    n = args.n if args.task == "mass" else _size(args.task, reference)
    _check_cap(args.task, n, args.max_qubits)
    circ, report = bench.synth_task(args.task, reference, args.eps, n, args.seed)
    if args.out:
        save_circuit(circ, args.out)
    else:
        sys.stdout.write(serialize(circ))
    row = report.as_row(n, args.eps)
    if args.report:
        line = ",".join(str(row[c]) for c in CSV_COLUMNS)
        Path(args.report).write_text(",".join(CSV_COLUMNS) + "\n" + line + "\n", encoding="utf-8")
    logger.info(str(report))
    return 0


def cmd_verify(args) -> int:
    reference = build_reference(args)
    circ = load_circuit(args.circuit)
    n = args.n if args.task == "mass" else _size(args.task, reference)
    error = bench.measure(args.task, circ, reference, n)
    logger.info(f"Measured error {error:.6e}")
    print(f"{error!r}")
    if args.expect is not None and abs(error - args.expect) > 1e-9:
        logger.error(f"Measured error {error:.12e} differs from the reported {args.expect:.12e}")
        return EXIT_MISMATCH
    if args.eps is not None and error > args.eps:
        logger.error(f"Measured error {error:.6e} exceeds epsilon {args.eps:g}")
        return EXIT_MISMATCH
    return 0


def cmd_bench(args) -> int:
    grid = bench.BenchGrid.from_string(args.task, args.grid, max_qubits=args.max_qubits)
    if args.seed is not None and "seed=" not in args.grid:
        grid.seed = args.seed
    frame = bench.run_grid(grid, jobs=args.jobs, progress=not args.quiet)
    summary = bench.fit_scaling(frame, grid.task, grid.b)
    bench.write_results(frame, summary, args.out)
    bench.log_summary(summary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tforge", description="Clifford+T synthesis with low T-count")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("-cc", "--config", type=str, help="JSON configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("task", choices=bench.TASKS, help="synthesis task")
        p.add_argument("--n", type=int, help="qubit count (copies for batched and mass)")
        p.add_argument("--input", type=str, help="state or diagonal file")
        p.add_argument("--phases", type=str, help="comma separated diagonal phases")
        p.add_argument("--table", type=str, help="truth table file")
        p.add_argument("--b", type=int, default=1, help="oracle output bits for random tables")
        p.add_argument("--gate", type=str, help="fixed single-qubit gate for batched and mass")
        p.add_argument("--seed", type=int, default=None, help="random seed")
        p.add_argument("--max-qubits", type=int, default=None, help="override the feasibility cap")

    synth = sub.add_parser("synth", help="synthesize a circuit")
    common(synth)
    synth.add_argument("--eps", type=float, default=1e-2, help="target precision")
    synth.add_argument("--out", type=str, help="circuit file (stdout by default)")
    synth.add_argument("--report", type=str, help="CSV file for the report row")
    synth.set_defaults(func=cmd_synth)

    verify = sub.add_parser("verify", help="measure a circuit against a reference")
    common(verify)
    verify.add_argument("--circuit", type=str, required=True, help="circuit file")
    verify.add_argument("--eps", type=float, default=None, help="fail above this error")
    verify.add_argument("--expect", type=float, default=None, help="fail unless the error matches")
    verify.set_defaults(func=cmd_verify)

    bench_parser = sub.add_parser("bench", help="run a benchmark grid")
    bench_parser.add_argument("task", choices=bench.TASKS, help="synthesis task")
    bench_parser.add_argument("--grid", type=str, default="", help='e.g. "n=2..6 eps=1e-1,1e-2 instances=2"')
    bench_parser.add_argument("--out", type=str, help="CSV file (stdout by default)")
    bench_parser.add_argument("--seed", type=int, default=None, help="grid seed")
    bench_parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    bench_parser.add_argument("--max-qubits", type=int, default=None, help="override the feasibility cap")
    bench_parser.add_argument("--quiet", action="store_true", help="no progress bar")
    bench_parser.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.config:
            SynthConfig.from_file(args.config)
        if getattr(args, "seed", None) is None:
            args.seed = SynthConfig.seed
        return args.func(args)
    except (TForgeError, ValueError, KeyError, OSError) as e:
        logger.error(str(e))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
