"""Exact Boolean oracles built from conjunction trees.

The input register is split into ``d`` low "split" bits and ``n - d`` high
"tree" bits. Writing each output in algebraic normal form,

    f_i(x) = XOR over S of x^S_split AND h_{i,S}(x_tree),

every h_{i,S} is an XOR of conjunctions of tree bits. All needed tree
conjunctions are computed once into ancillas, every h_{i,S} is a CX fan-out of
them, and one CCX per (i, S) combines it with the split monomial x^S. All
conjunction ancillas are uncomputed at the end.
"""

import logging
from typing import Dict, List, Sequence

import numpy as np

from ..circuit.circuit import Circuit, QubitPool
from ..circuit.gates import GateKind
from .tables import PhaseTable, TruthTable

logger = logging.getLogger(__name__)


def choose_split(n: int, b: int) -> int:
    """Return the d in 0..n minimizing b * 2**d + 2**(n - d), smallest on ties."""
    if n < 0 or b < 1:
        raise ValueError(f"Invalid sizes n={n}, b={b}")
    costs = [b * 2**d + 2 ** (n - d) for d in range(n + 1)]
    return int(np.argmin(costs))


def toffoli_bound(n: int, b: int, d: int) -> int:
    """Largest CCX count of ``emit_oracle`` with split ``d``.

    One CCX per (output, split monomial) pair, plus every split and tree
    conjunction of two or more bits, each computed once and uncomputed once.
    """
    if not 0 <= d <= n:
        raise ValueError(f"Split {d} outside 0..{n}")
    tree = n - d
    return b * (2**d - 1) + 2 * (2**d - d - 1) + 2 * (2**tree - tree - 1)


class _Conjunctions:
    """Lazily computed conjunctions of input qubits, keyed by a bit mask."""

    def __init__(self, circ: Circuit, pool: QubitPool, inputs: Sequence[int]):
        self.circ = circ
        self.pool = pool
        self.inputs = list(inputs)
        self.qubit: Dict[int, int] = {}
        self.ancillas: List[int] = []

    def get(self, mask: int) -> int:
        if mask in self.qubit:
            return self.qubit[mask]
        if mask & (mask - 1) == 0:
            q = self.inputs[mask.bit_length() - 1]
        else:
            top = 1 << (mask.bit_length() - 1)
            left = self.get(mask ^ top)
            q = self.pool.allocate_one()
            self.circ.ccx(left, self.inputs[top.bit_length() - 1], q)
            self.ancillas.append(q)
        self.qubit[mask] = q
        return q


def emit_oracle(circ: Circuit, pool: QubitPool, inputs: Sequence[int], outputs: Sequence[int], table: TruthTable, d: int = None) -> None:
    """Append gates mapping |x>|y> to |x>|y XOR f(x)> on the given qubits.

    Args:
        circ (Circuit): Circuit to extend.
        pool (QubitPool): Ancilla allocator of ``circ``.
        inputs (sequence of int): Input qubits, bit j of x on ``inputs[j]``.
        outputs (sequence of int): Output qubits, bit i of f on ``outputs[i]``.
        table (TruthTable): The function.
        d (int, optional): Number of split bits; ``choose_split`` by default.
    """
    n, b = table.n, table.b
    if len(inputs) != n or len(outputs) != b:
        raise ValueError(
            f"Register sizes ({len(inputs)}, {len(outputs)}) do not match table ({n}, {b})"
        )
    d = choose_split(n, b) if d is None else d
    if not 0 <= d <= n:
        raise ValueError(f"Split {d} outside 0..{n}")
    anf = table.anf()
    mark = circ.mark()
    split = _Conjunctions(circ, pool, inputs[:d])
    tree = _Conjunctions(circ, pool, inputs[d:])
    split_size = 2**d
    for i, out in enumerate(outputs):
        # coeffs[s, r]: monomial (split mask s) x (tree mask r) in output i.
        coeffs = anf[:, i].reshape(2 ** (n - d), split_size).T
        for s in range(split_size):
            terms = np.flatnonzero(coeffs[s])
            if len(terms) == 0:
                continue
            if s == 0:
                for r in terms:
                    if r == 0:
                        circ.x(out)
                    else:
                        circ.cx(tree.get(int(r)), out)
                continue
            monomial = split.get(s)
            if len(terms) == 1 and terms[0] == 0:
                circ.cx(monomial, out)
            elif len(terms) == 1:
                circ.ccx(monomial, tree.get(int(terms[0])), out)
            else:
                tmp = pool.allocate_one()
                fan = circ.mark()
                for r in terms:
                    if r == 0:
                        circ.x(tmp)
                    else:
                        circ.cx(tree.get(int(r)), tmp)
                fan_gates = circ.gates[fan:]
                circ.ccx(monomial, tmp, out)
                # Conjunctions first computed inside the fan-out stay live.
                for gate in reversed(fan_gates):
                    if tmp in gate.qubits:
                        circ.append(gate.adjoint())
                pool.release(tmp)
    _uncompute_conjunctions(circ, pool, circ.gates[mark:], split.ancillas + tree.ancillas)


def _uncompute_conjunctions(circ: Circuit, pool: QubitPool, block, ancillas: List[int]) -> None:
    """Undo the CCX gates that computed conjunction ancillas, newest first."""
    live = set(ancillas)
    producers = [g for g in block if g.kind is GateKind.CCX and g.qubits[2] in live]
    for gate in reversed(producers):
        circ.append(gate)
    pool.release(ancillas)


def synth_oracle(table: TruthTable, d: int = None) -> Circuit:
    """Circuit on inputs 0..n-1 and outputs n..n+b-1 computing y ^= f(x) exactly."""
    n, b = table.n, table.b
    circ = Circuit(n + b, n + b, label=f"oracle n={n} b={b}")
    pool = QubitPool(circ)
    emit_oracle(circ, pool, list(range(n)), list(range(n, n + b)), table, d)
    logger.info(f"Oracle n={n} b={b}: {circ.gate_counts().get('CCX', 0)} CCX, width {circ.width}")
    return circ.freeze()


def emit_phase_oracle(circ: Circuit, pool: QubitPool, qubits: Sequence[int], table: PhaseTable) -> None:
    """Apply diag(signs) to ``qubits`` by kickback on one ancilla in the |-> state."""
    if len(qubits) != table.n:
        raise ValueError(f"{len(qubits)} qubits for a phase table on {table.n}")
    if table.is_trivial():
        return
    anc = pool.allocate_one()
    circ.x(anc)
    circ.h(anc)
    emit_oracle(circ, pool, qubits, [anc], table.indicator())
    circ.h(anc)
    circ.x(anc)
    pool.release(anc)


def synth_phase_oracle(table: PhaseTable) -> Circuit:
    circ = Circuit(table.n, table.n, label=f"phase oracle n={table.n}")
    emit_phase_oracle(circ, QubitPool(circ), list(range(table.n)), table)
    return circ.freeze()


def emit_zero_reflection(circ: Circuit, pool: QubitPool, qubits: Sequence[int]) -> None:
    """Apply I - 2|0><0| on ``qubits`` exactly."""
    qubits = list(qubits)
    m = len(qubits)
    if m == 0:
        raise ValueError("Reflection needs at least one qubit")
    for q in qubits:
        circ.x(q)
    if m == 1:
        circ.z(qubits[0])
    elif m == 2:
        circ.cz(qubits[0], qubits[1])
    else:
        mark = circ.mark()
        chain = pool.allocate(m - 2)
        circ.ccx(qubits[0], qubits[1], chain[0])
        for i in range(1, m - 2):
            circ.ccx(chain[i - 1], qubits[i + 1], chain[i])
        circ.cz(chain[-1], qubits[-1])
        compute = [g for g in circ.gates[mark:] if g.kind is GateKind.CCX]
        for gate in reversed(compute):
            circ.append(gate)
        pool.release(chain)
    for q in qubits:
        circ.x(q)
