"""Hamming-weight circuit built from a tree of out-of-place ripple adders."""

import logging
from collections import deque
from typing import List, Optional, Sequence, Tuple

from ..circuit.circuit import Circuit, QubitPool

logger = logging.getLogger(__name__)


def weight_width(m: int) -> int:
    """Bits needed to hold a weight in 0..m."""
    return max(1, int(m).bit_length())


def _add_bit(circ, pool, ancillas, a: Optional[int], b: Optional[int], c: Optional[int], need_carry: bool):
    ins = [q for q in (a, b, c) if q is not None]
    if len(ins) == 1:
        return ins[0], None
    z = pool.allocate_one()
    ancillas.append(z)
    p, q = ins[0], ins[1]
    circ.cx(p, z)
    circ.cx(q, z)
    carry = None
    if need_carry:
        carry = pool.allocate_one()
        ancillas.append(carry)
        circ.ccx(p, q, carry)
        if len(ins) == 3:
            circ.ccx(ins[2], z, carry)
    if len(ins) == 3:
        circ.cx(ins[2], z)
    return z, carry


def _add(circ, pool, ancillas, x: Tuple[List[int], int], y: Tuple[List[int], int]):
    """Add two registers out of place; each register is (qubits LSB first, max value)."""
    xs, xmax = x
    ys, ymax = y
    total = xmax + ymax
    width = total.bit_length()
    out, carry = [], None
    for i in range(width):
        a = xs[i] if i < len(xs) else None
        b = ys[i] if i < len(ys) else None
        z, carry = _add_bit(circ, pool, ancillas, a, b, carry, i + 1 < width)
        out.append(z)
    return out, total


def emit_hamming(circ: Circuit, pool: QubitPool, xs: Sequence[int], ys: Sequence[int]) -> None:
    """Append gates mapping |x>|y> to |x>|y XOR wt(x)>; ``ys`` holds the low bits first."""
    m = len(xs)
    if m < 1:
        raise ValueError("Hamming weight needs at least one input bit")
    if len(ys) < weight_width(m):
        raise ValueError(f"Output register of {len(ys)} bits cannot hold weights up to {m}")
    mark = circ.mark()
    ancillas: List[int] = []
    queue = deque(([q], 1) for q in xs)
    while len(queue) > 1:
        left = queue.popleft()
        right = queue.popleft()
        queue.append(_add(circ, pool, ancillas, left, right))
    result, _ = queue[0]
    compute = circ.gates[mark:]
    for bit, y in zip(result, ys):
        circ.cx(bit, y)
    for gate in reversed(compute):
        circ.append(gate.adjoint())
    pool.release(ancillas)


def synth_hamming(m: int) -> Circuit:
    """Circuit on x (qubits 0..m-1) and y (the next W qubits) adding wt(x) into y."""
    w = weight_width(m)
    circ = Circuit(m + w, m + w, label=f"hamming m={m}")
    pool = QubitPool(circ)
    emit_hamming(circ, pool, list(range(m)), list(range(m, m + w)))
    logger.info(f"Hamming m={m}: {len(circ)} gates, width {circ.width}")
    return circ.freeze()
