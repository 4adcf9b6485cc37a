"""Exact Clifford+T expansions of the macro gates and T-count accounting."""

import logging
from typing import List

from ..errors import UnresolvedPlaceholderError
from .circuit import Circuit
from .gates import Gate, GateKind

logger = logging.getLogger(__name__)

# T-count of each macro expansion, frozen after verification by simulation.
C_CCX = 7
C_CH = 2
C_CT = 2 * C_CCX + 1

_T_KINDS = (GateKind.T, GateKind.TDG)


def _ccx(c0: int, c1: int, t: int) -> List[Gate]:
    G = GateKind
    seq = [
        (G.H, t),
        (G.CX, c1, t),
        (G.TDG, t),
        (G.CX, c0, t),
        (G.T, t),
        (G.CX, c1, t),
        (G.TDG, t),
        (G.CX, c0, t),
        (G.T, c1),
        (G.T, t),
        (G.H, t),
        (G.CX, c0, c1),
        (G.T, c0),
        (G.TDG, c1),
        (G.CX, c0, c1),
    ]
    return [Gate(kind, tuple(q)) for kind, *q in seq]


def _ch(c: int, t: int) -> List[Gate]:
    # SDG H TDG X T H S = H, so conjugating CX this way gives a controlled H.
    G = GateKind
    seq = [(G.S, t), (G.H, t), (G.T, t), (G.CX, c, t), (G.TDG, t), (G.H, t), (G.SDG, t)]
    return [Gate(kind, tuple(q)) for kind, *q in seq]


def _ct(c: int, t: int, scratch: int, kind: GateKind) -> List[Gate]:
    phase = GateKind.T if kind is GateKind.CT else GateKind.TDG
    return _ccx(c, t, scratch) + [Gate(phase, (scratch,))] + _ccx(c, t, scratch)


def expand_gate(gate: Gate, scratch: int = None) -> List[Gate]:
    """Expand one gate into primitives.

    Args:
        gate (Gate): Gate to expand.
        scratch (int, optional): Clean ancilla used by CT and CTDG.

    Returns:
        list of Gate: Primitive gates with the same unitary.
    """
    kind = gate.kind
    if kind is GateKind.SQ1:
        raise UnresolvedPlaceholderError()
    if kind is GateKind.CCX:
        return _ccx(*gate.qubits)
    if kind is GateKind.CH:
        return _ch(*gate.qubits)
    if kind in (GateKind.CT, GateKind.CTDG):
        if scratch is None:
            raise ValueError("Controlled-T expansion requires a scratch ancilla")
        return _ct(gate.qubits[0], gate.qubits[1], scratch, kind)
    return [gate]


def expand_macros(c: Circuit) -> Circuit:
    """Replace every macro with its exact primitive expansion.

    Controlled-T gates share one scratch ancilla appended at index ``c.width``;
    the output is one qubit wider only when such a gate is present.
    """
    needs_scratch = any(g.kind in (GateKind.CT, GateKind.CTDG) for g in c.gates)
    width = c.width + 1 if needs_scratch else c.width
    scratch = c.width if needs_scratch else None
    out = Circuit(width, c.input_count, label=c.label)
    for gate in c.gates:
        out.gates.extend(expand_gate(gate, scratch))
    return out


_MACRO_T = {GateKind.CCX: C_CCX, GateKind.CH: C_CH, GateKind.CT: C_CT, GateKind.CTDG: C_CT}


def t_count(c: Circuit) -> int:
    """Count T and T-dagger gates in the expanded circuit."""
    total = 0
    for gate in c.gates:
        if gate.kind is GateKind.SQ1:
            raise UnresolvedPlaceholderError()
        if gate.kind in _T_KINDS:
            total += 1
        else:
            total += _MACRO_T.get(gate.kind, 0)
    return total


def clifford_count(c: Circuit) -> int:
    """Count non-T primitives in the expanded circuit."""
    expanded = expand_macros(c)
    return sum(1 for g in expanded.gates if g.kind not in _T_KINDS)
