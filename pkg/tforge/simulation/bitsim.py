"""Bit-level simulation of reversible X/CX/CCX/SWAP circuits."""

from ..circuit.circuit import Circuit
from ..circuit.gates import GateKind


def run_bits(c: Circuit, key: int) -> int:
    """Run a classical reversible circuit on one basis index and return the output index."""
    for gate in c.gates:
        kind = gate.kind
        qs = gate.qubits
        if kind is GateKind.X:
            key ^= 1 << qs[0]
        elif kind is GateKind.CX:
            if key >> qs[0] & 1:
                key ^= 1 << qs[1]
        elif kind is GateKind.CCX:
            if key >> qs[0] & 1 and key >> qs[1] & 1:
                key ^= 1 << qs[2]
        elif kind is GateKind.SWAP:
            a, b = qs
            if (key >> a & 1) != (key >> b & 1):
                key ^= (1 << a) | (1 << b)
        else:
            raise ValueError(f"Gate '{gate}' is not a classical reversible gate")
    return key
