"""Reference unitary semantics via dense matrices.

Deliberately materializes a full 2^n x 2^n operator per gate and multiplies
them out. This is the slow, obviously-correct route used as the oracle for
the kernel-based simulator, so it must not share code with it.
"""
from __future__ import annotations

import numpy as np

from .circuit import Circuit, GateKind
from .errors import ResourceLimitError

MAX_UNITARY_QUBITS = 12

_SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
_FIXED_1Q = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.diag([1, -1]).astype(complex),
    GateKind.S: np.diag([1, 1j]).astype(complex),
    GateKind.SDG: np.diag([1, -1j]).astype(complex),
    GateKind.T: np.diag([1, np.exp(1j * np.pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(-1j * np.pi / 4)]),
    GateKind.SX: _SX,
}


def gate_matrix(kind: GateKind, num_qubits: int, params: tuple[float, ...]) -> np.ndarray:
    """Local matrix over the gate's own qubits; local bit j is operand j."""
    if kind in _FIXED_1Q:
        return _FIXED_1Q[kind]
    if kind is GateKind.RX:
        t = params[0]
        return np.array([[np.cos(t / 2), -1j * np.sin(t / 2)],
                         [-1j * np.sin(t / 2), np.cos(t / 2)]])
    if kind is GateKind.RY:
        t = params[0]
        return np.array([[np.cos(t / 2), -np.sin(t / 2)],
                         [np.sin(t / 2), np.cos(t / 2)]], dtype=complex)
    if kind is GateKind.RZ:
        t = params[0]
        return np.diag([np.exp(-1j * t / 2), np.exp(1j * t / 2)])
    if kind is GateKind.CX:
        m = np.eye(4, dtype=complex)
        m[[1, 3]] = m[[3, 1]]          # control = bit 0, target = bit 1
        return m
    if kind is GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(complex)
    if kind is GateKind.CU1:
        m = np.eye(4, dtype=complex)
        m[3, 3] = np.exp(1j * params[0])
        return m
    if kind is GateKind.SWAP:
        m = np.eye(4, dtype=complex)
        m[[1, 2]] = m[[2, 1]]
        return m
    if kind in (GateKind.CCX, GateKind.MCX):
        k = num_qubits
        m = np.eye(2 ** k, dtype=complex)
        lo = 2 ** (k - 1) - 1           # all controls set, target clear
        hi = 2 ** k - 1
        m[[lo, hi]] = m[[hi, lo]]
        return m
    raise ValueError(f"no unitary for {kind.value}")


def embed(local: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Lift a 2^k local matrix (local bit j = qubits[j]) to the full register."""
    k = len(qubits)
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    rest_mask = ~sum(1 << q for q in qubits) & (dim - 1)
    for col in range(dim):
        loc_in = 0
        for j, q in enumerate(qubits):
            loc_in |= ((col >> q) & 1) << j
        base = col & rest_mask
        for loc_out in range(2 ** k):
            v = local[loc_out, loc_in]
            if v != 0:
                row = base
                for j, q in enumerate(qubits):
                    row |= ((loc_out >> j) & 1) << q
                out[row, col] += v
    return out


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the circuit; measures and barriers are skipped."""
    n = circuit.num_qubits
    if n > MAX_UNITARY_QUBITS:
        raise ResourceLimitError(
            f"unitary_of supports at most {MAX_UNITARY_QUBITS} qubits, got {n}")
    u = np.eye(2 ** n, dtype=complex)
    for g in circuit.gates:
        if g.kind in (GateKind.MEASURE, GateKind.BARRIER):
            continue
        u = embed(gate_matrix(g.kind, len(g.qubits), g.params), g.qubits, n) @ u
    return u


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> bool:
    """Compare matrices modulo one global phase, aligned on b's largest entry."""
    if a.shape != b.shape:
        return False
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(a[idx]) < 1e-12:
        return bool(np.allclose(a, b, atol=tol))
    phase = b[idx] / a[idx]
    return bool(np.allclose(a * phase, b, atol=tol))
