"""Execution: dense statevector simulation plus a calibration-derived noise mode.

Gate application works on the reshaped (2,)*n tensor and touches only the
operand axes; the full 2^n x 2^n matrix is never materialized. Noise is the
trajectory method: per shot, each gate injects a uniformly random non-identity
Pauli on its operands with the calibrated error probability, and measured bits
flip independently with the qubit's readout error. Shot i draws from its own
deterministically derived generator, so runs are reproducible and shots could
be evaluated in any order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .circuit import Circuit, GateInstance, GateKind
from .errors import CalibrationDataError, ResourceLimitError, ValidationError
from .machines import CalibrationSnapshot

MAX_SIM_QUBITS = 20

_SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_PAULI_1Q = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.diag([1, -1]).astype(complex),
)


@dataclass(frozen=True)
class RunConfig:
    shots: int
    seed: int = 0
    noise: Literal["ideal", "calibrated"] = "ideal"
    snapshot: CalibrationSnapshot | None = None

    def __post_init__(self):
        if self.shots < 1:
            raise ValidationError("shots must be at least 1")
        if self.noise == "calibrated" and self.snapshot is None:
            raise ValidationError("calibrated noise needs a calibration snapshot")


@dataclass(frozen=True)
class Counts:
    shots: int
    width: int
    entries: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        total = sum(self.entries.values())
        if total != self.shots:
            raise ValidationError(f"counts sum to {total}, expected {self.shots} shots")
        for key, count in self.entries.items():
            if len(key) != self.width or set(key) - {"0", "1"}:
                raise ValidationError(f"bad counts key {key!r} for width {self.width}")
            if count <= 0:
                raise ValidationError("zero and negative counts must be omitted")


def bitstring(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


# -- kernels ---------------------------------------------------------------

def _apply_1q(state: np.ndarray, mat: np.ndarray, q: int) -> np.ndarray:
    n = state.ndim
    axis = n - 1 - q
    moved = np.moveaxis(state, axis, -1)
    out = moved @ mat.T
    return np.moveaxis(out, -1, axis)


def _slice(n: int, assignments: dict[int, int]) -> tuple:
    idx: list[object] = [slice(None)] * n
    for q, v in assignments.items():
        idx[n - 1 - q] = v
    return tuple(idx)


def apply_gate(state: np.ndarray, g: GateInstance) -> np.ndarray:
    """Apply one gate to the (2,)*n state tensor. Measures/barriers are no-ops."""
    n = state.ndim
    k = g.kind
    if k in (GateKind.MEASURE, GateKind.BARRIER):
        return state
    if k is GateKind.X:
        return np.flip(state, axis=n - 1 - g.qubits[0])
    if k is GateKind.Z:
        state = state.copy()
        state[_slice(n, {g.qubits[0]: 1})] *= -1
        return state
    if k in (GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG, GateKind.RZ):
        phase = {
            GateKind.S: 1j,
            GateKind.SDG: -1j,
            GateKind.T: np.exp(1j * np.pi / 4),
            GateKind.TDG: np.exp(-1j * np.pi / 4),
        }.get(k)
        state = state.copy()
        if k is GateKind.RZ:
            t = g.params[0]
            state[_slice(n, {g.qubits[0]: 0})] *= np.exp(-1j * t / 2)
            state[_slice(n, {g.qubits[0]: 1})] *= np.exp(1j * t / 2)
        else:
            state[_slice(n, {g.qubits[0]: 1})] *= phase
        return state
    if k is GateKind.H:
        return _apply_1q(state, _H, g.qubits[0])
    if k is GateKind.SX:
        return _apply_1q(state, _SX, g.qubits[0])
    if k is GateKind.Y:
        return _apply_1q(state, _PAULI_1Q[1], g.qubits[0])
    if k in (GateKind.RX, GateKind.RY):
        t = g.params[0]
        c, s = np.cos(t / 2), np.sin(t / 2)
        mat = (np.array([[c, -1j * s], [-1j * s, c]]) if k is GateKind.RX
               else np.array([[c, -s], [s, c]], dtype=complex))
        return _apply_1q(state, mat, g.qubits[0])
    if k is GateKind.CX:
        c, t = g.qubits
        state = state.copy()
        lo = _slice(n, {c: 1, t: 0})
        hi = _slice(n, {c: 1, t: 1})
        state[lo], state[hi] = state[hi].copy(), state[lo].copy()
        return state
    if k is GateKind.CZ:
        state = state.copy()
        state[_slice(n, {g.qubits[0]: 1, g.qubits[1]: 1})] *= -1
        return state
    if k is GateKind.CU1:
        state = state.copy()
        state[_slice(n, {g.qubits[0]: 1, g.qubits[1]: 1})] *= np.exp(1j * g.params[0])
        return state
    if k is GateKind.SWAP:
        a, b = g.qubits
        state = state.copy()
        ab = _slice(n, {a: 1, b: 0})
        ba = _slice(n, {a: 0, b: 1})
        state[ab], state[ba] = state[ba].copy(), state[ab].copy()
        return state
    if k in (GateKind.CCX, GateKind.MCX):
        controls, target = g.qubits[:-1], g.qubits[-1]
        state = state.copy()
        on = {q: 1 for q in controls}
        lo = _slice(n, {**on, target: 0})
        hi = _slice(n, {**on, target: 1})
        state[lo], state[hi] = state[hi].copy(), state[lo].copy()
        return state
    raise ValidationError(f"no kernel for gate kind {k.value}")


def statevector(circuit: Circuit) -> np.ndarray:
    """Final state as a flat complex vector; qubit 0 indexes the least
    significant bit. Measures and barriers are skipped."""
    n = circuit.num_qubits
    if n > MAX_SIM_QUBITS:
        raise ResourceLimitError(f"statevector supports at most {MAX_SIM_QUBITS} qubits, got {n}")
    state = np.zeros((2,) * max(n, 1), dtype=complex)
    state[(0,) * max(n, 1)] = 1.0
    for g in circuit.gates:
        state = apply_gate(state, g)
    return state.reshape(-1)


# -- measurement bookkeeping -----------------------------------------------

def measure_map(circuit: Circuit) -> dict[int, int]:
    """clbit -> source qubit; the last measure writing a clbit wins."""
    mapping: dict[int, int] = {}
    for g in circuit.gates:
        if g.kind is GateKind.MEASURE:
            mapping[g.clbits[0]] = g.qubits[0]
    return mapping


def probabilities(circuit: Circuit) -> dict[str, float]:
    """Exact outcome distribution over the classical register, from the ideal
    statevector. Unwritten classical bits read 0."""
    mapping = measure_map(circuit)
    if not mapping:
        raise ValidationError("circuit measures no qubits")
    n = circuit.num_qubits
    width = circuit.num_clbits
    probs = np.abs(statevector(circuit).reshape((2,) * n)) ** 2

    qubits = sorted(set(mapping.values()))
    other_axes = tuple(n - 1 - q for q in range(n) if q not in qubits)
    marginal = probs.sum(axis=other_axes) if other_axes else probs
    # marginal axes correspond to `qubits` sorted descending by axis order
    out: dict[str, float] = {}
    for flat, p in enumerate(marginal.reshape(-1)):
        if p == 0.0:
            continue
        bits = {}
        for pos, q in enumerate(sorted(qubits, reverse=True)):
            bits[q] = (flat >> (len(qubits) - 1 - pos)) & 1
        value = 0
        for c, q in mapping.items():
            value |= bits[q] << c
        key = bitstring(value, width)
        out[key] = out.get(key, 0.0) + float(p)
    return out


def _clbit_value(sample: int, mapping: dict[int, int]) -> int:
    value = 0
    for c, q in mapping.items():
        value |= ((sample >> q) & 1) << c
    return value


def _shot_rng(seed: int, shot: int) -> np.random.Generator:
    return np.random.default_rng([seed, shot])


def _sample_index(cumulative: np.ndarray, rng: np.random.Generator) -> int:
    # the final cumulative value can undershoot 1.0 by float error; clamp
    idx = int(np.searchsorted(cumulative, rng.random(), side="right"))
    return min(idx, len(cumulative) - 1)


def _inject_pauli(state: np.ndarray, qubits: tuple[int, ...],
                  rng: np.random.Generator) -> np.ndarray:
    """Uniformly random non-identity Pauli string on the given qubits."""
    k = len(qubits)
    which = int(rng.integers(1, 4 ** k))
    for q in qubits:
        p, which = which % 4, which // 4
        if p:
            state = _apply_1q(state, _PAULI_1Q[p - 1], q)
    return state


def run(circuit: Circuit, config: RunConfig) -> Counts:
    """Sample measured outcomes. Ideal mode draws from the exact distribution;
    calibrated mode evolves one noisy trajectory per shot."""
    mapping = measure_map(circuit)
    if not mapping:
        raise ValidationError("circuit measures no qubits")
    n = circuit.num_qubits
    if n > MAX_SIM_QUBITS:
        raise ResourceLimitError(f"run supports at most {MAX_SIM_QUBITS} qubits, got {n}")
    width = circuit.num_clbits

    tally: dict[int, int] = {}
    if config.noise == "ideal":
        probs = np.abs(statevector(circuit)) ** 2
        cumulative = np.cumsum(probs)
        for shot in range(config.shots):
            rng = _shot_rng(config.seed, shot)
            sample = _sample_index(cumulative, rng)
            value = _clbit_value(sample, mapping)
            tally[value] = tally.get(value, 0) + 1
    else:
        snapshot = config.snapshot
        errors = [_gate_error_rate(g, snapshot) for g in circuit.gates]
        flip = _readout_flips(circuit, snapshot, mapping)
        base = np.zeros((2,) * n, dtype=complex)
        base[(0,) * n] = 1.0
        for shot in range(config.shots):
            rng = _shot_rng(config.seed, shot)
            state = base
            for g, err in zip(circuit.gates, errors):
                state = apply_gate(state, g)
                if err > 0.0 and rng.random() < err:
                    state = _inject_pauli(state, g.qubits, rng)
            cumulative = np.cumsum(np.abs(state.reshape(-1)) ** 2)
            sample = _sample_index(cumulative, rng)
            value = _clbit_value(sample, mapping)
            for c, p in flip.items():
                if p > 0.0 and rng.random() < p:
                    value ^= 1 << c
            tally[value] = tally.get(value, 0) + 1

    entries = {bitstring(v, width): c for v, c in sorted(tally.items())}
    return Counts(shots=config.shots, width=width, entries=entries)


def _gate_error_rate(g: GateInstance, snapshot: CalibrationSnapshot) -> float:
    if g.kind in (GateKind.MEASURE, GateKind.BARRIER):
        return 0.0
    entry = snapshot.gate_props.get((g.kind.value, g.qubits))
    if entry is None:
        raise CalibrationDataError(
            f"no error rate for {g.kind.value} on qubits {list(g.qubits)}",
            gate=g.id, qubits=list(g.qubits))
    return entry.error


def _readout_flips(circuit: Circuit, snapshot: CalibrationSnapshot,
                   mapping: dict[int, int]) -> dict[int, float]:
    flips = {}
    for c, q in sorted(mapping.items()):
        try:
            flips[c] = snapshot.qubit_props[q].readout_error
        except IndexError:
            raise CalibrationDataError(f"no readout error for qubit {q}", qubit=q)
    return flips
