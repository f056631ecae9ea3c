"""Fidelity analysis and logical/physical gate matching.

ESP (estimated success probability) is the product of per-gate success rates
(1 - error) over a physical circuit, reported at three granularities: per
layer, cumulative by layer, and cumulative per qubit. Readout errors of the
measured qubits enter the total only, so per-layer numbers stay comparable
between measured and unmeasured circuits. Idle decoherence is deliberately
not folded in.

Matching recovers which physical gates realize which logical gate. Native
transpiler provenance is used verbatim when available; otherwise a heuristic
walks the logical gates in program order and consumes the translation-template
expansion of each from the physical stream, classifying unconsumed swap
triples as routing overhead and tracking the layout they induce.
"""
from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, GateInstance, GateKind, schedule
from .errors import CalibrationDataError, MatchError
from .machines import CalibrationSnapshot
from .simulate import measure_map
from .templates import REQUIRED_BASIS, expand_gate

ROUTING_OVERHEAD = "routing"


@dataclass(frozen=True)
class EspReport:
    per_layer: tuple[float, ...]
    cumulative_by_layer: tuple[float, ...]
    per_qubit_cumulative: tuple[tuple[float, ...], ...]   # [qubit][layer]
    total: float                                          # includes readout
    total_without_readout: float
    measured_qubits: tuple[int, ...]


def _gate_success(g: GateInstance, snapshot: CalibrationSnapshot) -> float:
    if g.kind in (GateKind.MEASURE, GateKind.BARRIER):
        return 1.0
    entry = snapshot.gate_props.get((g.kind.value, g.qubits))
    if entry is None:
        raise CalibrationDataError(
            f"no error rate for {g.kind.value} on qubits {list(g.qubits)}",
            gate=g.id, qubits=list(g.qubits))
    return 1.0 - entry.error


def esp(circuit: Circuit, snapshot: CalibrationSnapshot) -> EspReport:
    sched = schedule(circuit)
    num_layers = len(sched.layers)

    per_layer: list[float] = []
    cumulative: list[float] = []
    running = 1.0
    qubit_running = [1.0] * circuit.num_qubits
    per_qubit: list[list[float]] = [[] for _ in range(circuit.num_qubits)]

    for layer in sched.layers:
        layer_product = 1.0
        for gid in layer:
            g = circuit.gates[gid]
            success = _gate_success(g, snapshot)
            layer_product *= success
            for q in g.qubits:
                qubit_running[q] *= success
        per_layer.append(layer_product)
        running *= layer_product
        cumulative.append(running)
        for q in range(circuit.num_qubits):
            per_qubit[q].append(qubit_running[q])

    # the flat product in gate order keeps "append one gate" an exact multiply
    total_gates = 1.0
    for g in circuit.gates:
        total_gates *= _gate_success(g, snapshot)

    measured = tuple(sorted(set(measure_map(circuit).values())))
    total = total_gates
    for q in measured:
        total *= 1.0 - snapshot.qubit_props[q].readout_error

    return EspReport(
        per_layer=tuple(per_layer),
        cumulative_by_layer=tuple(cumulative),
        per_qubit_cumulative=tuple(tuple(row) for row in per_qubit),
        total=total,
        total_without_readout=total_gates,
        measured_qubits=measured,
    )


@dataclass(frozen=True)
class EspDelta:
    relative_total: float          # (b - a) / a
    layer_count_delta: int


def esp_delta(a: EspReport, b: EspReport) -> EspDelta:
    return EspDelta(
        relative_total=(b.total - a.total) / a.total,
        layer_count_delta=len(b.per_layer) - len(a.per_layer),
    )


# -- logical/physical matching ------------------------------------------------

@dataclass(frozen=True)
class MatchMap:
    assigned: dict[int, tuple[int, ...]]    # logical gate id -> physical ids
    unattributed: tuple[int, ...]           # routing overhead, program order
    method: str                             # "provenance" | "heuristic"

    def origin_of(self, physical_id: int) -> int | str:
        for lid, pids in self.assigned.items():
            if physical_id in pids:
                return lid
        return ROUTING_OVERHEAD


def match(logical: Circuit, physical: Circuit, initial_layout: tuple[int, ...],
          provenance: tuple[int | str, ...] | None = None) -> MatchMap:
    if provenance is not None:
        assigned: dict[int, list[int]] = {g.id: [] for g in logical.gates}
        unattributed: list[int] = []
        for pid, origin in enumerate(provenance):
            if origin == ROUTING_OVERHEAD:
                unattributed.append(pid)
            else:
                assigned[origin].append(pid)
        return MatchMap({k: tuple(v) for k, v in assigned.items()},
                        tuple(unattributed), "provenance")
    return _heuristic_match(logical, physical, initial_layout)


def _physical_basis(physical: Circuit) -> frozenset[str]:
    kinds = {g.kind.value for g in physical.gates
             if g.kind not in (GateKind.MEASURE, GateKind.BARRIER)}
    return frozenset(kinds) | REQUIRED_BASIS


def _swap_span(gates: tuple[GateInstance, ...], i: int) -> int:
    """Number of gates forming a swap at position i (1, 3, or 0 for none)."""
    if gates[i].kind is GateKind.SWAP:
        return 1
    if (i + 2 < len(gates)
            and all(gates[i + k].kind is GateKind.CX for k in range(3))
            and gates[i].qubits == gates[i + 2].qubits
            and gates[i + 1].qubits == gates[i].qubits[::-1]):
        return 3
    return 0


def _params_close(a: tuple[float, ...], b: tuple[float, ...]) -> bool:
    return len(a) == len(b) and all(abs(x - y) < 1e-9 for x, y in zip(a, b))


def _heuristic_match(logical: Circuit, physical: Circuit,
                     initial_layout: tuple[int, ...]) -> MatchMap:
    basis = _physical_basis(physical)
    cur = list(initial_layout)
    assigned: dict[int, list[int]] = {g.id: [] for g in logical.gates}
    unattributed: list[int] = []
    phys = physical.gates
    cursor = 0

    def consume_swap() -> bool:
        nonlocal cursor
        span = _swap_span(phys, cursor)
        if not span:
            return False
        a, b = phys[cursor].qubits
        unattributed.extend(phys[cursor + k].id for k in range(span))
        cursor += span
        for l, p in enumerate(cur):      # the swap moves two wires of the map
            if p == a:
                cur[l] = b
            elif p == b:
                cur[l] = a
        return True

    for lg in logical.gates:
        if lg.kind in (GateKind.MEASURE, GateKind.BARRIER):
            expected = [(lg.kind, tuple(range(len(lg.qubits))), lg.params)]
        else:
            expected = expand_gate(lg.kind, len(lg.qubits), lg.params, basis)
        for ekind, eroles, eparams in expected:
            while True:
                if cursor >= len(phys):
                    raise MatchError(
                        f"physical circuit ends before logical gate {lg.id} "
                        f"({lg.kind.value}) is realized", logical_gate=lg.id)
                pg = phys[cursor]
                want = tuple(cur[lg.qubits[r]] for r in eroles)
                if (pg.kind is ekind and pg.qubits == want
                        and _params_close(pg.params, eparams)
                        and pg.clbits == lg.clbits):
                    assigned[lg.id].append(pg.id)
                    cursor += 1
                    break
                if consume_swap():
                    continue
                raise MatchError(
                    f"physical gate {pg.id} ({pg.kind.value} on {list(pg.qubits)}) does "
                    f"not continue logical gate {lg.id} ({lg.kind.value}); expected "
                    f"{ekind.value} on {list(want)}", logical_gate=lg.id, physical_gate=pg.id)

    while cursor < len(phys):
        if not consume_swap():
            pg = phys[cursor]
            raise MatchError(
                f"trailing physical gate {pg.id} ({pg.kind.value}) matches no "
                f"logical gate", physical_gate=pg.id)

    return MatchMap({k: tuple(v) for k, v in assigned.items()},
                    tuple(unattributed), "heuristic")
