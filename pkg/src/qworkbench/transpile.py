"""Logical-to-physical compilation: layout, routing, translation, peephole.

The pipeline is deterministic for a fixed seed. Every physical gate carries a
provenance entry: the logical gate id it realizes, or "routing" for inserted
swap overhead. Equivalence is defined up to global phase and the layout
permutation; global phase is never tracked.

Levels: 0 = layout + route + translate; 1 = adds peephole simplification
(adjacent cx-pair cancellation, rz merging, rz(0) removal); 2 = additionally
chooses the layout from calibration data instead of the trivial one.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from . import analysis
from .circuit import Circuit, GateInstance, GateKind, schedule, verify, duration as circuit_duration
from .errors import TranspileError, ValidationError
from .machines import CalibrationSnapshot, CouplingMap, coupling_from_snapshot
from .templates import REQUIRED_BASIS, expand_gate

ROUTING_OVERHEAD = analysis.ROUTING_OVERHEAD


@dataclass(frozen=True)
class TranspileOptions:
    optimization_level: int = 1
    seed: int = 0
    layout_method: str = "trivial"          # "trivial" | "error_aware"
    routing_method: str = "shortest_path"
    basis_override: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.optimization_level not in (0, 1, 2):
            raise ValidationError("optimization_level must be 0, 1 or 2")
        if self.layout_method not in ("trivial", "error_aware"):
            raise ValidationError(f"unknown layout method {self.layout_method!r}")
        if self.routing_method != "shortest_path":
            raise ValidationError(f"unknown routing method {self.routing_method!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError("seed must fit in 64 bits")


@dataclass(frozen=True)
class Layout:
    initial: tuple[int, ...]     # logical -> physical before the first gate
    final: tuple[int, ...]       # logical -> physical after routing swaps


@dataclass(frozen=True)
class TranspileMetrics:
    gate_count: int              # operations, excluding measures and barriers
    layer_count: int
    duration_ns: float
    esp_total: float


@dataclass(frozen=True)
class TranspileResult:
    physical: Circuit
    layout: Layout
    provenance: tuple[int | str, ...]
    options: TranspileOptions
    metrics: TranspileMetrics


@dataclass
class _Tagged:
    kind: GateKind
    qubits: tuple[int, ...]
    clbits: tuple[int, ...]
    params: tuple[float, ...]
    origin: int | str


def transpile(circuit: Circuit, snapshot: CalibrationSnapshot,
              options: TranspileOptions | None = None) -> TranspileResult:
    options = options or TranspileOptions()
    report = verify(circuit)
    if not report.ok:
        first = report.errors[0]
        raise ValidationError(f"circuit does not verify: {first.message} ({first.where})")
    machine_qubits = snapshot.num_qubits
    if circuit.num_qubits > machine_qubits:
        raise TranspileError(
            f"circuit needs {circuit.num_qubits} qubits but the machine has {machine_qubits}")
    basis = frozenset(options.basis_override or snapshot.basis_gates)
    if not REQUIRED_BASIS <= basis:
        missing = sorted(REQUIRED_BASIS - basis)
        raise TranspileError(f"machine basis lacks required gates: {', '.join(missing)}")
    coupling = coupling_from_snapshot(snapshot)
    rng = np.random.default_rng(options.seed)

    expanded = _expand_wide_gates(circuit)
    use_error_aware = options.optimization_level == 2 or options.layout_method == "error_aware"
    if use_error_aware:
        initial = _error_aware_layout(expanded, circuit.num_qubits, snapshot, coupling, rng)
    else:
        initial = tuple(range(circuit.num_qubits))
    routed, final = _route(expanded, initial, coupling, rng)
    translated = _translate(routed, basis)
    if options.optimization_level >= 1:
        translated = _peephole(translated)

    gates = tuple(
        GateInstance(i, t.kind, t.qubits, t.clbits, t.params)
        for i, t in enumerate(translated))
    physical = Circuit(machine_qubits, circuit.num_clbits, gates,
                       name=f"{circuit.name}@{snapshot.machine_name}")
    provenance = tuple(t.origin for t in translated)

    sched = schedule(physical)
    esp_report = analysis.esp(physical, snapshot)
    metrics = TranspileMetrics(
        gate_count=sum(1 for g in gates
                       if g.kind not in (GateKind.MEASURE, GateKind.BARRIER)),
        layer_count=len(sched.layers),
        duration_ns=circuit_duration(physical, snapshot),
        esp_total=esp_report.total,
    )
    return TranspileResult(physical, Layout(initial, final), provenance, options, metrics)


# -- stages ---------------------------------------------------------------

def _expand_wide_gates(circuit: Circuit) -> list[_Tagged]:
    """Ground every gate wider than two qubits into 1q/2q gates."""
    out: list[_Tagged] = []
    for g in circuit.gates:
        if g.kind in (GateKind.MEASURE, GateKind.BARRIER) or len(g.qubits) <= 2:
            out.append(_Tagged(g.kind, g.qubits, g.clbits, g.params, g.id))
            continue
        # expand until narrow, but keep 1q/2q kinds symbolic for routing
        work = [(g.kind, g.qubits, g.params)]
        while work:
            kind, qubits, params = work.pop(0)
            if len(qubits) <= 2:
                out.append(_Tagged(kind, qubits, (), params, g.id))
                continue
            steps = expand_gate(kind, len(qubits), params,
                                basis=frozenset({"rz", "sx", "cx", "h", "t", "tdg",
                                                 "x", "cu1"}))
            work = [(k, tuple(qubits[r] for r in roles), ps)
                    for k, roles, ps in steps] + work
    return out


def _route(gates: list[_Tagged], initial: tuple[int, ...], coupling: CouplingMap,
           rng: np.random.Generator) -> tuple[list[_Tagged], tuple[int, ...]]:
    cur = list(initial)
    out: list[_Tagged] = []
    for t in gates:
        if len(t.qubits) == 2 and t.kind not in (GateKind.MEASURE, GateKind.BARRIER):
            a, b = cur[t.qubits[0]], cur[t.qubits[1]]
            if not coupling.connected(a, b):
                path = _choose_path(coupling, a, b, rng)
                for i in range(len(path) - 2):
                    p, q = path[i], path[i + 1]
                    out.append(_Tagged(GateKind.SWAP, (p, q), (), (), ROUTING_OVERHEAD))
                    for l, phys in enumerate(cur):
                        if phys == p:
                            cur[l] = q
                        elif phys == q:
                            cur[l] = p
        out.append(_Tagged(t.kind, tuple(cur[q] for q in t.qubits),
                           t.clbits, t.params, t.origin))
    return out, tuple(cur)


def _choose_path(coupling: CouplingMap, a: int, b: int,
                 rng: np.random.Generator) -> list[int]:
    """All shortest paths, tie-broken by lowest maximum qubit index, then a
    seeded draw."""
    paths = _shortest_paths(coupling, a, b)
    if not paths:
        raise TranspileError(f"qubits {a} and {b} are not connected on this machine")
    keyed = [(max(p), rng.random(), p) for p in paths]
    return min(keyed)[2]


def _shortest_paths(coupling: CouplingMap, a: int, b: int,
                    cap: int = 128) -> list[list[int]]:
    from collections import deque
    dist = {a: 0}
    queue = deque([a])
    while queue:
        q = queue.popleft()
        for nb in coupling.neighbors(q):
            if nb not in dist:
                dist[nb] = dist[q] + 1
                queue.append(nb)
    if b not in dist:
        return []
    paths: list[list[int]] = []

    def grow(prefix: list[int]):
        if len(paths) >= cap:
            return
        tail = prefix[-1]
        if tail == b:
            paths.append(prefix)
            return
        for nb in coupling.neighbors(tail):
            if dist.get(nb) == dist[tail] + 1:
                grow(prefix + [nb])

    grow([a])
    return paths


def _error_aware_layout(gates: list[_Tagged], num_logical: int,
                        snapshot: CalibrationSnapshot, coupling: CouplingMap,
                        rng: np.random.Generator) -> tuple[int, ...]:
    """Greedy calibration-driven layout: put the busiest logical qubits on the
    cheapest qubits of the best connected subgraph."""
    degree = [0] * num_logical
    for t in gates:
        if len(t.qubits) == 2 and t.kind not in (GateKind.MEASURE, GateKind.BARRIER):
            degree[t.qubits[0]] += 1
            degree[t.qubits[1]] += 1

    def qubit_cost(q: int, members: frozenset[int]) -> float:
        incident = [snapshot.gate_props[("cx", (q, nb))].error
                    for nb in coupling.neighbors(q)
                    if nb in members and ("cx", (q, nb)) in snapshot.gate_props]
        cx_part = sum(incident) / len(incident) if incident else 0.0
        return snapshot.qubit_props[q].readout_error + cx_part

    best = None
    for combo in itertools.combinations(range(coupling.num_qubits), num_logical):
        members = frozenset(combo)
        if not _is_connected(members, coupling):
            continue
        cost = sum(qubit_cost(q, members) for q in combo) / num_logical
        key = (cost, rng.random())
        if best is None or key < best[0]:
            best = (key, members)
    if best is None:
        raise TranspileError("no connected subgraph large enough for this circuit")
    members = best[1]
    ranked_physical = sorted(members, key=lambda q: (qubit_cost(q, members), q))
    ranked_logical = sorted(range(num_logical), key=lambda l: (-degree[l], rng.random()))
    layout = [0] * num_logical
    for logical, physical in zip(ranked_logical, ranked_physical):
        layout[logical] = physical
    return tuple(layout)


def _is_connected(members: frozenset[int], coupling: CouplingMap) -> bool:
    if not members:
        return False
    seen = {next(iter(members))}
    frontier = list(seen)
    while frontier:
        q = frontier.pop()
        for nb in coupling.neighbors(q):
            if nb in members and nb not in seen:
                seen.add(nb)
                frontier.append(nb)
    return seen == members


def _translate(gates: list[_Tagged], basis: frozenset[str]) -> list[_Tagged]:
    out: list[_Tagged] = []
    for t in gates:
        if t.kind in (GateKind.MEASURE, GateKind.BARRIER) or t.kind.value in basis:
            out.append(t)
            continue
        for kind, roles, params in expand_gate(t.kind, len(t.qubits), t.params, basis):
            out.append(_Tagged(kind, tuple(t.qubits[r] for r in roles),
                               (), params, t.origin))
    return out


def _peephole(gates: list[_Tagged]) -> list[_Tagged]:
    """Fixed-point simplification: cancel adjacent equal cx pairs, merge
    adjacent rz on one wire, drop rz of angle 0 mod 2pi."""
    work = list(gates)
    cap = max(1, 10 * len(work))
    for _ in range(cap):
        changed = False
        alive: list[_Tagged | None] = list(work)

        def successor(i: int) -> int | None:
            g = alive[i]
            for j in range(i + 1, len(alive)):
                other = alive[j]
                if other is None:
                    continue
                if set(other.qubits) & set(g.qubits):
                    return j
            return None

        for i, g in enumerate(alive):
            if g is None:
                continue
            if g.kind is GateKind.RZ and _is_zero_angle(g.params[0]):
                alive[i] = None
                changed = True
                continue
            if g.kind in (GateKind.CX, GateKind.RZ):
                j = successor(i)
                if j is None:
                    continue
                other = alive[j]
                if (g.kind is GateKind.CX and other.kind is GateKind.CX
                        and other.qubits == g.qubits):
                    alive[i] = alive[j] = None
                    changed = True
                elif (g.kind is GateKind.RZ and other.kind is GateKind.RZ
                        and other.qubits == g.qubits):
                    merged = replace(g, params=(g.params[0] + other.params[0],))
                    alive[i] = merged
                    alive[j] = None
                    changed = True
        work = [g for g in alive if g is not None]
        if not changed:
            break
    return work


def _is_zero_angle(theta: float) -> bool:
    return abs(math.remainder(theta, 2 * math.pi)) < 1e-12


# -- strategy comparison -----------------------------------------------------

@dataclass(frozen=True)
class StrategyRow:
    index: int
    options: TranspileOptions
    result: TranspileResult

    @property
    def gate_count(self) -> int:
        return self.result.metrics.gate_count

    @property
    def layer_count(self) -> int:
        return self.result.metrics.layer_count

    @property
    def duration_ns(self) -> float:
        return self.result.metrics.duration_ns

    @property
    def esp_total(self) -> float:
        return self.result.metrics.esp_total


def compare_strategies(circuit: Circuit, snapshot: CalibrationSnapshot,
                       options_list: list[TranspileOptions]) -> list[StrategyRow]:
    if not options_list:
        raise ValidationError("compare_strategies needs at least one option set")
    rows = []
    for i, options in enumerate(options_list):
        try:
            rows.append(StrategyRow(i, options, transpile(circuit, snapshot, options)))
        except (TranspileError, ValidationError) as exc:
            raise TranspileError(f"strategy {i}: {exc}", strategy=i) from exc
    return rows
