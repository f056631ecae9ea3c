"""Circuit IR: gate catalog, construction, structural verification, layering, timing.

Conventions fixed here and relied on everywhere else:
  - basis-state index treats qubit 0 as least significant;
  - rendered bitstrings place classical bit 0 rightmost;
  - gate ids are list positions (program order is total);
  - circuits are immutable values; every operation is a pure function.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, TYPE_CHECKING

from .errors import CalibrationDataError, ValidationError

if TYPE_CHECKING:
    from .machines import CalibrationSnapshot


class GateKind(str, Enum):
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    SX = "sx"
    CX = "cx"
    CZ = "cz"
    CU1 = "cu1"
    SWAP = "swap"
    CCX = "ccx"
    MCX = "mcx"        # variable arity: controls + one target
    MEASURE = "measure"
    BARRIER = "barrier"

    @property
    def arity(self) -> int | None:
        """Fixed qubit count, or None for variable-arity kinds (mcx, barrier)."""
        return _ARITY[self]

    @property
    def param_count(self) -> int:
        return 1 if self in _PARAM_KINDS else 0


_ARITY: dict[GateKind, int | None] = {
    GateKind.H: 1, GateKind.X: 1, GateKind.Y: 1, GateKind.Z: 1,
    GateKind.S: 1, GateKind.SDG: 1, GateKind.T: 1, GateKind.TDG: 1,
    GateKind.RX: 1, GateKind.RY: 1, GateKind.RZ: 1, GateKind.SX: 1,
    GateKind.CX: 2, GateKind.CZ: 2, GateKind.CU1: 2, GateKind.SWAP: 2,
    GateKind.CCX: 3, GateKind.MCX: None,
    GateKind.MEASURE: 1, GateKind.BARRIER: None,
}
_PARAM_KINDS = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.CU1})


@dataclass(frozen=True)
class GateInstance:
    id: int
    kind: GateKind
    qubits: tuple[int, ...]
    clbits: tuple[int, ...] = ()
    params: tuple[float, ...] = ()


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    num_clbits: int
    gates: tuple[GateInstance, ...] = ()
    name: str = "circuit"

    def __len__(self) -> int:
        return len(self.gates)


def add_gate(circuit: Circuit, kind: GateKind,
             qubits: Sequence[int], clbits: Sequence[int] = (),
             params: Sequence[float] = ()) -> Circuit:
    """Append a gate; the id is the previous length. No validation here —
    structural problems surface in verify()."""
    gate = GateInstance(len(circuit.gates), kind, tuple(qubits), tuple(clbits),
                        tuple(float(p) for p in params))
    return Circuit(circuit.num_qubits, circuit.num_clbits,
                   circuit.gates + (gate,), circuit.name)


def from_ops(num_qubits: int, num_clbits: int,
             ops: Iterable[tuple[GateKind, Sequence[int], Sequence[int], Sequence[float]]],
             name: str = "circuit") -> Circuit:
    """Build a circuit from (kind, qubits, clbits, params) tuples, assigning ids."""
    gates = tuple(
        GateInstance(i, kind, tuple(qs), tuple(cs), tuple(float(p) for p in ps))
        for i, (kind, qs, cs, ps) in enumerate(ops)
    )
    return Circuit(num_qubits, num_clbits, gates, name)


class CircuitBuilder:
    """Mutable convenience wrapper; build() freezes into a Circuit."""

    def __init__(self, num_qubits: int, num_clbits: int = 0, name: str = "circuit"):
        self.num_qubits = num_qubits
        self.num_clbits = num_clbits
        self.name = name
        self._ops: list[tuple[GateKind, tuple[int, ...], tuple[int, ...], tuple[float, ...]]] = []

    def gate(self, kind: GateKind, qubits: Sequence[int],
             clbits: Sequence[int] = (), params: Sequence[float] = ()) -> "CircuitBuilder":
        self._ops.append((kind, tuple(qubits), tuple(clbits),
                          tuple(float(p) for p in params)))
        return self

    def h(self, q): return self.gate(GateKind.H, (q,))
    def x(self, q): return self.gate(GateKind.X, (q,))
    def y(self, q): return self.gate(GateKind.Y, (q,))
    def z(self, q): return self.gate(GateKind.Z, (q,))
    def s(self, q): return self.gate(GateKind.S, (q,))
    def sdg(self, q): return self.gate(GateKind.SDG, (q,))
    def t(self, q): return self.gate(GateKind.T, (q,))
    def tdg(self, q): return self.gate(GateKind.TDG, (q,))
    def sx(self, q): return self.gate(GateKind.SX, (q,))
    def rx(self, q, theta): return self.gate(GateKind.RX, (q,), params=(theta,))
    def ry(self, q, theta): return self.gate(GateKind.RY, (q,), params=(theta,))
    def rz(self, q, theta): return self.gate(GateKind.RZ, (q,), params=(theta,))
    def cx(self, c, t): return self.gate(GateKind.CX, (c, t))
    def cz(self, a, b): return self.gate(GateKind.CZ, (a, b))
    def cu1(self, c, t, lam): return self.gate(GateKind.CU1, (c, t), params=(lam,))
    def swap(self, a, b): return self.gate(GateKind.SWAP, (a, b))
    def ccx(self, a, b, t): return self.gate(GateKind.CCX, (a, b, t))

    def mcx(self, controls: Sequence[int], target: int) -> "CircuitBuilder":
        """Multi-controlled X; canonicalizes to cx/ccx for 1 or 2 controls."""
        controls = tuple(controls)
        if len(controls) == 1:
            return self.cx(controls[0], target)
        if len(controls) == 2:
            return self.ccx(controls[0], controls[1], target)
        return self.gate(GateKind.MCX, controls + (target,))

    def measure(self, q, c): return self.gate(GateKind.MEASURE, (q,), clbits=(c,))
    def barrier(self, *qs): return self.gate(GateKind.BARRIER, tuple(qs))

    def build(self) -> Circuit:
        return from_ops(self.num_qubits, self.num_clbits, self._ops, self.name)


def structural_equal(a: Circuit, b: Circuit) -> bool:
    """Equality on registers and gate stream; the name label is ignored."""
    if (a.num_qubits, a.num_clbits, len(a.gates)) != (b.num_qubits, b.num_clbits, len(b.gates)):
        return False
    return all(
        (g.kind, g.qubits, g.clbits, g.params) == (h.kind, h.qubits, h.clbits, h.params)
        for g, h in zip(a.gates, b.gates)
    )


# -- verification -------------------------------------------------------------

@dataclass(frozen=True)
class Issue:
    severity: str          # "error" | "warning"
    code: str
    message: str
    where: str             # "gate 3", "qubit 1", "clbit 0"


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    issues: tuple[Issue, ...]

    @property
    def errors(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "error")

    @property
    def warnings(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "warning")


def verify(circuit: Circuit) -> VerificationReport:
    """Structural check. ok is True iff there are no error-severity issues."""
    issues: list[Issue] = []

    def err(code, msg, where):
        issues.append(Issue("error", code, msg, where))

    def warn(code, msg, where):
        issues.append(Issue("warning", code, msg, where))

    measured_qubits: set[int] = set()
    written_clbits: set[int] = set()

    for g in circuit.gates:
        where = f"gate {g.id}"
        k = g.kind
        if k.arity is not None and len(g.qubits) != k.arity:
            err("bad_arity", f"{k.value} takes {k.arity} qubit(s), got {len(g.qubits)}", where)
        if k is GateKind.BARRIER and len(g.qubits) < 1:
            err("bad_arity", "barrier needs at least one qubit", where)
        if k is GateKind.MCX and len(g.qubits) < 2:
            err("mcx_no_control", "mcx needs at least one control and a target", where)
        for q in g.qubits:
            if not 0 <= q < circuit.num_qubits:
                err("qubit_out_of_range", f"qubit {q} outside register of size {circuit.num_qubits}", where)
        if len(set(g.qubits)) != len(g.qubits):
            err("duplicate_qubit", "duplicate qubit operands", where)
        if len(g.params) != k.param_count:
            err("bad_param_count", f"{k.value} takes {k.param_count} parameter(s), got {len(g.params)}", where)
        if k is GateKind.MEASURE:
            if len(g.clbits) != 1:
                err("bad_clbits", "measure takes exactly one classical bit", where)
            for c in g.clbits:
                if not 0 <= c < circuit.num_clbits:
                    err("clbit_out_of_range", f"classical bit {c} outside register of size {circuit.num_clbits}", where)
        elif g.clbits:
            err("bad_clbits", f"{k.value} takes no classical bits", where)
        if k is not GateKind.BARRIER:
            already = measured_qubits.intersection(g.qubits)
            for q in sorted(already):
                warn("gate_after_measure", f"gate on qubit {q} after its measurement", where)
        if k is GateKind.MEASURE:
            measured_qubits.update(g.qubits)
            written_clbits.update(c for c in g.clbits if 0 <= c < circuit.num_clbits)

    used_qubits = {q for g in circuit.gates for q in g.qubits if 0 <= q < circuit.num_qubits}
    for q in sorted(used_qubits - measured_qubits):
        warn("qubit_never_measured", f"qubit {q} is operated on but never measured", f"qubit {q}")
    for c in range(circuit.num_clbits):
        if c not in written_clbits:
            warn("clbit_never_written", f"classical bit {c} is never written", f"clbit {c}")

    errors_present = any(i.severity == "error" for i in issues)
    return VerificationReport(not errors_present, tuple(issues))


# -- layering -----------------------------------------------------------------

@dataclass(frozen=True)
class LayerSchedule:
    layers: tuple[tuple[int, ...], ...]    # gate ids, ascending within a layer
    layer_of: dict[int, int]


def schedule(circuit: Circuit) -> LayerSchedule:
    """ASAP greedy layering: each gate lands in the first layer after every
    earlier gate that shares one of its qubits. Barriers fence their qubits."""
    report = verify(circuit)
    if not report.ok:
        first = report.errors[0]
        raise ValidationError(f"circuit does not verify: {first.message} ({first.where})")

    frontier = [0] * circuit.num_qubits     # next free layer per qubit
    layers: list[list[int]] = []
    layer_of: dict[int, int] = {}
    for g in circuit.gates:
        layer = max((frontier[q] for q in g.qubits), default=0)
        while len(layers) <= layer:
            layers.append([])
        layers[layer].append(g.id)
        layer_of[g.id] = layer
        for q in g.qubits:
            frontier[q] = layer + 1
    return LayerSchedule(tuple(tuple(l) for l in layers), layer_of)


def duration(circuit: Circuit, snapshot: "CalibrationSnapshot") -> float:
    """Total execution time in nanoseconds: per layer the slowest gate counts.

    Measures take the qubit's readout duration; barriers cost nothing unless
    the snapshot carries an explicit entry for them.
    """
    sched = schedule(circuit)
    total = 0.0
    for layer in sched.layers:
        worst = 0.0
        for gid in layer:
            g = circuit.gates[gid]
            worst = max(worst, _gate_duration(g, snapshot))
        total += worst
    return total


def _gate_duration(g: GateInstance, snapshot: "CalibrationSnapshot") -> float:
    if g.kind is GateKind.MEASURE:
        q = g.qubits[0]
        try:
            return snapshot.qubit_props[q].readout_duration
        except (KeyError, IndexError):
            raise CalibrationDataError(
                f"no readout duration for qubit {q}", gate=g.id, qubits=list(g.qubits))
    if g.kind is GateKind.BARRIER:
        entry = snapshot.gate_props.get((g.kind.value, g.qubits))
        return entry.duration if entry else 0.0
    entry = snapshot.gate_props.get((g.kind.value, g.qubits))
    if entry is None:
        raise CalibrationDataError(
            f"no duration for {g.kind.value} on qubits {list(g.qubits)}",
            gate=g.id, qubits=list(g.qubits))
    return entry.duration
