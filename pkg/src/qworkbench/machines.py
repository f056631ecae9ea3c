"""Machine calibration model: time-serial snapshots, property queries, fixtures.

Machines live in local files (one machine per file, JSON, RFC-3339 UTC
timestamps) rather than behind a cloud API; the package ships five 5-qubit
fixtures. Fixture values are fabricated within realistic ranges and are only
meaningful as test data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import (QueryFileError, SelectorError, UnknownMachineError,
                     ValidationError)

MACHINE_FORMAT = "machine-calibration"
QUERY_FORMAT = "property-query"
FORMAT_VERSION = 1

QUBIT_PROPERTIES = ("t1", "t2", "frequency", "readout_error", "readout_duration")
GATE_PROPERTIES = ("error", "duration")
AGGREGATIONS = ("none", "min", "max", "mean")


def parse_timestamp(text: str) -> datetime:
    try:
        ts = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        raise ValidationError(f"bad RFC-3339 timestamp {text!r}")
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


@dataclass(frozen=True)
class CouplingMap:
    num_qubits: int
    edges: frozenset[tuple[int, int]]    # stored with low index first

    @staticmethod
    def from_pairs(num_qubits: int, pairs: Iterable[Iterable[int]]) -> "CouplingMap":
        edges = set()
        for pair in pairs:
            a, b = pair
            if a == b:
                raise ValidationError(f"coupling edge ({a},{b}) is a self-loop")
            if not (0 <= a < num_qubits and 0 <= b < num_qubits):
                raise ValidationError(f"coupling edge ({a},{b}) references a missing qubit")
            edges.add((min(a, b), max(a, b)))
        return CouplingMap(num_qubits, frozenset(edges))

    def connected(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def neighbors(self, q: int) -> tuple[int, ...]:
        out = [b for a, b in self.edges if a == q] + [a for a, b in self.edges if b == q]
        return tuple(sorted(out))


@dataclass(frozen=True)
class QubitProps:
    t1: float                 # microseconds
    t2: float                 # microseconds
    frequency: float          # GHz
    readout_error: float      # probability
    readout_duration: float   # nanoseconds


@dataclass(frozen=True)
class GateProps:
    error: float
    duration: float           # nanoseconds


@dataclass(frozen=True)
class CalibrationSnapshot:
    machine_name: str
    taken_at: datetime
    basis_gates: tuple[str, ...]
    qubit_props: tuple[QubitProps, ...]
    gate_props: dict[tuple[str, tuple[int, ...]], GateProps]
    flags: tuple[str, ...] = ()

    @property
    def num_qubits(self) -> int:
        return len(self.qubit_props)

    def gate_error(self, name: str, qubits: tuple[int, ...]) -> float | None:
        entry = self.gate_props.get((name, qubits))
        return entry.error if entry is not None else None


def coupling_from_snapshot(snapshot: CalibrationSnapshot) -> CouplingMap:
    """The coupling map implied by which 2q operand pairs are calibrated."""
    pairs = [qubits for (_, qubits) in snapshot.gate_props if len(qubits) == 2]
    return CouplingMap.from_pairs(snapshot.num_qubits, pairs)


class SnapshotLookup(NamedTuple):
    snapshot: CalibrationSnapshot
    stale: bool


@dataclass(frozen=True)
class MachineRecord:
    name: str
    coupling: CouplingMap
    snapshots: tuple[CalibrationSnapshot, ...]
    pending_jobs: int = 0
    online: bool = True

    @property
    def latest(self) -> CalibrationSnapshot:
        return self.snapshots[-1]


def snapshot_at(machine: MachineRecord, at: datetime) -> SnapshotLookup:
    """Latest snapshot taken at or before `at`; if the request predates all
    snapshots, the earliest one is returned flagged stale."""
    if not machine.snapshots:
        raise ValidationError(f"machine {machine.name!r} has no snapshots")
    chosen = None
    for snap in machine.snapshots:
        if snap.taken_at <= at:
            chosen = snap
    if chosen is None:
        return SnapshotLookup(machine.snapshots[0], True)
    return SnapshotLookup(chosen, False)


# -- snapshot validation and files --------------------------------------


def _validate_snapshot(snap: CalibrationSnapshot, coupling: CouplingMap):
    for i, qp in enumerate(snap.qubit_props):
        if not (0.0 <= qp.readout_error <= 1.0):
            raise ValidationError(f"qubit {i}: readout_error out of [0,1]")
        if qp.t1 <= 0 or qp.t2 <= 0 or qp.readout_duration <= 0:
            raise ValidationError(f"qubit {i}: t1/t2/readout_duration must be positive")
    for (name, qubits), gp in snap.gate_props.items():
        if not (0.0 <= gp.error <= 1.0):
            raise ValidationError(f"{name} on {qubits}: error out of [0,1]")
        if gp.duration <= 0:
            raise ValidationError(f"{name} on {qubits}: duration must be positive")
    n = len(snap.qubit_props)
    for name in snap.basis_gates:
        one_q = all((name, (q,)) in snap.gate_props for q in range(n))
        if one_q:
            continue
        covered = all(
            (name, (a, b)) in snap.gate_props and (name, (b, a)) in snap.gate_props
            for a, b in coupling.edges)
        if not covered:
            raise ValidationError(
                f"basis gate {name!r} lacks entries for some qubits or coupling edges")


def _snapshot_from_dict(name: str, payload: dict, coupling: CouplingMap) -> CalibrationSnapshot:
    flags: list[str] = []
    qubits = []
    for i, entry in enumerate(payload["qubits"]):
        t1 = float(entry["t1"])
        if "t2" in entry and entry["t2"] is not None:
            t2 = float(entry["t2"])
        else:
            t2 = t1            # calibration feeds drop fields; default and flag
            flags.append(f"t2_defaulted:q{i}")
        qubits.append(QubitProps(t1, t2, float(entry["frequency"]),
                                 float(entry["readout_error"]),
                                 float(entry["readout_duration"])))
    gate_props = {}
    for entry in payload["gates"]:
        key = (entry["gate"], tuple(int(q) for q in entry["qubits"]))
        gate_props[key] = GateProps(float(entry["error"]), float(entry["duration"]))
    snap = CalibrationSnapshot(
        machine_name=name,
        taken_at=parse_timestamp(payload["taken_at"]),
        basis_gates=tuple(payload["basis_gates"]),
        qubit_props=tuple(qubits),
        gate_props=gate_props,
        flags=tuple(flags),
    )
    _validate_snapshot(snap, coupling)
    return snap


def snapshot_to_dict(snap: CalibrationSnapshot) -> dict:
    return {
        "taken_at": format_timestamp(snap.taken_at),
        "basis_gates": list(snap.basis_gates),
        "qubits": [
            {"t1": qp.t1, "t2": qp.t2, "frequency": qp.frequency,
             "readout_error": qp.readout_error, "readout_duration": qp.readout_duration}
            for qp in snap.qubit_props
        ],
        "gates": [
            {"gate": name, "qubits": list(qubits), "error": gp.error, "duration": gp.duration}
            for (name, qubits), gp in sorted(snap.gate_props.items())
        ],
    }


def snapshot_from_dict(name: str, payload: dict, coupling: CouplingMap) -> CalibrationSnapshot:
    return _snapshot_from_dict(name, payload, coupling)


def machine_from_dict(data: dict) -> MachineRecord:
    if data.get("format") != MACHINE_FORMAT:
        raise ValidationError("not a machine calibration file")
    if data.get("version") != FORMAT_VERSION:
        raise ValidationError(f"unsupported calibration file version {data.get('version')}")
    coupling = CouplingMap.from_pairs(data["coupling"]["num_qubits"],
                                      data["coupling"]["edges"])
    name = data["name"]
    snaps = tuple(_snapshot_from_dict(name, s, coupling) for s in data["snapshots"])
    for earlier, later in zip(snaps, snaps[1:]):
        if earlier.taken_at >= later.taken_at:
            raise ValidationError(f"snapshots of {name!r} are not strictly increasing in time")
    return MachineRecord(name=name, coupling=coupling, snapshots=snaps,
                         pending_jobs=int(data.get("pending_jobs", 0)),
                         online=bool(data.get("online", True)))


def machine_to_dict(machine: MachineRecord) -> dict:
    return {
        "format": MACHINE_FORMAT,
        "version": FORMAT_VERSION,
        "name": machine.name,
        "online": machine.online,
        "pending_jobs": machine.pending_jobs,
        "coupling": {
            "num_qubits": machine.coupling.num_qubits,
            "edges": sorted(list(e) for e in machine.coupling.edges),
        },
        "snapshots": [snapshot_to_dict(s) for s in machine.snapshots],
    }


def load_machine(path: str | Path) -> MachineRecord:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})")
    return machine_from_dict(data)


def save_machine(machine: MachineRecord, path: str | Path):
    Path(path).write_text(json.dumps(machine_to_dict(machine), indent=2, sort_keys=True) + "\n")


def fixtures_dir() -> Path:
    return Path(resources.files("qworkbench") / "fixtures" / "machines")


class MachineRegistry:
    """Read-only name -> record map, loaded once and shared."""

    def __init__(self, machines: Iterable[MachineRecord]):
        self._machines = {m.name: m for m in machines}

    @staticmethod
    def from_dir(path: str | Path | None = None) -> "MachineRegistry":
        root = Path(path) if path is not None else fixtures_dir()
        records = [load_machine(p) for p in sorted(root.glob("*.json"))]
        return MachineRegistry(records)

    def names(self) -> tuple[str, ...]:
        return tuple(sorted(self._machines))

    def get(self, name: str) -> MachineRecord:
        try:
            return self._machines[name]
        except KeyError:
            raise UnknownMachineError(f"unknown machine {name!r}", machine=name)

    def __iter__(self):
        return iter(self._machines.values())


# -- property selectors and queries --------------------------------------


def _parse_selector(selector: str) -> tuple[str, ...]:
    parts = selector.split(".")
    if len(parts) == 2 and parts[0] == "qubit" and parts[1] in QUBIT_PROPERTIES:
        return ("qubit", parts[1])
    if len(parts) == 3 and parts[0] == "gate" and parts[2] in GATE_PROPERTIES:
        return ("gate", parts[1], parts[2])
    raise SelectorError(
        f"bad selector {selector!r}; use qubit.<{'|'.join(QUBIT_PROPERTIES)}> "
        f"or gate.<name>.<{'|'.join(GATE_PROPERTIES)}>", selector=selector)


@dataclass(frozen=True)
class PropertyQuery:
    machines: tuple[str, ...]
    selectors: tuple[str, ...]
    time_range: tuple[datetime, datetime] | None = None
    aggregation: str = "none"

    def __post_init__(self):
        for s in self.selectors:
            _parse_selector(s)
        if self.aggregation not in AGGREGATIONS:
            raise SelectorError(f"bad aggregation {self.aggregation!r}; "
                                f"use one of {', '.join(AGGREGATIONS)}")


def _snapshots_in_range(machine: MachineRecord,
                        time_range: tuple[datetime, datetime] | None):
    if time_range is None:
        return machine.snapshots
    lo, hi = time_range
    return tuple(s for s in machine.snapshots if lo <= s.taken_at <= hi)


def _selector_values(snap: CalibrationSnapshot, parsed: tuple[str, ...]):
    """Yield (index, value) pairs; index is a qubit int or an operand tuple."""
    if parsed[0] == "qubit":
        prop = parsed[1]
        for q, qp in enumerate(snap.qubit_props):
            yield q, getattr(qp, prop)
    else:
        _, gate_name, prop = parsed
        for (name, qubits), gp in sorted(snap.gate_props.items()):
            if name == gate_name:
                index = qubits[0] if len(qubits) == 1 else qubits
                yield index, getattr(gp, prop)


def property_series(machine: MachineRecord, selector: str,
                    time_range: tuple[datetime, datetime] | None = None
                    ) -> dict[int | tuple[int, ...], list[tuple[datetime, float]]]:
    """One (timestamp, value) series per qubit or operand tuple, snapshot order."""
    parsed = _parse_selector(selector)
    series: dict = {}
    for snap in _snapshots_in_range(machine, time_range):
        for index, value in _selector_values(snap, parsed):
            series.setdefault(index, []).append((snap.taken_at, value))
    return series


@dataclass(frozen=True)
class QueryRow:
    machine: str
    selector: str
    index: int | tuple[int, ...]
    timestamp: datetime | None     # None for aggregated rows
    value: float


def run_query(query: PropertyQuery, registry: MachineRegistry) -> list[QueryRow]:
    """Tabular result, deterministically ordered (machine, selector, index, time)."""
    rows: list[QueryRow] = []
    for name in query.machines:
        machine = registry.get(name)
        for selector in query.selectors:
            series = property_series(machine, selector, query.time_range)
            for index in sorted(series, key=lambda i: (i,) if isinstance(i, int) else tuple(i)):
                points = series[index]
                if query.aggregation == "none":
                    rows.extend(QueryRow(name, selector, index, ts, v) for ts, v in points)
                elif points:
                    values = [v for _, v in points]
                    agg = {"min": min, "max": max,
                           "mean": lambda vs: sum(vs) / len(vs)}[query.aggregation]
                    rows.append(QueryRow(name, selector, index, None, agg(values)))
    return rows


# -- saved queries --------------------------------------------------------


def query_to_dict(query: PropertyQuery) -> dict:
    return {
        "format": QUERY_FORMAT,
        "version": FORMAT_VERSION,
        "machines": list(query.machines),
        "selectors": list(query.selectors),
        "time_range": (None if query.time_range is None else
                       [format_timestamp(query.time_range[0]),
                        format_timestamp(query.time_range[1])]),
        "aggregation": query.aggregation,
    }


def query_from_dict(data: dict) -> PropertyQuery:
    if data.get("format") != QUERY_FORMAT:
        raise QueryFileError("not a property-query file")
    if data.get("version") != FORMAT_VERSION:
        raise QueryFileError(f"unsupported query file version {data.get('version')}")
    try:
        time_range = data.get("time_range")
        parsed_range = (None if time_range is None else
                        (parse_timestamp(time_range[0]), parse_timestamp(time_range[1])))
        return PropertyQuery(
            machines=tuple(data["machines"]),
            selectors=tuple(data["selectors"]),
            time_range=parsed_range,
            aggregation=data.get("aggregation", "none"),
        )
    except (KeyError, TypeError) as exc:
        raise QueryFileError(f"malformed query file: {exc}")


def save_query(query: PropertyQuery, path: str | Path):
    Path(path).write_text(json.dumps(query_to_dict(query), indent=2, sort_keys=True) + "\n")


def load_query(path: str | Path) -> PropertyQuery:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise QueryFileError(f"{path}: not valid JSON at line {exc.lineno}, column {exc.colno}")
    return query_from_dict(data)


def query_to_invocation(query: PropertyQuery) -> str:
    """The one-line CLI call equivalent to a saved query (documented grammar)."""
    parts = ["qwb machine query",
             f"--machines {','.join(query.machines)}",
             f"--select {','.join(query.selectors)}"]
    if query.time_range is not None:
        parts.append(f"--from {format_timestamp(query.time_range[0])}")
        parts.append(f"--to {format_timestamp(query.time_range[1])}")
    if query.aggregation != "none":
        parts.append(f"--agg {query.aggregation}")
    return " ".join(parts)
