"""JSON codecs for the wire types shared by the bundle format, the HTTP API,
and the CLI. Dict shapes here are the public contract; keep them stable."""
from __future__ import annotations

from dataclasses import asdict

from .analysis import EspReport, MatchMap
from .circuit import Circuit, VerificationReport, _gate_duration, schedule
from .errors import ValidationError
from .machines import (CalibrationSnapshot, MachineRecord, QueryRow,
                       format_timestamp, snapshot_to_dict)
from .problems import BuildResult, ProblemSpec
from .results import (ContingencyTable, DecodedImage, HeaReport, HeaState,
                      IntegerHistogram, PeriodResult, TruthTableView)
from .simulate import Counts
from .transpile import (Layout, StrategyRow, TranspileMetrics, TranspileOptions,
                        TranspileResult)


def circuit_to_dict(circuit: Circuit, snapshot: CalibrationSnapshot | None = None) -> dict:
    """Drawable circuit structure: gates plus the layer schedule, and per-layer
    durations when a snapshot is supplied (used by the timed animation)."""
    sched = schedule(circuit)
    doc = {
        "name": circuit.name,
        "num_qubits": circuit.num_qubits,
        "num_clbits": circuit.num_clbits,
        "gates": [
            {"id": g.id, "kind": g.kind.value, "qubits": list(g.qubits),
             "clbits": list(g.clbits), "params": list(g.params)}
            for g in circuit.gates
        ],
        "layers": [list(layer) for layer in sched.layers],
    }
    if snapshot is not None:
        durations = []
        for layer in sched.layers:
            durations.append(max((_gate_duration(circuit.gates[gid], snapshot)
                                  for gid in layer), default=0.0))
        doc["layer_durations_ns"] = durations
        doc["duration_ns"] = sum(durations)
    return doc


def counts_to_dict(counts: Counts) -> dict:
    return {"shots": counts.shots, "width": counts.width,
            "entries": dict(sorted(counts.entries.items()))}


def counts_from_dict(data: dict) -> Counts:
    try:
        return Counts(shots=int(data["shots"]), width=int(data["width"]),
                      entries={str(k): int(v) for k, v in data["entries"].items()})
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"malformed counts payload: {exc}")


def options_to_dict(options: TranspileOptions) -> dict:
    return {
        "optimization_level": options.optimization_level,
        "seed": options.seed,
        "layout_method": options.layout_method,
        "routing_method": options.routing_method,
        "basis_override": (list(options.basis_override)
                           if options.basis_override else None),
    }


def options_from_dict(data: dict) -> TranspileOptions:
    basis = data.get("basis_override")
    return TranspileOptions(
        optimization_level=int(data.get("optimization_level", 1)),
        seed=int(data.get("seed", 0)),
        layout_method=data.get("layout_method", "trivial"),
        routing_method=data.get("routing_method", "shortest_path"),
        basis_override=tuple(basis) if basis else None,
    )


def layout_to_dict(layout: Layout) -> dict:
    return {"initial": list(layout.initial), "final": list(layout.final)}


def layout_from_dict(data: dict) -> Layout:
    return Layout(tuple(int(q) for q in data["initial"]),
                  tuple(int(q) for q in data["final"]))


def metrics_to_dict(metrics: TranspileMetrics) -> dict:
    return asdict(metrics)


def metrics_from_dict(data: dict) -> TranspileMetrics:
    return TranspileMetrics(
        gate_count=int(data["gate_count"]),
        layer_count=int(data["layer_count"]),
        duration_ns=float(data["duration_ns"]),
        esp_total=float(data["esp_total"]),
    )


def transpile_result_to_dict(result: TranspileResult, physical_qasm: str) -> dict:
    return {
        "physical_qasm": physical_qasm,
        "layout": layout_to_dict(result.layout),
        "provenance": list(result.provenance),
        "options": options_to_dict(result.options),
        "metrics": metrics_to_dict(result.metrics),
    }


def strategy_rows_to_dict(rows: list[StrategyRow], qasms: list[str]) -> list[dict]:
    return [
        {
            "index": row.index,
            "gate_count": row.gate_count,
            "layer_count": row.layer_count,
            "duration_ns": row.duration_ns,
            "esp_total": row.esp_total,
            "result": transpile_result_to_dict(row.result, qasm),
        }
        for row, qasm in zip(rows, qasms)
    ]


def problem_to_dict(spec: ProblemSpec) -> dict:
    return {
        "kind": spec.kind,
        "n": spec.n,
        "m": spec.m,
        "table": list(spec.table) if spec.table is not None else None,
        "base": spec.base,
        "modulus": spec.modulus,
        "width": spec.width,
        "height": spec.height,
        "pixels": list(spec.pixels) if spec.pixels is not None else None,
        "auto_qubits": spec.auto_qubits,
        "manual_qubit_map": (list(spec.manual_qubit_map)
                             if spec.manual_qubit_map is not None else None),
    }


def problem_from_dict(data: dict) -> ProblemSpec:
    return ProblemSpec(
        kind=data["kind"],
        n=data.get("n"),
        m=data.get("m"),
        table=tuple(data["table"]) if data.get("table") is not None else None,
        base=data.get("base"),
        modulus=data.get("modulus"),
        width=data.get("width"),
        height=data.get("height"),
        pixels=tuple(data["pixels"]) if data.get("pixels") is not None else None,
        auto_qubits=bool(data.get("auto_qubits", True)),
        manual_qubit_map=(tuple(data["manual_qubit_map"])
                          if data.get("manual_qubit_map") is not None else None),
    ).validated()


def build_result_to_dict(result: BuildResult, qasm: str) -> dict:
    return {
        "qasm": qasm,
        "qubit_roles": {k: list(v) for k, v in result.qubit_roles.items()},
        "clbit_roles": {k: list(v) for k, v in result.clbit_roles.items()},
        "normalization": result.normalization,
        "problem": problem_to_dict(result.problem),
    }


def verification_to_dict(report: VerificationReport) -> dict:
    return {
        "ok": report.ok,
        "issues": [
            {"severity": i.severity, "code": i.code, "message": i.message, "where": i.where}
            for i in report.issues
        ],
    }


def esp_report_to_dict(report: EspReport) -> dict:
    return {
        "per_layer": list(report.per_layer),
        "cumulative_by_layer": list(report.cumulative_by_layer),
        "per_qubit_cumulative": [list(row) for row in report.per_qubit_cumulative],
        "total": report.total,
        "total_without_readout": report.total_without_readout,
        "measured_qubits": list(report.measured_qubits),
    }


def esp_report_from_dict(data: dict) -> EspReport:
    return EspReport(
        per_layer=tuple(data["per_layer"]),
        cumulative_by_layer=tuple(data["cumulative_by_layer"]),
        per_qubit_cumulative=tuple(tuple(row) for row in data["per_qubit_cumulative"]),
        total=float(data["total"]),
        total_without_readout=float(data["total_without_readout"]),
        measured_qubits=tuple(data["measured_qubits"]),
    )


def match_map_to_dict(mm: MatchMap) -> dict:
    return {
        "method": mm.method,
        "assigned": {str(k): list(v) for k, v in mm.assigned.items()},
        "unattributed": list(mm.unattributed),
    }


def hea_report_to_dict(report: HeaReport) -> dict:
    # per-trial samples stay runtime-only; the summary is the contract
    return {
        "trials": report.trials,
        "seed": report.seed,
        "shots": report.shots,
        "width": report.width,
        "flip_probs": list(report.flip_probs),
        "states": {
            key: {"measured": s.measured, "mean": s.mean, "sd": s.sd,
                  "ci_low": s.ci_low, "ci_high": s.ci_high,
                  "differentiated": s.differentiated}
            for key, s in sorted(report.states.items())
        },
    }


def hea_report_from_dict(data: dict) -> HeaReport:
    states = {
        key: HeaState(measured=int(s["measured"]), mean=float(s["mean"]),
                      sd=float(s["sd"]), ci_low=float(s["ci_low"]),
                      ci_high=float(s["ci_high"]),
                      differentiated=bool(s["differentiated"]))
        for key, s in data["states"].items()
    }
    return HeaReport(trials=int(data["trials"]), seed=int(data["seed"]),
                     shots=int(data["shots"]), width=int(data["width"]),
                     flip_probs=tuple(data["flip_probs"]), states=states, samples={})


def histogram_to_dict(hist: IntegerHistogram) -> dict:
    return {
        "width": hist.width,
        "shots": hist.shots,
        "rows": [
            {"bitstring": r.bitstring, "value": r.value, "count": r.count,
             "frequency": r.frequency}
            for r in hist.rows
        ],
    }


def image_to_dict(image: DecodedImage) -> dict:
    return {
        "width": image.width,
        "height": image.height,
        "pixels": list(image.pixels),
        "normalization": image.normalization,
        "overflow_mass": image.overflow_mass,
    }


def truth_table_to_dict(view: TruthTableView) -> dict:
    return {
        "input_bits": list(view.input_bits),
        "output_bits": list(view.output_bits),
        "rows": [
            {"input": r.input_pattern,
             "outputs": [{"output": o, "count": c} for o, c in r.outputs]}
            for r in view.rows
        ],
    }


def contingency_to_dict(table: ContingencyTable) -> dict:
    return {
        "row_bits": list(table.row_bits),
        "col_bits": list(table.col_bits),
        "row_patterns": list(table.row_patterns),
        "col_patterns": list(table.col_patterns),
        "cells": [list(row) for row in table.cells],
        "row_marginals": list(table.row_marginals),
        "col_marginals": list(table.col_marginals),
        "shots": table.shots,
    }


def period_to_dict(result: PeriodResult) -> dict:
    return {
        "found": result.found,
        "period": result.period,
        "factors": list(result.factors) if result.factors else None,
        "candidates": list(result.candidates),
    }


def query_rows_to_dict(rows: list[QueryRow]) -> list[dict]:
    return [
        {
            "machine": r.machine,
            "selector": r.selector,
            "index": list(r.index) if isinstance(r.index, tuple) else r.index,
            "timestamp": format_timestamp(r.timestamp) if r.timestamp else None,
            "value": r.value,
        }
        for r in rows
    ]


def machine_summary(machine: MachineRecord) -> dict:
    latest = machine.latest
    two_q_errors = [gp.error for (name, qs), gp in latest.gate_props.items()
                    if len(qs) == 2]
    return {
        "name": machine.name,
        "num_qubits": machine.coupling.num_qubits,
        "online": machine.online,
        "pending_jobs": machine.pending_jobs,
        "snapshot_count": len(machine.snapshots),
        "latest_snapshot": format_timestamp(latest.taken_at),
        "basis_gates": list(latest.basis_gates),
        "mean_readout_error": (sum(q.readout_error for q in latest.qubit_props)
                               / len(latest.qubit_props)),
        "mean_2q_error": (sum(two_q_errors) / len(two_q_errors)) if two_q_errors else None,
    }


def machine_detail(machine: MachineRecord, snapshot: CalibrationSnapshot,
                   stale: bool) -> dict:
    # chip view statistic: readout error per qubit, mean 2q error per edge
    edge_errors = {}
    for (name, qs), gp in snapshot.gate_props.items():
        if len(qs) == 2:
            edge = tuple(sorted(qs))
            edge_errors.setdefault(edge, []).append(gp.error)
    return {
        "name": machine.name,
        "online": machine.online,
        "pending_jobs": machine.pending_jobs,
        "coupling": {
            "num_qubits": machine.coupling.num_qubits,
            "edges": sorted(list(e) for e in machine.coupling.edges),
        },
        "snapshot": snapshot_to_dict(snapshot),
        "snapshot_stale": stale,
        "snapshot_times": [format_timestamp(s.taken_at) for s in machine.snapshots],
        "chip_view": {
            "qubit_readout_error": [q.readout_error for q in snapshot.qubit_props],
            "edge_mean_error": {f"{a}-{b}": sum(v) / len(v)
                                for (a, b), v in sorted(edge_errors.items())},
        },
    }
