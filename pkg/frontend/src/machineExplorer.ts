// Machine explorer view models: chip graph, property tables, time series.
// Chip layout positions are presentation geometry; the error statistics that
// color the chip come verbatim from the API's chip_view.
import type { MachineDetail, MachineSummary, SeriesResponse } from "./types";

export interface ChipNode {
  qubit: number;
  readoutError: number;
  x: number;
  y: number;
}

export interface ChipEdge {
  a: number;
  b: number;
  meanError: number;
}

export interface ChipView {
  nodes: ChipNode[];
  edges: ChipEdge[];
}

/** Simple grid placement: qubits laid out on a near-square lattice. */
export function chipView(detail: MachineDetail): ChipView {
  const n = detail.coupling.num_qubits;
  const columns = Math.ceil(Math.sqrt(n));
  const nodes = detail.chip_view.qubit_readout_error.map((readoutError, qubit) => ({
    qubit,
    readoutError,
    x: qubit % columns,
    y: Math.floor(qubit / columns),
  }));
  const edges = detail.coupling.edges.map(([a, b]) => ({
    a,
    b,
    meanError: detail.chip_view.edge_mean_error[`${Math.min(a, b)}-${Math.max(a, b)}`],
  }));
  return { nodes, edges };
}

export interface QubitRow {
  qubit: number;
  t1: number;
  t2: number;
  frequency: number;
  readoutError: number;
  readoutDuration: number;
}

export function qubitTable(detail: MachineDetail): QubitRow[] {
  return detail.snapshot.qubits.map((q, qubit) => ({
    qubit,
    t1: q.t1,
    t2: q.t2,
    frequency: q.frequency,
    readoutError: q.readout_error,
    readoutDuration: q.readout_duration,
  }));
}

export interface GateRow {
  gate: string;
  operands: string;
  error: number;
  duration: number;
}

export function gateTable(detail: MachineDetail): GateRow[] {
  return detail.snapshot.gates.map((g) => ({
    gate: g.gate,
    operands: g.qubits.join(","),
    error: g.error,
    duration: g.duration,
  }));
}

export interface SummaryCard {
  name: string;
  qubits: number;
  online: boolean;
  pendingJobs: number;
  latest: string;
  basisGates: string;
  meanReadoutError: number;
  mean2qError: number | null;
}

export function summaryCards(machines: MachineSummary[]): SummaryCard[] {
  return machines.map((m) => ({
    name: m.name,
    qubits: m.num_qubits,
    online: m.online,
    pendingJobs: m.pending_jobs,
    latest: m.latest_snapshot,
    basisGates: m.basis_gates.join(" "),
    meanReadoutError: m.mean_readout_error,
    mean2qError: m.mean_2q_error,
  }));
}

export interface SeriesLine {
  key: string;
  points: { timestamp: string; value: number }[];
}

/** One line per qubit or operand pair, points in snapshot order. */
export function seriesLines(response: SeriesResponse): SeriesLine[] {
  return Object.entries(response.series)
    .sort(([a], [b]) => a.localeCompare(b, undefined, { numeric: true }))
    .map(([key, points]) => ({
      key,
      points: points.map(([timestamp, value]) => ({ timestamp, value })),
    }));
}
