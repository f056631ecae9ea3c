// Payload shapes of the workbench HTTP API. The dashboard treats every field
// as opaque truth: values flow from these objects to the screen unchanged.

export interface MachineSummary {
  name: string;
  num_qubits: number;
  online: boolean;
  pending_jobs: number;
  snapshot_count: number;
  latest_snapshot: string;
  basis_gates: string[];
  mean_readout_error: number;
  mean_2q_error: number | null;
}

export interface QubitProps {
  t1: number;
  t2: number;
  frequency: number;
  readout_error: number;
  readout_duration: number;
}

export interface GatePropsEntry {
  gate: string;
  qubits: number[];
  error: number;
  duration: number;
}

export interface SnapshotDoc {
  taken_at: string;
  basis_gates: string[];
  qubits: QubitProps[];
  gates: GatePropsEntry[];
}

export interface MachineDetail {
  name: string;
  online: boolean;
  pending_jobs: number;
  coupling: { num_qubits: number; edges: number[][] };
  snapshot: SnapshotDoc;
  snapshot_stale: boolean;
  snapshot_times: string[];
  chip_view: {
    qubit_readout_error: number[];
    edge_mean_error: Record<string, number>;
  };
}

export interface SeriesResponse {
  machine: string;
  selector: string;
  series: Record<string, [string, number][]>;
}

export interface DocsResponse {
  found: boolean;
  entry: { key: string; title: string; body: string; related: string[] } | null;
  terms?: string[];
}

export interface GateDoc {
  id: number;
  kind: string;
  qubits: number[];
  clbits: number[];
  params: number[];
}

export interface CircuitDoc {
  name: string;
  num_qubits: number;
  num_clbits: number;
  gates: GateDoc[];
  layers: number[][];
  layer_durations_ns?: number[];
  duration_ns?: number;
}

export interface TranspileOptionsDoc {
  optimization_level: number;
  seed: number;
  layout_method: string;
  routing_method: string;
  basis_override: string[] | null;
}

export interface MetricsDoc {
  gate_count: number;
  layer_count: number;
  duration_ns: number;
  esp_total: number;
}

export interface EspDoc {
  per_layer: number[];
  cumulative_by_layer: number[];
  per_qubit_cumulative: number[][];
  total: number;
  total_without_readout: number;
  measured_qubits: number[];
}

export interface MatchDoc {
  method: string;
  assigned: Record<string, number[]>;
  unattributed: number[];
}

export interface TranspileResultDoc {
  physical_qasm: string;
  layout: { initial: number[]; final: number[] };
  provenance: (number | string)[];
  options: TranspileOptionsDoc;
  metrics: MetricsDoc;
  physical: CircuitDoc;
  esp: EspDoc;
  match: MatchDoc;
}

export interface CompareRow {
  index: number;
  gate_count: number;
  layer_count: number;
  duration_ns: number;
  esp_total: number;
  result: TranspileResultDoc;
}

export interface CompareResponse {
  logical: CircuitDoc;
  rows: CompareRow[];
}

export interface JobDoc {
  job_id: string;
  created_at: string;
  machine_name: string;
  problem: { kind: string; [key: string]: unknown } | null;
  normalization: number | null;
  run: { shots: number; seed: number; noise: string };
  counts: { shots: number; width: number; states: number; stream: string; chunk_size: number };
  logical_qasm: string;
  physical_qasm: string;
  metrics: MetricsDoc;
  calibration: SnapshotDoc;
}

export interface ChunkRecord {
  job_id: string;
  index: number;
  total: number;
  entries: Record<string, number>;
  terminal: boolean;
}

export interface HeaStateDoc {
  measured: number;
  mean: number;
  sd: number;
  ci_low: number;
  ci_high: number;
  differentiated: boolean;
}

export interface HeaDoc {
  trials: number;
  seed: number;
  shots: number;
  width: number;
  flip_probs: number[];
  states: Record<string, HeaStateDoc>;
}

export interface HistogramRowDoc {
  bitstring: string;
  value: number;
  count: number;
  frequency: number;
}

export interface HistogramDoc {
  width: number;
  shots: number;
  rows: HistogramRowDoc[];
}

export interface ImageDoc {
  width: number;
  height: number;
  pixels: number[];
  normalization: number;
  overflow_mass: number;
}

export interface TruthTableDoc {
  input_bits: number[];
  output_bits: number[];
  rows: { input: string; outputs: { output: string; count: number }[] }[];
}

export interface ContingencyDoc {
  row_bits: number[];
  col_bits: number[];
  row_patterns: string[];
  col_patterns: string[];
  cells: number[][];
  row_marginals: number[];
  col_marginals: number[];
  shots: number;
}
