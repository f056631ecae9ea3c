// Circuit comparison view models: strategy summary table, layered diagrams,
// cross-highlighting through the match maps, ESP sparklines, and the chip
// overlay for the active animation layer. Every number shown comes straight
// from the compare response.
import type { CircuitDoc, CompareResponse, CompareRow, MatchDoc } from "./types";

export interface SummaryRow {
  index: number;
  level: number;
  seed: number;
  layout: string;
  gateCount: number;
  layerCount: number;
  durationNs: number;
  espTotal: number;
}

export function summaryTable(compare: CompareResponse): SummaryRow[] {
  return compare.rows.map((row) => ({
    index: row.index,
    level: row.result.options.optimization_level,
    seed: row.result.options.seed,
    layout: row.result.options.layout_method,
    gateCount: row.gate_count,
    layerCount: row.layer_count,
    durationNs: row.duration_ns,
    espTotal: row.esp_total,
  }));
}

export interface DiagramCell {
  gateId: number;
  kind: string;
  qubits: number[];
  clbits: number[];
  params: number[];
  unattributed: boolean;
}

export interface DiagramColumn {
  layer: number;
  cells: DiagramCell[];
}

/** One column per layer, mirroring the schedule the engine computed. */
export function diagramColumns(circuit: CircuitDoc, match?: MatchDoc): DiagramColumn[] {
  const routing = new Set(match?.unattributed ?? []);
  const byId = new Map(circuit.gates.map((g) => [g.id, g]));
  return circuit.layers.map((ids, layer) => ({
    layer,
    cells: ids.map((id) => {
      const gate = byId.get(id)!;
      return {
        gateId: gate.id,
        kind: gate.kind,
        qubits: gate.qubits,
        clbits: gate.clbits,
        params: gate.params,
        unattributed: routing.has(gate.id),
      };
    }),
  }));
}

export type GateSelection =
  | { kind: "logical"; gateId: number }
  | { kind: "physical"; strategy: number; gateId: number };

export interface Highlight {
  logical: number[];
  physicalByStrategy: Map<number, number[]>;
  unattributed: boolean;
}

function originOf(match: MatchDoc, physicalId: number): number | null {
  for (const [logicalId, physicalIds] of Object.entries(match.assigned)) {
    if (physicalIds.includes(physicalId)) return Number(logicalId);
  }
  return null;
}

/** Cross-highlight resolution. Selecting a logical gate lights its physical
 * realization in every strategy; selecting any physical gate lights exactly
 * its logical origin and that origin's siblings everywhere (symmetric).
 * Routing overhead gets the unattributed style instead of a crash. */
export function resolveHighlight(
  selection: GateSelection | null,
  matches: MatchDoc[],
): Highlight {
  const empty: Highlight = { logical: [], physicalByStrategy: new Map(), unattributed: false };
  if (selection === null) return empty;
  let logicalId: number | null;
  if (selection.kind === "logical") {
    logicalId = selection.gateId;
  } else {
    const match = matches[selection.strategy];
    if (!match) return empty;
    logicalId = originOf(match, selection.gateId);
    if (logicalId === null) {
      // routing overhead: highlight just the selected gate, flagged
      return {
        logical: [],
        physicalByStrategy: new Map([[selection.strategy, [selection.gateId]]]),
        unattributed: true,
      };
    }
  }
  const physical = new Map<number, number[]>();
  matches.forEach((match, strategy) => {
    physical.set(strategy, match.assigned[String(logicalId)] ?? []);
  });
  return { logical: [logicalId], physicalByStrategy: physical, unattributed: false };
}

export interface SparklinePoint {
  layer: number;
  value: number;   // verbatim ESP value; y-scaling happens at draw time
}

export function espSparkline(values: number[]): SparklinePoint[] {
  return values.map((value, layer) => ({ layer, value }));
}

export interface ChipGate {
  gateId: number;
  kind: string;
  qubits: number[];
}

/** Gates of the active layer, placed on physical qubits for the chip view. */
export function chipOverlay(row: CompareRow, activeLayer: number): ChipGate[] {
  if (activeLayer < 0 || activeLayer >= row.result.physical.layers.length) return [];
  const byId = new Map(row.result.physical.gates.map((g) => [g.id, g]));
  return row.result.physical.layers[activeLayer].map((id) => {
    const gate = byId.get(id)!;
    return { gateId: gate.id, kind: gate.kind, qubits: gate.qubits };
  });
}
