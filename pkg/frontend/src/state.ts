// Dashboard view state and its transitions. The state never stores derived
// domain numbers; it points at API payloads and UI selections.
import { AnimationClock } from "./animation";
import type { GateSelection } from "./circuitViewer";
import type { CompareResponse, JobDoc, MachineDetail } from "./types";

export type DecoderTab = "histogram" | "integers" | "truthtable" | "image" | "contingency";

export interface ViewState {
  machine: MachineDetail | null;
  snapshotTime: string | null;
  compare: CompareResponse | null;
  selectedStrategies: number[];
  selection: GateSelection | null;
  clock: AnimationClock | null;
  activeStrategy: number;
  job: JobDoc | null;
  decoder: DecoderTab;
}

export function createViewState(): ViewState {
  return {
    machine: null,
    snapshotTime: null,
    compare: null,
    selectedStrategies: [],
    selection: null,
    clock: null,
    activeStrategy: 0,
    job: null,
    decoder: "histogram",
  };
}

export function loadCompare(state: ViewState, compare: CompareResponse): void {
  state.compare = compare;
  state.selectedStrategies = compare.rows.map((r) => r.index);
  state.selection = null;
  state.activeStrategy = 0;
  syncClock(state);
}

export function setActiveStrategy(state: ViewState, strategy: number): void {
  if (!state.compare || strategy < 0 || strategy >= state.compare.rows.length) return;
  state.activeStrategy = strategy;
  syncClock(state);
}

function syncClock(state: ViewState): void {
  const row = state.compare?.rows[state.activeStrategy];
  state.clock = row
    ? new AnimationClock(row.result.physical.layer_durations_ns ?? [])
    : null;
}

/** Select a gate; physical selections must resolve within that strategy's
 * match map (routing overhead is a valid, flagged selection). */
export function selectGate(state: ViewState, selection: GateSelection | null): void {
  if (selection && selection.kind === "physical") {
    const row = state.compare?.rows[selection.strategy];
    if (!row) return;
    const known =
      row.result.match.unattributed.includes(selection.gateId) ||
      Object.values(row.result.match.assigned).some((ids) => ids.includes(selection.gateId));
    if (!known) return;
  }
  state.selection = selection;
}

export function loadJob(state: ViewState, job: JobDoc): void {
  state.job = job;
  state.decoder = "histogram";
}
