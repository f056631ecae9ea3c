// View-state invariants: selections resolve within the active match maps and
// the animation clock tracks the active strategy.
import assert from "node:assert/strict";
import { test } from "node:test";

import { createViewState, loadCompare, selectGate, setActiveStrategy } from "../src/state";
import type { CompareResponse } from "../src/types";
import { fixture } from "./helpers";

const compare = fixture<CompareResponse>("compare_toffoli.json");

test("loading a comparison arms the clock for the first strategy", () => {
  const state = createViewState();
  loadCompare(state, compare);
  assert.equal(state.activeStrategy, 0);
  assert.ok(state.clock);
  const durations = compare.rows[0].result.physical.layer_durations_ns!;
  assert.equal(state.clock!.total, durations.reduce((a, b) => a + b, 0));
});

test("switching strategies swaps the clock and resets it", () => {
  const state = createViewState();
  loadCompare(state, compare);
  state.clock!.seek(state.clock!.total);
  setActiveStrategy(state, 2);
  assert.equal(state.activeStrategy, 2);
  assert.equal(state.clock!.clockNs, 0);
  setActiveStrategy(state, 99);          // ignored: out of range
  assert.equal(state.activeStrategy, 2);
});

test("physical selections must resolve in the strategy's match map", () => {
  const state = createViewState();
  loadCompare(state, compare);
  const match = compare.rows[1].result.match;
  const attributed = Object.values(match.assigned).flat()[0];
  selectGate(state, { kind: "physical", strategy: 1, gateId: attributed });
  assert.deepEqual(state.selection, { kind: "physical", strategy: 1, gateId: attributed });

  selectGate(state, { kind: "physical", strategy: 1, gateId: 10_000 });
  assert.deepEqual(state.selection,      // unknown gate id: selection unchanged
    { kind: "physical", strategy: 1, gateId: attributed });

  if (match.unattributed.length > 0) {
    selectGate(state, { kind: "physical", strategy: 1, gateId: match.unattributed[0] });
    assert.deepEqual(state.selection,
      { kind: "physical", strategy: 1, gateId: match.unattributed[0] });
  }
});

test("logical selection and clearing", () => {
  const state = createViewState();
  loadCompare(state, compare);
  selectGate(state, { kind: "logical", gateId: 0 });
  assert.deepEqual(state.selection, { kind: "logical", gateId: 0 });
  selectGate(state, null);
  assert.equal(state.selection, null);
});
