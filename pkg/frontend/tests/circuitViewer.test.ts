// The circuit viewer's comparison table, diagrams, cross-highlighting, and
// timed animation, all driven by the recorded 4-strategy comparison.
import assert from "node:assert/strict";
import { test } from "node:test";

import { AnimationClock, DEFAULT_SLOWDOWN } from "../src/animation";
import {
  chipOverlay, diagramColumns, espSparkline, resolveHighlight, summaryTable,
} from "../src/circuitViewer";
import type { CompareResponse } from "../src/types";
import { fixture } from "./helpers";

const compare = fixture<CompareResponse>("compare_toffoli.json");

test("fixture covers four strategies of the same logical circuit", () => {
  assert.equal(compare.rows.length, 4);
  assert.equal(compare.logical.gates.filter((g) => g.kind === "ccx").length, 1);
});

test("summary table carries the served metrics verbatim", () => {
  const rows = summaryTable(compare);
  rows.forEach((row, i) => {
    const source = compare.rows[i];
    assert.equal(row.index, source.index);
    assert.equal(row.gateCount, source.gate_count);
    assert.equal(row.layerCount, source.layer_count);
    assert.equal(row.durationNs, source.duration_ns);
    assert.equal(row.espTotal, source.esp_total);
    assert.equal(row.level, source.result.options.optimization_level);
    assert.equal(row.seed, source.result.options.seed);
  });
});

test("diagram columns mirror the served layer schedule", () => {
  for (const row of compare.rows) {
    const columns = diagramColumns(row.result.physical, row.result.match);
    assert.equal(columns.length, row.result.physical.layers.length);
    columns.forEach((column, layer) => {
      assert.deepEqual(
        column.cells.map((c) => c.gateId),
        row.result.physical.layers[layer],
      );
    });
    const flagged = columns.flatMap((c) => c.cells.filter((x) => x.unattributed))
      .map((c) => c.gateId).sort((a, b) => a - b);
    assert.deepEqual(flagged, [...row.result.match.unattributed].sort((a, b) => a - b));
  }
});

test("clicking a logical gate lights its physical gates in every strategy", () => {
  const matches = compare.rows.map((r) => r.result.match);
  const logicalCcx = compare.logical.gates.find((g) => g.kind === "ccx")!;
  const highlight = resolveHighlight({ kind: "logical", gateId: logicalCcx.id }, matches);
  assert.deepEqual(highlight.logical, [logicalCcx.id]);
  compare.rows.forEach((row, strategy) => {
    assert.deepEqual(
      highlight.physicalByStrategy.get(strategy),
      row.result.match.assigned[String(logicalCcx.id)],
    );
    assert.ok(highlight.physicalByStrategy.get(strategy)!.length >= 6);
  });
});

test("cross-highlight is symmetric for every attributed physical gate", () => {
  const matches = compare.rows.map((r) => r.result.match);
  compare.rows.forEach((row, strategy) => {
    for (const [logicalId, physicalIds] of Object.entries(row.result.match.assigned)) {
      for (const physicalId of physicalIds) {
        const highlight = resolveHighlight(
          { kind: "physical", strategy, gateId: physicalId }, matches);
        assert.deepEqual(highlight.logical, [Number(logicalId)]);
        assert.deepEqual(highlight.physicalByStrategy.get(strategy), physicalIds);
        assert.equal(highlight.unattributed, false);
      }
    }
  });
});

test("routing overhead renders unattributed instead of crashing", () => {
  const matches = compare.rows.map((r) => r.result.match);
  const routed = compare.rows
    .map((row, strategy) => ({ strategy, ids: row.result.match.unattributed }))
    .find((entry) => entry.ids.length > 0);
  assert.ok(routed, "fixture should contain at least one routed strategy");
  const highlight = resolveHighlight(
    { kind: "physical", strategy: routed!.strategy, gateId: routed!.ids[0] }, matches);
  assert.equal(highlight.unattributed, true);
  assert.deepEqual(highlight.logical, []);
});

test("esp sparklines pass the served series through", () => {
  for (const row of compare.rows) {
    const perLayer = espSparkline(row.result.esp.per_layer);
    perLayer.forEach((point, i) => {
      assert.equal(point.value, row.result.esp.per_layer[i]);
    });
    const cumulative = espSparkline(row.result.esp.cumulative_by_layer);
    cumulative.forEach((point, i) => {
      assert.equal(point.value, row.result.esp.cumulative_by_layer[i]);
    });
  }
});

test("animation clock advances by served layer durations and stays bounded", () => {
  const durations = compare.rows[0].result.physical.layer_durations_ns!;
  const clock = new AnimationClock(durations);
  const total = durations.reduce((a, b) => a + b, 0);
  assert.equal(clock.total, total);
  assert.equal(clock.scale, DEFAULT_SLOWDOWN);

  clock.play();
  let previous = clock.clockNs;
  for (let i = 0; i < 10_000 && clock.playing; i++) {
    clock.tick(16);
    assert.ok(clock.clockNs >= previous, "clock must be monotone while playing");
    assert.ok(clock.clockNs <= clock.total, "clock must never exceed the total");
    previous = clock.clockNs;
  }
  assert.equal(clock.clockNs, clock.total);     // end state: everything dimmed
  assert.equal(clock.atEnd, true);
  assert.equal(clock.finishedLayers(), durations.length);
});

test("default slowdown renders 300 ns over 3 s of wall time", () => {
  const clock = new AnimationClock([300]);
  clock.play();
  clock.tick(1500);
  assert.ok(Math.abs(clock.clockNs - 150) < 1e-9);
  clock.tick(1500);
  assert.equal(clock.clockNs, 300);
});

test("active layer walks the schedule as the clock advances", () => {
  const durations = [100, 200, 50];
  const clock = new AnimationClock(durations);
  clock.seek(0);
  assert.equal(clock.activeLayer(), 0);
  clock.seek(150);
  assert.equal(clock.activeLayer(), 1);
  clock.seek(325);
  assert.equal(clock.activeLayer(), 2);
  clock.seek(10_000);
  assert.equal(clock.clockNs, 350);
});

test("chip overlay shows exactly the active layer's gates on their qubits", () => {
  const row = compare.rows[0];
  const layer = Math.min(1, row.result.physical.layers.length - 1);
  const gates = chipOverlay(row, layer);
  assert.deepEqual(
    gates.map((g) => g.gateId),
    row.result.physical.layers[layer],
  );
  for (const gate of gates) {
    const source = row.result.physical.gates.find((g) => g.id === gate.gateId)!;
    assert.deepEqual(gate.qubits, source.qubits);
  }
  assert.deepEqual(chipOverlay(row, -1), []);
});
