// Contract tests: the machine explorer renders recorded API payloads with
// zero recomputation — every displayed value must be strictly equal to a
// field of the fixture.
import assert from "node:assert/strict";
import { test } from "node:test";

import { chipView, gateTable, qubitTable, seriesLines, summaryCards } from "../src/machineExplorer";
import type { DocsResponse, MachineDetail, MachineSummary, SeriesResponse } from "../src/types";
import { fixture } from "./helpers";

const machines = fixture<MachineSummary[]>("machines.json");
const vigo = fixture<MachineDetail>("machine_vigo.json");

test("summary cards carry the API values verbatim", () => {
  const cards = summaryCards(machines);
  assert.equal(cards.length, machines.length);
  for (let i = 0; i < cards.length; i++) {
    assert.equal(cards[i].name, machines[i].name);
    assert.equal(cards[i].qubits, machines[i].num_qubits);
    assert.equal(cards[i].meanReadoutError, machines[i].mean_readout_error);
    assert.equal(cards[i].mean2qError, machines[i].mean_2q_error);
    assert.equal(cards[i].latest, machines[i].latest_snapshot);
  }
});

test("chip nodes are colored by the served readout errors", () => {
  const chip = chipView(vigo);
  assert.equal(chip.nodes.length, vigo.coupling.num_qubits);
  chip.nodes.forEach((node, q) => {
    assert.equal(node.qubit, q);
    assert.equal(node.readoutError, vigo.chip_view.qubit_readout_error[q]);
  });
});

test("chip edges take the served per-edge mean error", () => {
  const chip = chipView(vigo);
  assert.equal(chip.edges.length, vigo.coupling.edges.length);
  for (const edge of chip.edges) {
    const key = `${Math.min(edge.a, edge.b)}-${Math.max(edge.a, edge.b)}`;
    assert.equal(edge.meanError, vigo.chip_view.edge_mean_error[key]);
  }
});

test("qubit table is a pure projection of the snapshot", () => {
  const rows = qubitTable(vigo);
  assert.equal(rows.length, vigo.snapshot.qubits.length);
  rows.forEach((row, q) => {
    const source = vigo.snapshot.qubits[q];
    assert.equal(row.t1, source.t1);
    assert.equal(row.t2, source.t2);
    assert.equal(row.frequency, source.frequency);
    assert.equal(row.readoutError, source.readout_error);
    assert.equal(row.readoutDuration, source.readout_duration);
  });
});

test("gate table is a pure projection of the snapshot", () => {
  const rows = gateTable(vigo);
  assert.equal(rows.length, vigo.snapshot.gates.length);
  rows.forEach((row, i) => {
    assert.equal(row.error, vigo.snapshot.gates[i].error);
    assert.equal(row.duration, vigo.snapshot.gates[i].duration);
  });
});

test("time series lines preserve every served point", () => {
  for (const name of ["series_t1.json", "series_cx_error.json"]) {
    const response = fixture<SeriesResponse>(name);
    const lines = seriesLines(response);
    assert.equal(lines.length, Object.keys(response.series).length);
    for (const line of lines) {
      const source = response.series[line.key];
      assert.equal(line.points.length, source.length);
      line.points.forEach((point, i) => {
        assert.equal(point.timestamp, source[i][0]);
        assert.equal(point.value, source[i][1]);
      });
    }
  }
});

test("in-situ documentation text is served, not embedded", () => {
  const esp = fixture<DocsResponse>("docs_esp.json");
  assert.equal(esp.found, true);
  assert.match(esp.entry!.body, /product of the success rates/);
  const t1 = fixture<DocsResponse>("docs_t1_t2.json");
  assert.match(t1.entry!.body, /hold its state and phase/);
});
