// Result viewer contracts: the job header, decoder tabs, paging, and the three
// error-adjustment regimes, rendered from recorded fixtures only.
import assert from "node:assert/strict";
import { test } from "node:test";

import {
  TOP_K, contingencyView, heaOverlay, histogramPage, imageView, jobHeader,
  scaleTo, truthTableRows,
} from "../src/resultViewer";
import type {
  ContingencyDoc, HeaDoc, HistogramDoc, ImageDoc, JobDoc, TruthTableDoc,
} from "../src/types";
import { fixture } from "./helpers";

test("job header fields come straight from the job document", () => {
  const job = fixture<JobDoc>("job_regime_a.json");
  const header = jobHeader(job);
  assert.equal(header.jobId, job.job_id);
  assert.equal(header.machine, job.machine_name);
  assert.equal(header.shots, job.run.shots);
  assert.equal(header.seed, job.run.seed);
  assert.equal(header.noise, job.run.noise);
  assert.equal(header.states, job.counts.states);
  assert.equal(header.espTotal, job.metrics.esp_total);
  assert.equal(header.problemKind, job.problem!.kind);
});

test("histogram rows pass through and rank by count", () => {
  const doc = fixture<HistogramDoc>("decode_integer_regime_a.json");
  const page = histogramPage(doc);
  assert.equal(page.page, 0);
  assert.equal(page.hasMore, false);
  const counts = page.rows.map((r) => r.count);
  assert.deepEqual(counts, [...counts].sort((a, b) => b - a));
  for (const row of page.rows) {
    const source = doc.rows.find((r) => r.value === row.value)!;
    assert.equal(row.count, source.count);
    assert.equal(row.frequency, source.frequency);
    assert.equal(row.bitstring, source.bitstring);
  }
});

test("histograms page by 256 states with load-more", () => {
  const synthetic: HistogramDoc = {
    width: 10,
    shots: 1000,
    rows: Array.from({ length: 1000 }, (_, value) => ({
      bitstring: value.toString(2).padStart(10, "0"),
      value,
      count: 1000 - value,
      frequency: (1000 - value) / 1000,
    })),
  };
  const first = histogramPage(synthetic, 0);
  assert.equal(first.rows.length, TOP_K);
  assert.equal(first.rows[0].count, 1000);
  assert.equal(first.pageCount, 4);
  assert.equal(first.hasMore, true);
  const last = histogramPage(synthetic, 3);
  assert.equal(last.rows.length, 1000 - 3 * TOP_K);
  assert.equal(last.hasMore, false);
});

test("the three fixtures span the three reliability regimes", () => {
  const badges = (["a", "b", "c"] as const).map((regime) => {
    const doc = fixture<HeaDoc>(`hea_regime_${regime}.json`);
    return heaOverlay(doc).badge;
  });
  assert.deepEqual(badges, ["reliable", "less reliable", "needs more shots"]);
});

test("hea ticks carry served means, intervals and flags verbatim", () => {
  for (const regime of ["a", "b", "c"]) {
    const doc = fixture<HeaDoc>(`hea_regime_${regime}.json`);
    const overlay = heaOverlay(doc);
    assert.equal(overlay.ticks.length, Object.keys(doc.states).length);
    for (const tick of overlay.ticks) {
      const source = doc.states[tick.state];
      assert.equal(tick.measured, source.measured);
      assert.equal(tick.mean, source.mean);
      assert.equal(tick.sd, source.sd);
      assert.equal(tick.ciLow, source.ci_low);
      assert.equal(tick.ciHigh, source.ci_high);
      assert.equal(tick.differentiated, source.differentiated);
      assert.ok(tick.ciLow <= tick.mean && tick.mean <= tick.ciHigh);
    }
    assert.equal(overlay.center, doc.shots / 2 ** doc.width);
  }
});

test("overlay geometry is a plain linear scale", () => {
  const x = scaleTo(360, 600);
  assert.equal(x(0), 0);
  assert.equal(x(600), 360);
  assert.equal(x(300), 180);
});

test("image view projects pixels with zoom and no value changes", () => {
  const doc = fixture<ImageDoc>("decode_image.json");
  const view = imageView(doc, 24);
  assert.equal(view.cells.length, doc.pixels.length);
  view.cells.forEach((cell, i) => {
    assert.equal(cell.value, doc.pixels[i]);
    assert.equal(cell.x, i % doc.width);
    assert.equal(cell.y, Math.floor(i / doc.width));
  });
  assert.equal(view.zoom, 24);
  assert.equal(view.overflowMass, doc.overflow_mass);
});

test("truth table and contingency views pass rows through", () => {
  const tt = fixture<TruthTableDoc>("decode_truthtable.json");
  const rows = truthTableRows(tt);
  assert.equal(rows.length, tt.rows.length);
  rows.forEach((row, i) => {
    assert.equal(row.input, tt.rows[i].input);
    assert.deepEqual(row.outputs, tt.rows[i].outputs);
  });

  const ct = fixture<ContingencyDoc>("decode_contingency.json");
  const view = contingencyView(ct);
  assert.equal(view.header.length, ct.col_patterns.length + 2);
  ct.row_patterns.forEach((pattern, r) => {
    assert.equal(view.body[r][0], pattern);
    assert.deepEqual(view.body[r].slice(1, -1), ct.cells[r]);
    assert.equal(view.body[r][view.body[r].length - 1], ct.row_marginals[r]);
  });
  const totals = view.body[view.body.length - 1];
  assert.equal(totals[totals.length - 1], ct.shots);
});
