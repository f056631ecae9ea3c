// Result viewer view models: job header, decoder tabs, paged histograms, and
// the error-adjustment overlay with its reliability badge. Displayed values
// pass through from the API untouched; only ordering, paging, and pixel
// geometry happen here.
import type {
  ContingencyDoc, HeaDoc, HistogramDoc, HistogramRowDoc, ImageDoc, JobDoc,
  TruthTableDoc,
} from "./types";

export const TOP_K = 256;

export interface JobHeader {
  jobId: string;
  createdAt: string;
  machine: string;
  problemKind: string | null;
  shots: number;
  seed: number;
  noise: string;
  states: number;
  width: number;
  espTotal: number;
}

export function jobHeader(job: JobDoc): JobHeader {
  return {
    jobId: job.job_id,
    createdAt: job.created_at,
    machine: job.machine_name,
    problemKind: job.problem ? job.problem.kind : null,
    shots: job.run.shots,
    seed: job.run.seed,
    noise: job.run.noise,
    states: job.counts.states,
    width: job.counts.width,
    espTotal: job.metrics.esp_total,
  };
}

export interface HistogramPage {
  rows: HistogramRowDoc[];
  page: number;
  pageCount: number;
  hasMore: boolean;
}

/** Most frequent states first, TOP_K per page ("load more" paging). */
export function histogramPage(doc: HistogramDoc, page = 0, topK = TOP_K): HistogramPage {
  const ranked = [...doc.rows].sort((a, b) => b.count - a.count || a.value - b.value);
  const pageCount = Math.max(1, Math.ceil(ranked.length / topK));
  const rows = ranked.slice(page * topK, (page + 1) * topK);
  return { rows, page, pageCount, hasMore: page + 1 < pageCount };
}

export interface HeaTick {
  state: string;
  measured: number;
  mean: number;
  sd: number;
  ciLow: number;
  ciHigh: number;
  differentiated: boolean;
}

export interface HeaOverlay {
  ticks: HeaTick[];         // one row per state, ascending by state
  center: number;           // shots / 2^width as reported context
  badge: "reliable" | "less reliable" | "needs more shots";
  differentiatedCount: number;
}

/** The three regimes: every state differentiated (structure survives the
 * noise), some (interpret with care), none (more shots needed). */
export function heaOverlay(doc: HeaDoc): HeaOverlay {
  const ticks = Object.entries(doc.states)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([state, s]) => ({
      state,
      measured: s.measured,
      mean: s.mean,
      sd: s.sd,
      ciLow: s.ci_low,
      ciHigh: s.ci_high,
      differentiated: s.differentiated,
    }));
  const differentiated = ticks.filter((t) => t.differentiated).length;
  const badge = differentiated === ticks.length && ticks.length > 0
    ? "reliable"
    : differentiated > 0
      ? "less reliable"
      : "needs more shots";
  return {
    ticks,
    center: doc.shots / 2 ** doc.width,
    badge,
    differentiatedCount: differentiated,
  };
}

/** Linear pixel scale for drawing ticks/whiskers; pure geometry. */
export function scaleTo(widthPx: number, maxValue: number): (value: number) => number {
  return (value) => (maxValue <= 0 ? 0 : (value / maxValue) * widthPx);
}

export interface ImageView {
  width: number;
  height: number;
  zoom: number;
  cells: { x: number; y: number; value: number; shade: number }[];
  overflowMass: number;
}

export function imageView(doc: ImageDoc, zoom = 1): ImageView {
  const peak = Math.max(...doc.pixels, 0);
  const cells = doc.pixels.map((value, i) => ({
    x: i % doc.width,
    y: Math.floor(i / doc.width),
    value,
    shade: peak > 0 ? value / peak : 0,
  }));
  return { width: doc.width, height: doc.height, zoom, cells, overflowMass: doc.overflow_mass };
}

export interface TruthTableRow {
  input: string;
  outputs: { output: string; count: number }[];
}

export function truthTableRows(doc: TruthTableDoc): TruthTableRow[] {
  return doc.rows.map((r) => ({ input: r.input, outputs: r.outputs }));
}

export interface ContingencyView {
  header: string[];
  body: (string | number)[][];
  shots: number;
}

export function contingencyView(doc: ContingencyDoc): ContingencyView {
  const header = ["rows\\cols", ...doc.col_patterns, "total"];
  const body = doc.row_patterns.map((pattern, r) => [
    pattern,
    ...doc.cells[r],
    doc.row_marginals[r],
  ]);
  body.push(["total", ...doc.col_marginals, doc.shots]);
  return { header, body, shots: doc.shots };
}
