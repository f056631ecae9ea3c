// Dashboard entry point: three panes (machines, circuits, results) wired to
// the workbench HTTP API. All domain numbers render verbatim from responses.
import { ApiClient, ApiError } from "./api";
import { ChunkAssembler } from "./chunks";
import {
  chipOverlay, diagramColumns, espSparkline, resolveHighlight, summaryTable,
} from "./circuitViewer";
import { banner, el, esc, table } from "./dom";
import { chipView, gateTable, qubitTable, seriesLines, summaryCards } from "./machineExplorer";
import {
  contingencyView, heaOverlay, histogramPage, imageView, jobHeader,
  scaleTo, truthTableRows,
} from "./resultViewer";
import { createViewState, loadCompare, loadJob, selectGate, setActiveStrategy } from "./state";
import type { ContingencyDoc, HistogramDoc, ImageDoc, TruthTableDoc } from "./types";

const api = new ApiClient("");
const state = createViewState();

const root = document.getElementById("app")!;
const panes: Record<string, HTMLElement> = {
  machines: el("section", "pane"),
  circuits: el("section", "pane"),
  results: el("section", "pane"),
};

function showPane(name: string): void {
  for (const [key, pane] of Object.entries(panes)) {
    pane.style.display = key === name ? "block" : "none";
  }
  document.querySelectorAll("nav button").forEach((b) => {
    b.classList.toggle("active", (b as HTMLElement).dataset.pane === name);
  });
}

function nav(): HTMLElement {
  const bar = el("nav");
  for (const name of ["machines", "circuits", "results"]) {
    const button = el("button", "", name);
    button.dataset.pane = name;
    button.addEventListener("click", () => showPane(name));
    bar.append(button);
  }
  return bar;
}

async function withDocs(term: string, label: string): Promise<string> {
  try {
    const docs = await api.docs(term);
    const body = docs.found && docs.entry ? docs.entry.body : "no entry";
    return `<span class="doc" title="${esc(body)}">${esc(label)}</span>`;
  } catch {
    return esc(label);
  }
}

// ---- machine explorer ------------------------------------------------------

async function renderMachines(): Promise<void> {
  const pane = panes.machines;
  pane.innerHTML = "<h2>Machines</h2>";
  try {
    const machines = await api.machines();
    const cards = el("div", "cards");
    for (const card of summaryCards(machines)) {
      const node = el("div", "card");
      node.innerHTML =
        `<h3>${esc(card.name)}</h3>` +
        `<p>${card.qubits} qubits - ${card.online ? "online" : "offline"} - ` +
        `${card.pendingJobs} pending</p>` +
        `<p>basis: ${esc(card.basisGates)}</p>` +
        `<p>readout err (mean): ${card.meanReadoutError}</p>` +
        `<p>2q err (mean): ${card.mean2qError}</p>`;
      node.addEventListener("click", () => renderMachineDetail(card.name));
      cards.append(node);
    }
    pane.append(cards);
    pane.append(el("div", "machine-detail"));
  } catch (err) {
    banner(pane, `cannot load machines: ${err}`);
  }
}

async function renderMachineDetail(name: string): Promise<void> {
  const host = panes.machines.querySelector<HTMLElement>(".machine-detail")!;
  host.innerHTML = `<h3>${esc(name)}</h3>`;
  try {
    const detail = await api.machine(name, state.snapshotTime ?? undefined);
    state.machine = detail;
    const chip = chipView(detail);
    const svgEdges = chip.edges
      .map((edge) => {
        const a = chip.nodes[edge.a];
        const b = chip.nodes[edge.b];
        return `<line x1="${40 + a.x * 70}" y1="${40 + a.y * 70}" x2="${40 + b.x * 70}"
                 y2="${40 + b.y * 70}" stroke-width="4"
                 stroke="rgba(180,60,40,${Math.min(1, edge.meanError * 40)})">
                 <title>${edge.a}-${edge.b}: ${edge.meanError}</title></line>`;
      })
      .join("");
    const svgNodes = chip.nodes
      .map(
        (n) => `<circle cx="${40 + n.x * 70}" cy="${40 + n.y * 70}" r="14"
            fill="rgba(40,80,180,${Math.min(1, 0.2 + n.readoutError * 12)})">
            <title>q${n.qubit} readout ${n.readoutError}</title></circle>
            <text x="${40 + n.x * 70}" y="${44 + n.y * 70}" text-anchor="middle">${n.qubit}</text>`,
      )
      .join("");
    const height = 80 + Math.max(...chip.nodes.map((n) => n.y)) * 70;
    host.innerHTML += `<svg width="420" height="${height}">${svgEdges}${svgNodes}</svg>`;

    const times = detail.snapshot_times
      .map((t) => `<option ${t === detail.snapshot.taken_at ? "selected" : ""}>${esc(t)}</option>`)
      .join("");
    host.innerHTML += `<p>snapshot <select class="snap-time">${times}</select>` +
      (detail.snapshot_stale ? " <em>(stale for requested time)</em>" : "") + "</p>";
    host.querySelector(".snap-time")!.addEventListener("change", (event) => {
      state.snapshotTime = (event.target as HTMLSelectElement).value;
      renderMachineDetail(name);
    });

    const t1Label = await withDocs("t1_t2", "t1_us");
    host.innerHTML += `<h4>qubits</h4>` + table(
      ["qubit", t1Label, "t2_us", "freq_GHz", "readout_err", "readout_ns"],
      qubitTable(detail).map((r) => [r.qubit, r.t1, r.t2, r.frequency,
                                     r.readoutError, r.readoutDuration]),
    );
    host.innerHTML += "<h4>gates</h4>" + table(
      ["gate", "operands", "error", "duration_ns"],
      gateTable(detail).map((r) => [r.gate, r.operands, r.error, r.duration]),
    );

    const seriesHost = el("div", "series");
    const picker = el("select", "series-picker");
    for (const selector of ["qubit.t1", "qubit.t2", "qubit.readout_error", "gate.cx.error"]) {
      picker.append(new Option(selector, selector));
    }
    const plot = el("div", "series-plot");
    picker.addEventListener("change", async () => {
      const response = await api.series(name, picker.value);
      const lines = seriesLines(response);
      plot.innerHTML = lines
        .map((line) =>
          `<div><strong>${esc(line.key)}</strong> ` +
          line.points.map((p) => `<span title="${esc(p.timestamp)}">${p.value}</span>`).join(" -> ") +
          "</div>")
        .join("");
    });
    seriesHost.append(picker, plot);
    host.append(el("h4", "", "time series"), seriesHost);
    picker.dispatchEvent(new Event("change"));
  } catch (err) {
    banner(host, err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
  }
}

// ---- circuit viewer ----------------------------------------------------------

const DEFAULT_TOFFOLI = `OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
creg c[3];
ccx q[0],q[1],q[2];
measure q[0] -> c[0];
measure q[1] -> c[1];
measure q[2] -> c[2];
`;

function renderCircuitsPane(): void {
  const pane = panes.circuits;
  pane.innerHTML = "<h2>Circuit viewer</h2>";
  const qasm = el("textarea", "qasm-input");
  qasm.value = DEFAULT_TOFFOLI;
  const machine = el("input", "machine-input") as HTMLInputElement;
  machine.value = "vigo-like";
  const go = el("button", "", "compare strategies");
  go.addEventListener("click", async () => {
    try {
      const compare = await api.compare(qasm.value, machine.value, [
        { optimization_level: 0, seed: 11 },
        { optimization_level: 1, seed: 11 },
        { optimization_level: 1, seed: 907 },
        { optimization_level: 2, seed: 11 },
      ]);
      loadCompare(state, compare);
      renderComparison();
    } catch (err) {
      banner(pane, err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
    }
  });
  pane.append(qasm, machine, go, el("div", "comparison"));
}

function renderComparison(): void {
  const host = panes.circuits.querySelector<HTMLElement>(".comparison")!;
  const compare = state.compare;
  if (!compare) return;
  const rowsHtml = summaryTable(compare)
    .map((r) =>
      `<tr data-strategy="${r.index}" class="${r.index === state.activeStrategy ? "active" : ""}">` +
      `<td>#${r.index}</td><td>${r.level}</td><td>${r.seed}</td><td>${esc(r.layout)}</td>` +
      `<td>${r.gateCount}</td><td>${r.layerCount}</td><td>${r.durationNs}</td>` +
      `<td>${r.espTotal}</td></tr>`)
    .join("");
  host.innerHTML =
    `<h3>strategies</h3><table><thead><tr><th>#</th><th>level</th><th>seed</th>` +
    `<th>layout</th><th>gates</th><th>layers</th><th>duration_ns</th><th>cumulative ESP</th>` +
    `</tr></thead><tbody>${rowsHtml}</tbody></table>` +
    `<div class="logical-diagram"><h3>logical</h3></div>` +
    `<div class="physical-diagrams"></div>` +
    `<div class="chip-overlay"></div>`;
  host.querySelectorAll("tr[data-strategy]").forEach((row) => {
    row.addEventListener("click", () => {
      setActiveStrategy(state, Number((row as HTMLElement).dataset.strategy));
      renderComparison();
    });
  });

  const matches = compare.rows.map((r) => r.result.match);
  const highlight = resolveHighlight(state.selection, matches);

  const logicalHost = host.querySelector<HTMLElement>(".logical-diagram")!;
  logicalHost.innerHTML += renderDiagram(
    diagramColumns(compare.logical), new Set(highlight.logical), "logical", -1);

  const physHost = host.querySelector<HTMLElement>(".physical-diagrams")!;
  compare.rows.forEach((row, strategy) => {
    // one past the last layer once playback ends, so everything renders dimmed
    const clock = state.clock;
    const active = strategy !== state.activeStrategy || !clock
      ? -1
      : clock.atEnd && clock.total > 0
        ? row.result.physical.layers.length
        : clock.activeLayer();
    const lit = new Set(highlight.physicalByStrategy.get(strategy) ?? []);
    const perLayer = espSparkline(row.result.esp.per_layer)
      .map((p) => `<span class="spark" title="layer ${p.layer}">${p.value}</span>`)
      .join("");
    const cumulative = espSparkline(row.result.esp.cumulative_by_layer)
      .map((p) => `<span class="spark cum" title="layer ${p.layer}">${p.value}</span>`)
      .join("");
    physHost.innerHTML +=
      `<div class="strategy" data-strategy="${strategy}"><h3>#${strategy} on ` +
      `${esc(state.machine?.name ?? "")} (ESP ${row.esp_total})</h3>` +
      renderDiagram(diagramColumns(row.result.physical, row.result.match), lit,
                    "physical", active, strategy) +
      `<div class="sparkline">per-layer ESP: ${perLayer}</div>` +
      `<div class="sparkline">cumulative: ${cumulative}</div></div>`;
  });
  physHost.querySelectorAll<HTMLElement>("[data-gate]").forEach((cell) => {
    cell.addEventListener("click", () => {
      const strategy = Number(cell.dataset.strategy);
      const gateId = Number(cell.dataset.gate);
      selectGate(state, strategy >= 0
        ? { kind: "physical", strategy, gateId }
        : { kind: "logical", gateId });
      renderComparison();
    });
  });
  logicalHost.querySelectorAll<HTMLElement>("[data-gate]").forEach((cell) => {
    cell.addEventListener("click", () => {
      selectGate(state, { kind: "logical", gateId: Number(cell.dataset.gate) });
      renderComparison();
    });
  });

  renderAnimationControls(host);
  renderChipOverlay(host);
}

function renderDiagram(
  columns: ReturnType<typeof diagramColumns>,
  highlighted: Set<number>,
  kind: "logical" | "physical",
  activeLayer: number,
  strategy = -1,
): string {
  const cols = columns
    .map((column) => {
      const cells = column.cells
        .map((cell) => {
          const classes = ["gate"];
          if (highlighted.has(cell.gateId)) classes.push("lit");
          if (cell.unattributed) classes.push("unattributed");
          if (column.layer === activeLayer) classes.push("now");
          if (activeLayer >= 0 && column.layer < activeLayer) classes.push("done");
          return `<div class="${classes.join(" ")}" data-gate="${cell.gateId}"
                   data-strategy="${strategy}" title="q${cell.qubits.join(",q")}">
                   ${esc(cell.kind)}<sub>${cell.qubits.join(",")}</sub></div>`;
        })
        .join("");
      return `<div class="layer" data-layer="${column.layer}">${cells}</div>`;
    })
    .join("");
  return `<div class="diagram ${kind}">${cols}</div>`;
}

let animationHandle: number | null = null;

function renderAnimationControls(host: HTMLElement): void {
  const clock = state.clock;
  if (!clock) return;
  const controls = el("div", "animation");
  controls.innerHTML =
    `<button class="play">${clock.playing ? "pause" : "play"}</button>` +
    `<input class="scale" type="number" value="${clock.scale}" title="slowdown factor"/>` +
    `<span class="clock">${clock.clockNs} / ${clock.total} ns</span>`;
  controls.querySelector(".play")!.addEventListener("click", () => {
    if (clock.playing) {
      clock.pause();
      if (animationHandle !== null) cancelAnimationFrame(animationHandle);
      animationHandle = null;
    } else {
      clock.play();
      let last = performance.now();
      const step = (now: number) => {
        clock.tick(now - last);
        last = now;
        renderComparison();
        if (clock.playing) animationHandle = requestAnimationFrame(step);
      };
      animationHandle = requestAnimationFrame(step);
    }
    renderComparison();
  });
  controls.querySelector(".scale")!.addEventListener("change", (event) => {
    clock.scale = Number((event.target as HTMLInputElement).value) || clock.scale;
  });
  host.append(controls);
}

function renderChipOverlay(host: HTMLElement): void {
  const compare = state.compare;
  const clock = state.clock;
  if (!compare || !clock) return;
  const row = compare.rows[state.activeStrategy];
  const gates = chipOverlay(row, clock.activeLayer());
  const overlay = host.querySelector<HTMLElement>(".chip-overlay")!;
  overlay.innerHTML =
    `<h3>on-chip (layer ${clock.activeLayer()})</h3>` +
    gates.map((g) => `<span class="chip-gate">${esc(g.kind)} @ q${g.qubits.join(",q")}</span>`).join(" ");
}

// ---- result viewer -----------------------------------------------------------

function renderResultsPane(): void {
  const pane = panes.results;
  pane.innerHTML = "<h2>Results</h2>";
  const picker = el("select", "job-picker");
  const refresh = el("button", "", "load jobs");
  refresh.addEventListener("click", async () => {
    const jobs = await api.jobs();
    picker.innerHTML = "";
    for (const job of jobs) picker.append(new Option(job.job_id, job.job_id));
  });
  const open = el("button", "", "open");
  open.addEventListener("click", async () => {
    try {
      loadJob(state, await api.job(picker.value));
      renderJob();
    } catch (err) {
      banner(pane, String(err));
    }
  });
  pane.append(refresh, picker, open, el("div", "job-view"));
}

async function renderJob(): Promise<void> {
  const host = panes.results.querySelector<HTMLElement>(".job-view")!;
  const job = state.job;
  if (!job) return;
  const header = jobHeader(job);
  host.innerHTML =
    `<h3>${esc(header.jobId)}</h3>` +
    `<p>${esc(header.machine)} - ${esc(String(header.problemKind))} - ` +
    `${header.shots} shots (seed ${header.seed}, ${esc(header.noise)}) - ` +
    `${header.states} states - ESP ${header.espTotal}</p>` +
    `<div class="progress"></div><div class="tabs"></div><div class="tab-body"></div>` +
    `<div class="hea"></div>`;

  const progress = host.querySelector<HTMLElement>(".progress")!;
  const assembler = new ChunkAssembler();
  await api.streamCounts(job.job_id, assembler, (received, expected) => {
    progress.textContent = `counts: ${received}/${expected ?? "?"} chunks`;
  });
  progress.textContent += " (complete)";

  const tabs = host.querySelector<HTMLElement>(".tabs")!;
  for (const tab of ["histogram", "integers", "truthtable", "image", "contingency"]) {
    const button = el("button", "", tab);
    button.addEventListener("click", () => renderDecoder(tab, host));
    tabs.append(button);
  }
  renderDecoder("histogram", host);
  renderHea(host);
}

async function renderDecoder(tab: string, host: HTMLElement): Promise<void> {
  const job = state.job!;
  const body = host.querySelector<HTMLElement>(".tab-body")!;
  try {
    if (tab === "histogram" || tab === "integers") {
      const doc = await api.decode<HistogramDoc>(job.job_id, "integer");
      let page = 0;
      const draw = () => {
        const view = histogramPage(doc, page);
        body.innerHTML = table(
          ["value", "bitstring", "count", "frequency"],
          view.rows.map((r) => [r.value, r.bitstring, r.count, r.frequency]),
        ) + (view.hasMore ? `<button class="more">load more (page ${view.page + 1}/${view.pageCount})</button>` : "");
        body.querySelector(".more")?.addEventListener("click", () => {
          page += 1;
          draw();
        });
      };
      draw();
    } else if (tab === "image") {
      const doc = await api.decode<ImageDoc>(job.job_id, "image");
      let zoom = 24;
      const draw = () => {
        const view = imageView(doc, zoom);
        body.innerHTML =
          `<button class="zoom-in">+</button><button class="zoom-out">-</button>` +
          `<div class="pixmap" style="grid-template-columns: repeat(${view.width}, ${zoom}px)">` +
          view.cells.map((c) =>
            `<div class="pixel" style="width:${zoom}px;height:${zoom}px;` +
            `background:rgba(30,30,90,${c.shade})" title="${c.value}"></div>`).join("") +
          `</div>`;
        body.querySelector(".zoom-in")!.addEventListener("click", () => { zoom += 8; draw(); });
        body.querySelector(".zoom-out")!.addEventListener("click", () => { zoom = Math.max(8, zoom - 8); draw(); });
      };
      draw();
    } else if (tab === "truthtable") {
      const doc = await api.decode<TruthTableDoc>(job.job_id, "truthtable", {
        input_bits: [0], output_bits: [job.counts.width - 1],
      });
      body.innerHTML = table(
        ["input", "outputs"],
        truthTableRows(doc).map((r) => [
          r.input, r.outputs.map((o) => `${o.output}:${o.count}`).join("  ")]),
      );
    } else {
      const doc = await api.decode<ContingencyDoc>(job.job_id, "contingency", {
        row_bits: [0], col_bits: [job.counts.width - 1],
      });
      const view = contingencyView(doc);
      body.innerHTML = table(view.header, view.body);
    }
  } catch (err) {
    banner(body, err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
  }
}

async function renderHea(host: HTMLElement): Promise<void> {
  const job = state.job!;
  const heaHost = host.querySelector<HTMLElement>(".hea")!;
  try {
    const doc = await api.hea(job.job_id, 400, 5);
    const overlay = heaOverlay(doc);
    const peak = Math.max(...overlay.ticks.map((t) => Math.max(t.measured, t.ciHigh)), 1);
    const x = scaleTo(360, peak);
    heaHost.innerHTML =
      `<h3>hypothetical error adjustment ` +
      `<span class="badge badge-${overlay.badge.replaceAll(" ", "-")}">${overlay.badge}</span></h3>` +
      overlay.ticks.map((t) =>
        `<div class="hea-row"><span class="hea-state">${esc(t.state)}</span>` +
        `<svg width="420" height="18">` +
        `<line x1="${x(t.ciLow)}" x2="${x(t.ciHigh)}" y1="9" y2="9" stroke="#333"/>` +
        `<rect x="${x(t.measured) - 1.5}" y="2" width="3" height="14" fill="#d2691e">` +
        `<title>measured ${t.measured}</title></rect>` +
        `<rect x="${x(t.mean) - 1.5}" y="2" width="3" height="14" fill="#2a6fb0">` +
        `<title>adjusted ${t.mean} [${t.ciLow}, ${t.ciHigh}]</title></rect>` +
        `</svg>` +
        `<span class="hea-numbers">${t.measured} -> ${t.mean} [${t.ciLow}, ${t.ciHigh}]` +
        `${t.differentiated ? "" : " (undifferentiated)"}</span></div>`).join("");
  } catch (err) {
    banner(heaHost, String(err));
  }
}

// ---- boot ---------------------------------------------------------------------

root.append(nav(), panes.machines, panes.circuits, panes.results);
renderMachines();
renderCircuitsPane();
renderResultsPane();
showPane("machines");
