"""HTTP service backing the dashboard and scripted clients.

One endpoint per engine capability; every response body is the serialized
result of the corresponding library call, so the browser never recomputes
domain values. Counts stream as newline-delimited chunk records. Long
computations run under a configurable wall-clock budget (default 120 s);
there is no job queue.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor, TimeoutError as FutureTimeout
from dataclasses import dataclass
from pathlib import Path

from fastapi import Body, FastAPI, Query, Request
from fastapi.responses import JSONResponse, RedirectResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from . import serialize
from .analysis import esp, match
from .circuit import verify
from .docs import docs_lookup, docs_terms
from .errors import (ResourceLimitError, UnknownMachineError, ValidationError,
                     WorkbenchError)
from .jobdata import bundle_from_dict, bundle_to_dict, chunk_counts, chunk_to_line
from .machines import (MachineRegistry, PropertyQuery, format_timestamp,
                       parse_timestamp, property_series, run_query, snapshot_at)
from .problems import build, required_resources
from .qasm import emit_qasm, parse_qasm
from .results import (find_period_and_factors, hypothetical_error_adjustment,
                      to_contingency, to_image, to_integer_histogram,
                      to_truth_table)
from .serialize import problem_from_dict
from .simulate import RunConfig, run
from .store import JobStore, UnknownJobError
from .transpile import compare_strategies, transpile

INLINE_RUN_LIMIT = 65_536

_STATUS = {
    UnknownMachineError: 404,
    UnknownJobError: 404,
    ResourceLimitError: 413,
}


def need(payload: dict, key: str):
    try:
        return payload[key]
    except (KeyError, TypeError):
        raise ValidationError(f"request body is missing {key!r}")


@dataclass
class ServiceConfig:
    machine_dir: str | None = None        # None = packaged fixtures
    job_dir: str = "jobs"
    port: int = 8712
    chunk_size: int = 4096
    timeout_s: float = 120.0
    ui_dir: str | None = None

    @staticmethod
    def from_file(path: str | Path) -> "ServiceConfig":
        data = json.loads(Path(path).read_text())
        return ServiceConfig(
            machine_dir=data.get("machine_dir"),
            job_dir=data.get("job_dir", "jobs"),
            port=int(data.get("port", 8712)),
            chunk_size=int(data.get("chunk_size", 4096)),
            timeout_s=float(data.get("timeout_s", 120.0)),
            ui_dir=data.get("ui_dir"),
        )


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    registry = MachineRegistry.from_dir(config.machine_dir)
    store = JobStore(config.job_dir)
    executor = ThreadPoolExecutor(max_workers=4)
    app = FastAPI(title="qworkbench", docs_url=None, redoc_url=None)

    def bounded(fn, *args, **kwargs):
        future = executor.submit(fn, *args, **kwargs)
        try:
            return future.result(timeout=config.timeout_s)
        except FutureTimeout:
            raise WorkbenchTimeout(f"computation exceeded {config.timeout_s:.0f}s")

    class WorkbenchTimeout(WorkbenchError):
        code = "timeout"

    @app.exception_handler(WorkbenchError)
    async def workbench_error(_: Request, exc: WorkbenchError):
        status = 504 if isinstance(exc, WorkbenchTimeout) else _STATUS.get(type(exc), 400)
        return JSONResponse(
            status_code=status,
            content={"error": {"code": exc.code, "message": exc.message,
                               "detail": exc.detail}},
        )

    def snapshot_for(name: str, at: str | None):
        machine = registry.get(name)
        if at is None:
            return machine, machine.latest, False
        snap, stale = snapshot_at(machine, parse_timestamp(at))
        return machine, snap, stale

    # -- machines ---------------------------------------------------------

    @app.get("/machines")
    def machines_index():
        return [serialize.machine_summary(m) for m in sorted(registry, key=lambda m: m.name)]

    @app.get("/machines/{name}")
    def machine_show(name: str, at: str | None = None):
        machine, snap, stale = snapshot_for(name, at)
        return serialize.machine_detail(machine, snap, stale)

    @app.get("/machines/{name}/series")
    def machine_series(name: str, selector: str,
                       from_: str | None = Query(default=None, alias="from"),
                       to: str | None = None):
        machine = registry.get(name)
        time_range = None
        if from_ is not None and to is not None:
            time_range = (parse_timestamp(from_), parse_timestamp(to))
        series = property_series(machine, selector, time_range)
        return {
            "machine": name,
            "selector": selector,
            "series": {
                ("-".join(map(str, k)) if isinstance(k, tuple) else str(k)):
                    [[format_timestamp(ts), v] for ts, v in points]
                for k, points in series.items()
            },
        }

    @app.post("/queries/run")
    def queries_run(payload: dict = Body(...)):
        query = payload.get("query", payload)
        time_range = query.get("time_range")
        parsed_range = (None if not time_range else
                        (parse_timestamp(time_range[0]), parse_timestamp(time_range[1])))
        q = PropertyQuery(
            machines=tuple(query["machines"]),
            selectors=tuple(query["selectors"]),
            time_range=parsed_range,
            aggregation=query.get("aggregation", "none"),
        )
        return {"rows": serialize.query_rows_to_dict(run_query(q, registry))}

    # -- circuits ----------------------------------------------------------

    @app.post("/circuits/parse")
    def circuits_parse(payload: dict = Body(...)):
        circuit = parse_qasm(need(payload, "qasm"))
        return {
            "circuit": serialize.circuit_to_dict(circuit),
            "verify": serialize.verification_to_dict(verify(circuit)),
        }

    @app.post("/circuits/build")
    def circuits_build(payload: dict = Body(...)):
        spec = problem_from_dict(need(payload, "problem"))
        result = build(spec)
        doc = serialize.build_result_to_dict(result, emit_qasm(result.circuit))
        doc["circuit"] = serialize.circuit_to_dict(result.circuit)
        doc["resources"] = list(required_resources(spec))
        return doc

    # -- transpilation ------------------------------------------------------

    def _transpile_payload(payload: dict):
        circuit = parse_qasm(need(payload, "qasm"))
        _, snap, _ = snapshot_for(need(payload, "machine"), payload.get("at"))
        return circuit, snap

    @app.post("/transpile")
    def transpile_endpoint(payload: dict = Body(...)):
        circuit, snap = _transpile_payload(payload)
        options = serialize.options_from_dict(payload.get("options", {}))
        result = bounded(transpile, circuit, snap, options)
        doc = serialize.transpile_result_to_dict(result, emit_qasm(result.physical))
        doc["physical"] = serialize.circuit_to_dict(result.physical, snap)
        doc["logical"] = serialize.circuit_to_dict(circuit)
        doc["machine"] = payload["machine"]
        return doc

    @app.post("/transpile/compare")
    def transpile_compare(payload: dict = Body(...)):
        circuit, snap = _transpile_payload(payload)
        options_list = [serialize.options_from_dict(o)
                        for o in payload.get("options_list", [])]
        rows = bounded(compare_strategies, circuit, snap, options_list)
        qasms = [emit_qasm(r.result.physical) for r in rows]
        docs = serialize.strategy_rows_to_dict(rows, qasms)
        for doc, row in zip(docs, rows):
            doc["result"]["physical"] = serialize.circuit_to_dict(row.result.physical, snap)
            doc["result"]["esp"] = serialize.esp_report_to_dict(esp(row.result.physical, snap))
            doc["result"]["match"] = serialize.match_map_to_dict(
                match(circuit, row.result.physical, row.result.layout.initial,
                      provenance=row.result.provenance))
        return {"logical": serialize.circuit_to_dict(circuit), "rows": docs}

    # -- execution -----------------------------------------------------------

    @app.post("/run")
    def run_endpoint(payload: dict = Body(...)):
        circuit = parse_qasm(need(payload, "qasm"))
        noise = payload.get("noise", "ideal")
        snap = None
        if noise == "calibrated":
            _, snap, _ = snapshot_for(need(payload, "machine"), payload.get("at"))
        config = RunConfig(shots=int(payload.get("shots", 1024)),
                           seed=int(payload.get("seed", 0)),
                           noise=noise, snapshot=snap)
        counts = bounded(run, circuit, config)
        if len(counts.entries) > INLINE_RUN_LIMIT:
            raise ResourceLimitError(
                f"{len(counts.entries)} states exceed the inline limit; "
                "import the run as a job and stream its counts")
        return {"counts": serialize.counts_to_dict(counts)}

    # -- analysis ---------------------------------------------------------------

    @app.post("/analysis/esp")
    def analysis_esp(payload: dict = Body(...)):
        circuit = parse_qasm(need(payload, "qasm"))
        _, snap, _ = snapshot_for(need(payload, "machine"), payload.get("at"))
        return serialize.esp_report_to_dict(esp(circuit, snap))

    @app.post("/analysis/match")
    def analysis_match(payload: dict = Body(...)):
        logical = parse_qasm(need(payload, "logical_qasm"))
        physical = parse_qasm(need(payload, "physical_qasm"))
        layout = tuple(int(q) for q in need(payload, "layout")["initial"])
        provenance = payload.get("provenance")
        if provenance is not None:
            provenance = tuple(p if p == "routing" else int(p) for p in provenance)
        return serialize.match_map_to_dict(match(logical, physical, layout,
                                                 provenance=provenance))

    # -- results -------------------------------------------------------------------

    def _counts_and_bundle(payload: dict):
        if "job_id" in payload:
            bundle = store.get(payload["job_id"])
            return bundle.counts, bundle
        return serialize.counts_from_dict(need(payload, "counts")), None

    @app.post("/results/hea")
    def results_hea(payload: dict = Body(...)):
        counts, bundle = _counts_and_bundle(payload)
        if bundle is not None:
            physical = parse_qasm(bundle.physical_qasm)
            snap = bundle.snapshot
        else:
            physical = parse_qasm(need(payload, "physical_qasm"))
            _, snap, _ = snapshot_for(need(payload, "machine"), payload.get("at"))
        report = bounded(
            hypothetical_error_adjustment, counts, physical, snap,
            int(payload.get("trials", 1000)), int(payload.get("seed", 0)))
        return serialize.hea_report_to_dict(report)

    @app.post("/results/decode")
    def results_decode(payload: dict = Body(...)):
        counts, bundle = _counts_and_bundle(payload)
        decoder = payload.get("decoder")
        if decoder == "integer":
            hist = to_integer_histogram(counts, bool(payload.get("include_zero", False)))
            return serialize.histogram_to_dict(hist)
        if decoder == "image":
            problem = bundle.problem if bundle else None
            width = payload.get("width") or (problem.width if problem else None)
            height = payload.get("height") or (problem.height if problem else None)
            norm = payload.get("normalization")
            if norm is None and bundle is not None:
                norm = bundle.normalization
            if not width or not height or norm is None:
                raise ValidationError(
                    "image decoding needs width, height and normalization "
                    "(an image job supplies them)")
            image = to_image(counts, int(width), int(height), float(norm))
            return serialize.image_to_dict(image)
        if decoder == "truthtable":
            view = to_truth_table(counts, need(payload, "input_bits"), need(payload, "output_bits"))
            return serialize.truth_table_to_dict(view)
        if decoder == "contingency":
            table = to_contingency(counts, need(payload, "row_bits"), need(payload, "col_bits"))
            return serialize.contingency_to_dict(table)
        if decoder == "factors":
            base = payload.get("base")
            modulus = payload.get("modulus")
            if bundle is not None and bundle.problem is not None:
                base = base or bundle.problem.base
                modulus = modulus or bundle.problem.modulus
            if base is None or modulus is None:
                raise ValidationError("factor decoding needs base and modulus "
                                      "(a factoring job supplies them)")
            hist = to_integer_histogram(counts)
            return serialize.period_to_dict(
                find_period_and_factors(hist, int(base), int(modulus)))
        raise ValidationError(f"unknown decoder {decoder!r}; use integer, image, "
                              "truthtable, contingency or factors")

    # -- jobs ---------------------------------------------------------------------

    @app.post("/jobs")
    def jobs_import(payload: dict = Body(...)):
        bundle = bundle_from_dict(payload)
        store.save(bundle)
        return {"job_id": bundle.job_id}

    @app.get("/jobs")
    def jobs_index():
        return store.summaries()

    @app.get("/jobs/{job_id}")
    def jobs_show(job_id: str):
        return job_document(store.get(job_id), config.chunk_size)

    @app.get("/jobs/{job_id}/counts")
    def jobs_counts(job_id: str):
        bundle = store.get(job_id)

        def stream():
            for chunk in chunk_counts(bundle.counts, bundle.job_id, config.chunk_size):
                yield chunk_to_line(chunk) + "\n"

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    # -- docs -----------------------------------------------------------------------

    @app.get("/docs/{term}")
    def docs_show(term: str):
        entry = docs_lookup(term)
        if entry is None:
            return {"found": False, "entry": None, "terms": list(docs_terms())}
        return {"found": True,
                "entry": {"key": entry.key, "title": entry.title, "body": entry.body,
                          "related": list(entry.related)}}

    @app.get("/health")
    def health():
        return {"service": "qworkbench", "machines": list(registry.names()),
                "jobs": len(store.ids())}

    ui_dir = Path(config.ui_dir) if config.ui_dir else None
    if ui_dir and ui_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

        @app.get("/")
        def index():
            return RedirectResponse(url="/ui/")

    app.state.registry = registry
    app.state.store = store
    app.state.config = config
    return app


def job_document(bundle, chunk_size: int) -> dict:
    """Bundle metadata for the API: counts ride the stream endpoint, so the
    body carries their shape only."""
    doc = bundle_to_dict(bundle, counts_ref="stream")
    doc["counts"] = {
        "shots": bundle.counts.shots,
        "width": bundle.counts.width,
        "states": len(bundle.counts.entries),
        "stream": f"/jobs/{bundle.job_id}/counts",
        "chunk_size": chunk_size,
    }
    return doc


def serve(config: ServiceConfig | None = None, host: str = "127.0.0.1",
          port: int | None = None):
    import uvicorn
    config = config or ServiceConfig()
    uvicorn.run(create_app(config), host=host,
                port=port if port is not None else config.port,
                log_level="info")
