"""Portable job bundles and the chunked counts codec.

A bundle is one self-contained execution record: problem echo, logical and
physical QASM, layout, transpile options and metrics, the full calibration
snapshot (copied, never referenced), run configuration, counts, and optional
analysis reports. Files are canonical JSON (sorted keys), so equal bundles are
byte-identical; the extension is .qjob.

Counts stay inline up to 65,536 states. Larger maps move to an adjacent
sidecar stream of newline-delimited chunks, referenced by relative file name,
which is also the wire format the HTTP service streams.
"""
from __future__ import annotations

import json
import math
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

from .circuit import Circuit, verify
from .errors import (BUNDLE_CORRUPT, BUNDLE_SCHEMA, BUNDLE_VERSION,
                     BUNDLE_WIDTH_MISMATCH, BundleError, QasmError,
                     ValidationError)
from .machines import (CalibrationSnapshot, format_timestamp,
                       parse_timestamp, snapshot_from_dict, snapshot_to_dict)
from .problems import ProblemSpec
from .qasm import emit_qasm, parse_qasm
from .results import HeaReport
from .analysis import EspReport
from .serialize import (counts_from_dict, counts_to_dict, esp_report_from_dict,
                        esp_report_to_dict, hea_report_from_dict,
                        hea_report_to_dict, layout_from_dict, layout_to_dict,
                        metrics_from_dict, metrics_to_dict, options_from_dict,
                        options_to_dict, problem_from_dict, problem_to_dict)
from .simulate import Counts, RunConfig, run
from .transpile import Layout, TranspileMetrics, TranspileOptions

BUNDLE_FORMAT = "qjob"
BUNDLE_VERSION_CURRENT = 1
INLINE_COUNTS_MAX = 65_536
DEFAULT_CHUNK_SIZE = 4096


@dataclass(frozen=True)
class JobBundle:
    job_id: str
    created_at: datetime
    problem: ProblemSpec | None
    qubit_roles: dict[str, tuple[int, ...]]
    clbit_roles: dict[str, tuple[int, ...]]
    normalization: float | None
    logical_qasm: str
    physical_qasm: str
    layout: Layout
    options: TranspileOptions
    metrics: TranspileMetrics
    machine_name: str
    snapshot: CalibrationSnapshot
    shots: int
    seed: int
    noise: str                      # "ideal" | "calibrated"
    counts: Counts
    esp_report: EspReport | None = None
    hea_report: HeaReport | None = None


def new_job_id() -> str:
    return str(uuid.uuid4())


def _require(condition: bool, message: str):
    if not condition:
        raise ValidationError(message)


def validate_bundle(bundle: JobBundle) -> tuple[Circuit, Circuit]:
    """Reparse and re-verify both circuits, cross-check counts. Returns the
    parsed (logical, physical) pair."""
    logical = parse_qasm(bundle.logical_qasm)
    physical = parse_qasm(bundle.physical_qasm)
    for label, circ in (("logical", logical), ("physical", physical)):
        report = verify(circ)
        _require(report.ok, f"{label} circuit does not verify: "
                            f"{report.errors[0].message if report.errors else ''}")
    _require(bundle.counts.width == physical.num_clbits,
             f"counts width {bundle.counts.width} != physical classical register "
             f"{physical.num_clbits}")
    _require(sum(bundle.counts.entries.values()) == bundle.shots,
             "counts total does not match the configured shots")
    _require(bundle.noise in ("ideal", "calibrated"), f"unknown noise mode {bundle.noise!r}")
    return logical, physical


# -- chunked counts codec -----------------------------------------------------

@dataclass(frozen=True)
class CountsChunk:
    job_id: str
    index: int
    total: int
    entries: dict[str, int]
    terminal: bool


def chunk_counts(counts: Counts, job_id: str,
                 chunk_size: int = DEFAULT_CHUNK_SIZE) -> Iterator[CountsChunk]:
    """Partition entries in ascending bitstring order; every chunk but the last
    holds exactly chunk_size states. Lazily generated."""
    if chunk_size < 1:
        raise ValidationError("chunk_size must be at least 1")
    keys = sorted(counts.entries)
    total = max(1, math.ceil(len(keys) / chunk_size))
    for index in range(total):
        part = keys[index * chunk_size:(index + 1) * chunk_size]
        yield CountsChunk(
            job_id=job_id,
            index=index,
            total=total,
            entries={k: counts.entries[k] for k in part},
            terminal=index == total - 1,
        )


def assemble_chunks(chunks: Iterable[CountsChunk]) -> Counts:
    """Order-independent reassembly keyed by chunk index; validates that every
    index arrives exactly once. Memory stays at one chunk plus the output."""
    entries: dict[str, int] = {}
    seen: set[int] = set()
    expected_total: int | None = None
    job_id: str | None = None
    for chunk in chunks:
        if job_id is None:
            job_id = chunk.job_id
        elif chunk.job_id != job_id:
            raise ValidationError(f"chunk stream mixes jobs {job_id!r} and {chunk.job_id!r}")
        if expected_total is None:
            expected_total = chunk.total
        elif chunk.total != expected_total:
            raise ValidationError("chunk stream disagrees about the total chunk count")
        if chunk.index in seen:
            raise ValidationError(f"duplicate chunk index {chunk.index}")
        if not 0 <= chunk.index < expected_total:
            raise ValidationError(f"chunk index {chunk.index} outside 0..{expected_total - 1}")
        seen.add(chunk.index)
        for key, value in chunk.entries.items():
            if key in entries:
                raise ValidationError(f"state {key!r} appears in two chunks")
            entries[key] = value
    if expected_total is None:
        raise ValidationError("empty chunk stream")
    if len(seen) != expected_total:
        missing = sorted(set(range(expected_total)) - seen)
        raise ValidationError(f"missing chunk indices {missing[:8]}")
    width = len(next(iter(entries))) if entries else 0
    return Counts(shots=sum(entries.values()), width=width, entries=entries)


def chunk_to_line(chunk: CountsChunk) -> str:
    return json.dumps({
        "job_id": chunk.job_id,
        "index": chunk.index,
        "total": chunk.total,
        "entries": dict(sorted(chunk.entries.items())),
        "terminal": chunk.terminal,
    }, sort_keys=True, separators=(",", ":"))


def chunk_from_line(line: str) -> CountsChunk:
    try:
        data = json.loads(line)
        return CountsChunk(
            job_id=str(data["job_id"]),
            index=int(data["index"]),
            total=int(data["total"]),
            entries={str(k): int(v) for k, v in data["entries"].items()},
            terminal=bool(data["terminal"]),
        )
    except (json.JSONDecodeError, KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"malformed chunk record: {exc}")


# -- bundle files ----------------------------------------------------------------

def bundle_to_dict(bundle: JobBundle, counts_ref: str | None = None) -> dict:
    counts_payload = ({"shots": bundle.counts.shots, "width": bundle.counts.width,
                       "ref": counts_ref}
                      if counts_ref else counts_to_dict(bundle.counts))
    return {
        "format": BUNDLE_FORMAT,
        "version": BUNDLE_VERSION_CURRENT,
        "job_id": bundle.job_id,
        "created_at": format_timestamp(bundle.created_at),
        "problem": (problem_to_dict(bundle.problem) if bundle.problem else None),
        "qubit_roles": {k: list(v) for k, v in sorted(bundle.qubit_roles.items())},
        "clbit_roles": {k: list(v) for k, v in sorted(bundle.clbit_roles.items())},
        "normalization": bundle.normalization,
        "logical_qasm": bundle.logical_qasm,
        "physical_qasm": bundle.physical_qasm,
        "layout": layout_to_dict(bundle.layout),
        "transpile_options": options_to_dict(bundle.options),
        "metrics": metrics_to_dict(bundle.metrics),
        "machine_name": bundle.machine_name,
        "calibration": snapshot_to_dict(bundle.snapshot),
        "run": {"shots": bundle.shots, "seed": bundle.seed, "noise": bundle.noise},
        "esp": esp_report_to_dict(bundle.esp_report) if bundle.esp_report else None,
        "hea": hea_report_to_dict(bundle.hea_report) if bundle.hea_report else None,
        "counts": counts_payload,
    }


def bundle_from_dict(data: dict, counts: Counts | None = None) -> JobBundle:
    """Counts may be supplied separately when the file used a sidecar ref."""
    try:
        if data.get("format") != BUNDLE_FORMAT:
            raise BundleError("not a job bundle file", BUNDLE_CORRUPT)
        if data.get("version") != BUNDLE_VERSION_CURRENT:
            raise BundleError(
                f"bundle version {data.get('version')} needs migration to "
                f"{BUNDLE_VERSION_CURRENT}", BUNDLE_VERSION)
        counts_payload = data["counts"]
        if counts is None:
            if "ref" in counts_payload:
                raise BundleError("bundle counts live in a sidecar; retrieve via file",
                                  BUNDLE_SCHEMA)
            counts = counts_from_dict(counts_payload)
        snapshot = snapshot_from_dict(
            data["machine_name"], data["calibration"],
            _coupling_for_payload(data["calibration"]))
        bundle = JobBundle(
            job_id=str(data["job_id"]),
            created_at=parse_timestamp(data["created_at"]),
            problem=(problem_from_dict(data["problem"])
                     if data.get("problem") else None),
            qubit_roles={k: tuple(v) for k, v in data.get("qubit_roles", {}).items()},
            clbit_roles={k: tuple(v) for k, v in data.get("clbit_roles", {}).items()},
            normalization=data.get("normalization"),
            logical_qasm=data["logical_qasm"],
            physical_qasm=data["physical_qasm"],
            layout=layout_from_dict(data["layout"]),
            options=options_from_dict(data["transpile_options"]),
            metrics=metrics_from_dict(data["metrics"]),
            machine_name=data["machine_name"],
            snapshot=snapshot,
            shots=int(data["run"]["shots"]),
            seed=int(data["run"]["seed"]),
            noise=data["run"]["noise"],
            counts=counts,
            esp_report=(esp_report_from_dict(data["esp"]) if data.get("esp") else None),
            hea_report=(hea_report_from_dict(data["hea"]) if data.get("hea") else None),
        )
    except BundleError:
        raise
    except (KeyError, TypeError, ValueError, ValidationError) as exc:
        raise BundleError(f"bundle schema violation: {exc}", BUNDLE_SCHEMA)
    _validate_retrieved(bundle)
    return bundle


def _coupling_for_payload(payload: dict):
    from .machines import CouplingMap
    pairs = [tuple(entry["qubits"]) for entry in payload["gates"]
             if len(entry["qubits"]) == 2]
    return CouplingMap.from_pairs(len(payload["qubits"]), pairs)


def _validate_retrieved(bundle: JobBundle):
    try:
        logical = parse_qasm(bundle.logical_qasm)
        physical = parse_qasm(bundle.physical_qasm)
    except QasmError as exc:
        raise BundleError(f"embedded QASM does not parse: {exc}", BUNDLE_SCHEMA)
    for label, circ in (("logical", logical), ("physical", physical)):
        report = verify(circ)
        if not report.ok:
            raise BundleError(
                f"{label} circuit does not verify: {report.errors[0].message}",
                BUNDLE_SCHEMA)
    if bundle.counts.width != physical.num_clbits:
        raise BundleError(
            f"counts width {bundle.counts.width} != physical classical register "
            f"{physical.num_clbits}", BUNDLE_WIDTH_MISMATCH)
    if sum(bundle.counts.entries.values()) != bundle.shots:
        raise BundleError("counts total does not match the configured shots",
                          BUNDLE_SCHEMA)
    if bundle.noise not in ("ideal", "calibrated"):
        raise BundleError(f"unknown noise mode {bundle.noise!r}", BUNDLE_SCHEMA)


def export_bundle(bundle: JobBundle, path: str | Path,
                  chunk_size: int = DEFAULT_CHUNK_SIZE) -> list[Path]:
    """Write the bundle (and a counts sidecar when large). Byte-deterministic
    for identical inputs; returns the written paths."""
    validate_bundle(bundle)
    path = Path(path)
    written = [path]
    counts_ref = None
    if len(bundle.counts.entries) > INLINE_COUNTS_MAX:
        sidecar = path.with_name(path.name + ".counts")
        with sidecar.open("w") as fh:
            for chunk in chunk_counts(bundle.counts, bundle.job_id, chunk_size):
                fh.write(chunk_to_line(chunk) + "\n")
        counts_ref = sidecar.name
        written.append(sidecar)
    doc = bundle_to_dict(bundle, counts_ref=counts_ref)
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return written


def retrieve_bundle(path: str | Path) -> JobBundle:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise BundleError(f"cannot read bundle: {exc}", BUNDLE_CORRUPT)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleError(f"corrupt bundle file: {exc}", BUNDLE_CORRUPT)
    counts = None
    counts_payload = data.get("counts")
    if isinstance(counts_payload, dict) and "ref" in counts_payload:
        sidecar = path.with_name(counts_payload["ref"])
        try:
            with sidecar.open() as fh:
                counts = assemble_chunks(chunk_from_line(line) for line in fh
                                         if line.strip())
        except OSError as exc:
            raise BundleError(f"cannot read counts sidecar: {exc}", BUNDLE_CORRUPT)
        except ValidationError as exc:
            raise BundleError(f"corrupt counts sidecar: {exc}", BUNDLE_CORRUPT)
        declared = (counts_payload.get("shots"), counts_payload.get("width"))
        if declared != (counts.shots, counts.width):
            raise BundleError("sidecar counts disagree with the declared shots/width",
                              BUNDLE_SCHEMA)
    return bundle_from_dict(data, counts=counts)


def make_bundle(*, logical: Circuit, physical: Circuit, layout: Layout,
                options: TranspileOptions, metrics: TranspileMetrics,
                machine_name: str, snapshot: CalibrationSnapshot,
                shots: int, seed: int, noise: str, counts: Counts,
                problem: ProblemSpec | None = None,
                qubit_roles: dict[str, tuple[int, ...]] | None = None,
                clbit_roles: dict[str, tuple[int, ...]] | None = None,
                normalization: float | None = None,
                esp_report: EspReport | None = None,
                hea_report: HeaReport | None = None,
                job_id: str | None = None,
                created_at: datetime | None = None) -> JobBundle:
    """Assemble and validate a bundle. job_id and created_at are caller
    suppliable so fixtures can be byte-reproducible."""
    bundle = JobBundle(
        job_id=job_id or new_job_id(),
        created_at=created_at or datetime.now(timezone.utc),
        problem=problem,
        qubit_roles=qubit_roles or {},
        clbit_roles=clbit_roles or {},
        normalization=normalization,
        logical_qasm=emit_qasm(logical),
        physical_qasm=emit_qasm(physical),
        layout=layout,
        options=options,
        metrics=metrics,
        machine_name=machine_name,
        snapshot=snapshot,
        shots=shots,
        seed=seed,
        noise=noise,
        counts=counts,
        esp_report=esp_report,
        hea_report=hea_report,
    )
    validate_bundle(bundle)
    return bundle


# -- replay --------------------------------------------------------------------

def simulator_from_bundle(bundle: JobBundle) -> tuple[Circuit, RunConfig]:
    """A calibrated simulator rebuilt purely from the embedded snapshot."""
    physical = parse_qasm(bundle.physical_qasm)
    config = RunConfig(
        shots=bundle.shots,
        seed=bundle.seed,
        noise=bundle.noise,
        snapshot=bundle.snapshot if bundle.noise == "calibrated" else None,
    )
    return physical, config


def rerun_bundle(bundle: JobBundle, seed: int | None = None) -> Counts:
    physical, config = simulator_from_bundle(bundle)
    if seed is not None:
        config = replace(config, seed=seed)
    return run(physical, config)
