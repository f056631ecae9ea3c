"""Record API responses into frontend/fixtures/ for the dashboard's contract
tests. The dashboard must render these payloads without recomputing any domain
value, so the fixtures are the single source of truth for its tests.

    python scripts/record_ui_fixtures.py
"""
from __future__ import annotations

import json
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from fastapi.testclient import TestClient

from qworkbench.jobdata import bundle_to_dict, make_bundle
from qworkbench.machines import MachineRegistry
from qworkbench.problems import ProblemSpec, build
from qworkbench.service import ServiceConfig, create_app
from qworkbench.simulate import Counts, RunConfig, run
from qworkbench.transpile import TranspileOptions, transpile

OUT = Path(__file__).resolve().parents[1] / "frontend" / "fixtures"
CREATED = datetime(2026, 3, 10, tzinfo=timezone.utc)

TOFFOLI_QASM = (
    "OPENQASM 2.0;\n"
    'include "qelib1.inc";\n'
    "qreg q[3];\n"
    "creg c[3];\n"
    "ccx q[0],q[1],q[2];\n"
    "measure q[0] -> c[0];\n"
    "measure q[1] -> c[1];\n"
    "measure q[2] -> c[2];\n"
)

STRATEGIES = [
    {"optimization_level": 0, "seed": 11},
    {"optimization_level": 1, "seed": 11},
    {"optimization_level": 1, "seed": 907},
    {"optimization_level": 2, "seed": 11},
]

# Three counts shapes on the same machine: clearly structured, blurred, and
# near-uniform. The error-adjustment report's differentiated flags then span
# the three reliability regimes the result viewer must render.
REGIME_COUNTS = {
    "regime_a": {"00": 512, "11": 488},
    "regime_b": {"00": 340, "01": 245, "10": 165, "11": 250},
    "regime_c": {"00": 260, "01": 240, "10": 250, "11": 250},
}


def save(name: str, payload):
    path = OUT / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


def regime_bundle(name: str, entries: dict[str, int], registry) -> dict:
    snap = registry.get("vigo-like").latest
    built = build(ProblemSpec(kind="bell"))
    compiled = transpile(built.circuit, snap, TranspileOptions(seed=7))
    shots = sum(entries.values())
    counts = Counts(shots=shots, width=2, entries=entries)
    bundle = make_bundle(
        logical=built.circuit, physical=compiled.physical, layout=compiled.layout,
        options=compiled.options, metrics=compiled.metrics,
        machine_name="vigo-like", snapshot=snap, shots=shots, seed=77,
        noise="ideal", counts=counts, problem=built.problem,
        qubit_roles=built.qubit_roles, clbit_roles=built.clbit_roles,
        job_id=f"{name}-0000-0000-0000-000000000000", created_at=CREATED)
    return bundle_to_dict(bundle)


def ghz_bundle(registry) -> dict:
    snap = registry.get("vigo-like").latest
    built = build(ProblemSpec(kind="ghz", n=5))
    compiled = transpile(built.circuit, snap, TranspileOptions(seed=3))
    counts = run(compiled.physical,
                 RunConfig(shots=2048, seed=29, noise="calibrated", snapshot=snap))
    bundle = make_bundle(
        logical=built.circuit, physical=compiled.physical, layout=compiled.layout,
        options=compiled.options, metrics=compiled.metrics,
        machine_name="vigo-like", snapshot=snap, shots=2048, seed=29,
        noise="calibrated", counts=counts, problem=built.problem,
        qubit_roles=built.qubit_roles, clbit_roles=built.clbit_roles,
        job_id="ghzchunk-0000-0000-0000-000000000000", created_at=CREATED)
    return bundle_to_dict(bundle)


def image_bundle(registry) -> dict:
    snap = registry.get("vigo-like").latest
    built = build(ProblemSpec(kind="image", width=2, height=2, pixels=(0, 1, 2, 1)))
    compiled = transpile(built.circuit, snap, TranspileOptions(seed=5))
    counts = run(compiled.physical, RunConfig(shots=4096, seed=41))
    bundle = make_bundle(
        logical=built.circuit, physical=compiled.physical, layout=compiled.layout,
        options=compiled.options, metrics=compiled.metrics,
        machine_name="vigo-like", snapshot=snap, shots=4096, seed=41,
        noise="ideal", counts=counts, problem=built.problem,
        qubit_roles=built.qubit_roles, clbit_roles=built.clbit_roles,
        normalization=built.normalization,
        job_id="imagejob-0000-0000-0000-000000000000", created_at=CREATED)
    return bundle_to_dict(bundle)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    registry = MachineRegistry.from_dir()
    with tempfile.TemporaryDirectory() as jobs:
        client = TestClient(create_app(ServiceConfig(job_dir=jobs, chunk_size=64)))

        save("machines.json", client.get("/machines").json())
        save("machine_vigo.json", client.get("/machines/vigo-like").json())
        save("series_t1.json", client.get(
            "/machines/vigo-like/series", params={"selector": "qubit.t1"}).json())
        save("series_cx_error.json", client.get(
            "/machines/vigo-like/series", params={"selector": "gate.cx.error"}).json())
        save("docs_esp.json", client.get("/docs/esp").json())
        save("docs_t1_t2.json", client.get("/docs/t1_t2").json())

        compare = client.post("/transpile/compare", json={
            "qasm": TOFFOLI_QASM, "machine": "vigo-like",
            "options_list": STRATEGIES})
        compare.raise_for_status()
        save("compare_toffoli.json", compare.json())

        for name, entries in REGIME_COUNTS.items():
            doc = regime_bundle(name, entries, registry)
            job_id = doc["job_id"]
            client.post("/jobs", json=doc).raise_for_status()
            save(f"job_{name}.json", client.get(f"/jobs/{job_id}").json())
            stream = client.get(f"/jobs/{job_id}/counts")
            (OUT / f"counts_{name}.ndjson").write_text(stream.text)
            print(f"wrote {OUT / f'counts_{name}.ndjson'}")
            save(f"hea_{name}.json", client.post("/results/hea", json={
                "job_id": job_id, "trials": 400, "seed": 5}).json())
            save(f"decode_integer_{name}.json", client.post("/results/decode", json={
                "job_id": job_id, "decoder": "integer", "include_zero": True}).json())

        # a deliberately fragmented stream: ghz5 counts through 3-state chunks
        tiny = TestClient(create_app(ServiceConfig(job_dir=jobs, chunk_size=3)))
        ghz = ghz_bundle(registry)
        tiny.post("/jobs", json=ghz).raise_for_status()
        save("job_multichunk.json", tiny.get(f"/jobs/{ghz['job_id']}").json())
        stream = tiny.get(f"/jobs/{ghz['job_id']}/counts")
        (OUT / "counts_multichunk.ndjson").write_text(stream.text)
        print(f"wrote {OUT / 'counts_multichunk.ndjson'}")

        doc = image_bundle(registry)
        client.post("/jobs", json=doc).raise_for_status()
        job_id = doc["job_id"]
        save("job_image.json", client.get(f"/jobs/{job_id}").json())
        save("decode_image.json", client.post("/results/decode", json={
            "job_id": job_id, "decoder": "image"}).json())
        save("decode_truthtable.json", client.post("/results/decode", json={
            "job_id": job_id, "decoder": "truthtable",
            "input_bits": [0], "output_bits": [1]}).json())
        save("decode_contingency.json", client.post("/results/decode", json={
            "job_id": job_id, "decoder": "contingency",
            "row_bits": [0], "col_bits": [1]}).json())


if __name__ == "__main__":
    main()
