import threading
from datetime import datetime, timezone

import pytest

from qworkbench.jobdata import make_bundle
from qworkbench.problems import ProblemSpec, build
from qworkbench.simulate import RunConfig, run
from qworkbench.store import JobStore, UnknownJobError
from qworkbench.transpile import TranspileOptions, transpile


def bell_bundle(registry, job_id, seed=31):
    snap = registry.get("vigo-like").latest
    result = build(ProblemSpec(kind="bell"))
    compiled = transpile(result.circuit, snap, TranspileOptions(seed=4))
    counts = run(compiled.physical,
                 RunConfig(shots=300, seed=seed, noise="calibrated", snapshot=snap))
    return make_bundle(
        logical=result.circuit, physical=compiled.physical, layout=compiled.layout,
        options=compiled.options, metrics=compiled.metrics, machine_name="vigo-like",
        snapshot=snap, shots=300, seed=seed, noise="calibrated", counts=counts,
        problem=result.problem, job_id=job_id,
        created_at=datetime(2026, 2, 5, tzinfo=timezone.utc))


def test_restart_loses_nothing(registry, tmp_path):
    store = JobStore(tmp_path)
    bundle = bell_bundle(registry, "persist-0000-0000-0000-000000000001")
    store.save(bundle)
    reopened = JobStore(tmp_path)     # a fresh process scanning the directory
    assert reopened.ids() == (bundle.job_id,)
    assert reopened.get(bundle.job_id) == bundle


def test_unknown_job(tmp_path):
    with pytest.raises(UnknownJobError):
        JobStore(tmp_path).get("nope")


def test_concurrent_saves_never_interleave(registry, tmp_path):
    store = JobStore(tmp_path)
    bundles = [bell_bundle(registry, f"cc00000{i}-0000-0000-0000-000000000000",
                           seed=100 + i) for i in range(6)]
    errors = []

    def save(bundle):
        try:
            store.save(bundle)
        except Exception as exc:  # noqa: BLE001
            errors.append(exc)

    threads = [threading.Thread(target=save, args=(b,)) for b in bundles]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []
    fresh = JobStore(tmp_path)
    assert len(fresh.ids()) == 6
    for bundle in bundles:
        assert fresh.get(bundle.job_id) == bundle   # no partial writes visible


def test_no_staging_leftovers(registry, tmp_path):
    store = JobStore(tmp_path)
    store.save(bell_bundle(registry, "clean000-0000-0000-0000-000000000000"))
    leftovers = [p for p in tmp_path.iterdir() if p.name.startswith(".staging")]
    assert leftovers == []
