import json
import random
from datetime import datetime, timezone

import pytest

from qworkbench.errors import BundleError, ValidationError
from qworkbench.jobdata import (JobBundle, assemble_chunks, bundle_to_dict,
                                chunk_counts, chunk_from_line, chunk_to_line,
                                export_bundle, make_bundle, rerun_bundle,
                                retrieve_bundle, simulator_from_bundle)
from qworkbench.problems import ProblemSpec, build
from qworkbench.simulate import Counts, RunConfig, run
from qworkbench.transpile import TranspileOptions, transpile

from conftest import make_snapshot

CREATED = datetime(2026, 2, 1, 12, 0, 0, tzinfo=timezone.utc)
JOB_ID = "0a0a0a0a-1111-2222-3333-444444444444"


@pytest.fixture(scope="module")
def bell_bundle(registry):
    snap = registry.get("vigo-like").latest
    result = build(ProblemSpec(kind="bell"))
    compiled = transpile(result.circuit, snap, TranspileOptions(seed=4))
    counts = run(compiled.physical,
                 RunConfig(shots=1000, seed=31, noise="calibrated", snapshot=snap))
    return make_bundle(
        logical=result.circuit, physical=compiled.physical, layout=compiled.layout,
        options=compiled.options, metrics=compiled.metrics,
        machine_name="vigo-like", snapshot=snap, shots=1000, seed=31,
        noise="calibrated", counts=counts, problem=result.problem,
        qubit_roles=result.qubit_roles, clbit_roles=result.clbit_roles,
        job_id=JOB_ID, created_at=CREATED)


class TestExportRetrieve:
    def test_round_trip_identity(self, bell_bundle, tmp_path):
        path = tmp_path / "bell.qjob"
        export_bundle(bell_bundle, path)
        again = retrieve_bundle(path)
        assert again == bell_bundle

    def test_byte_determinism(self, bell_bundle, tmp_path):
        a, b = tmp_path / "a.qjob", tmp_path / "b.qjob"
        export_bundle(bell_bundle, a)
        export_bundle(bell_bundle, b)
        assert a.read_bytes() == b.read_bytes()

    def test_counts_required(self, bell_bundle):
        with pytest.raises(ValidationError):
            make_bundle(
                logical=build(ProblemSpec(kind="bell")).circuit,
                physical=build(ProblemSpec(kind="bell")).circuit,
                layout=bell_bundle.layout, options=bell_bundle.options,
                metrics=bell_bundle.metrics, machine_name="vigo-like",
                snapshot=bell_bundle.snapshot, shots=10, seed=0, noise="ideal",
                counts=Counts(shots=5, width=2, entries={"00": 5}))

    def test_truncated_file_is_corrupt(self, bell_bundle, tmp_path):
        path = tmp_path / "cut.qjob"
        export_bundle(bell_bundle, path)
        path.write_text(path.read_text()[:200])
        with pytest.raises(BundleError) as err:
            retrieve_bundle(path)
        assert err.value.code == "bundle-corrupt"

    def test_version_mismatch_named(self, bell_bundle, tmp_path):
        path = tmp_path / "old.qjob"
        doc = bundle_to_dict(bell_bundle)
        doc["version"] = 99
        path.write_text(json.dumps(doc))
        with pytest.raises(BundleError) as err:
            retrieve_bundle(path)
        assert err.value.code == "bundle-version"
        assert "99" in str(err.value)

    def test_width_mismatch_code(self, bell_bundle, tmp_path):
        path = tmp_path / "narrow.qjob"
        doc = bundle_to_dict(bell_bundle)
        doc["counts"] = {"shots": 1000, "width": 3,
                         "entries": {"000": 600, "111": 400}}
        path.write_text(json.dumps(doc))
        with pytest.raises(BundleError) as err:
            retrieve_bundle(path)
        assert err.value.code == "bundle-width-mismatch"

    def test_schema_violation_code(self, bell_bundle, tmp_path):
        path = tmp_path / "bad.qjob"
        doc = bundle_to_dict(bell_bundle)
        del doc["layout"]
        path.write_text(json.dumps(doc))
        with pytest.raises(BundleError) as err:
            retrieve_bundle(path)
        assert err.value.code == "bundle-schema"

    def test_missing_file(self, tmp_path):
        with pytest.raises(BundleError) as err:
            retrieve_bundle(tmp_path / "nope.qjob")
        assert err.value.code == "bundle-corrupt"


class TestReplay:
    def test_rerun_reproduces_exactly(self, bell_bundle, tmp_path):
        path = tmp_path / "bell.qjob"
        export_bundle(bell_bundle, path)
        again = retrieve_bundle(path)
        assert rerun_bundle(again) == bell_bundle.counts

    def test_rerun_is_hermetic(self, bell_bundle, tmp_path, monkeypatch):
        # retrieval + rerun must touch no file besides the bundle
        path = tmp_path / "bell.qjob"
        export_bundle(bell_bundle, path)
        monkeypatch.chdir(tmp_path)
        again = retrieve_bundle(path.name)
        assert rerun_bundle(again) == bell_bundle.counts

    def test_fresh_seed_same_support(self, bell_bundle):
        counts = rerun_bundle(bell_bundle, seed=777)
        strong = {k for k, v in bell_bundle.counts.entries.items() if v >= 50}
        assert strong <= set(counts.entries)

    def test_zero_noise_bundle_reruns_ideal(self, registry):
        snap = make_snapshot(one_q_error=0.0, cx_error=0.0, readout_error=0.0,
                             name="clean")
        result = build(ProblemSpec(kind="bell"))
        compiled = transpile(result.circuit, snap, TranspileOptions(seed=2))
        counts = run(compiled.physical,
                     RunConfig(shots=400, seed=5, noise="calibrated", snapshot=snap))
        bundle = make_bundle(
            logical=result.circuit, physical=compiled.physical,
            layout=compiled.layout, options=compiled.options,
            metrics=compiled.metrics, machine_name="clean", snapshot=snap,
            shots=400, seed=5, noise="calibrated", counts=counts,
            job_id=JOB_ID, created_at=CREATED)
        physical, config = simulator_from_bundle(bundle)
        ideal = run(physical, RunConfig(shots=400, seed=5))
        assert run(physical, config) == ideal


class TestChunks:
    def make_counts(self, states, width=14):
        entries = {format(i, f"0{width}b"): 1 + (i % 3) for i in range(states)}
        return Counts(shots=sum(entries.values()), width=width, entries=entries)

    def test_sizes_and_terminal(self):
        counts = self.make_counts(10000)
        chunks = list(chunk_counts(counts, "j", 4096))
        assert [len(c.entries) for c in chunks] == [4096, 4096, 1808]
        assert [c.terminal for c in chunks] == [False, False, True]
        assert all(c.total == 3 for c in chunks)

    def test_single_entry(self):
        counts = Counts(shots=7, width=2, entries={"01": 7})
        chunks = list(chunk_counts(counts, "j"))
        assert len(chunks) == 1 and chunks[0].terminal
        assert assemble_chunks(chunks) == counts

    def test_shuffled_reassembly(self):
        counts = self.make_counts(9000)
        chunks = list(chunk_counts(counts, "j", 1024))
        random.Random(5).shuffle(chunks)
        assert assemble_chunks(iter(chunks)) == counts

    def test_duplicate_index_rejected(self):
        counts = self.make_counts(100)
        chunks = list(chunk_counts(counts, "j", 40))
        with pytest.raises(ValidationError):
            assemble_chunks(chunks + [chunks[0]])

    def test_missing_index_rejected(self):
        counts = self.make_counts(100)
        chunks = list(chunk_counts(counts, "j", 40))
        with pytest.raises(ValidationError) as err:
            assemble_chunks(chunks[:-1])
        assert "missing" in str(err.value)

    def test_wire_format_round_trip(self):
        counts = self.make_counts(50)
        for chunk in chunk_counts(counts, "job-7", 16):
            assert chunk_from_line(chunk_to_line(chunk)) == chunk

    def test_ascending_order_within_stream(self):
        counts = self.make_counts(300)
        seen = []
        for chunk in chunk_counts(counts, "j", 64):
            seen.extend(chunk.entries)
        assert seen == sorted(seen)


class TestSidecar:
    def test_large_counts_move_to_sidecar(self, bell_bundle, tmp_path):
        entries = {format(i, "017b"): 1 for i in range(70000)}
        big = Counts(shots=70000, width=17, entries=entries)
        bundle = JobBundle(
            **{**bell_bundle.__dict__,
               "counts": big, "shots": 70000,
               "physical_qasm": _wide_measure_qasm(17)})
        path = tmp_path / "big.qjob"
        written = export_bundle(bundle, path)
        assert [p.name for p in written] == ["big.qjob", "big.qjob.counts"]
        assert "ref" in json.loads(path.read_text())["counts"]
        again = retrieve_bundle(path)
        assert again.counts == big


def _wide_measure_qasm(width: int) -> str:
    from qworkbench.circuit import CircuitBuilder
    from qworkbench.qasm import emit_qasm
    b = CircuitBuilder(width, width)
    for q in range(width):
        b.h(q)
        b.measure(q, q)
    return emit_qasm(b.build())
