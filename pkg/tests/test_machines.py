import json
from datetime import datetime, timezone

import pytest

from qworkbench.errors import (QueryFileError, SelectorError,
                               UnknownMachineError, ValidationError)
from qworkbench.machines import (PropertyQuery, fixtures_dir,
                                 load_machine, load_query, machine_from_dict,
                                 machine_to_dict, parse_timestamp,
                                 property_series, query_to_invocation,
                                 run_query, save_query, snapshot_at)


def day(d: int) -> datetime:
    return datetime(2026, 1, d, tzinfo=timezone.utc)


class TestFixtures:
    def test_shipped_set(self, registry):
        names = registry.names()
        assert set(names) == {"vigo-like", "essex-like", "quito-like",
                              "bogota-like", "athens-like", "melbourne-like"}
        five_qubit = [n for n in names if registry.get(n).coupling.num_qubits == 5]
        assert len(five_qubit) == 5

    def test_coupling_shapes(self, registry):
        t_shaped = registry.get("vigo-like").coupling.edges
        assert t_shaped == frozenset({(0, 1), (1, 2), (1, 3), (3, 4)})
        linear = registry.get("bogota-like").coupling.edges
        assert linear == frozenset({(0, 1), (1, 2), (2, 3), (3, 4)})

    def test_three_increasing_snapshots(self, registry):
        for machine in registry:
            times = [s.taken_at for s in machine.snapshots]
            assert len(times) == 3
            assert times == sorted(times)
            assert len(set(times)) == 3

    def test_basis_coverage_held_at_load(self, vigo_snap):
        # loader enforces the invariant; spot-check both orientations
        assert ("cx", (0, 1)) in vigo_snap.gate_props
        assert ("cx", (1, 0)) in vigo_snap.gate_props

    def test_t2_defaulting_flagged(self, registry):
        snap = registry.get("athens-like").snapshots[1]
        assert "t2_defaulted:q3" in snap.flags
        assert snap.qubit_props[3].t2 == snap.qubit_props[3].t1


class TestSnapshotAt:
    def test_latest_before(self, vigo):
        lookup = snapshot_at(vigo, day(6).replace(hour=12))
        assert lookup.snapshot.taken_at == day(6)
        assert not lookup.stale

    def test_before_first_is_stale(self, vigo):
        lookup = snapshot_at(vigo, day(1))
        assert lookup.snapshot.taken_at == day(5)
        assert lookup.stale

    def test_exact_boundary_inclusive(self, vigo):
        lookup = snapshot_at(vigo, day(7))
        assert lookup.snapshot.taken_at == day(7)
        assert not lookup.stale

    def test_monotone(self, vigo):
        instants = [day(4), day(5), day(6), day(7)]
        chosen = [snapshot_at(vigo, t).snapshot.taken_at for t in instants]
        assert chosen == sorted(chosen)


class TestSeries:
    def test_one_point_per_snapshot_per_qubit(self, vigo):
        series = property_series(vigo, "qubit.t1")
        assert set(series) == set(range(5))
        assert all(len(points) == 3 for points in series.values())

    def test_empty_range(self, vigo):
        series = property_series(vigo, "qubit.t1", (day(1), day(2)))
        assert series == {}

    def test_gate_series_matches_file_verbatim(self, vigo):
        raw = json.loads((fixtures_dir() / "vigo-like.json").read_text())
        series = property_series(vigo, "gate.cx.error")
        for i, snap in enumerate(raw["snapshots"]):
            want = next(g["error"] for g in snap["gates"]
                        if g["gate"] == "cx" and g["qubits"] == [0, 1])
            assert series[(0, 1)][i][1] == want

    def test_unknown_selector_lists_grammar(self, vigo):
        with pytest.raises(SelectorError) as err:
            property_series(vigo, "qubit.bogus")
        assert "qubit.<" in str(err.value)


class TestQueries:
    def test_two_machine_table(self, registry):
        query = PropertyQuery(("vigo-like", "bogota-like"), ("qubit.t1", "qubit.t2"))
        rows = run_query(query, registry)
        machines = {r.machine for r in rows}
        assert machines == {"vigo-like", "bogota-like"}
        # 2 machines x 2 selectors x 5 qubits x 3 snapshots
        assert len(rows) == 60

    def test_mean_collapses_time(self, registry):
        query = PropertyQuery(("vigo-like",), ("qubit.t1",), aggregation="mean")
        rows = run_query(query, registry)
        assert len(rows) == 5
        assert all(r.timestamp is None for r in rows)

    def test_reusable_on_third_machine(self, registry):
        query = PropertyQuery(("vigo-like",), ("qubit.t1",), aggregation="mean")
        reused = PropertyQuery(("essex-like",), query.selectors, query.time_range,
                               query.aggregation)
        rows = run_query(reused, registry)
        assert {r.machine for r in rows} == {"essex-like"}

    def test_unknown_machine_named(self, registry):
        query = PropertyQuery(("nope-like",), ("qubit.t1",))
        with pytest.raises(UnknownMachineError) as err:
            run_query(query, registry)
        assert "nope-like" in str(err.value)

    def test_deterministic_order(self, registry):
        query = PropertyQuery(("bogota-like", "vigo-like"), ("qubit.t2", "qubit.t1"))
        rows = run_query(query, registry)
        assert rows == run_query(query, registry)
        assert [r.machine for r in rows[:30]] == ["bogota-like"] * 30


class TestQueryFiles:
    def test_round_trip(self, tmp_path):
        query = PropertyQuery(("vigo-like", "bogota-like"),
                              ("qubit.t1", "gate.cx.error"),
                              (day(5), day(7)), "mean")
        path = tmp_path / "q.query"
        save_query(query, path)
        assert load_query(path) == query

    def test_unknown_selector_rejected(self, tmp_path):
        path = tmp_path / "bad.query"
        path.write_text(json.dumps({
            "format": "property-query", "version": 1,
            "machines": ["vigo-like"], "selectors": ["qubit.bogus"],
            "time_range": None, "aggregation": "none"}))
        with pytest.raises(SelectorError):
            load_query(path)

    def test_malformed_file_locates_error(self, tmp_path):
        path = tmp_path / "broken.query"
        path.write_text("{ not json")
        with pytest.raises(QueryFileError) as err:
            load_query(path)
        assert "line" in str(err.value)

    def test_invocation_grammar(self):
        query = PropertyQuery(("vigo-like", "bogota-like"), ("qubit.t1", "qubit.t2"),
                              aggregation="mean")
        assert query_to_invocation(query) == (
            "qwb machine query --machines vigo-like,bogota-like "
            "--select qubit.t1,qubit.t2 --agg mean")


class TestCalibrationFiles:
    def test_numeric_round_trip(self, vigo):
        doc = machine_to_dict(vigo)
        again = machine_from_dict(json.loads(json.dumps(doc)))
        for snap_a, snap_b in zip(vigo.snapshots, again.snapshots):
            assert snap_a.qubit_props == snap_b.qubit_props
            assert snap_a.gate_props == snap_b.gate_props

    def test_bad_error_range_rejected(self, vigo):
        doc = machine_to_dict(vigo)
        doc["snapshots"][0]["qubits"][0]["readout_error"] = 1.5
        with pytest.raises(ValidationError):
            machine_from_dict(doc)

    def test_self_loop_rejected(self, vigo):
        doc = machine_to_dict(vigo)
        doc["coupling"]["edges"].append([2, 2])
        with pytest.raises(ValidationError):
            machine_from_dict(doc)

    def test_non_increasing_snapshots_rejected(self, vigo):
        doc = machine_to_dict(vigo)
        doc["snapshots"][1]["taken_at"] = doc["snapshots"][0]["taken_at"]
        with pytest.raises(ValidationError):
            machine_from_dict(doc)

    def test_missing_basis_coverage_rejected(self, vigo):
        doc = machine_to_dict(vigo)
        doc["snapshots"][0]["gates"] = [
            g for g in doc["snapshots"][0]["gates"]
            if not (g["gate"] == "cx" and g["qubits"] == [0, 1])]
        with pytest.raises(ValidationError):
            machine_from_dict(doc)


def test_timestamps_rfc3339():
    ts = parse_timestamp("2026-01-05T00:00:00Z")
    assert ts.tzinfo is not None
    with pytest.raises(ValidationError):
        parse_timestamp("last tuesday")
