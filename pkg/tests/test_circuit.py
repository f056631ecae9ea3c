import math

import numpy as np
import pytest

from qworkbench.circuit import (Circuit, CircuitBuilder, GateKind, add_gate,
                                duration, from_ops, schedule, structural_equal,
                                verify)
from qworkbench.docs import docs_lookup
from qworkbench.errors import CalibrationDataError, ResourceLimitError, ValidationError
from qworkbench.unitary import unitary_of

from conftest import make_snapshot
from corpus import corpus


def bell_circuit(measured=True):
    b = CircuitBuilder(2, 2)
    b.h(0).cx(0, 1)
    if measured:
        b.measure(0, 0).measure(1, 1)
    return b.build()


class TestCatalog:
    def test_arities(self):
        assert GateKind.H.arity == 1
        assert GateKind.CX.arity == 2
        assert GateKind.CCX.arity == 3
        assert GateKind.MCX.arity is None
        assert GateKind.BARRIER.arity is None

    def test_param_counts(self):
        with_params = {k for k in GateKind if k.param_count}
        assert with_params == {GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.CU1}


class TestAddGate:
    def test_bell_construction(self):
        c = Circuit(2, 0)
        c = add_gate(c, GateKind.H, (0,))
        c = add_gate(c, GateKind.CX, (0, 1))
        assert len(c.gates) == 2
        assert [g.id for g in c.gates] == [0, 1]
        assert c.gates[1].qubits == (0, 1)

    def test_measure_append(self):
        c = add_gate(Circuit(1, 1), GateKind.MEASURE, (0,), clbits=(0,))
        assert [g.kind for g in c.gates] == [GateKind.MEASURE]
        assert c.gates[0].id == 0

    def test_param_stored(self):
        c = add_gate(Circuit(1, 0), GateKind.RZ, (0,), params=(math.pi,))
        assert c.gates[0].params == (math.pi,)

    def test_original_untouched(self):
        base = Circuit(1, 0)
        add_gate(base, GateKind.X, (0,))
        assert len(base.gates) == 0


class TestVerify:
    def test_bell_ok(self):
        report = verify(bell_circuit())
        assert report.ok and report.issues == ()

    def test_duplicate_qubits(self):
        c = add_gate(Circuit(2, 0), GateKind.CX, (0, 0))
        report = verify(c)
        assert not report.ok
        assert any(i.code == "duplicate_qubit" for i in report.errors)

    def test_clbit_out_of_range(self):
        c = add_gate(Circuit(2, 0), GateKind.MEASURE, (1,), clbits=(0,))
        assert any(i.code == "clbit_out_of_range" for i in verify(c).errors)

    def test_qubit_out_of_range(self):
        c = add_gate(Circuit(2, 0), GateKind.H, (5,))
        assert any(i.code == "qubit_out_of_range" for i in verify(c).errors)

    def test_wrong_param_count(self):
        c = add_gate(Circuit(1, 0), GateKind.RZ, (0,))
        assert any(i.code == "bad_param_count" for i in verify(c).errors)

    def test_mcx_needs_control(self):
        c = add_gate(Circuit(2, 0), GateKind.MCX, (0,))
        assert any(i.code == "mcx_no_control" for i in verify(c).errors)

    def test_warnings(self):
        b = CircuitBuilder(2, 2)
        b.h(0).measure(0, 0).x(0)      # gate after measurement, q1/c1 unused
        report = verify(b.build())
        assert report.ok
        codes = {i.code for i in report.warnings}
        assert codes == {"gate_after_measure", "clbit_never_written"}


class TestSchedule:
    def test_bell_layers(self):
        sched = schedule(bell_circuit(measured=False))
        assert sched.layers == ((0,), (1,))

    def test_disjoint_single_layer(self):
        b = CircuitBuilder(2)
        b.h(0).h(1)
        assert schedule(b.build()).layers == ((0, 1),)

    def test_asap_hand_trace(self):
        b = CircuitBuilder(3)
        b.cx(0, 1).h(2).cx(1, 2)
        assert schedule(b.build()).layers == ((0, 1), (2,))

    def test_deterministic_and_idempotent(self):
        c = bell_circuit()
        assert schedule(c) == schedule(c)

    def test_rejects_invalid(self):
        c = add_gate(Circuit(2, 0), GateKind.CX, (0, 0))
        with pytest.raises(ValidationError):
            schedule(c)

    def test_barrier_fences_its_qubits(self):
        b = CircuitBuilder(3)
        b.h(0).barrier(0, 1).h(1).h(2)
        sched = schedule(b.build())
        # h(1) must come after the barrier; h(2) is free to share layer 0
        assert sched.layer_of[2] > sched.layer_of[1]
        assert sched.layer_of[3] == 0

    def test_asap_perturbation_property(self):
        for circuit in corpus(seed=101, size=20, measured=True):
            sched = schedule(circuit)
            for g in circuit.gates:
                layer = sched.layer_of[g.id]
                if layer == 0:
                    continue
                earlier = [circuit.gates[i] for i in sched.layers[layer - 1]]
                conflict = any(set(e.qubits) & set(g.qubits)
                               for e in earlier if e.id < g.id)
                assert conflict, f"gate {g.id} could move one layer earlier"


class TestDuration:
    def test_sum_of_layer_maxima(self):
        snap = make_snapshot(sx_duration=35.0, cx_duration=300.0)
        b = CircuitBuilder(2)
        b.sx(0).cx(0, 1)
        assert duration(b.build(), snap) == pytest.approx(335.0)

    def test_empty_circuit(self, toy_snapshot):
        assert duration(Circuit(2, 0), toy_snapshot) == 0.0

    def test_layer_max_rule(self):
        snap = make_snapshot(num_qubits=3, edges=((0, 1), (1, 2)),
                             sx_duration=35.0, cx_duration=300.0)
        b = CircuitBuilder(3)
        b.sx(2).cx(0, 1)               # same layer: costs max(35, 300)
        assert duration(b.build(), snap) == pytest.approx(300.0)

    def test_measure_uses_readout_duration(self):
        snap = make_snapshot(readout_duration=1234.0)
        b = CircuitBuilder(1, 1)
        b.measure(0, 0)
        assert duration(b.build(), snap) == pytest.approx(1234.0)

    def test_missing_entry_names_gate(self):
        snap = make_snapshot(num_qubits=1, edges=())
        b = CircuitBuilder(1)
        b.h(0)                          # h carries no calibration entry
        with pytest.raises(CalibrationDataError) as err:
            duration(b.build(), snap)
        assert "h" in str(err.value)

    def test_monotone_under_append(self, vigo_snap):
        b = CircuitBuilder(2)
        b.sx(0)
        before = duration(b.build(), vigo_snap)
        b.cx(0, 1)
        assert duration(b.build(), vigo_snap) >= before


class TestUnitary:
    def test_hadamard(self):
        u = unitary_of(add_gate(Circuit(1, 0), GateKind.H, (0,)))
        want = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        assert np.allclose(u, want, atol=1e-12)

    def test_empty_identity(self):
        assert np.allclose(unitary_of(Circuit(2, 0)), np.eye(4), atol=1e-12)

    def test_toffoli_permutes_only_110_111(self):
        u = unitary_of(add_gate(Circuit(3, 0), GateKind.CCX, (0, 1, 2)))
        want = np.eye(8)
        want[[3, 7]] = want[[7, 3]]    # |110> <-> |111> with qubit 0 least significant
        assert np.allclose(u, want, atol=1e-12)

    def test_unitarity_on_corpus(self):
        for circuit in corpus(seed=7, size=15):
            u = unitary_of(circuit)
            dim = u.shape[0]
            assert np.max(np.abs(u @ u.conj().T - np.eye(dim))) < 1e-10

    def test_composition(self):
        rng = np.random.default_rng(21)
        parts = corpus(seed=77, size=10, n_min=2, n_max=4)
        for a, b in zip(parts[::2], parts[1::2]):
            n = max(a.num_qubits, b.num_qubits)
            merged = from_ops(n, 0, [(g.kind, g.qubits, g.clbits, g.params)
                                     for g in a.gates + b.gates])
            ua = unitary_of(from_ops(n, 0, [(g.kind, g.qubits, g.clbits, g.params)
                                            for g in a.gates]))
            ub = unitary_of(from_ops(n, 0, [(g.kind, g.qubits, g.clbits, g.params)
                                            for g in b.gates]))
            assert np.max(np.abs(unitary_of(merged) - ub @ ua)) < 1e-9

    def test_width_guard(self):
        with pytest.raises(ResourceLimitError):
            unitary_of(Circuit(13, 0))


class TestDocs:
    def test_t1_t2(self):
        entry = docs_lookup("t1_t2")
        assert "hold its state and phase" in entry.body

    def test_esp(self):
        entry = docs_lookup("esp")
        assert "product of the success rates" in entry.body

    def test_unknown_returns_none(self):
        assert docs_lookup("zzz_unknown") is None


def test_structural_equality_ignores_name():
    a = bell_circuit()
    b = Circuit(a.num_qubits, a.num_clbits, a.gates, name="other")
    assert structural_equal(a, b)
    assert not structural_equal(a, Circuit(2, 2))
