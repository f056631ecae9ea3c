from __future__ import annotations

from datetime import datetime, timezone

import pytest

from qworkbench.machines import (CalibrationSnapshot, GateProps,
                                 MachineRegistry, QubitProps)


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        print(f"[{status}] {name}", flush=True)


@pytest.fixture(scope="session")
def registry() -> MachineRegistry:
    return MachineRegistry.from_dir()


@pytest.fixture(scope="session")
def vigo(registry):
    return registry.get("vigo-like")


@pytest.fixture(scope="session")
def vigo_snap(vigo):
    return vigo.latest


@pytest.fixture(scope="session")
def bogota_snap(registry):
    return registry.get("bogota-like").latest


@pytest.fixture(scope="session")
def melbourne_snap(registry):
    return registry.get("melbourne-like").latest


def make_snapshot(num_qubits=2, edges=((0, 1),), one_q_error=0.0, cx_error=0.0,
                  readout_error=0.0, sx_duration=35.0, cx_duration=300.0,
                  readout_duration=1000.0, basis=("rz", "sx", "x", "cx"),
                  name="toy") -> CalibrationSnapshot:
    """Small hand-rolled snapshot for tests that need exact error/duration values."""
    qubits = tuple(QubitProps(t1=80.0, t2=70.0, frequency=5.0,
                              readout_error=readout_error,
                              readout_duration=readout_duration)
                   for _ in range(num_qubits))
    gate_props = {}
    for q in range(num_qubits):
        gate_props[("rz", (q,))] = GateProps(0.0, 1.0)
        gate_props[("sx", (q,))] = GateProps(one_q_error, sx_duration)
        gate_props[("x", (q,))] = GateProps(one_q_error, sx_duration)
    for a, b in edges:
        gate_props[("cx", (a, b))] = GateProps(cx_error, cx_duration)
        gate_props[("cx", (b, a))] = GateProps(cx_error, cx_duration)
    return CalibrationSnapshot(
        machine_name=name,
        taken_at=datetime(2026, 1, 1, tzinfo=timezone.utc),
        basis_gates=tuple(basis),
        qubit_props=qubits,
        gate_props=gate_props,
    )


@pytest.fixture
def toy_snapshot():
    return make_snapshot()
