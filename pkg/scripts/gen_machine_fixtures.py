"""Regenerate the packaged 5-qubit machine fixtures.

Values are fabricated within realistic ranges (seeded, so reruns are
byte-stable). Run from the repo root:

    python scripts/gen_machine_fixtures.py
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "qworkbench" / "fixtures" / "machines"

T_SHAPE = [[0, 1], [1, 2], [1, 3], [3, 4]]
LINEAR = [[0, 1], [1, 2], [2, 3], [3, 4]]

# 3x5 grid for circuits too wide for the 5-qubit devices
GRID_15 = ([[r * 5 + c, r * 5 + c + 1] for r in range(3) for c in range(4)]
           + [[r * 5 + c, (r + 1) * 5 + c] for r in range(2) for c in range(5)])

MACHINES = [
    ("vigo-like", 5, T_SHAPE, 2),
    ("essex-like", 5, T_SHAPE, 7),
    ("quito-like", 5, T_SHAPE, 0),
    ("bogota-like", 5, LINEAR, 4),
    ("athens-like", 5, LINEAR, 1),
    ("melbourne-like", 15, GRID_15, 11),
]

DAYS = ["2026-01-05T00:00:00Z", "2026-01-06T00:00:00Z", "2026-01-07T00:00:00Z"]


def r(x, digits=6):
    return float(f"{x:.{digits}g}")


def snapshot(rng, num_qubits, edges, drift, drop_t2_qubit=None):
    qubits = []
    for q in range(num_qubits):
        t1 = rng.uniform(60.0, 140.0) * drift
        entry = {
            "t1": r(t1),
            "t2": r(min(t1 * rng.uniform(0.6, 1.4), 2 * t1)),
            "frequency": r(rng.uniform(4.6, 5.3)),
            "readout_error": r(rng.uniform(0.008, 0.045) * drift),
            "readout_duration": r(rng.uniform(1200.0, 4200.0)),
        }
        if q == drop_t2_qubit:
            del entry["t2"]
        qubits.append(entry)
    gates = []
    for q in range(num_qubits):
        gates.append({"gate": "rz", "qubits": [q], "error": 0.0, "duration": 1.0})
        for name in ("sx", "x"):
            gates.append({"gate": name, "qubits": [q],
                          "error": r(rng.uniform(1.5e-4, 6e-4) * drift),
                          "duration": 35.56})
    for a, b in edges:
        err = r(rng.uniform(5e-3, 1.6e-2) * drift)
        dur = r(rng.uniform(250.0, 480.0))
        gates.append({"gate": "cx", "qubits": [a, b], "error": err, "duration": dur})
        gates.append({"gate": "cx", "qubits": [b, a], "error": err, "duration": dur})
    return {"basis_gates": ["rz", "sx", "x", "cx"], "qubits": qubits, "gates": gates}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for seed_offset, (name, num_qubits, edges, pending) in enumerate(MACHINES):
        rng = np.random.default_rng(20260105 + seed_offset)
        snapshots = []
        for day_idx, day in enumerate(DAYS):
            drift = 1.0 + rng.uniform(-0.08, 0.08)
            drop = 3 if (name == "athens-like" and day_idx == 1) else None
            snap = snapshot(rng, num_qubits, edges, drift, drop_t2_qubit=drop)
            snap["taken_at"] = day
            snapshots.append(snap)
        doc = {
            "format": "machine-calibration",
            "version": 1,
            "name": name,
            "online": True,
            "pending_jobs": pending,
            "coupling": {"num_qubits": num_qubits, "edges": edges},
            "snapshots": snapshots,
        }
        path = OUT / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
