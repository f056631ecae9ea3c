"""Seeded random circuits shared by the transpiler, matcher and acceptance tests."""
from __future__ import annotations

import numpy as np

from qworkbench.circuit import Circuit, GateKind, from_ops

ONE_Q = [GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.SDG,
         GateKind.T, GateKind.TDG, GateKind.SX, GateKind.RX, GateKind.RY, GateKind.RZ]
TWO_Q = [GateKind.CX, GateKind.CZ, GateKind.SWAP, GateKind.CU1]


def random_circuit(rng: np.random.Generator, n_min=1, n_max=4, max_gates=14,
                   measured=False, wide=True) -> Circuit:
    n = int(rng.integers(n_min, n_max + 1))
    ops = []
    for _ in range(int(rng.integers(1, max_gates + 1))):
        draw = rng.random()
        if draw < 0.55 or n == 1:
            kind = ONE_Q[int(rng.integers(len(ONE_Q)))]
            params = ((float(rng.uniform(-np.pi, np.pi)),)
                      if kind.param_count else ())
            ops.append((kind, (int(rng.integers(n)),), (), params))
        elif draw < 0.85 or n == 2 or not wide:
            kind = TWO_Q[int(rng.integers(len(TWO_Q)))]
            qs = tuple(int(q) for q in rng.choice(n, size=2, replace=False))
            params = ((float(rng.uniform(-np.pi, np.pi)),)
                      if kind.param_count else ())
            ops.append((kind, qs, (), params))
        elif draw < 0.96 or n == 3:
            qs = tuple(int(q) for q in rng.choice(n, size=3, replace=False))
            ops.append((GateKind.CCX, qs, (), ()))
        else:
            qs = tuple(int(q) for q in rng.choice(n, size=4, replace=False))
            ops.append((GateKind.MCX, qs, (), ()))
    if measured:
        for q in range(n):
            ops.append((GateKind.MEASURE, (q,), (q,), ()))
    return from_ops(n, n if measured else 0, ops, name="random")


def corpus(seed: int, size: int, **kwargs) -> list[Circuit]:
    rng = np.random.default_rng(seed)
    return [random_circuit(rng, **kwargs) for _ in range(size)]
