"""Basis-translation templates shared by the transpiler and the gate matcher.

A template maps one gate to a sequence of (kind, roles, params) entries;
`roles` index into the source gate's operand list, so the same template works
for any placement. All rewrites bottom out in {rz, sx, x, cx} and are exact up
to global phase. Multi-controlled X grounds through a halved-angle
controlled-phase network conjugated by h on the target.
"""
from __future__ import annotations

import math

from .circuit import GateKind
from .errors import TranspileError

REQUIRED_BASIS = frozenset({"rz", "sx", "cx"})

Step = tuple[GateKind, tuple[int, ...], tuple[float, ...]]

_PI = math.pi


def _rewrite(kind: GateKind, roles: tuple[int, ...],
             params: tuple[float, ...], basis: frozenset[str]) -> list[Step] | None:
    """One rewriting step toward the basis; None means the gate is terminal."""
    if kind.value in basis or kind in (GateKind.MEASURE, GateKind.BARRIER):
        return None
    q = roles
    if kind is GateKind.H:
        return [(GateKind.RZ, (q[0],), (_PI / 2,)), (GateKind.SX, (q[0],), ()),
                (GateKind.RZ, (q[0],), (_PI / 2,))]
    if kind is GateKind.X:
        return [(GateKind.SX, (q[0],), ()), (GateKind.SX, (q[0],), ())]
    if kind is GateKind.Y:
        return [(GateKind.RZ, (q[0],), (_PI,)), (GateKind.X, (q[0],), ())]
    if kind is GateKind.Z:
        return [(GateKind.RZ, (q[0],), (_PI,))]
    if kind is GateKind.S:
        return [(GateKind.RZ, (q[0],), (_PI / 2,))]
    if kind is GateKind.SDG:
        return [(GateKind.RZ, (q[0],), (-_PI / 2,))]
    if kind is GateKind.T:
        return [(GateKind.RZ, (q[0],), (_PI / 4,))]
    if kind is GateKind.TDG:
        return [(GateKind.RZ, (q[0],), (-_PI / 4,))]
    if kind is GateKind.RX:
        t = params[0]
        return [(GateKind.RZ, (q[0],), (_PI / 2,)), (GateKind.SX, (q[0],), ()),
                (GateKind.RZ, (q[0],), (t + _PI,)), (GateKind.SX, (q[0],), ()),
                (GateKind.RZ, (q[0],), (_PI / 2,))]
    if kind is GateKind.RY:
        t = params[0]
        return [(GateKind.SX, (q[0],), ()), (GateKind.RZ, (q[0],), (t + _PI,)),
                (GateKind.SX, (q[0],), ()), (GateKind.RZ, (q[0],), (_PI,))]
    if kind is GateKind.CZ:
        return [(GateKind.H, (q[1],), ()), (GateKind.CX, (q[0], q[1]), ()),
                (GateKind.H, (q[1],), ())]
    if kind is GateKind.CU1:
        lam = params[0]
        return [(GateKind.RZ, (q[1],), (lam / 2,)), (GateKind.CX, (q[0], q[1]), ()),
                (GateKind.RZ, (q[1],), (-lam / 2,)), (GateKind.CX, (q[0], q[1]), ()),
                (GateKind.RZ, (q[0],), (lam / 2,))]
    if kind is GateKind.SWAP:
        return [(GateKind.CX, (q[0], q[1]), ()), (GateKind.CX, (q[1], q[0]), ()),
                (GateKind.CX, (q[0], q[1]), ())]
    if kind is GateKind.CCX:
        a, b, t = q
        return [(GateKind.H, (t,), ()), (GateKind.CX, (b, t), ()),
                (GateKind.TDG, (t,), ()), (GateKind.CX, (a, t), ()),
                (GateKind.T, (t,), ()), (GateKind.CX, (b, t), ()),
                (GateKind.TDG, (t,), ()), (GateKind.CX, (a, t), ()),
                (GateKind.T, (b,), ()), (GateKind.T, (t,), ()),
                (GateKind.H, (t,), ()), (GateKind.CX, (a, b), ()),
                (GateKind.T, (a,), ()), (GateKind.TDG, (b,), ()),
                (GateKind.CX, (a, b), ())]
    if kind is GateKind.MCX:
        controls, target = q[:-1], q[-1]
        if len(controls) == 1:
            return [(GateKind.CX, (controls[0], target), ())]
        if len(controls) == 2:
            return [(GateKind.CCX, (controls[0], controls[1], target), ())]
        return ([(GateKind.H, (target,), ())]
                + _controlled_phase_network(_PI, controls, target)
                + [(GateKind.H, (target,), ())])
    raise TranspileError(f"no translation template for {kind.value}")


def _controlled_phase_network(theta: float, controls: tuple[int, ...],
                              target: int) -> list[Step]:
    """Multi-controlled phase: peel one control per level, halving the angle."""
    if len(controls) == 1:
        return [(GateKind.CU1, (controls[0], target), (theta,))]
    last, rest = controls[-1], controls[:-1]
    inner_mcx: list[Step] = [(GateKind.MCX, rest + (last,), ())]
    return ([(GateKind.CU1, (last, target), (theta / 2,))]
            + inner_mcx
            + [(GateKind.CU1, (last, target), (-theta / 2,))]
            + inner_mcx
            + _controlled_phase_network(theta / 2, rest, target))


def expand_gate(kind: GateKind, num_operands: int, params: tuple[float, ...],
                basis: frozenset[str]) -> list[Step]:
    """Fully ground one gate into the basis (identity roles 0..k-1)."""
    if not REQUIRED_BASIS <= basis:
        missing = sorted(REQUIRED_BASIS - basis)
        raise TranspileError(f"target basis lacks required gates: {', '.join(missing)}")
    work: list[Step] = [(kind, tuple(range(num_operands)), params)]
    out: list[Step] = []
    guard = 0
    while work:
        guard += 1
        if guard > 200_000:
            raise TranspileError("translation did not terminate")
        k, roles, ps = work.pop(0)
        step = _rewrite(k, roles, ps, basis)
        if step is None:
            out.append((k, roles, ps))
        else:
            work = step + work
    return out


def expansion_kinds(kind: GateKind, num_operands: int, params: tuple[float, ...],
                    basis: frozenset[str]) -> list[tuple[GateKind, tuple[int, ...]]]:
    return [(k, roles) for k, roles, _ in expand_gate(kind, num_operands, params, basis)]
