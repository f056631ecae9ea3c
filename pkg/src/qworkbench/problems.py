"""Problem-oriented circuit builders with automated qubit/classical-bit selection.

Five problem kinds: Bell pair, GHZ chain, quantum Fourier transform, order
finding for factoring (small moduli), boolean truth-table oracles, and
amplitude encoding of grayscale images. Builders return the circuit together
with named qubit/clbit roles so downstream decoding knows which wires mean what.

Controlled modular multiplication is synthesized as a basis-state permutation:
cycle decomposition into transpositions, each realized as an x/cx-conjugated
multi-controlled X. Wide mcx gates stay symbolic; the transpiler grounds them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .circuit import Circuit, CircuitBuilder, GateKind, verify
from .errors import ValidationError

PROBLEM_KINDS = ("bell", "ghz", "qft", "shor", "truth_table", "image")

MAX_SHOR_MODULUS = 15    # desk scale: 3n qubits at n=4 is already 12


@dataclass(frozen=True)
class ProblemSpec:
    kind: str
    n: int | None = None                      # ghz/qft size, truth_table inputs
    m: int | None = None                      # truth_table outputs
    table: tuple[int, ...] | None = None      # row x -> m-bit output value
    base: int | None = None                   # shor: a
    modulus: int | None = None                # shor: N
    width: int | None = None                  # image
    height: int | None = None
    pixels: tuple[float, ...] | None = None   # row-major intensities
    auto_qubits: bool = True
    manual_qubit_map: tuple[int, ...] | None = None

    def validated(self) -> "ProblemSpec":
        k = self.kind
        if k not in PROBLEM_KINDS:
            raise ValidationError(f"unknown problem kind {k!r}")
        if k == "bell":
            pass
        elif k == "ghz":
            if self.n is None or self.n < 2:
                raise ValidationError("ghz needs n >= 2")
        elif k == "qft":
            if self.n is None or self.n < 1:
                raise ValidationError("qft needs n >= 1")
        elif k == "shor":
            a, N = self.base, self.modulus
            if a is None or N is None:
                raise ValidationError("shor needs base and modulus")
            if N < 3 or N > MAX_SHOR_MODULUS:
                raise ValidationError(f"modulus must be in [3, {MAX_SHOR_MODULUS}]")
            if not 1 < a < N:
                raise ValidationError("base must satisfy 1 < base < modulus")
            if math.gcd(a, N) != 1:
                raise ValidationError(f"base {a} shares a factor with modulus {N}; "
                                      f"gcd is already {math.gcd(a, N)}")
        elif k == "truth_table":
            n, m, table = self.n, self.m, self.table
            if n is None or m is None or table is None or n < 1 or m < 1:
                raise ValidationError("truth_table needs n >= 1, m >= 1 and a table")
            if len(table) != 2 ** n:
                raise ValidationError(f"table needs {2 ** n} rows, got {len(table)}")
            if any(not 0 <= row < 2 ** m for row in table):
                raise ValidationError(f"table rows must be {m}-bit values")
        elif k == "image":
            w, h, px = self.width, self.height, self.pixels
            if w is None or h is None or px is None or w < 1 or h < 1:
                raise ValidationError("image needs width >= 1, height >= 1 and pixels")
            if len(px) != w * h:
                raise ValidationError(f"expected {w * h} pixels, got {len(px)}")
            if any(p < 0 for p in px):
                raise ValidationError("pixel intensities must be non-negative")
            if not any(p > 0 for p in px):
                raise ValidationError("at least one pixel must be positive")
        if self.manual_qubit_map is not None:
            qmap = self.manual_qubit_map
            if len(set(qmap)) != len(qmap) or any(q < 0 for q in qmap):
                raise ValidationError("manual qubit map must be distinct non-negative indices")
        return self


@dataclass(frozen=True)
class BuildResult:
    circuit: Circuit
    qubit_roles: dict[str, tuple[int, ...]]
    clbit_roles: dict[str, tuple[int, ...]]
    problem: ProblemSpec
    normalization: float | None = None        # image only


def required_resources(spec: ProblemSpec) -> tuple[int, int]:
    spec = spec.validated()
    k = spec.kind
    if k == "bell":
        return 2, 2
    if k == "ghz":
        return spec.n, spec.n
    if k == "qft":
        return spec.n, 0
    if k == "shor":
        n = _shor_register_bits(spec.modulus)
        return 3 * n, 2 * n
    if k == "truth_table":
        return spec.n + spec.m, spec.m
    if k == "image":
        return _image_qubits(spec), _image_qubits(spec)
    raise ValidationError(f"unknown problem kind {k!r}")


def _shor_register_bits(modulus: int) -> int:
    return max(1, math.ceil(math.log2(modulus)))


def _image_qubits(spec: ProblemSpec) -> int:
    return max(1, math.ceil(math.log2(spec.width * spec.height)))


def build(spec: ProblemSpec) -> BuildResult:
    spec = spec.validated()
    builder = {
        "bell": _build_bell,
        "ghz": _build_ghz,
        "qft": _build_qft,
        "shor": _build_shor,
        "truth_table": _build_truth_table,
        "image": _build_image,
    }[spec.kind]
    result = builder(spec)
    if spec.manual_qubit_map is not None:
        result = _remap(result, spec.manual_qubit_map)
    report = verify(result.circuit)
    if not report.ok:
        raise ValidationError(f"builder produced an invalid circuit: {report.errors[0].message}")
    return result


def _remap(result: BuildResult, qmap: tuple[int, ...]) -> BuildResult:
    circuit = result.circuit
    if len(qmap) != circuit.num_qubits:
        raise ValidationError(
            f"manual qubit map covers {len(qmap)} qubits, circuit needs {circuit.num_qubits}")
    width = max(qmap) + 1
    b = CircuitBuilder(width, circuit.num_clbits, circuit.name)
    for g in circuit.gates:
        b.gate(g.kind, tuple(qmap[q] for q in g.qubits), g.clbits, g.params)
    roles = {name: tuple(qmap[q] for q in qs) for name, qs in result.qubit_roles.items()}
    return replace(result, circuit=b.build(), qubit_roles=roles)


# -- entanglement demos ------------------------------------------------------

def _build_bell(spec: ProblemSpec) -> BuildResult:
    b = CircuitBuilder(2, 2, "bell")
    b.h(0).cx(0, 1).measure(0, 0).measure(1, 1)
    return BuildResult(b.build(), {"data": (0, 1)}, {"data": (0, 1)}, spec)


def _build_ghz(spec: ProblemSpec) -> BuildResult:
    n = spec.n
    b = CircuitBuilder(n, n, f"ghz{n}")
    b.h(0)
    for i in range(n - 1):
        b.cx(i, i + 1)
    for i in range(n):
        b.measure(i, i)
    qs = tuple(range(n))
    return BuildResult(b.build(), {"data": qs}, {"data": qs}, spec)


# -- quantum Fourier transform ------------------------------------------------

def _qft_ops(qubits: tuple[int, ...]) -> list[tuple]:
    """Little-endian DFT over the given wires (wire order = bit significance)."""
    n = len(qubits)
    ops: list[tuple] = []
    for i in range(n - 1, -1, -1):
        ops.append((GateKind.H, (qubits[i],), (), ()))
        for j in range(i - 1, -1, -1):
            angle = math.pi / (2 ** (i - j))
            ops.append((GateKind.CU1, (qubits[j], qubits[i]), (), (angle,)))
    for i in range(n // 2):
        ops.append((GateKind.SWAP, (qubits[i], qubits[n - 1 - i]), (), ()))
    return ops


def _inverse_qft_ops(qubits: tuple[int, ...]) -> list[tuple]:
    inverted = []
    for kind, qs, cs, ps in reversed(_qft_ops(qubits)):
        if kind is GateKind.CU1:
            inverted.append((kind, qs, cs, (-ps[0],)))
        else:
            inverted.append((kind, qs, cs, ps))     # h and swap are self-inverse
    return inverted


def _build_qft(spec: ProblemSpec) -> BuildResult:
    n = spec.n
    b = CircuitBuilder(n, 0, f"qft{n}")
    for kind, qs, cs, ps in _qft_ops(tuple(range(n))):
        b.gate(kind, qs, cs, ps)
    return BuildResult(b.build(), {"data": tuple(range(n))}, {}, spec)


# -- order finding (Shor) ------------------------------------------------------

def _permutation_transpositions(perm: list[int]) -> list[tuple[int, int]]:
    """Cycle decomposition; applying the returned swaps in order realizes perm."""
    seen = [False] * len(perm)
    swaps: list[tuple[int, int]] = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        for member in cycle[1:]:
            swaps.append((cycle[0], member))
    return swaps


def _controlled_transposition(b: CircuitBuilder, control: int,
                              work: tuple[int, ...], u: int, v: int):
    """Swap basis states u and v of the work register when `control` is set."""
    diff = u ^ v
    t = (diff & -diff).bit_length() - 1
    others = [bit for bit in range(len(work)) if bit != t and (diff >> bit) & 1]
    rep = u if not (u >> t) & 1 else v     # the endpoint with bit t clear
    for bit in others:                      # fold differing bits onto bit t
        b.cx(work[t], work[bit])
    zeros = [bit for bit in range(len(work))
             if bit != t and not (rep >> bit) & 1]
    for bit in zeros:
        b.x(work[bit])
    controls = [control] + [work[bit] for bit in range(len(work)) if bit != t]
    b.mcx(controls, work[t])
    for bit in reversed(zeros):
        b.x(work[bit])
    for bit in reversed(others):
        b.cx(work[t], work[bit])


def _build_shor(spec: ProblemSpec) -> BuildResult:
    a, N = spec.base, spec.modulus
    n = _shor_register_bits(N)
    counting = tuple(range(2 * n))
    work = tuple(range(2 * n, 3 * n))
    b = CircuitBuilder(3 * n, 2 * n, f"shor_{a}_mod_{N}")

    for q in counting:
        b.h(q)
    b.x(work[0])                           # work register starts in |1>
    for k, ctl in enumerate(counting):
        multiplier = pow(a, 2 ** k, N)
        if multiplier == 1:
            continue
        size = 2 ** n
        perm = [(y * multiplier) % N if y < N else y for y in range(size)]
        for u, v in _permutation_transpositions(perm):
            _controlled_transposition(b, ctl, work, u, v)
    for kind, qs, cs, ps in _inverse_qft_ops(counting):
        b.gate(kind, qs, cs, ps)
    for k, q in enumerate(counting):
        b.measure(q, k)

    return BuildResult(b.build(),
                       {"counting": counting, "work": work},
                       {"counting": tuple(range(2 * n))},
                       spec)


# -- truth-table oracle --------------------------------------------------------

def _build_truth_table(spec: ProblemSpec) -> BuildResult:
    n, m, table = spec.n, spec.m, spec.table
    inputs = tuple(range(n))
    outputs = tuple(range(n, n + m))
    b = CircuitBuilder(n + m, m, "truth_table")
    for j in range(m):
        for row in range(2 ** n):
            if not (table[row] >> j) & 1:
                continue
            zeros = [bit for bit in range(n) if not (row >> bit) & 1]
            for bit in zeros:
                b.x(inputs[bit])
            b.mcx(list(inputs), outputs[j])
            for bit in reversed(zeros):
                b.x(inputs[bit])
    for j in range(m):
        b.measure(outputs[j], j)
    return BuildResult(b.build(),
                       {"inputs": inputs, "outputs": outputs},
                       {"outputs": tuple(range(m))},
                       spec)


# -- image amplitude encoding ---------------------------------------------------

def encoding_amplitudes(spec: ProblemSpec) -> tuple[list[float], float]:
    """Target amplitudes (padded to a power of two) and the normalization."""
    total = float(sum(spec.pixels))
    q = _image_qubits(spec)
    amps = [math.sqrt(p / total) for p in spec.pixels]
    amps.extend(0.0 for _ in range(2 ** q - len(amps)))
    return amps, total


def _build_image(spec: ProblemSpec) -> BuildResult:
    q = _image_qubits(spec)
    amps, total = encoding_amplitudes(spec)
    probs = [a * a for a in amps]
    b = CircuitBuilder(q, q, "image")

    # walk bits MSB -> LSB; each step rotates the target conditioned on the
    # already-fixed prefix, with angles from the conditional split
    for target in range(q - 1, -1, -1):
        prefix_bits = list(range(target + 1, q))
        for prefix in range(2 ** len(prefix_bits)):
            p0 = p1 = 0.0
            for i, p in enumerate(probs):
                if all(((i >> bit) & 1) == ((prefix >> k) & 1)
                       for k, bit in enumerate(prefix_bits)):
                    if (i >> target) & 1:
                        p1 += p
                    else:
                        p0 += p
            if p0 + p1 <= 0.0 or p1 == 0.0:
                continue                    # zero branch: angle 0 by convention
            theta = 2.0 * math.atan2(math.sqrt(p1), math.sqrt(p0))
            _controlled_ry(b, theta, prefix_bits, prefix, target)
    for bit in range(q):
        b.measure(bit, bit)
    qs = tuple(range(q))
    return BuildResult(b.build(), {"data": qs}, {"data": qs}, spec, normalization=total)


def _controlled_ry(b: CircuitBuilder, theta: float,
                   controls: list[int], pattern: int, target: int):
    if not controls:
        b.ry(target, theta)
        return
    zeros = [q for k, q in enumerate(controls) if not (pattern >> k) & 1]
    for q in zeros:
        b.x(q)
    # pattern-controlled ry via two mcx: Ry(t/2) X Ry(-t/2) X = Ry(t)
    b.ry(target, theta / 2)
    b.mcx(controls, target)
    b.ry(target, -theta / 2)
    b.mcx(controls, target)
    for q in reversed(zeros):
        b.x(q)
