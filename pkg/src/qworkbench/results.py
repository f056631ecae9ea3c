"""Problem-specific decoding of measured counts, plus Monte-Carlo hypothetical
error adjustment.

Decoders turn bitstring tallies into integers, truth tables, images, factor
candidates, and contingency pivots. The error adjustment resamples the counts
under per-bit flip probabilities derived from per-qubit cumulative ESP and
readout error, reporting means with empirical 95% confidence intervals. The
flips corrupt in the same direction as the hardware noise; the point of the
report is comparing the measured and adjusted series, not inverting the
channel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .analysis import esp
from .circuit import Circuit
from .errors import ResourceLimitError, ValidationError
from .machines import CalibrationSnapshot
from .simulate import Counts, bitstring, measure_map

MAX_MATERIALIZED_WIDTH = 20


# -- integer histogram ---------------------------------------------------------

@dataclass(frozen=True)
class HistogramRow:
    bitstring: str
    value: int
    count: int
    frequency: float


@dataclass(frozen=True)
class IntegerHistogram:
    width: int
    shots: int
    rows: tuple[HistogramRow, ...]


def to_integer_histogram(counts: Counts, include_zero: bool = False) -> IntegerHistogram:
    """Rows sorted by integer value (classical bit 0 is least significant)."""
    if include_zero and counts.width > MAX_MATERIALIZED_WIDTH:
        raise ResourceLimitError(
            f"cannot materialize 2^{counts.width} rows; width is capped at "
            f"{MAX_MATERIALIZED_WIDTH} when include_zero is set")
    observed = {int(key, 2): count for key, count in counts.entries.items()} if counts.entries else {}
    values = range(2 ** counts.width) if include_zero else sorted(observed)
    shots = counts.shots
    rows = tuple(
        HistogramRow(bitstring(v, counts.width), v, observed.get(v, 0),
                     observed.get(v, 0) / shots if shots else 0.0)
        for v in values)
    return IntegerHistogram(counts.width, shots, rows)


# -- period finding ------------------------------------------------------------

@dataclass(frozen=True)
class PeriodResult:
    found: bool
    period: int | None
    factors: tuple[int, int] | None
    candidates: tuple[int, ...]      # validated periods, ascending


def _convergent_denominators(numerator: int, denominator: int, limit: int):
    """Denominators of the continued-fraction convergents of n/d, up to limit."""
    h_prev, h = 1, 0      # k(-2), k(-1) of the standard recurrence
    n, d = numerator, denominator
    while d:
        a = n // d
        n, d = d, n - a * d
        h_prev, h = h, a * h + h_prev
        if h > limit:
            break
        yield h


def find_period_and_factors(histogram: IntegerHistogram, base: int,
                            modulus: int) -> PeriodResult:
    """Classical post-processing of an order-finding run: each nonzero peak k
    suggests candidate periods through the convergents of k / 2^width; a
    candidate r counts once a^r = 1 (mod modulus). Factors come from the first
    even validated r with a^(r/2) != -1."""
    if not 1 < base < modulus or math.gcd(base, modulus) != 1:
        raise ValidationError("base must be coprime to the modulus and 1 < base < modulus")
    space = 2 ** histogram.width
    validated: set[int] = set()
    for row in histogram.rows:
        if row.count == 0 or row.value == 0:
            continue
        for r in _convergent_denominators(row.value, space, modulus):
            if r >= 1 and pow(base, r, modulus) == 1:
                validated.add(r)
    candidates = tuple(sorted(validated))
    period = candidates[0] if candidates else None
    for r in candidates:
        if r % 2:
            continue
        half = pow(base, r // 2, modulus)
        if half == modulus - 1:
            continue
        f1 = math.gcd(half - 1, modulus)
        f2 = math.gcd(half + 1, modulus)
        if 1 < f1 < modulus and 1 < f2 < modulus:
            return PeriodResult(True, r, tuple(sorted((f1, f2))), candidates)
    return PeriodResult(False, period, None, candidates)


# -- truth table ----------------------------------------------------------------

@dataclass(frozen=True)
class TruthTableRow:
    input_pattern: str
    outputs: tuple[tuple[str, int], ...]     # (output pattern, count)


@dataclass(frozen=True)
class TruthTableView:
    input_bits: tuple[int, ...]
    output_bits: tuple[int, ...]
    rows: tuple[TruthTableRow, ...]


def _restrict(value: int, bits: tuple[int, ...]) -> int:
    out = 0
    for j, bit in enumerate(bits):
        out |= ((value >> bit) & 1) << j
    return out


def _check_disjoint(a: tuple[int, ...], b: tuple[int, ...], width: int):
    if set(a) & set(b):
        raise ValidationError("bit sets must be disjoint")
    for bit in (*a, *b):
        if not 0 <= bit < width:
            raise ValidationError(f"bit {bit} outside counts width {width}")


def to_truth_table(counts: Counts, input_bits, output_bits) -> TruthTableView:
    input_bits = tuple(sorted(input_bits))
    output_bits = tuple(sorted(output_bits))
    _check_disjoint(input_bits, output_bits, counts.width)
    grouped: dict[int, dict[int, int]] = {}
    for key, count in counts.entries.items():
        value = int(key, 2)
        row = grouped.setdefault(_restrict(value, input_bits), {})
        out = _restrict(value, output_bits)
        row[out] = row.get(out, 0) + count
    rows = []
    for pattern in sorted(grouped):
        outputs = sorted(grouped[pattern].items(), key=lambda kv: (-kv[1], kv[0]))
        rows.append(TruthTableRow(
            bitstring(pattern, len(input_bits)),
            tuple((bitstring(o, len(output_bits)), c) for o, c in outputs)))
    return TruthTableView(input_bits, output_bits, tuple(rows))


# -- image ------------------------------------------------------------------------

@dataclass(frozen=True)
class DecodedImage:
    width: int
    height: int
    pixels: tuple[float, ...]
    normalization: float
    overflow_mass: float        # frequency observed beyond width*height (warning)


def to_image(source: Union[Counts, Mapping[str, float]], width: int, height: int,
             normalization: float) -> DecodedImage:
    """pixel_i = frequency(state i) * normalization. Exact probabilities as the
    source reproduce an encoded image exactly; counts reproduce it within
    sampling error."""
    if width < 1 or height < 1:
        raise ValidationError("image dimensions must be at least 1x1")
    if isinstance(source, Counts):
        total = source.shots
        freq = {int(k, 2): v / total for k, v in source.entries.items()}
        bitwidth = source.width
    else:
        freq = {int(k, 2): float(v) for k, v in source.items()}
        bitwidth = max((len(k) for k in source), default=0)
    size = width * height
    if size > 2 ** bitwidth:
        raise ValidationError(
            f"{width}x{height} image needs {size} states but counts cover 2^{bitwidth}")
    pixels = tuple(freq.get(i, 0.0) * normalization for i in range(size))
    overflow = sum(v for i, v in freq.items() if i >= size)
    return DecodedImage(width, height, pixels, normalization, overflow)


# -- contingency table ---------------------------------------------------------------

@dataclass(frozen=True)
class ContingencyTable:
    row_bits: tuple[int, ...]
    col_bits: tuple[int, ...]
    row_patterns: tuple[str, ...]
    col_patterns: tuple[str, ...]
    cells: tuple[tuple[int, ...], ...]       # [row][col]
    row_marginals: tuple[int, ...]
    col_marginals: tuple[int, ...]
    shots: int


def to_contingency(counts: Counts, row_bits, col_bits) -> ContingencyTable:
    row_bits = tuple(sorted(row_bits))
    col_bits = tuple(sorted(col_bits))
    _check_disjoint(row_bits, col_bits, counts.width)
    if len(row_bits) > 10 or len(col_bits) > 10:
        raise ResourceLimitError("contingency pivots are capped at 10 bits per axis")
    n_rows, n_cols = 2 ** len(row_bits), 2 ** len(col_bits)
    cells = [[0] * n_cols for _ in range(n_rows)]
    for key, count in counts.entries.items():
        value = int(key, 2)
        cells[_restrict(value, row_bits)][_restrict(value, col_bits)] += count
    return ContingencyTable(
        row_bits=row_bits,
        col_bits=col_bits,
        row_patterns=tuple(bitstring(r, len(row_bits)) for r in range(n_rows)),
        col_patterns=tuple(bitstring(c, len(col_bits)) for c in range(n_cols)),
        cells=tuple(tuple(row) for row in cells),
        row_marginals=tuple(sum(row) for row in cells),
        col_marginals=tuple(sum(col) for col in zip(*cells)),
        shots=counts.shots,
    )


# -- hypothetical error adjustment ------------------------------------------------

@dataclass(frozen=True)
class HeaState:
    measured: int
    mean: float
    sd: float
    ci_low: float
    ci_high: float
    differentiated: bool      # measured structure survives: the uniform center
                              # falls outside this state's interval


@dataclass(frozen=True)
class HeaReport:
    trials: int
    seed: int
    shots: int
    width: int
    flip_probs: tuple[float, ...]            # per classical bit
    states: dict[str, HeaState]
    samples: dict[str, tuple[int, ...]]      # per-trial adjusted counts


def flip_probabilities(physical: Circuit, snapshot: CalibrationSnapshot) -> tuple[float, ...]:
    """Per classical bit: 1 - (cumulative per-qubit ESP) * (readout success)."""
    mapping = measure_map(physical)
    if not mapping:
        raise ValidationError("physical circuit measures no qubits")
    report = esp(physical, snapshot)
    probs = [0.0] * physical.num_clbits
    for clbit, qubit in mapping.items():
        row = report.per_qubit_cumulative[qubit]
        survival = row[-1] if row else 1.0
        survival *= 1.0 - snapshot.qubit_props[qubit].readout_error
        probs[clbit] = 1.0 - survival
    return tuple(probs)


def hypothetical_error_adjustment(counts: Counts, physical: Circuit,
                                  snapshot: CalibrationSnapshot,
                                  trials: int = 1000, seed: int = 0) -> HeaReport:
    if trials < 100:
        raise ValidationError("need at least 100 trials for stable intervals")
    if counts.width != physical.num_clbits:
        raise ValidationError(
            f"counts width {counts.width} != circuit classical register "
            f"{physical.num_clbits}")
    probs = flip_probabilities(physical, snapshot)
    width = counts.width
    bit_weights = np.array([1 << j for j in range(width)], dtype=np.int64)
    p_vec = np.array(probs)

    measured = {int(k, 2): v for k, v in counts.entries.items()}
    per_trial: list[dict[int, int]] = []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        tally: dict[int, int] = {}
        for value, count in sorted(measured.items()):
            flips = rng.random((count, width)) < p_vec
            masks = (flips * bit_weights).sum(axis=1)
            adjusted, reps = np.unique(np.bitwise_xor(value, masks), return_counts=True)
            for v, c in zip(adjusted, reps):
                v = int(v)
                tally[v] = tally.get(v, 0) + int(c)
        per_trial.append(tally)

    states = sorted(set(measured).union(*per_trial))
    samples = {s: np.array([t.get(s, 0) for t in per_trial]) for s in states}
    out: dict[str, HeaState] = {}
    center = counts.shots / 2 ** width
    for s in states:
        vals = samples[s]
        lo, hi = np.percentile(vals, [2.5, 97.5])
        out[bitstring(s, width)] = HeaState(
            measured=measured.get(s, 0),
            mean=float(vals.mean()),
            sd=float(vals.std(ddof=1)) if trials > 1 else 0.0,
            ci_low=float(lo),
            ci_high=float(hi),
            differentiated=not (lo <= center <= hi),
        )
    return HeaReport(
        trials=trials, seed=seed, shots=counts.shots, width=width,
        flip_probs=probs, states=out,
        samples={bitstring(s, width): tuple(int(v) for v in samples[s]) for s in states},
    )
