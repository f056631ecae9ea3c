"""In-situ documentation: a small glossary served next to the data it explains."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DocEntry:
    key: str
    title: str
    body: str
    related: tuple[str, ...] = ()


_GLOSSARY: dict[str, DocEntry] = {}


def _register(key, title, body, related=()):
    _GLOSSARY[key] = DocEntry(key, title, body, tuple(related))


_register(
    "qubit", "Qubit",
    "The base unit of quantum computation. A qubit is measured as 0 or 1 "
    "probabilistically; before measurement it can hold a superposition of both.",
    ("gate", "shots"))
_register(
    "gate", "Gate",
    "A discrete operation on one or more qubits, such as the Hadamard (h), "
    "controlled-NOT (cx), or Toffoli (ccx). Circuits are ordered lists of gates.",
    ("qubit", "layer", "basis_gates"))
_register(
    "layer", "Layer",
    "A set of gates that act on disjoint qubits and can run at the same time. "
    "Circuits are scheduled into layers as early as possible, and diagrams "
    "draw one column per layer.",
    ("gate", "duration"))
_register(
    "shots", "Shots",
    "The number of repeated executions of one circuit. Counting the measured "
    "bitstrings over many shots estimates the outcome distribution.",
    ("counts",))
_register(
    "counts", "Counts",
    "The tally of measured bitstrings over all shots of a run. Classical bit 0 "
    "is the rightmost character of each bitstring.",
    ("shots",))
_register(
    "t1_t2", "T1 and T2",
    "T1 and T2 measure how long the qubit can hold its state and phase, "
    "respectively; computations that outlast them read back degraded "
    "information. Reported in microseconds per calibration snapshot.",
    ("readout_error", "calibration"))
_register(
    "readout_error", "Readout error",
    "The probability that measuring a qubit reports the flipped bit. Applied "
    "per measured qubit, independently of gate errors.",
    ("t1_t2", "esp"))
_register(
    "gate_error", "Gate error",
    "The probability that a gate leaves the machine in a wrong state. Each "
    "calibration snapshot carries one rate per gate and operand tuple.",
    ("esp", "calibration"))
_register(
    "esp", "Estimated success probability (ESP)",
    "The product of the success rates (1 - error) over a physical circuit's "
    "gates; readout success of the measured qubits multiplies into the total. "
    "Reported per layer, cumulatively per layer, and per qubit per layer.",
    ("gate_error", "readout_error"))
_register(
    "calibration", "Calibration snapshot",
    "A timestamped record of a machine's physical properties: per-qubit T1/T2, "
    "frequency and readout data, plus per-gate error and duration. Machines are "
    "recalibrated regularly, so snapshots form a time series.",
    ("t1_t2", "gate_error"))
_register(
    "coupling_map", "Coupling map",
    "The graph of qubit pairs that support two-qubit gates on a machine. Gates "
    "between unconnected qubits need swap chains inserted by the transpiler.",
    ("transpilation",))
_register(
    "basis_gates", "Basis gates",
    "The gate set a machine executes natively. Transpilation rewrites every "
    "other gate into this set.",
    ("transpilation", "coupling_map"))
_register(
    "transpilation", "Transpilation",
    "Compiling a logical circuit into a physical one: choosing a qubit layout, "
    "routing two-qubit gates onto coupled pairs with swaps, translating to the "
    "basis gates, and optionally simplifying. A small logical circuit can grow "
    "much larger physically.",
    ("basis_gates", "coupling_map", "esp"))
_register(
    "layout", "Layout",
    "The assignment of logical qubits to physical qubits. Routing swaps move "
    "it around during execution, so the initial and final maps can differ.",
    ("transpilation",))
_register(
    "hea", "Hypothetical error adjustment (HEA)",
    "A Monte-Carlo resampling of measured counts under the machine's estimated "
    "bit-flip rates. The adjusted means and 95% confidence intervals show how "
    "much of the structure in the counts survives the machine's noise.",
    ("esp", "readout_error", "counts"))
_register(
    "job_bundle", "Job bundle",
    "A self-contained record of one execution: logical and physical circuits, "
    "layout, run configuration, counts, and the full calibration snapshot. "
    "Retrieving a bundle is enough to rebuild a matching simulator.",
    ("calibration", "counts"))
_register(
    "amplitude_encoding", "Amplitude encoding",
    "Storing a non-negative vector in a quantum state so that each entry's "
    "share of the total becomes the squared magnitude of one amplitude. The "
    "normalization constant is kept so decoding can undo it.",
    ("counts",))
_register(
    "period_finding", "Period finding",
    "Reading the period of modular exponentiation from the peaks of the "
    "counting register: each peak k suggests candidates via the continued "
    "fraction of k / 2^width, validated classically.",
    ("counts",))


def docs_lookup(term: str) -> DocEntry | None:
    """Glossary lookup. Unknown keys return None, never an error."""
    return _GLOSSARY.get(term.strip().lower())


def docs_terms() -> tuple[str, ...]:
    return tuple(sorted(_GLOSSARY))
