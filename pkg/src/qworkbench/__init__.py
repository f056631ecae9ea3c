"""qworkbench: a vendor-independent workbench for gate-based quantum circuits.

Build circuits from problem descriptions, verify and schedule them, transpile
onto machine models with seeded determinism and per-gate provenance, simulate
ideally or with calibration-matched noise, decode results back into problem
terms, and share everything as portable job bundles over files, a CLI, and an
HTTP service.
"""
from .analysis import EspReport, MatchMap, esp, esp_delta, match
from .circuit import (Circuit, CircuitBuilder, GateInstance, GateKind,
                      LayerSchedule, VerificationReport, add_gate, duration,
                      schedule, structural_equal, verify)
from .docs import docs_lookup
from .jobdata import (JobBundle, assemble_chunks, chunk_counts, export_bundle,
                      make_bundle, rerun_bundle, retrieve_bundle,
                      simulator_from_bundle)
from .machines import (CalibrationSnapshot, CouplingMap, MachineRecord,
                       MachineRegistry, PropertyQuery, load_machine,
                       load_query, property_series, run_query, save_query,
                       snapshot_at)
from .problems import BuildResult, ProblemSpec, build, required_resources
from .qasm import emit_qasm, parse_qasm
from .results import (find_period_and_factors, hypothetical_error_adjustment,
                      to_contingency, to_image, to_integer_histogram,
                      to_truth_table)
from .simulate import Counts, RunConfig, probabilities, run, statevector
from .transpile import (TranspileOptions, TranspileResult, compare_strategies,
                        transpile)
from .unitary import unitary_of

__version__ = "0.1.0"

__all__ = [
    "EspReport", "MatchMap", "esp", "esp_delta", "match",
    "Circuit", "CircuitBuilder", "GateInstance", "GateKind", "LayerSchedule",
    "VerificationReport", "add_gate", "duration", "schedule", "structural_equal",
    "verify", "docs_lookup",
    "JobBundle", "assemble_chunks", "chunk_counts", "export_bundle",
    "make_bundle", "rerun_bundle", "retrieve_bundle", "simulator_from_bundle",
    "CalibrationSnapshot", "CouplingMap", "MachineRecord", "MachineRegistry",
    "PropertyQuery", "load_machine", "load_query", "property_series",
    "run_query", "save_query", "snapshot_at",
    "BuildResult", "ProblemSpec", "build", "required_resources",
    "emit_qasm", "parse_qasm",
    "find_period_and_factors", "hypothetical_error_adjustment",
    "to_contingency", "to_image", "to_integer_histogram", "to_truth_table",
    "Counts", "RunConfig", "probabilities", "run", "statevector",
    "TranspileOptions", "TranspileResult", "compare_strategies", "transpile",
    "unitary_of", "__version__",
]
