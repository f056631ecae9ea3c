"""Command-line interface.

Subcommands compose through a JSON work document on stdin/stdout, so a whole
experiment is one shell pipeline:

    qwb build --problem shor --base 7 --mod 15 \
      | qwb transpile --machine vigo-like --level 1 \
      | qwb run --shots 4096 --noise calibrated \
      | qwb export --out shor.qjob

Exit codes: 0 ok, 1 user error, 2 internal error.
"""
from __future__ import annotations

import json
import math
import os
import sys
from pathlib import Path

import click

from . import serialize
from .analysis import esp, match
from .circuit import verify
from .docs import docs_lookup
from .errors import ValidationError, WorkbenchError
from .jobdata import (DEFAULT_CHUNK_SIZE, export_bundle, make_bundle,
                      retrieve_bundle, rerun_bundle)
from .machines import (MachineRegistry, PropertyQuery, format_timestamp,
                       load_query, parse_timestamp, property_series,
                       query_to_invocation, run_query, save_query, snapshot_at)
from .problems import ProblemSpec, build, required_resources
from .qasm import emit_qasm, parse_qasm
from .results import (find_period_and_factors, hypothetical_error_adjustment,
                      to_contingency, to_image, to_integer_histogram,
                      to_truth_table)
from .simulate import RunConfig, run
from .transpile import TranspileOptions, compare_strategies, transpile

DOC_KIND = "qworkbench-doc"


def _registry(machine_dir: str | None) -> MachineRegistry:
    return MachineRegistry.from_dir(machine_dir or os.environ.get("QWB_MACHINE_DIR"))


def _read_doc(path: str | None) -> dict:
    text = Path(path).read_text() if path else sys.stdin.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"expected a JSON work document on input: {exc}")
    if doc.get("kind") != DOC_KIND:
        raise ValidationError("input is not a qworkbench work document")
    return doc


def _write_doc(doc: dict, path: str | None):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _snapshot_for(registry: MachineRegistry, name: str, at: str | None):
    machine = registry.get(name)
    if at is None:
        return machine.latest
    return snapshot_at(machine, parse_timestamp(at)).snapshot


def _print_table(headers: list[str], rows: list[list[str]]):
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    click.echo("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    for row in rows:
        click.echo("  ".join(c.ljust(w) for c, w in zip(row, widths)))


@click.group()
def cli():
    """Quantum circuit workbench: build, transpile, simulate, analyze, share."""


# -- build ----------------------------------------------------------------------

@cli.command("build")
@click.option("--problem", required=True,
              type=click.Choice(["bell", "ghz", "qft", "shor", "truthtable", "image"]))
@click.option("--n", type=int, help="register size (ghz, qft) or oracle inputs")
@click.option("--m", type=int, help="oracle output bits")
@click.option("--base", type=int, help="factoring base a")
@click.option("--mod", "modulus", type=int, help="factoring modulus N")
@click.option("--table-file", type=click.Path(exists=True),
              help="truth table, one 0/1 output row per input value")
@click.option("--image-file", type=click.Path(exists=True), help="P2 portable graymap")
@click.option("--pixels", help="comma-separated intensities (with --width/--height)")
@click.option("--width", type=int)
@click.option("--height", type=int)
@click.option("--manual-qubits", help="comma-separated physical indices, disables auto selection")
@click.option("--out", type=click.Path(), help="write the work document here instead of stdout")
def build_cmd(problem, n, m, base, modulus, table_file, image_file, pixels,
              width, height, manual_qubits, out):
    """Build a circuit from a problem description."""
    kind = "truth_table" if problem == "truthtable" else problem
    table = None
    if table_file:
        rows = [line.strip() for line in Path(table_file).read_text().splitlines()
                if line.strip()]
        if m is None:
            m = len(rows[0])
        if n is None:
            n = max(1, (len(rows) - 1).bit_length())
        table = tuple(int(row, 2) for row in rows)
    px = None
    if image_file:
        width, height, px = _read_pgm(Path(image_file))
    elif pixels is not None:
        px = tuple(float(p) for p in pixels.split(","))
    qmap = tuple(int(q) for q in manual_qubits.split(",")) if manual_qubits else None
    spec = ProblemSpec(kind=kind, n=n, m=m, table=table, base=base, modulus=modulus,
                       width=width, height=height, pixels=px,
                       auto_qubits=qmap is None, manual_qubit_map=qmap)
    result = build(spec)
    doc = {
        "kind": DOC_KIND,
        "problem": serialize.problem_to_dict(spec),
        "qubit_roles": {k: list(v) for k, v in result.qubit_roles.items()},
        "clbit_roles": {k: list(v) for k, v in result.clbit_roles.items()},
        "normalization": result.normalization,
        "logical_qasm": emit_qasm(result.circuit),
    }
    _write_doc(doc, out)
    click.echo(f"built {kind}: {result.circuit.num_qubits} qubits, "
               f"{len(result.circuit.gates)} gates "
               f"(resources {required_resources(spec)})", err=True)


def _read_pgm(path: Path) -> tuple[int, int, tuple[float, ...]]:
    tokens: list[str] = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens or tokens[0] != "P2":
        raise ValidationError(f"{path}: only plain P2 graymaps are supported")
    width, height, _maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    values = tuple(float(t) for t in tokens[4:])
    if len(values) != width * height:
        raise ValidationError(f"{path}: expected {width * height} samples, "
                              f"got {len(values)}")
    return width, height, values


# -- verify ----------------------------------------------------------------------

@cli.command("verify")
@click.option("--qasm", "qasm_path", type=click.Path(exists=True),
              help="verify a QASM file instead of a work document")
@click.option("--in", "in_path", type=click.Path(exists=True))
def verify_cmd(qasm_path, in_path):
    """Structural verification; exits 1 when errors are present."""
    if qasm_path:
        circuit = parse_qasm(Path(qasm_path).read_text())
    else:
        doc = _read_doc(in_path)
        circuit = parse_qasm(doc["logical_qasm"])
    report = verify(circuit)
    for issue in report.issues:
        click.echo(f"{issue.severity}: {issue.code} at {issue.where}: {issue.message}")
    click.echo("ok" if report.ok else "invalid")
    if not report.ok:
        raise SystemExit(1)


# -- transpile / compare -----------------------------------------------------------

def _options_from_flags(level, seed, layout, basis) -> TranspileOptions:
    return TranspileOptions(
        optimization_level=level, seed=seed, layout_method=layout,
        basis_override=tuple(basis.split(",")) if basis else None)


@cli.command("transpile")
@click.option("--machine", required=True)
@click.option("--at", help="calibration snapshot time (RFC-3339)")
@click.option("--level", type=click.IntRange(0, 2), default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--layout", type=click.Choice(["trivial", "error_aware"]), default="trivial")
@click.option("--basis", help="override basis gates, comma-separated")
@click.option("--machine-dir", type=click.Path(exists=True))
@click.option("--in", "in_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path())
def transpile_cmd(machine, at, level, seed, layout, basis, machine_dir, in_path, out):
    """Compile the document's logical circuit for a machine."""
    registry = _registry(machine_dir)
    doc = _read_doc(in_path)
    snap = _snapshot_for(registry, machine, at)
    circuit = parse_qasm(doc["logical_qasm"])
    result = transpile(circuit, snap, _options_from_flags(level, seed, layout, basis))
    doc.update({
        "machine": machine,
        "snapshot_at": format_timestamp(snap.taken_at),
        "physical_qasm": emit_qasm(result.physical),
        "layout": serialize.layout_to_dict(result.layout),
        "options": serialize.options_to_dict(result.options),
        "metrics": serialize.metrics_to_dict(result.metrics),
        "provenance": list(result.provenance),
    })
    _write_doc(doc, out)
    m = result.metrics
    click.echo(f"{machine}: {m.gate_count} gates, {m.layer_count} layers, "
               f"{m.duration_ns:.0f} ns, ESP {m.esp_total:.4f}", err=True)


@cli.command("compare")
@click.option("--machine", required=True)
@click.option("--at")
@click.option("--strategy", "strategies", multiple=True,
              help="e.g. level=1,seed=7,layout=error_aware (repeatable)")
@click.option("--machine-dir", type=click.Path(exists=True))
@click.option("--in", "in_path", type=click.Path(exists=True))
def compare_cmd(machine, at, strategies, machine_dir, in_path):
    """Compare transpilation strategies on one logical circuit."""
    registry = _registry(machine_dir)
    doc = _read_doc(in_path)
    snap = _snapshot_for(registry, machine, at)
    circuit = parse_qasm(doc["logical_qasm"])
    options_list = [_parse_strategy(s) for s in strategies] or [
        TranspileOptions(optimization_level=level) for level in (0, 1, 2)]
    rows = compare_strategies(circuit, snap, options_list)
    _print_table(
        ["#", "level", "seed", "layout", "gates", "layers", "duration_ns", "esp"],
        [[str(r.index), str(r.options.optimization_level), str(r.options.seed),
          r.options.layout_method, str(r.gate_count), str(r.layer_count),
          f"{r.duration_ns:.1f}", f"{r.esp_total:.6f}"] for r in rows])


def _parse_strategy(text: str) -> TranspileOptions:
    fields = {}
    for part in text.split(","):
        if not part:
            continue
        key, _, value = part.partition("=")
        fields[key.strip()] = value.strip()
    try:
        return TranspileOptions(
            optimization_level=int(fields.get("level", 1)),
            seed=int(fields.get("seed", 0)),
            layout_method=fields.get("layout", "trivial"),
            basis_override=(tuple(fields["basis"].split("+"))
                            if "basis" in fields else None))
    except ValueError as exc:
        raise ValidationError(f"bad strategy {text!r}: {exc}")


# -- run ------------------------------------------------------------------------

@cli.command("run")
@click.option("--shots", type=int, default=1024, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--noise", type=click.Choice(["ideal", "calibrated"]), default="ideal")
@click.option("--machine-dir", type=click.Path(exists=True))
@click.option("--in", "in_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path())
def run_cmd(shots, seed, noise, machine_dir, in_path, out):
    """Execute the document's physical (or logical) circuit on the simulator."""
    doc = _read_doc(in_path)
    qasm = doc.get("physical_qasm") or doc["logical_qasm"]
    circuit = parse_qasm(qasm)
    snap = None
    if noise == "calibrated":
        if "machine" not in doc:
            raise ValidationError("calibrated noise needs a transpiled document "
                                  "(run transpile first)")
        registry = _registry(machine_dir)
        snap = _snapshot_for(registry, doc["machine"], doc.get("snapshot_at"))
    counts = run(circuit, RunConfig(shots=shots, seed=seed, noise=noise, snapshot=snap))
    doc["run"] = {"shots": shots, "seed": seed, "noise": noise}
    doc["counts"] = serialize.counts_to_dict(counts)
    _write_doc(doc, out)
    click.echo(f"{shots} shots -> {len(counts.entries)} distinct states", err=True)


# -- analysis ----------------------------------------------------------------------

def _bundle_or_doc(bundle_path, in_path, machine_dir):
    """Returns (logical, physical, snapshot, counts, problem, normalization)."""
    if bundle_path:
        b = retrieve_bundle(bundle_path)
        return (parse_qasm(b.logical_qasm), parse_qasm(b.physical_qasm), b.snapshot,
                b.counts, b.problem, b.normalization, b)
    doc = _read_doc(in_path)
    registry = _registry(machine_dir)
    snap = (_snapshot_for(registry, doc["machine"], doc.get("snapshot_at"))
            if "machine" in doc else None)
    logical = parse_qasm(doc["logical_qasm"]) if "logical_qasm" in doc else None
    physical = parse_qasm(doc["physical_qasm"]) if "physical_qasm" in doc else None
    counts = serialize.counts_from_dict(doc["counts"]) if "counts" in doc else None
    problem = serialize.problem_from_dict(doc["problem"]) if doc.get("problem") else None
    return logical, physical, snap, counts, problem, doc.get("normalization"), doc


@cli.command("esp")
@click.option("--bundle", "bundle_path", type=click.Path(exists=True))
@click.option("--in", "in_path", type=click.Path(exists=True))
@click.option("--machine-dir", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def esp_cmd(bundle_path, in_path, machine_dir, as_json):
    """Estimated success probability of the physical circuit."""
    _, physical, snap, *_ = _bundle_or_doc(bundle_path, in_path, machine_dir)
    if physical is None or snap is None:
        raise ValidationError("esp needs a transpiled document or a bundle")
    report = esp(physical, snap)
    if as_json:
        click.echo(json.dumps(serialize.esp_report_to_dict(report), indent=2))
        return
    rows = [[str(i), f"{p:.6f}", f"{c:.6f}"]
            for i, (p, c) in enumerate(zip(report.per_layer, report.cumulative_by_layer))]
    _print_table(["layer", "esp", "cumulative"], rows)
    click.echo(f"total {report.total:.6f} "
               f"(without readout {report.total_without_readout:.6f})")


@cli.command("match")
@click.option("--bundle", "bundle_path", type=click.Path(exists=True))
@click.option("--in", "in_path", type=click.Path(exists=True))
@click.option("--machine-dir", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def match_cmd(bundle_path, in_path, machine_dir, as_json):
    """Map logical gates to their physical realizations."""
    logical, physical, _, _, _, _, source = _bundle_or_doc(bundle_path, in_path, machine_dir)
    if logical is None or physical is None:
        raise ValidationError("match needs both logical and physical circuits")
    if bundle_path:
        initial = retrieve_bundle(bundle_path).layout.initial
        provenance = None
    else:
        initial = tuple(source["layout"]["initial"])
        prov = source.get("provenance")
        provenance = (tuple(p if p == "routing" else int(p) for p in prov)
                      if prov else None)
    mm = match(logical, physical, initial, provenance=provenance)
    if as_json:
        click.echo(json.dumps(serialize.match_map_to_dict(mm), indent=2))
        return
    rows = [[str(lid), logical.gates[lid].kind.value,
             ",".join(map(str, pids)) or "-"]
            for lid, pids in sorted(mm.assigned.items())]
    _print_table(["logical", "kind", "physical gates"], rows)
    click.echo(f"method={mm.method} routing_overhead={len(mm.unattributed)} gates")


@cli.command("hea")
@click.option("--bundle", "bundle_path", type=click.Path(exists=True))
@click.option("--in", "in_path", type=click.Path(exists=True))
@click.option("--machine-dir", type=click.Path(exists=True))
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def hea_cmd(bundle_path, in_path, machine_dir, trials, seed, as_json):
    """Monte-Carlo hypothetical error adjustment of measured counts."""
    _, physical, snap, counts, *_ = _bundle_or_doc(bundle_path, in_path, machine_dir)
    if physical is None or snap is None or counts is None:
        raise ValidationError("hea needs a run document or bundle with counts")
    report = hypothetical_error_adjustment(counts, physical, snap, trials, seed)
    if as_json:
        click.echo(json.dumps(serialize.hea_report_to_dict(report), indent=2))
        return
    rows = [[key, str(s.measured), f"{s.mean:.1f}", f"{s.sd:.1f}",
             f"[{s.ci_low:.1f}, {s.ci_high:.1f}]", "yes" if s.differentiated else "no"]
            for key, s in sorted(report.states.items())]
    _print_table(["state", "measured", "adjusted", "sd", "95% CI", "differentiated"], rows)


# -- decode -----------------------------------------------------------------------

@cli.group("decode")
def decode_group():
    """Decode measured counts into problem terms."""


def _decode_counts(bundle_path, in_path):
    if bundle_path:
        b = retrieve_bundle(bundle_path)
        return b.counts, b.problem, b.normalization
    doc = _read_doc(in_path)
    if "counts" not in doc:
        raise ValidationError("document has no counts; run the circuit first")
    problem = serialize.problem_from_dict(doc["problem"]) if doc.get("problem") else None
    return serialize.counts_from_dict(doc["counts"]), problem, doc.get("normalization")


_bundle_opt = click.option("--bundle", "bundle_path", type=click.Path(exists=True))
_in_opt = click.option("--in", "in_path", type=click.Path(exists=True))


@decode_group.command("integer")
@_bundle_opt
@_in_opt
@click.option("--include-zero", is_flag=True)
@click.option("--top", type=int, help="only the K most frequent rows")
def decode_integer(bundle_path, in_path, include_zero, top):
    counts, _, _ = _decode_counts(bundle_path, in_path)
    hist = to_integer_histogram(counts, include_zero)
    rows = sorted(hist.rows, key=lambda r: -r.count)[:top] if top else hist.rows
    _print_table(["value", "bitstring", "count", "frequency"],
                 [[str(r.value), r.bitstring, str(r.count), f"{r.frequency:.5f}"]
                  for r in rows])


@decode_group.command("factors")
@_bundle_opt
@_in_opt
@click.option("--base", type=int)
@click.option("--mod", "modulus", type=int)
def decode_factors(bundle_path, in_path, base, modulus):
    counts, problem, _ = _decode_counts(bundle_path, in_path)
    if problem is not None:
        base = base or problem.base
        modulus = modulus or problem.modulus
    if base is None or modulus is None:
        raise ValidationError("need --base and --mod (or a factoring bundle)")
    result = find_period_and_factors(to_integer_histogram(counts), base, modulus)
    if result.found:
        click.echo(f"r={result.period} factors={result.factors[0]},{result.factors[1]}")
    else:
        click.echo(f"no factors found (validated periods: "
                   f"{','.join(map(str, result.candidates)) or 'none'})")
        raise SystemExit(1)


@decode_group.command("image")
@_bundle_opt
@_in_opt
@click.option("--width", type=int)
@click.option("--height", type=int)
@click.option("--normalization", type=float)
@click.option("--out", type=click.Path(), help="write a P2 graymap")
def decode_image(bundle_path, in_path, width, height, normalization, out):
    counts, problem, norm = _decode_counts(bundle_path, in_path)
    if problem is not None:
        width = width or problem.width
        height = height or problem.height
    normalization = normalization if normalization is not None else norm
    if not width or not height or normalization is None:
        raise ValidationError("need --width, --height and --normalization "
                              "(or an image bundle)")
    image = to_image(counts, width, height, normalization)
    if out:
        maxval = max(1, math.ceil(max(image.pixels, default=1.0)))
        lines = [f"{min(maxval, round(p))}" for p in image.pixels]
        Path(out).write_text(
            f"P2\n{image.width} {image.height}\n{maxval}\n" + "\n".join(lines) + "\n")
        click.echo(f"wrote {out}", err=True)
    else:
        for y in range(image.height):
            row = image.pixels[y * image.width:(y + 1) * image.width]
            click.echo(" ".join(f"{p:.3f}" for p in row))
    if image.overflow_mass > 0:
        click.echo(f"warning: {image.overflow_mass:.4f} of the mass lies beyond "
                   f"the image", err=True)


@decode_group.command("truthtable")
@_bundle_opt
@_in_opt
@click.option("--inputs", required=True, help="comma-separated classical bits")
@click.option("--outputs", required=True)
def decode_truthtable(bundle_path, in_path, inputs, outputs):
    counts, _, _ = _decode_counts(bundle_path, in_path)
    view = to_truth_table(counts,
                          [int(b) for b in inputs.split(",")],
                          [int(b) for b in outputs.split(",")])
    rows = [[r.input_pattern,
             "  ".join(f"{o}:{c}" for o, c in r.outputs)] for r in view.rows]
    _print_table(["input", "outputs (pattern:count)"], rows)


@decode_group.command("contingency")
@_bundle_opt
@_in_opt
@click.option("--rows", "row_bits", required=True, help="comma-separated classical bits")
@click.option("--cols", "col_bits", default="", help="comma-separated classical bits")
def decode_contingency(bundle_path, in_path, row_bits, col_bits):
    counts, _, _ = _decode_counts(bundle_path, in_path)
    table = to_contingency(counts,
                           [int(b) for b in row_bits.split(",") if b],
                           [int(b) for b in col_bits.split(",") if b])
    headers = ["rows\\cols", *table.col_patterns, "total"]
    body = [[rp, *(str(c) for c in row), str(marg)]
            for rp, row, marg in zip(table.row_patterns, table.cells, table.row_marginals)]
    body.append(["total", *(str(m) for m in table.col_marginals), str(table.shots)])
    _print_table(headers, body)


# -- bundles ------------------------------------------------------------------------

@cli.command("export")
@click.option("--in", "in_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), help="bundle path (default <job-id>.qjob)")
@click.option("--job-id", help="caller-supplied id for reproducible files")
@click.option("--created-at", help="RFC-3339 timestamp override")
@click.option("--machine-dir", type=click.Path(exists=True))
@click.option("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE, show_default=True)
def export_cmd(in_path, out, job_id, created_at, machine_dir, chunk_size):
    """Pack a finished work document into a portable .qjob bundle."""
    doc = _read_doc(in_path)
    for key in ("logical_qasm", "physical_qasm", "layout", "options", "metrics",
                "machine", "run", "counts"):
        if key not in doc:
            raise ValidationError(f"work document is missing {key!r}; "
                                  "run the earlier pipeline stages first")
    registry = _registry(machine_dir)
    snap = _snapshot_for(registry, doc["machine"], doc.get("snapshot_at"))
    bundle = make_bundle(
        logical=parse_qasm(doc["logical_qasm"]),
        physical=parse_qasm(doc["physical_qasm"]),
        layout=serialize.layout_from_dict(doc["layout"]),
        options=serialize.options_from_dict(doc["options"]),
        metrics=serialize.metrics_from_dict(doc["metrics"]),
        machine_name=doc["machine"],
        snapshot=snap,
        shots=int(doc["run"]["shots"]),
        seed=int(doc["run"]["seed"]),
        noise=doc["run"]["noise"],
        counts=serialize.counts_from_dict(doc["counts"]),
        problem=(serialize.problem_from_dict(doc["problem"])
                 if doc.get("problem") else None),
        qubit_roles={k: tuple(v) for k, v in doc.get("qubit_roles", {}).items()},
        clbit_roles={k: tuple(v) for k, v in doc.get("clbit_roles", {}).items()},
        normalization=doc.get("normalization"),
        job_id=job_id,
        created_at=parse_timestamp(created_at) if created_at else None,
    )
    path = Path(out) if out else Path(f"{bundle.job_id}.qjob")
    written = export_bundle(bundle, path, chunk_size=chunk_size)
    click.echo(" ".join(str(p) for p in written))


@cli.command("import")
@click.option("--bundle", "bundle_path", type=click.Path(exists=True), required=True)
@click.option("--json", "as_json", is_flag=True, help="print the full bundle document")
def import_cmd(bundle_path, as_json):
    """Retrieve and validate a bundle, printing its summary."""
    from .jobdata import bundle_to_dict
    bundle = retrieve_bundle(bundle_path)
    if as_json:
        click.echo(json.dumps(bundle_to_dict(bundle), sort_keys=True, indent=2))
        return
    click.echo(f"job {bundle.job_id}")
    click.echo(f"  created  {format_timestamp(bundle.created_at)}")
    click.echo(f"  problem  {bundle.problem.kind if bundle.problem else '-'}")
    click.echo(f"  machine  {bundle.machine_name} "
               f"(snapshot {format_timestamp(bundle.snapshot.taken_at)})")
    click.echo(f"  run      {bundle.shots} shots, seed {bundle.seed}, {bundle.noise}")
    click.echo(f"  counts   {len(bundle.counts.entries)} states, "
               f"width {bundle.counts.width}")


@cli.command("rerun")
@click.option("--bundle", "bundle_path", type=click.Path(exists=True), required=True)
@click.option("--seed", type=int, help="fresh seed (default: the bundle's)")
@click.option("--json", "as_json", is_flag=True)
def rerun_cmd(bundle_path, seed, as_json):
    """Re-execute a bundle on a simulator built from its embedded calibration."""
    bundle = retrieve_bundle(bundle_path)
    counts = rerun_bundle(bundle, seed=seed)
    if as_json:
        click.echo(json.dumps(serialize.counts_to_dict(counts), sort_keys=True, indent=2))
        return
    rows = [[k, str(v)] for k, v in sorted(counts.entries.items())]
    _print_table(["state", "count"], rows)
    exact = "identical to" if counts == bundle.counts else "differs from"
    click.echo(f"rerun {exact} the stored counts", err=True)


# -- machine ---------------------------------------------------------------------------

@cli.group("machine")
def machine_group():
    """Explore machine calibration data."""


@machine_group.command("list")
@click.option("--machine-dir", type=click.Path(exists=True))
def machine_list(machine_dir):
    registry = _registry(machine_dir)
    rows = []
    for m in sorted(registry, key=lambda m: m.name):
        rows.append([m.name, str(m.coupling.num_qubits),
                     "yes" if m.online else "no", str(m.pending_jobs),
                     str(len(m.snapshots)),
                     format_timestamp(m.latest.taken_at)])
    _print_table(["machine", "qubits", "online", "pending", "snapshots", "latest"], rows)


@machine_group.command("show")
@click.argument("name")
@click.option("--at")
@click.option("--machine-dir", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def machine_show(name, at, machine_dir, as_json):
    registry = _registry(machine_dir)
    machine = registry.get(name)
    snap, stale = (snapshot_at(machine, parse_timestamp(at)) if at
                   else (machine.latest, False))
    if as_json:
        click.echo(json.dumps(serialize.machine_detail(machine, snap, stale),
                              sort_keys=True, indent=2))
        return
    click.echo(f"{name}  ({'online' if machine.online else 'offline'}, "
               f"{machine.pending_jobs} pending jobs)")
    click.echo(f"snapshot {format_timestamp(snap.taken_at)}"
               + (" [stale for requested time]" if stale else ""))
    rows = [[str(q), f"{p.t1:.1f}", f"{p.t2:.1f}", f"{p.frequency:.4f}",
             f"{p.readout_error:.4f}", f"{p.readout_duration:.0f}"]
            for q, p in enumerate(snap.qubit_props)]
    _print_table(["qubit", "t1_us", "t2_us", "freq_GHz", "readout_err", "readout_ns"], rows)


@machine_group.command("series")
@click.option("--machine", "name", required=True)
@click.option("--selector", required=True)
@click.option("--from", "from_", help="RFC-3339 start")
@click.option("--to", help="RFC-3339 end")
@click.option("--machine-dir", type=click.Path(exists=True))
def machine_series(name, selector, from_, to, machine_dir):
    registry = _registry(machine_dir)
    machine = registry.get(name)
    time_range = ((parse_timestamp(from_), parse_timestamp(to))
                  if from_ and to else None)
    series = property_series(machine, selector, time_range)
    rows = []
    for key in sorted(series, key=str):
        label = "-".join(map(str, key)) if isinstance(key, tuple) else str(key)
        for ts, value in series[key]:
            rows.append([label, format_timestamp(ts), f"{value!r}"])
    _print_table(["index", "timestamp", "value"], rows)


@machine_group.command("query")
@click.option("--machines", help="comma-separated machine names")
@click.option("--select", "selectors", help="comma-separated selectors")
@click.option("--from", "from_")
@click.option("--to", "to")
@click.option("--agg", type=click.Choice(["none", "min", "max", "mean"]), default=None)
@click.option("--file", "query_file", type=click.Path(exists=True),
              help="load a saved query")
@click.option("--save", "save_path", type=click.Path(), help="save the query for reuse")
@click.option("--show-invocation", is_flag=True,
              help="print the equivalent one-line command instead of running")
@click.option("--machine-dir", type=click.Path(exists=True))
def machine_query(machines, selectors, from_, to, agg, query_file, save_path,
                  show_invocation, machine_dir):
    """Run (or save) a reusable property query across machines."""
    if query_file:
        query = load_query(query_file)
        if machines:        # same saved query, different machines
            query = PropertyQuery(tuple(machines.split(",")), query.selectors,
                                  query.time_range, query.aggregation)
        if agg:
            query = PropertyQuery(query.machines, query.selectors,
                                  query.time_range, agg)
    else:
        if not machines or not selectors:
            raise ValidationError("need --machines and --select (or --file)")
        time_range = ((parse_timestamp(from_), parse_timestamp(to))
                      if from_ and to else None)
        query = PropertyQuery(tuple(machines.split(",")),
                              tuple(selectors.split(",")),
                              time_range, agg or "none")
    if save_path:
        save_query(query, save_path)
        click.echo(f"saved {save_path}", err=True)
    if show_invocation:
        click.echo(query_to_invocation(query))
        return
    registry = _registry(machine_dir)
    rows = run_query(query, registry)
    _print_table(
        ["machine", "selector", "index", "timestamp", "value"],
        [[r.machine, r.selector,
          "-".join(map(str, r.index)) if isinstance(r.index, tuple) else str(r.index),
          format_timestamp(r.timestamp) if r.timestamp else "-",
          f"{r.value!r}"] for r in rows])


@machine_group.command("docs")
@click.argument("term")
def machine_docs(term):
    entry = docs_lookup(term)
    if entry is None:
        click.echo(f"no entry for {term!r}")
        raise SystemExit(1)
    click.echo(f"{entry.title}\n\n{entry.body}")
    if entry.related:
        click.echo(f"\nrelated: {', '.join(entry.related)}")


# -- serve ------------------------------------------------------------------------------

@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, help="[default: 8712, or the config file's]")
@click.option("--machine-dir", type=click.Path(exists=True))
@click.option("--job-dir", type=click.Path(), help="bundle store [default: jobs]")
@click.option("--ui-dir", type=click.Path())
@click.option("--chunk-size", type=int, help=f"[default: {DEFAULT_CHUNK_SIZE}]")
@click.option("--timeout", type=float, help="request budget in seconds [default: 120]")
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="JSON config file; flags override it")
def serve_cmd(host, port, machine_dir, job_dir, ui_dir, chunk_size, timeout, config_path):
    """Serve the HTTP API (and the dashboard, when built)."""
    from .service import ServiceConfig, serve
    config = ServiceConfig.from_file(config_path) if config_path else ServiceConfig()
    config.machine_dir = machine_dir or config.machine_dir or os.environ.get("QWB_MACHINE_DIR")
    config.job_dir = job_dir or config.job_dir
    config.ui_dir = ui_dir or config.ui_dir
    config.chunk_size = chunk_size or config.chunk_size
    config.timeout_s = timeout or config.timeout_s
    serve(config, host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return code
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except click.exceptions.Abort:
        return 1
    except WorkbenchError as exc:
        click.echo(f"error [{exc.code}]: {exc}", err=True)
        return 1
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports and exits
        click.echo(f"internal error: {exc.__class__.__name__}: {exc}", err=True)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
