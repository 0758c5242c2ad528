"""
qg command line.

    qg spectrum <graph> [--double-leaves]
    qg validate <graph> [--n N] [--n-ortho N] [--dump]
    qg simulate <scenario> [--out DIR]
    qg bench <graph> --n 64,128,256 [--seed S]
    qg path <graph> --vertices 0,1,2 --field <csv> [--out FILE]
    qg export-basis <graph> [--out FILE]
    qg transform <graph> --field <csv> [--n N] [--out FILE]
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from qgraph.config import get_settings
from qgraph.errors import QuantumGraphError, TransformShapeError
from qgraph.reports import (
    bench_report,
    spectrum_report,
    trace_report,
    transform_report,
    validation_report,
)
from qgraph.tools.exporters import (
    coefficient_table,
    export_basis,
    path_table,
    read_field_table,
    write_text,
)
from qgraph.tools.metric_graph import (
    EquilateralGraph,
    double_at_leaves,
    expand_walk,
    load_graph,
    path_samples,
    path_trace,
    subdivide,
)
from qgraph.tools.qgfft import SampledField, field_norm, forward, inverse
from qgraph.tools.scenario import load_scenario
from qgraph.tools.spectral_basis import build_basis, discrete_spectrum
from qgraph.tools.validation import run_bench
from qgraph.workflow import SimulationWorkflow, ValidationWorkflow


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got '{text}'")


def _equilateral(path: str, double_leaves: bool) -> EquilateralGraph:
    metric = load_graph(path)
    if double_leaves:
        metric, _ = double_at_leaves(metric)
    return subdivide(metric)


def _emit(text: str, out: Optional[str], quiet: bool):
    if out:
        written = write_text(out, text)
        if not quiet:
            print(f"💾 Wrote {written}")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# ==================== COMMANDS ====================

def cmd_spectrum(args) -> int:
    graph = _equilateral(args.graph, args.double_leaves)
    spectrum = discrete_spectrum(graph)
    basis = build_basis(graph)
    print(spectrum_report(Path(args.graph).stem, spectrum, basis))
    return 0


def cmd_validate(args) -> int:
    dump_dir = None
    if args.dump:
        dump_dir = str(Path(get_settings().output_dir) / f"{Path(args.graph).stem}_gram")

    workflow = ValidationWorkflow(verbose=not args.quiet, workers=args.threads)
    report, trace = workflow.run(
        args.graph, N=args.n, N_ortho=args.n_ortho,
        double_leaves=args.double_leaves, dump_dir=dump_dir,
    )
    print(validation_report(report))
    if args.trace:
        print(trace_report(trace))
    return 0 if report.passed else 1


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    output_dir = args.out or scenario.output_path
    if output_dir is None:
        output_dir = str(Path(get_settings().output_dir) / Path(args.scenario).stem)

    workflow = SimulationWorkflow(verbose=not args.quiet, workers=args.threads)
    result = workflow.run(scenario, output_dir)
    if not args.quiet:
        print(f"💾 {len(result.written)} files written to {output_dir}")
    if args.trace:
        print(trace_report(result.trace))
    return 0


def cmd_bench(args) -> int:
    basis = build_basis(_equilateral(args.graph, args.double_leaves))
    seed = args.seed if args.seed is not None else get_settings().seed
    if not args.quiet:
        print(f"⚡ Benchmarking N = {args.n} ({args.repeats} repeats)")
    report = run_bench(basis, args.n, seed=seed, repeats=args.repeats, graph_name=Path(args.graph).stem)
    print(bench_report(report))
    return 0


def cmd_path(args) -> int:
    graph = _equilateral(args.graph, args.double_leaves)
    values = read_field_table(args.field)
    if values.shape[0] != graph.edge_count:
        raise TransformShapeError(
            f"{args.field} has {values.shape[0]} edges, graph has {graph.edge_count}"
        )
    walk = expand_walk(graph, args.vertices)
    x, y = path_samples(values, path_trace(graph, walk))
    _emit(path_table(x, y), args.out, args.quiet)
    return 0


def cmd_export_basis(args) -> int:
    basis = build_basis(_equilateral(args.graph, args.double_leaves))
    _emit(export_basis(basis), args.out, args.quiet)
    return 0


def cmd_transform(args) -> int:
    graph = _equilateral(args.graph, args.double_leaves)
    field = SampledField(read_field_table(args.field))
    if field.edge_count != graph.edge_count:
        raise TransformShapeError(f"{args.field} has {field.edge_count} edges, graph has {graph.edge_count}")
    if args.n is not None and args.n != field.N:
        raise TransformShapeError(f"{args.field} holds N = {field.N} samples per edge, --n asked for {args.n}")

    basis = build_basis(graph)
    coefficients = forward(basis, field, args.threads)
    back = inverse(basis, coefficients, args.threads)

    norm = field_norm(field)
    coefficient_norm = float(np.sqrt(np.sum(np.abs(coefficients.values) ** 2)))
    stats = {
        "norm": norm,
        "coefficient_norm": coefficient_norm,
        "parseval": abs(coefficient_norm ** 2 - norm ** 2) / norm ** 2 if norm > 0 else 0.0,
        "roundtrip": float(np.max(np.abs(back.values - field.values))),
        "vertex_spread": field.vertex_spread(graph),
    }
    print(transform_report(Path(args.graph).stem, field.N, stats))
    if args.out:
        _emit(coefficient_table(coefficients), args.out, args.quiet)
    return 0


# ==================== PARSER ====================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qg", description="Fast transforms and PDE solvers on quantum graphs")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default: QG_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_command(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("graph", help="graph file")
        p.add_argument("--double-leaves", action="store_true", help="glue a mirror copy at degree-1 vertices")
        return p

    p = graph_command("spectrum", "discrete spectrum and fundamental frequencies")
    p.set_defaults(func=cmd_spectrum)

    p = graph_command("validate", "orthonormality, Parseval and round-trip tables")
    p.add_argument("--n", type=int, default=64, help="samples per edge for the transform tables")
    p.add_argument("--n-ortho", type=int, default=16, help="samples per edge for the Gram matrices")
    p.add_argument("--dump", action="store_true", help="save Gram matrices as .npy under QG_OUTPUT_DIR")
    p.add_argument("--trace", action="store_true", help="print the decision trace")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="run a PDE scenario")
    p.add_argument("scenario", help="scenario file (key = value, or .yaml)")
    p.add_argument("--out", default=None, help="output directory for CSV files")
    p.add_argument("--trace", action="store_true", help="print the decision trace")
    p.set_defaults(func=cmd_simulate)

    p = graph_command("bench", "time forward against naive_forward")
    p.add_argument("--n", type=_int_list, default=[64, 128, 256, 512], help="comma separated N values")
    p.add_argument("--seed", type=int, default=None, help="seed for the random fields (default: QG_SEED)")
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    p = graph_command("path", "project a field CSV onto a vertex walk")
    p.add_argument("--vertices", type=_int_list, required=True, help="walk through original vertex ids")
    p.add_argument("--field", required=True, help="field CSV (edge,n,...,re,im)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_path)

    p = graph_command("export-basis", "write the fundamental basis coefficients")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export_basis)

    p = graph_command("transform", "forward transform and round trip of a field CSV")
    p.add_argument("--field", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--out", default=None, help="write the coefficient table here")
    p.set_defaults(func=cmd_transform)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QuantumGraphError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 1
