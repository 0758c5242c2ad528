"""
Text reports for the qg command line.
These turn computed spectra and tables into fixed-width console output.
"""

from typing import Dict, List

import numpy as np

from qgraph.tools.spectral_basis import DiscreteSpectrum, FundamentalBasis, basis_dimension_summary
from qgraph.tools.validation import BenchReport, ValidationReport

BANNER = "=" * 60


def spectrum_report(name: str, spectrum: DiscreteSpectrum, basis: FundamentalBasis) -> str:
    """nu with multiplicity, both fundamental frequencies, special space sizes"""
    lines = [
        BANNER,
        f"📊 Spectrum of {name}: {basis.graph.vertex_count} vertices, {basis.edge_count} unit edges",
        BANNER,
        f"{'j':>4}  {'nu':>16}  {'omega1':>16}  {'omega2':>16}",
    ]
    for j, nu in enumerate(spectrum.eigenvalues):
        omega1 = float(np.arccos(np.clip(1.0 - nu, -1.0, 1.0)))
        omega2 = 2.0 * np.pi - omega1
        lines.append(f"{j:>4}  {nu:16.12f}  {omega1:16.12f}  {omega2:16.12f}")

    summary = basis_dimension_summary(basis)
    lines += [
        "",
        f"pi-space dimension:   {summary['pi_space']}",
        f"2pi-space dimension:  {summary['two_pi_space']}",
        f"fundamental basis:    {basis.frequency_count} entries "
        f"({summary['nu']} from nu in (0,2), oddcase = {basis.oddcase})",
    ]
    return "\n".join(lines)


def validation_report(report: ValidationReport) -> str:
    lines = [
        BANNER,
        f"🔬 Validation of {report.graph_name}: {report.edge_count} unit edges, "
        f"{report.frequency_count} fundamental frequencies",
        BANNER,
        f"Orthonormality (N = {report.N_ortho}, all shifts m)",
        f"  max|<Psi_k, Psi_k> - 1| = {report.max_diag_error:.3e}",
        f"  max|<Psi_j, Psi_k>|     = {report.max_offdiag:.3e}",
        "",
        f"Transform tables (N = {report.N})",
        f"  {'input':<6} {'Parseval rel. err':>18} {'round trip':>14}  description",
    ]
    for row in report.inputs:
        lines.append(
            f"  {row.label:<6} {row.parseval_error:18.3e} {row.roundtrip_error:14.3e}  {row.description}"
        )

    lines.append("")
    if report.passed:
        lines.append("✅ All checks within tolerance")
    else:
        lines.append("❌ Checks outside tolerance:")
        lines.extend(f"   - {problem}" for problem in report.failures())
    return "\n".join(lines)


def bench_report(report: BenchReport) -> str:
    lines = [
        BANNER,
        f"⏱️  forward vs naive_forward on {report.graph_name} (seed {report.seed})",
        BANNER,
        f"{'N_E':>6} {'N':>6} {'forward [s]':>13} {'naive [s]':>13} {'ratio':>9} {'max diff':>11}",
    ]
    for row in report.rows:
        lines.append(
            f"{row.edge_count:>6} {row.N:>6} {row.forward_time:13.6f} {row.naive_time:13.6f} "
            f"{row.ratio:9.2f} {row.max_difference:11.2e}"
        )
    if len(report.rows) >= 3:
        trend = "increasing" if report.ratio_increasing() else "NOT increasing"
        lines.append(f"\nnaive/forward ratio is {trend} with N")
    return "\n".join(lines)


def transform_report(name: str, N: int, stats: Dict[str, float]) -> str:
    lines = [
        BANNER,
        f"🔁 Transform of field on {name} (N = {N})",
        BANNER,
        f"  field norm            {stats['norm']:.12g}",
        f"  coefficient norm      {stats['coefficient_norm']:.12g}",
        f"  Parseval rel. error   {stats['parseval']:.3e}",
        f"  round trip max error  {stats['roundtrip']:.3e}",
        f"  vertex spread         {stats['vertex_spread']:.3e}",
    ]
    if stats['vertex_spread'] > 1e-10:
        lines.append("⚠️  Field is not continuous at the vertices; the round trip returns its projection")
    return "\n".join(lines)


def trace_report(trace: List[str]) -> str:
    return "\n".join(["Decision trace:"] + [f"  {entry}" for entry in trace])
