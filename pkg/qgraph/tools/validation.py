"""
Validation Tool

Computes the basis-quality tables for a graph:
1. Orthonormality: trapezoid Gram matrices for every shift m
2. Parseval and round-trip errors for the standard inputs A-D
and the fast-vs-naive transform benchmark.
"""

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from qgraph.config import get_settings
from qgraph.errors import OracleMismatchError
from qgraph.tools.qgfft import (
    SampledField,
    field_norm,
    forward,
    inverse,
    naive_forward,
)
from qgraph.tools.spectral_basis import FundamentalBasis, gram_matrix


# ==================== REPORT TYPES ====================

@dataclass
class OrthonormalityRow:
    shift: int
    rows: int
    max_diag_error: float
    max_offdiag: float


@dataclass
class InputRow:
    label: str
    description: str
    parseval_error: float
    roundtrip_error: float


@dataclass
class ValidationReport:
    """Orthonormality maxima plus Parseval / round-trip errors per input"""
    graph_name: str
    edge_count: int
    frequency_count: int
    N_ortho: int
    N: int
    orthonormality: List[OrthonormalityRow] = field(default_factory=list)
    inputs: List[InputRow] = field(default_factory=list)

    @property
    def max_diag_error(self) -> float:
        return max((r.max_diag_error for r in self.orthonormality), default=0.0)

    @property
    def max_offdiag(self) -> float:
        return max((r.max_offdiag for r in self.orthonormality), default=0.0)

    def failures(self) -> List[str]:
        settings = get_settings()
        problems = []
        if self.max_diag_error > settings.tol_ortho:
            problems.append(f"max|diag-1| = {self.max_diag_error:.3e} > {settings.tol_ortho:.1e}")
        if self.max_offdiag > settings.tol_ortho:
            problems.append(f"max|offdiag| = {self.max_offdiag:.3e} > {settings.tol_ortho:.1e}")
        for row in self.inputs:
            if not row.parseval_error <= settings.tol_parseval:
                problems.append(f"input {row.label}: Parseval {row.parseval_error:.3e}")
            if not row.roundtrip_error <= settings.tol_roundtrip:
                problems.append(f"input {row.label}: round trip {row.roundtrip_error:.3e}")
        return problems

    @property
    def passed(self) -> bool:
        return not self.failures()


@dataclass
class BenchRow:
    edge_count: int
    N: int
    forward_time: float
    naive_time: float
    max_difference: float

    @property
    def ratio(self) -> float:
        return self.naive_time / self.forward_time


@dataclass
class BenchReport:
    graph_name: str
    seed: int
    rows: List[BenchRow] = field(default_factory=list)

    def ratio_increasing(self) -> bool:
        ratios = [r.ratio for r in self.rows]
        return all(b > a for a, b in zip(ratios[:-1], ratios[1:]))


# ==================== STANDARD INPUTS ====================

def standard_inputs(basis: FundamentalBasis, N: int) -> Dict[str, SampledField]:
    """
    A: 1 at the midpoint sample of edge 0
    B: constant 1
    C: 1 - cos(2 pi x) on edge 0 only
    D: (-1)^n on every edge, the sampled Nyquist cosine
    """
    E = basis.edge_count
    x = np.arange(N + 1) / N

    a = np.zeros((E, N + 1))
    a[0, N // 2] = 1.0

    b = np.ones((E, N + 1))

    c = np.zeros((E, N + 1))
    c[0] = 1.0 - np.cos(2.0 * np.pi * x)

    d = np.tile((-1.0) ** np.arange(N + 1), (E, 1))

    return {"A": SampledField(a), "B": SampledField(b), "C": SampledField(c), "D": SampledField(d)}


INPUT_DESCRIPTIONS = {
    "A": "single sample (edge 0 midpoint)",
    "B": "constant 1",
    "C": "1 - cos(2 pi x) on edge 0",
    "D": "(-1)^n on every edge",
}


def parseval_error(basis: FundamentalBasis, f: SampledField, workers: Optional[int] = None) -> float:
    norm_sq = field_norm(f) ** 2
    coefficients = forward(basis, f, workers)
    return abs(float(np.sum(np.abs(coefficients.values) ** 2)) - norm_sq) / norm_sq


def roundtrip_error(basis: FundamentalBasis, f: SampledField, workers: Optional[int] = None) -> float:
    back = inverse(basis, forward(basis, f, workers), workers)
    return float(np.max(np.abs(back.values - f.values)))


# ==================== TABLES ====================

def orthonormality_rows(
    basis: FundamentalBasis, N: int, dump_dir: Optional[Path] = None
) -> List[OrthonormalityRow]:
    rows = []
    for m in range(N // 2):
        gram = gram_matrix(basis, N, m)
        if gram.shape[0] == 0:
            continue
        if dump_dir is not None:
            dump_dir.mkdir(parents=True, exist_ok=True)
            np.save(dump_dir / f"gram_N{N}_m{m}.npy", gram)
        diag = np.abs(np.diag(gram) - 1.0)
        off = np.abs(gram - np.diag(np.diag(gram)))
        rows.append(OrthonormalityRow(
            shift=m,
            rows=gram.shape[0],
            max_diag_error=float(diag.max()),
            max_offdiag=float(off.max()) if gram.shape[0] > 1 else 0.0,
        ))
    return rows


def input_rows(basis: FundamentalBasis, N: int, workers: Optional[int] = None) -> List[InputRow]:
    rows = []
    for label, f in standard_inputs(basis, N).items():
        rows.append(InputRow(
            label=label,
            description=INPUT_DESCRIPTIONS[label],
            parseval_error=parseval_error(basis, f, workers),
            roundtrip_error=roundtrip_error(basis, f, workers),
        ))
    return rows


def validate_basis(
    basis: FundamentalBasis,
    N: int = 64,
    N_ortho: int = 16,
    graph_name: str = "graph",
    dump_dir: Optional[Path] = None,
    workers: Optional[int] = None,
) -> ValidationReport:
    return ValidationReport(
        graph_name=graph_name,
        edge_count=basis.edge_count,
        frequency_count=basis.frequency_count,
        N_ortho=N_ortho,
        N=N,
        orthonormality=orthonormality_rows(basis, N_ortho, dump_dir),
        inputs=input_rows(basis, N, workers),
    )


# ==================== BENCHMARK ====================

def random_field(edge_count: int, N: int, rng: np.random.Generator) -> SampledField:
    shape = (edge_count, N + 1)
    return SampledField(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def _best_time(fn: Callable[[], object], repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def check_oracle(
    basis: FundamentalBasis,
    f: SampledField,
    tol: Optional[float] = None,
    fast: Callable = forward,
) -> float:
    """Max difference between the fast transform and naive_forward; raises past tol"""
    tol = tol if tol is not None else get_settings().tol_oracle
    difference = float(np.max(np.abs(fast(basis, f).values - naive_forward(basis, f).values)))
    if not difference <= tol:
        raise OracleMismatchError(
            f"Fast transform and naive_forward differ by {difference:.3e} at N = {f.N} (tolerance {tol:.1e})"
        )
    return difference


def run_bench(
    basis: FundamentalBasis,
    Ns: Sequence[int],
    seed: Optional[int] = None,
    repeats: int = 3,
    graph_name: str = "graph",
    fast: Optional[Callable] = None,
) -> BenchReport:
    """
    Time forward against naive_forward on identical random fields.
    Agreement is asserted before any timing.
    """
    seed = seed if seed is not None else get_settings().seed
    fast = fast or forward
    rng = np.random.default_rng(seed)
    report = BenchReport(graph_name=graph_name, seed=seed)

    for N in Ns:
        f = random_field(basis.edge_count, N, rng)
        difference = check_oracle(basis, f, fast=fast)
        report.rows.append(BenchRow(
            edge_count=basis.edge_count,
            N=N,
            forward_time=_best_time(lambda: fast(basis, f), repeats),
            naive_time=_best_time(lambda: naive_forward(basis, f), repeats),
            max_difference=difference,
        ))
    return report
