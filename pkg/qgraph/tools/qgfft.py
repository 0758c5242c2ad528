"""
Quantum Graph FFT Tool

Implements two strategies for the eigenfunction-expansion coefficients:
1. forward: modulated per-edge radix-2 FFTs, summed over edges (fast)
2. naive_forward: direct trapezoid quadrature against sampled
   eigenfunctions (slow, used as the oracle)

plus the inverse transform and the trapezoid norm.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional

import numpy as np

from qgraph.config import get_settings
from qgraph.errors import TransformShapeError
from qgraph.tools.metric_graph import EquilateralGraph
from qgraph.tools.spectral_basis import FundamentalBasis, trapezoid_weights

ODD_SCALE = np.sqrt(0.5)


# ==================== DATA TYPES ====================

def _require_power_of_two(N: int, what: str = "Samples per edge"):
    if N < 2 or N & (N - 1):
        raise TransformShapeError(f"{what} must be a power of two >= 2, got {N}")


@dataclass(eq=False)
class SampledField:
    """Complex samples at x_n = n/N, n = 0..N, on every edge; shape (E, N+1)"""
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim != 2:
            raise TransformShapeError(f"Field must be 2-D (edges x samples), got shape {self.values.shape}")
        _require_power_of_two(self.values.shape[1] - 1)

    @property
    def N(self) -> int:
        return self.values.shape[1] - 1

    @property
    def edge_count(self) -> int:
        return self.values.shape[0]

    @classmethod
    def zeros(cls, edge_count: int, N: int) -> "SampledField":
        return cls(np.zeros((edge_count, N + 1), dtype=complex))

    def copy(self) -> "SampledField":
        return SampledField(self.values.copy())

    def vertex_spread(self, g: EquilateralGraph) -> float:
        """Largest disagreement between endpoint values meeting at a vertex"""
        ends: List[List[complex]] = [[] for _ in range(g.vertex_count)]
        for e, (tail, head) in enumerate(g.directed_edges):
            ends[tail].append(self.values[e, 0])
            ends[head].append(self.values[e, -1])
        spread = 0.0
        for vals in ends:
            if len(vals) > 1:
                vals = np.asarray(vals)
                spread = max(spread, float(np.max(np.abs(vals - vals[0]))))
        return spread

    def is_continuous(self, g: EquilateralGraph, tol: float = 1e-10) -> bool:
        return self.vertex_spread(g) <= tol


@dataclass(eq=False)
class SpectralCoefficients:
    """
    beta_{k,m}: one row per fundamental frequency, N/2 columns (m = 0..N/2-1).
    The oddcase row's last entry carries the sqrt(0.5) quadrature correction.
    """
    values: np.ndarray
    oddcase: Optional[int] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)

    @property
    def N(self) -> int:
        return 2 * self.values.shape[1]

    def copy(self) -> "SpectralCoefficients":
        return SpectralCoefficients(self.values.copy(), self.oddcase)

    def with_values(self, values: np.ndarray) -> "SpectralCoefficients":
        return SpectralCoefficients(values, self.oddcase)


def sample_field(g: EquilateralGraph, N: int, fn: Callable[[int, np.ndarray], np.ndarray]) -> SampledField:
    """Build a field from fn(edge, x) evaluated at the N+1 points of each edge"""
    _require_power_of_two(N)
    x = np.arange(N + 1) / N
    values = np.zeros((g.edge_count, N + 1), dtype=complex)
    for e in range(g.edge_count):
        values[e] = fn(e, x)
    return SampledField(values)


# ==================== RADIX-2 KERNEL ====================

@lru_cache(maxsize=32)
def _bit_reversal(length: int) -> np.ndarray:
    bits = length.bit_length() - 1
    index = np.arange(length)
    reversed_ = np.zeros(length, dtype=int)
    for _ in range(bits):
        reversed_ = (reversed_ << 1) | (index & 1)
        index = index >> 1
    return reversed_


def _radix2(x: np.ndarray, sign: float) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    length = x.shape[-1]
    if length < 1 or length & (length - 1):
        raise TransformShapeError(f"FFT length must be a power of two, got {length}")

    out = x[..., _bit_reversal(length)]
    half = 1
    while half < length:
        span = 2 * half
        twiddle = np.exp(sign * 1j * np.pi * np.arange(half) / half)
        blocks = out.reshape(out.shape[:-1] + (length // span, span))
        even = blocks[..., :half]
        odd = blocks[..., half:] * twiddle
        out = np.concatenate([even + odd, even - odd], axis=-1).reshape(x.shape)
        half = span
    return out


def fft(x: np.ndarray) -> np.ndarray:
    """X_m = sum_n x_n e^{-2 pi i m n / L} along the last axis (L = 2^J)"""
    return _radix2(x, -1.0)


def ifft(x: np.ndarray) -> np.ndarray:
    """Unscaled inverse: x_n = sum_m X_m e^{+2 pi i m n / L}"""
    return _radix2(x, 1.0)


# ==================== TRANSFORMS ====================

def _check_pair(basis: FundamentalBasis, edge_count: int):
    if edge_count != basis.edge_count:
        raise TransformShapeError(
            f"Field has {edge_count} edges but the basis graph has {basis.edge_count}"
        )


def _row_chunks(count: int, workers: int) -> List[np.ndarray]:
    workers = max(1, min(workers, count))
    return [chunk for chunk in np.array_split(np.arange(count), workers) if chunk.size]


def _run_chunks(fn, count: int, workers: Optional[int]):
    workers = workers or get_settings().threads
    chunks = _row_chunks(count, workers)
    if len(chunks) == 1:
        return [fn(chunks[0])]
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        return list(pool.map(fn, chunks))


def forward(basis: FundamentalBasis, f: SampledField, workers: Optional[int] = None) -> SpectralCoefficients:
    """
    Fast QGFFT: two modulated FFTs per (frequency, edge), summed over edges.
    """
    _check_pair(basis, f.edge_count)
    N = f.N
    half = N // 2
    n = np.arange(N)
    data = f.values

    def rows(chunk: np.ndarray) -> np.ndarray:
        omega = basis.frequencies[chunk]
        down = np.exp(-1j * omega[:, None] * n[None, :] / N)      # (R, N)
        up = np.conj(down)
        g1 = np.conj(basis.gamma[chunk])[:, :, None]               # (R, E, 1)
        g2 = np.conj(basis.delta[chunk])[:, :, None]

        seq1 = g1 * down[:, None, :] * data[None, :, :N]
        seq2 = g2 * up[:, None, :] * data[None, :, :N]
        # endpoint fold: weight 1/2, x = 1 sample carries phase e^{-+iw}
        seq1[:, :, 0] = 0.5 * g1[:, :, 0] * (data[None, :, 0] + np.exp(-1j * omega)[:, None] * data[None, :, N])
        seq2[:, :, 0] = 0.5 * g2[:, :, 0] * (data[None, :, 0] + np.exp(1j * omega)[:, None] * data[None, :, N])

        ft1 = fft(seq1).sum(axis=1)
        ft2 = fft(seq2).sum(axis=1)

        out = np.empty((chunk.size, half), dtype=complex)
        out[:, 0] = ft1[:, 0] + ft2[:, 0]
        m = np.arange(1, half)
        out[:, 1:] = ft1[:, m] + ft2[:, N - m]
        return out / N

    beta = np.vstack(_run_chunks(rows, basis.frequency_count, workers))
    return _finish_forward(basis, beta)


def _finish_forward(basis: FundamentalBasis, beta: np.ndarray) -> SpectralCoefficients:
    # the eigenvalue 0 has no higher frequency terms
    beta[0, 1:] = 0.0
    if basis.oddcase is not None:
        beta[basis.oddcase, -1] *= ODD_SCALE
    return SpectralCoefficients(beta, basis.oddcase)


def inverse(basis: FundamentalBasis, c: SpectralCoefficients, workers: Optional[int] = None) -> SampledField:
    """
    Inverse QGFFT: zero-pad each row to N, one FFT per fundamental
    frequency, then combine the reflected outputs edge by edge.
    """
    if c.values.shape[0] != basis.frequency_count:
        raise TransformShapeError(
            f"Coefficients have {c.values.shape[0]} rows but the basis has {basis.frequency_count}"
        )
    N = c.N
    _require_power_of_two(N)

    values = c.values.copy()
    if basis.oddcase is not None:
        values[basis.oddcase, -1] *= ODD_SCALE

    n = np.arange(N + 1)
    forward_index = n % N
    reflected_index = (N - n) % N

    def rows(chunk: np.ndarray) -> np.ndarray:
        padded = np.zeros((chunk.size, N), dtype=complex)
        padded[:, : N // 2] = values[chunk]
        spectrum = fft(padded)
        omega = basis.frequencies[chunk]
        up = np.exp(1j * omega[:, None] * n[None, :] / N) * spectrum[:, reflected_index]
        down = np.exp(-1j * omega[:, None] * n[None, :] / N) * spectrum[:, forward_index]
        return (basis.gamma[chunk][:, :, None] * up[:, None, :]
                + basis.delta[chunk][:, :, None] * down[:, None, :])

    contributions = np.concatenate(_run_chunks(rows, basis.frequency_count, workers), axis=0)
    return SampledField(contributions.sum(axis=0))


def naive_forward(basis: FundamentalBasis, f: SampledField) -> SpectralCoefficients:
    """
    Direct trapezoid quadrature of beta_{k,m} = <f, Psi_{k,m}>_N.
    O(E N^2) per frequency row; the reference for forward().
    """
    _check_pair(basis, f.edge_count)
    N = f.N
    half = N // 2
    x = np.arange(N + 1) / N
    weighted = f.values * trapezoid_weights(N)[None, :]           # (E, N+1)
    beta = np.zeros((basis.frequency_count, half), dtype=complex)

    for k in range(basis.frequency_count):
        omega = basis.frequencies[k] + 2.0 * np.pi * np.arange(half)
        phase = np.exp(-1j * omega[:, None] * x[None, :])           # (M, N+1)
        plus = phase @ weighted.T                                  # sum_n f e^{-iwx}
        minus = np.conj(phase) @ weighted.T                        # sum_n f e^{+iwx}
        beta[k] = plus @ np.conj(basis.gamma[k]) + minus @ np.conj(basis.delta[k])

    return _finish_forward(basis, beta)


def field_norm(f: SampledField) -> float:
    """Trapezoid norm: endpoint weights 1/2, step 1/N"""
    w = trapezoid_weights(f.N)
    return float(np.sqrt(np.sum(np.abs(f.values) ** 2 * w[None, :])))


def resample(basis: FundamentalBasis, c: SpectralCoefficients, N_new: int) -> SpectralCoefficients:
    """
    Coefficients for a finer sampling N_new >= N by zero padding the higher
    modes. The old Nyquist cosine coefficient loses its sqrt(0.5) factor.
    """
    _require_power_of_two(N_new)
    N = c.N
    if N_new < N:
        raise TransformShapeError(f"Cannot resample from N = {N} down to {N_new}")

    values = np.zeros((c.values.shape[0], N_new // 2), dtype=complex)
    values[:, : N // 2] = c.values
    if N_new > N and basis.oddcase is not None:
        values[basis.oddcase, N // 2 - 1] *= ODD_SCALE
    return SpectralCoefficients(values, c.oddcase)
