"""
Spectral Basis Tool

Builds the fundamental eigenfunctions of the Kirchhoff Laplacian on an
equilateral graph from the spectrum of the normalized discrete Laplacian:

1. Discrete spectrum: I - T^{-1/2} A T^{-1/2}, mapped back by T^{-1/2}
2. nu -> two fundamental frequencies (arccos(1 - nu), 2pi - arccos(1 - nu))
3. Frequencies pi and 2pi: nullspace of the vertex-condition system
4. Everything expressed as gamma e^{iwx} + delta e^{-iwx} per edge
"""

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg

from qgraph.errors import SpectralError
from qgraph.tools.metric_graph import EquilateralGraph

# nu in {0, 2} and sin(w) ~ 0 are recognized at this absolute tolerance
SPECTRAL_TOL = 1e-10
RESIDUAL_TOL = 1e-10


# ==================== TYPES ====================

@dataclass(frozen=True, eq=False)
class DiscreteSpectrum:
    """
    Eigenpairs of the discrete Laplacian I - T^{-1}A.

    eigenvectors[:, j] belongs to eigenvalues[j]; columns are orthonormal in
    <f, g> = 1/2 sum_v deg(v) f(v) g(v).
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degree: np.ndarray

    def weighted_inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        return 0.5 * np.sum(self.degree * f * np.conj(g))


@dataclass(frozen=True, eq=False)
class SpecialEigenspace:
    """Eigenfunctions A_e cos(n pi x) + B_e sin(n pi x); one row per basis element"""
    frequency: float
    A: np.ndarray
    B: np.ndarray

    @property
    def dimension(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class FundamentalBasis:
    """
    Fundamental frequencies w_{k,0} (ascending, 0 first) with per-edge
    exponential coefficients. Row k of gamma/delta describes
    Psi_{k,0}(x) = gamma[k, e] e^{iwx} + delta[k, e] e^{-iwx} on edge e.

    kinds[k] is one of 'constant', 'nu', 'pi', '2pi-cos', '2pi-sine'.
    oddcase is the index of the 2pi pure-cosine element.
    """
    graph: EquilateralGraph
    frequencies: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    kinds: Tuple[str, ...]
    oddcase: Optional[int]

    @property
    def frequency_count(self) -> int:
        return self.frequencies.shape[0]

    @property
    def edge_count(self) -> int:
        return self.gamma.shape[1]

    def cosine_sine(self) -> Tuple[np.ndarray, np.ndarray]:
        """(A, B) with Psi = A cos(wx) + B sin(wx)"""
        return self.gamma + self.delta, 1j * (self.gamma - self.delta)


# ==================== DISCRETE SPECTRUM ====================

def discrete_spectrum(g: EquilateralGraph) -> DiscreteSpectrum:
    """
    Full eigen-decomposition of the symmetric normalized Laplacian.

    Eigenvectors are mapped by T^{-1/2} and scaled to unit norm in the
    degree-weighted inner product.
    """
    g.require_min_degree(2)

    adjacency = g.adjacency_matrix()
    degree = np.asarray(g.degree, dtype=float)
    inv_sqrt = 1.0 / np.sqrt(degree)
    symmetric = np.eye(g.vertex_count) - inv_sqrt[:, None] * adjacency * inv_sqrt[None, :]

    try:
        nu, q = scipy.linalg.eigh(symmetric)
    except np.linalg.LinAlgError as e:
        count = re.search(r"(\d+)", str(e))
        raise SpectralError(
            f"Symmetric eigensolver did not converge: {e}",
            unconverged=int(count.group(1)) if count else None,
        )

    nu = np.clip(nu, 0.0, 2.0)
    # unit standard norm -> 1/2 sum deg |phi|^2 = 1
    phi = np.sqrt(2.0) * inv_sqrt[:, None] * q

    random_walk = np.eye(g.vertex_count) - adjacency / degree[:, None]
    residual = np.max(np.abs(random_walk @ phi - phi * nu[None, :]))
    if residual > RESIDUAL_TOL * max(1.0, np.max(np.abs(phi))):
        raise SpectralError(f"Eigenpair residual {residual:.3e} exceeds tolerance")

    if abs(nu[0]) > SPECTRAL_TOL:
        raise SpectralError(f"Smallest eigenvalue {nu[0]:.3e} is not 0; graph disconnected?")
    if phi[0, 0] < 0:
        phi[:, 0] = -phi[:, 0]

    return DiscreteSpectrum(eigenvalues=nu, eigenvectors=phi, degree=degree)


def frequencies_from_nu(nu: float) -> Tuple[float, float]:
    """One discrete eigenvalue -> the two fundamental frequencies in (0, 2pi)"""
    if not (SPECTRAL_TOL < nu < 2.0 - SPECTRAL_TOL):
        raise SpectralError(f"nu = {nu} is outside (0, 2); use the special eigenspaces")
    omega1 = float(np.arccos(1.0 - nu))
    return omega1, 2.0 * np.pi - omega1


def edge_coefficients(phi: np.ndarray, omega: float, g: EquilateralGraph) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cosine/sine coefficients of the edge functions interpolating phi.

    On directed edge (v, w): c1 = phi(v), c2 = (phi(w) - phi(v) cos w) / sin w.
    """
    s = np.sin(omega)
    if abs(s) < SPECTRAL_TOL:
        raise SpectralError(f"sin({omega}) vanishes; frequency needs the special eigenspace path")

    edges = np.asarray(g.directed_edges, dtype=int).reshape(-1, 2)
    tails, heads = edges[:, 0], edges[:, 1]
    c1 = phi[tails].astype(complex)
    c2 = (phi[heads] - phi[tails] * np.cos(omega)) / s
    return c1, c2.astype(complex)


def to_exponential(c1: np.ndarray, c2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """c1 cos + c2 sin -> gamma e^{iwx} + delta e^{-iwx}"""
    return (c1 - 1j * c2) / 2.0, (c1 + 1j * c2) / 2.0


# ==================== SPECIAL EIGENSPACES ====================

def vertex_condition_matrix(g: EquilateralGraph, n: int) -> np.ndarray:
    """
    Continuity and Kirchhoff rows at w = n pi.

    Unknowns are [A_0..A_{E-1}, B_0..B_{E-1}]. Tail values are A_e, head
    values (-1)^n A_e; outgoing derivatives (divided by n pi) are B_e at the
    tail and -(-1)^n B_e at the head.
    """
    E = g.edge_count
    sign = (-1.0) ** n
    incident: Dict[int, List[Tuple[int, bool]]] = {v: [] for v in range(g.vertex_count)}
    for e, (tail, head) in enumerate(g.directed_edges):
        incident[tail].append((e, True))
        incident[head].append((e, False))

    rows = []
    for v in range(g.vertex_count):
        ends = incident[v]
        for (e1, at_tail1), (e2, at_tail2) in zip(ends[:-1], ends[1:]):
            row = np.zeros(2 * E)
            row[e1] += 1.0 if at_tail1 else sign
            row[e2] -= 1.0 if at_tail2 else sign
            rows.append(row)
        row = np.zeros(2 * E)
        for e, at_tail in ends:
            row[E + e] += 1.0 if at_tail else -sign
        rows.append(row)

    return np.array(rows)


def kirchhoff_residual(g: EquilateralGraph, A: np.ndarray, B: np.ndarray, n: int) -> float:
    """Largest violation of the vertex conditions by rows of (A, B)"""
    M = vertex_condition_matrix(g, n)
    X = np.hstack([np.atleast_2d(A), np.atleast_2d(B)])
    if X.size == 0:
        return 0.0
    return float(np.max(np.abs(M @ X.T)))


def _nullspace(M: np.ndarray) -> np.ndarray:
    # rank-revealing SVD, threshold relative to the largest singular value
    _, s, vh = scipy.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > SPECTRAL_TOL * s[0])) if s.size else 0
    return vh[rank:].T


def special_eigenspace(g: EquilateralGraph, n: int) -> SpecialEigenspace:
    """
    Orthonormal eigenfunctions at w = n pi (n = 1 or 2).

    Normalization is sum_e (A_e^2 + B_e^2)/2 = 1. For n = 2 the global
    cosine (A_e constant, B_e = 0) comes first and the remaining elements
    span its orthogonal complement.
    """
    if n not in (1, 2):
        raise SpectralError(f"Special eigenspaces exist for n = 1, 2 only, got {n}")

    E = g.edge_count
    null = _nullspace(vertex_condition_matrix(g, n))

    if n == 2:
        cosine = np.concatenate([np.ones(E), np.zeros(E)]) / np.sqrt(E)
        rest = null - np.outer(cosine, cosine @ null)
        if rest.size:
            u, s, _ = scipy.linalg.svd(rest, full_matrices=False)
            rest = u[:, s > 0.5]
        null = np.column_stack([cosine, rest]) if rest.size else cosine[:, None]

    # unit Euclidean norm -> sum (A^2 + B^2)/2 = 1
    basis = np.sqrt(2.0) * null.T
    A, B = basis[:, :E], basis[:, E:]

    residual = kirchhoff_residual(g, A, B, n)
    if residual > RESIDUAL_TOL:
        raise SpectralError(f"Special eigenspace at {n}pi violates vertex conditions by {residual:.3e}")

    return SpecialEigenspace(frequency=n * np.pi, A=A, B=B)


# ==================== BASIS ASSEMBLY ====================

def build_basis(g: EquilateralGraph) -> FundamentalBasis:
    """
    Assemble the L2-orthonormal fundamental eigenfunctions of g.
    """
    spectrum = discrete_spectrum(g)
    E = g.edge_count

    entries: List[Tuple[float, str, np.ndarray, np.ndarray]] = []

    constant = np.full(E, 1.0 / (2.0 * np.sqrt(E)), dtype=complex)
    entries.append((0.0, "constant", constant, constant.copy()))

    for j, nu in enumerate(spectrum.eigenvalues):
        if nu <= SPECTRAL_TOL or nu >= 2.0 - SPECTRAL_TOL:
            continue
        for omega in frequencies_from_nu(nu):
            c1, c2 = edge_coefficients(spectrum.eigenvectors[:, j], omega, g)
            gamma, delta = to_exponential(c1, c2)
            entries.append((omega, "nu", gamma, delta))

    for n in (1, 2):
        space = special_eigenspace(g, n)
        for i in range(space.dimension):
            kind = "pi" if n == 1 else ("2pi-cos" if i == 0 else "2pi-sine")
            gamma, delta = to_exponential(space.A[i].astype(complex), space.B[i].astype(complex))
            entries.append((space.frequency, kind, gamma, delta))

    order = sorted(range(len(entries)), key=lambda i: entries[i][0])
    frequencies = np.array([entries[i][0] for i in order])
    gamma = np.array([entries[i][2] for i in order])
    delta = np.array([entries[i][3] for i in order])
    kinds = tuple(entries[i][1] for i in order)

    # for w > 0: sum_e (|A|^2 + |B|^2)/2 == sum_e (|gamma|^2 + |delta|^2).
    # The constant row is Psi_0 = gamma + delta = 1/sqrt(E), already unit.
    norms = np.sqrt(np.sum(np.abs(gamma) ** 2 + np.abs(delta) ** 2, axis=1))
    norms = np.where(frequencies > 0.0, norms, 1.0)
    gamma = gamma / norms[:, None]
    delta = delta / norms[:, None]

    oddcase = kinds.index("2pi-cos") if "2pi-cos" in kinds else None

    return FundamentalBasis(
        graph=g,
        frequencies=frequencies,
        gamma=gamma,
        delta=delta,
        kinds=kinds,
        oddcase=oddcase,
    )


def basis_dimension_summary(basis: FundamentalBasis) -> Dict[str, int]:
    summary = {"constant": 0, "nu": 0, "pi": 0, "2pi-cos": 0, "2pi-sine": 0}
    for kind in basis.kinds:
        summary[kind] += 1
    summary["pi_space"] = summary["pi"]
    summary["two_pi_space"] = summary["2pi-cos"] + summary["2pi-sine"]
    return summary


# ==================== SAMPLING / GRAM ====================

def _check_power_of_two(N: int):
    if N < 2 or N & (N - 1):
        raise SpectralError(f"Samples per edge must be a power of two >= 2, got {N}")


def evaluate(basis: FundamentalBasis, k: int, m: int, N: int) -> np.ndarray:
    """Samples of Psi_{k,m} at x_n = n/N on every edge, shape (E, N+1)"""
    x = np.arange(N + 1) / N
    omega = basis.frequencies[k] + 2.0 * np.pi * m
    return (basis.gamma[k][:, None] * np.exp(1j * omega * x)[None, :]
            + basis.delta[k][:, None] * np.exp(-1j * omega * x)[None, :])


def trapezoid_weights(N: int) -> np.ndarray:
    w = np.ones(N + 1)
    w[0] = w[-1] = 0.5
    return w / N


def shifted_rows(basis: FundamentalBasis, N: int, m: int) -> np.ndarray:
    """
    Rows whose shifted frequency w_{k,0} + 2 pi m lies below N pi.
    Row 0 only carries m = 0.
    """
    omega = basis.frequencies + 2.0 * np.pi * m
    rows = np.flatnonzero(omega < N * np.pi - SPECTRAL_TOL)
    if m > 0:
        rows = rows[rows != 0]
    return rows


def gram_matrix(basis: FundamentalBasis, N: int, m: int = 0) -> np.ndarray:
    """
    Trapezoid-rule inner products <Psi_{j,m}, Psi_{k,m}> over the rows
    returned by shifted_rows.
    """
    _check_power_of_two(N)
    if m < 0:
        raise SpectralError(f"Shift index must be nonnegative, got {m}")

    rows = shifted_rows(basis, N, m)
    if rows.size == 0:
        return np.zeros((0, 0), dtype=complex)
    samples = np.array([evaluate(basis, k, m, N) for k in rows])
    weighted = samples * trapezoid_weights(N)[None, None, :]
    return np.einsum("jen,ken->jk", weighted, np.conj(samples))
