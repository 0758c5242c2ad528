"""
PDE Step Tool

Time evolution pieces for equations on the graph:
- exact spectral semigroups (heat, Schrodinger, wave) acting on coefficients
- pointwise sample-space flows (logistic, potential, sine-Gordon RK4)
- Strang composition T(h/2) S(h) T(h/2)
- high-frequency damping for the wave-type splittings
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np

from qgraph.errors import LogisticBlowupError, QuantumGraphError
from qgraph.tools.qgfft import (
    SampledField,
    SpectralCoefficients,
    forward,
    inverse,
    resample,
    sample_field,
)
from qgraph.tools.spectral_basis import FundamentalBasis

ZERO_FREQUENCY_TOL = 1e-12
LOGISTIC_DENOMINATOR_TOL = 1e-14

Fields = Tuple[SampledField, ...]
Coefficients = Tuple[SpectralCoefficients, ...]


# ==================== TYPES ====================

@dataclass(frozen=True, eq=False)
class ModeFrequencyTable:
    """
    omega[k, m] = w_{k,0} + 2 pi m and lam = omega^2 for every coefficient slot.
    Row 0 only carries its m = 0 mode; its other slots stay zero in practice.
    """
    omega: np.ndarray
    lam: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.omega.shape


@dataclass(eq=False)
class WaveState:
    """Displacement and velocity coefficients over one basis"""
    u: SpectralCoefficients
    v: SpectralCoefficients

    def __post_init__(self):
        if self.u.values.shape != self.v.values.shape:
            raise QuantumGraphError(
                f"Wave state shapes differ: {self.u.values.shape} vs {self.v.values.shape}"
            )


@lru_cache(maxsize=16)
def mode_table(basis: FundamentalBasis, N: int) -> ModeFrequencyTable:
    omega = basis.frequencies[:, None] + 2.0 * np.pi * np.arange(N // 2)[None, :]
    return ModeFrequencyTable(omega=omega, lam=omega ** 2)


def _require_nonnegative(t: float, name: str = "t"):
    if t < 0:
        raise QuantumGraphError(f"{name} must be nonnegative, got {t}")


# ==================== SPECTRAL SEMIGROUPS ====================

def propagate_heat(c: SpectralCoefficients, t: float, a: float, table: ModeFrequencyTable) -> SpectralCoefficients:
    """u_t = a u_xx: beta <- beta exp(-a lam t)"""
    _require_nonnegative(t)
    return c.with_values(c.values * np.exp(-a * table.lam * t))


def propagate_schrodinger(c: SpectralCoefficients, t: float, a: float, table: ModeFrequencyTable) -> SpectralCoefficients:
    """psi_t = i a psi_xx: beta <- beta exp(-i a lam t)"""
    _require_nonnegative(t)
    return c.with_values(c.values * np.exp(-1j * a * table.lam * t))


def propagate_wave(state: WaveState, t: float, table: ModeFrequencyTable) -> WaveState:
    """
    Exact rotation of (u, v) per mode; the zero mode drifts linearly.
    """
    _require_nonnegative(t)
    omega = table.omega
    zero = omega < ZERO_FREQUENCY_TOL
    safe = np.where(zero, 1.0, omega)

    cos_t = np.cos(omega * t)
    sin_t = np.sin(omega * t)
    u, v = state.u.values, state.v.values

    new_u = np.where(zero, u + v * t, u * cos_t + v * sin_t / safe)
    new_v = np.where(zero, v, -u * safe * sin_t + v * cos_t)
    return WaveState(state.u.with_values(new_u), state.v.with_values(new_v))


def wave_energy(state: WaveState, table: ModeFrequencyTable) -> float:
    return float(np.sum(table.lam * np.abs(state.u.values) ** 2 + np.abs(state.v.values) ** 2))


def damping_filter(c: SpectralCoefficients, f0: float, table: ModeFrequencyTable) -> SpectralCoefficients:
    """Modes above f0 are weighted by exp(-(f - f0)^2); the rest are untouched"""
    if f0 <= 0:
        raise QuantumGraphError(f"Damping threshold must be positive, got {f0}")
    excess = np.maximum(table.omega - f0, 0.0)
    weights = np.where(table.omega > f0, np.exp(-excess ** 2), 1.0)
    return c.with_values(c.values * weights)


# ==================== POINTWISE FLOWS ====================

def logistic_step(u: SampledField, k_field: SampledField, h: float) -> SampledField:
    """Exact flow of du/dt = k u (1 - u) over time h, pointwise"""
    _require_nonnegative(h, "h")
    uu = u.values.real
    growth = np.exp(k_field.values.real * h)
    denominator = 1.0 + uu * (growth - 1.0)

    bad = np.abs(denominator) < LOGISTIC_DENOMINATOR_TOL
    if np.any(bad):
        edge, sample = (int(i) for i in np.argwhere(bad)[0])
        raise LogisticBlowupError(edge, sample, uu[edge, sample])

    return SampledField(uu * growth / denominator)


def potential_step(psi: SampledField, p_field: SampledField, h: float) -> SampledField:
    """psi <- exp(-i p h) psi"""
    _require_nonnegative(h, "h")
    return SampledField(np.exp(-1j * p_field.values.real * h) * psi.values)


def source_step(psi: SampledField, p_field: SampledField, h: float) -> SampledField:
    """Exact flow of psi_t = p: psi <- psi + h p"""
    _require_nonnegative(h, "h")
    return SampledField(psi.values + h * p_field.values)


def sine_gordon_step(u: SampledField, v: SampledField, h: float) -> Tuple[SampledField, SampledField]:
    """One classical RK4 step of u' = v, v' = -sin(u), pointwise"""
    _require_nonnegative(h, "h")
    uu, vv = u.values.real, v.values.real

    k1u, k1v = vv, -np.sin(uu)
    k2u, k2v = vv + 0.5 * h * k1v, -np.sin(uu + 0.5 * h * k1u)
    k3u, k3v = vv + 0.5 * h * k2v, -np.sin(uu + 0.5 * h * k2u)
    k4u, k4v = vv + h * k3v, -np.sin(uu + h * k3u)

    new_u = uu + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
    new_v = vv + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
    return SampledField(new_u), SampledField(new_v)


def linear_restoring_step(u: SampledField, v: SampledField, h: float) -> Tuple[SampledField, SampledField]:
    """Exact flow of u'' + u = 0"""
    _require_nonnegative(h, "h")
    c, s = np.cos(h), np.sin(h)
    uu, vv = u.values.real, v.values.real
    return SampledField(uu * c + vv * s), SampledField(-uu * s + vv * c)


# ==================== SPLITTING ====================

def strang_step(
    fields: Fields,
    h: float,
    nonlinear_half: Callable[[Fields, float], Fields],
    linear_full: Callable[[Coefficients, float], Coefficients],
    basis: FundamentalBasis,
    workers: Optional[int] = None,
) -> Fields:
    """
    T(h/2) S(h) T(h/2): sample-space flow, forward transform, spectral
    flow over the full step, inverse transform, sample-space flow.
    """
    if h <= 0:
        raise QuantumGraphError(f"Time step must be positive, got {h}")

    fields = nonlinear_half(fields, h / 2.0)
    coeffs = tuple(forward(basis, f, workers) for f in fields)
    coeffs = linear_full(coeffs, h)
    fields = tuple(inverse(basis, c, workers) for c in coeffs)
    return nonlinear_half(fields, h / 2.0)


# ==================== DIAGNOSTICS ====================

def truncation_error(
    basis: FundamentalBasis,
    field: SampledField,
    N_fine: int,
    exact: Callable[[int, np.ndarray], np.ndarray],
) -> float:
    """
    Max difference between the N-sample representation interpolated to
    N_fine (zero-padded coefficients) and exact data sampled at N_fine.
    """
    fine = inverse(basis, resample(basis, forward(basis, field), N_fine))
    reference = sample_field(basis.graph, N_fine, exact)
    return float(np.max(np.abs(fine.values - reference.values)))
