"""
Tests for the spectral semigroups, pointwise flows, damping and Strang composition.
"""

import numpy as np
import pytest

from conftest import basis_for, continuous_random_field
from qgraph.errors import LogisticBlowupError, QuantumGraphError
from qgraph.tools.pde import (
    ModeFrequencyTable,
    WaveState,
    damping_filter,
    linear_restoring_step,
    logistic_step,
    mode_table,
    potential_step,
    propagate_heat,
    propagate_schrodinger,
    propagate_wave,
    sine_gordon_step,
    source_step,
    strang_step,
    truncation_error,
    wave_energy,
)
from qgraph.tools.qgfft import SampledField, SpectralCoefficients, forward, inverse, sample_field


def single_mode(omega: float) -> ModeFrequencyTable:
    w = np.array([[omega]])
    return ModeFrequencyTable(omega=w, lam=w ** 2)


def random_coefficients(shape, rng) -> SpectralCoefficients:
    return SpectralCoefficients(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


# ==================== MODE TABLE ====================

def test_mode_table_shifts_by_two_pi(cube_basis):
    table = mode_table(cube_basis, 16)
    assert table.shape == (25, 8)
    np.testing.assert_allclose(table.omega[:, 3], cube_basis.frequencies + 6 * np.pi)
    np.testing.assert_allclose(table.lam, table.omega ** 2)


# ==================== HEAT ====================

def test_heat_decay_factor():
    c = SpectralCoefficients(np.array([[1.0]]))
    out = propagate_heat(c, 0.1, 1.0, single_mode(2 * np.pi))
    assert out.values[0, 0].real == pytest.approx(np.exp(-0.4 * np.pi ** 2), rel=1e-13)


def test_heat_keeps_mean_bit_identical(cube_basis, rng):
    f = continuous_random_field(cube_basis.graph, 16, rng)
    c = forward(cube_basis, f)
    out = propagate_heat(c, 3.7, 1.0, mode_table(cube_basis, 16))
    assert out.values[0, 0] == c.values[0, 0]


def test_heat_at_time_zero_is_identity(cube_basis, rng):
    c = random_coefficients((25, 8), rng)
    out = propagate_heat(c, 0.0, 1.0, mode_table(cube_basis, 16))
    np.testing.assert_array_equal(out.values, c.values)


def test_heat_norm_non_increasing(cube_basis, rng):
    table = mode_table(cube_basis, 16)
    c = random_coefficients((25, 8), rng)
    norms = [np.linalg.norm(propagate_heat(c, t, 1.0, table).values) for t in (0, 0.01, 0.1, 1.0)]
    assert all(b <= a for a, b in zip(norms, norms[1:]))


def test_negative_time_rejected(cube_basis):
    c = SpectralCoefficients(np.zeros((25, 8)))
    with pytest.raises(QuantumGraphError):
        propagate_heat(c, -0.1, 1.0, mode_table(cube_basis, 16))


# ==================== SCHRODINGER ====================

def test_schrodinger_preserves_modulus(cube_basis, rng):
    c = random_coefficients((25, 8), rng)
    out = propagate_schrodinger(c, 0.77, 0.09, mode_table(cube_basis, 16))
    np.testing.assert_allclose(np.abs(out.values), np.abs(c.values), rtol=1e-13)


def test_schrodinger_phase_period():
    omega = 2.0
    period = 2 * np.pi / (0.09 * omega ** 2)
    c = SpectralCoefficients(np.array([[0.6 - 0.8j]]))
    out = propagate_schrodinger(c, period, 0.09, single_mode(omega))
    assert abs(out.values[0, 0] - c.values[0, 0]) < 1e-12


# ==================== WAVE ====================

def test_wave_zero_mode_drifts_linearly():
    table = ModeFrequencyTable(omega=np.array([[0.0, 2.0]]), lam=np.array([[0.0, 4.0]]))
    state = WaveState(SpectralCoefficients(np.array([[1.0, 1.0]])), SpectralCoefficients(np.array([[0.5, 0.0]])))
    out = propagate_wave(state, 2.0, table)
    assert out.u.values[0, 0] == pytest.approx(2.0)
    assert out.v.values[0, 0] == pytest.approx(0.5)
    assert out.u.values[0, 1] == pytest.approx(np.cos(4.0))
    assert out.v.values[0, 1] == pytest.approx(-2.0 * np.sin(4.0))


def test_wave_energy_conserved_over_many_steps(cube_basis, rng):
    table = mode_table(cube_basis, 16)
    state = WaveState(random_coefficients((25, 8), rng), random_coefficients((25, 8), rng))
    start = wave_energy(state, table)
    for _ in range(10_000):
        state = propagate_wave(state, 0.01, table)
    assert abs(wave_energy(state, table) - start) / start < 1e-10


def test_wave_state_shape_mismatch():
    with pytest.raises(QuantumGraphError):
        WaveState(SpectralCoefficients(np.zeros((3, 4))), SpectralCoefficients(np.zeros((3, 8))))


# ==================== DAMPING ====================

def test_damping_weights():
    table = ModeFrequencyTable(omega=np.array([[1.0, 5.0, 8.0]]), lam=np.array([[1.0, 25.0, 64.0]]))
    c = SpectralCoefficients(np.ones((1, 3)))
    out = damping_filter(c, 5.0, table).values[0]
    assert out[0] == 1.0
    assert out[1] == 1.0
    assert out[2].real == pytest.approx(np.exp(-9.0), rel=1e-12)
    assert out[2].real == pytest.approx(1.2341e-4, rel=1e-4)


def test_damping_below_threshold_is_exact(cube_basis, rng):
    table = mode_table(cube_basis, 16)
    c = random_coefficients((25, 8), rng)
    out = damping_filter(c, 1e6, table)
    np.testing.assert_array_equal(out.values, c.values)


def test_damping_requires_positive_threshold(cube_basis):
    with pytest.raises(QuantumGraphError):
        damping_filter(SpectralCoefficients(np.zeros((25, 8))), 0.0, mode_table(cube_basis, 16))


# ==================== POINTWISE FLOWS ====================

def test_logistic_fixed_points_and_closed_form():
    u = SampledField(np.array([[0.0, 1.0, 0.5, 0.5, 0.5]]))
    k = SampledField(np.array([[3.0, 3.0, 1.0, 0.0, 1.0]]))
    out = logistic_step(u, k, np.log(2)).values[0].real
    assert out[0] == 0.0
    assert out[1] == pytest.approx(1.0)
    assert out[2] == pytest.approx(2 / 3, abs=1e-14)
    assert out[3] == 0.5


def test_logistic_blowup_reports_location():
    # 1 + u (e^{kh} - 1) = 1 - 1 = 0
    u = SampledField(np.array([[0.5, 0.5, 0.5, 0.5, 0.5], [0.5, 0.5, -1.0, 0.5, 0.5]]))
    k = SampledField(np.ones((2, 5)))
    with pytest.raises(LogisticBlowupError) as info:
        logistic_step(u, k, np.log(2))
    assert (info.value.edge, info.value.sample) == (1, 2)


def test_potential_step_phase():
    psi = SampledField(np.array([[1.0 + 1.0j, 0.5, -2.0j, 0.3, 0.1]]))
    p = SampledField(np.full((1, 5), 2.5))
    out = potential_step(psi, p, 0.2)
    np.testing.assert_allclose(out.values, np.exp(-0.5j) * psi.values, atol=1e-13)
    np.testing.assert_allclose(np.abs(out.values), np.abs(psi.values), rtol=1e-14)
    zero = potential_step(psi, SampledField(np.zeros((1, 5))), 0.2)
    np.testing.assert_array_equal(zero.values, psi.values)


def test_source_step_adds():
    psi = SampledField(np.ones((1, 5)))
    out = source_step(psi, SampledField(np.full((1, 5), 2.0)), 0.25)
    np.testing.assert_allclose(out.values, 1.5)


def test_sine_gordon_equilibria():
    for u0 in (0.0, np.pi):
        u, v = sine_gordon_step(SampledField(np.full((1, 5), u0)), SampledField(np.zeros((1, 5))), 0.1)
        np.testing.assert_allclose(u.values, u0, atol=1e-15)
        np.testing.assert_allclose(v.values, 0.0, atol=1e-15)


def _sine_gordon_local_error(h: float) -> float:
    u0, v0 = SampledField(np.full((1, 5), 1.0)), SampledField(np.full((1, 5), 0.5))
    u1, v1 = sine_gordon_step(u0, v0, h)
    ur, vr = u0, v0
    for _ in range(200):
        ur, vr = sine_gordon_step(ur, vr, h / 200)
    return max(np.max(np.abs(u1.values - ur.values)), np.max(np.abs(v1.values - vr.values)))


def test_sine_gordon_rk4_local_order():
    ratio = _sine_gordon_local_error(0.2) / _sine_gordon_local_error(0.1)
    assert 24 < ratio < 40


def test_linear_restoring_is_rotation():
    u, v = linear_restoring_step(SampledField(np.ones((1, 5))), SampledField(np.zeros((1, 5))), np.pi / 2)
    np.testing.assert_allclose(u.values, 0.0, atol=1e-15)
    np.testing.assert_allclose(v.values, -1.0)


# ==================== STRANG ====================

def test_strang_with_identity_linear_is_logistic_flow(cube_basis, rng):
    g = cube_basis.graph
    base = continuous_random_field(g, 16, rng).values.real
    u = SampledField(0.5 + 0.2 * np.tanh(base))
    k = SampledField(np.full(u.values.shape, 1.3))

    def nonlinear(fields, dt):
        return (logistic_step(fields[0], k, dt),)

    def identity(coeffs, h):
        return coeffs

    out = strang_step((u,), 0.4, nonlinear, identity, cube_basis)[0]
    expected = logistic_step(u, k, 0.4)
    assert np.max(np.abs(out.values.real - expected.values)) < 1e-12


def test_strang_with_identity_nonlinear_is_linear_flow(cube_basis, rng):
    f = continuous_random_field(cube_basis.graph, 16, rng)
    table = mode_table(cube_basis, 16)

    def identity(fields, dt):
        return fields

    def heat(coeffs, h):
        return tuple(propagate_heat(c, h, 1.0, table) for c in coeffs)

    out = strang_step((f,), 0.3, identity, heat, cube_basis)[0]
    expected = inverse(cube_basis, propagate_heat(forward(cube_basis, f), 0.3, 1.0, table))
    assert np.max(np.abs(out.values - expected.values)) < 1e-12


def test_strang_requires_positive_step(cube_basis):
    f = SampledField.zeros(12, 16)
    with pytest.raises(QuantumGraphError):
        strang_step((f,), 0.0, lambda fs, dt: fs, lambda cs, h: cs, cube_basis)


# ==================== TRUNCATION ====================

def _tent_on_edge_one(e, x):
    if e == 1:
        return 1.0 - np.abs(2.0 * x - 1.0)
    return np.zeros_like(x)


def test_truncation_error_shrinks_with_n():
    basis = basis_for("bridge")
    errors = []
    for N in (32, 64, 128):
        field = sample_field(basis.graph, N, _tent_on_edge_one)
        errors.append(truncation_error(basis, field, 512, _tent_on_edge_one))
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 0.05
