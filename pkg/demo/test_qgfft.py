"""
Tests for the radix-2 kernel and the forward / inverse quantum graph FFT.
"""

import numpy as np
import pytest

from conftest import basis_for, continuous_random_field
from qgraph.errors import TransformShapeError
from qgraph.tools.qgfft import (
    SampledField,
    SpectralCoefficients,
    fft,
    field_norm,
    forward,
    ifft,
    inverse,
    naive_forward,
    resample,
    sample_field,
)


# ==================== RADIX-2 KERNEL ====================

@pytest.mark.parametrize("length", [1, 2, 8, 64])
def test_fft_matches_direct_sum(rng, length):
    x = rng.standard_normal(length) + 1j * rng.standard_normal(length)
    n = np.arange(length)
    direct = np.exp(-2j * np.pi * np.outer(n, n) / length) @ x
    np.testing.assert_allclose(fft(x), direct, atol=1e-12)


def test_fft_acts_on_last_axis(rng):
    x = rng.standard_normal((3, 5, 16))
    out = fft(x)
    for i in range(3):
        for j in range(5):
            np.testing.assert_allclose(out[i, j], fft(x[i, j]), atol=1e-13)


def test_ifft_is_unscaled_inverse(rng):
    x = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    np.testing.assert_allclose(ifft(fft(x)) / 32, x, atol=1e-13)


def test_fft_rejects_non_power_of_two():
    with pytest.raises(TransformShapeError):
        fft(np.ones(12))


# ==================== DATA TYPES ====================

def test_sampled_field_requires_power_of_two():
    with pytest.raises(TransformShapeError):
        SampledField(np.zeros((3, 13)))
    with pytest.raises(TransformShapeError):
        SampledField(np.zeros(17))


def test_vertex_spread(triangle_basis):
    g = triangle_basis.graph
    f = SampledField.zeros(g.edge_count, 4)
    assert f.is_continuous(g)
    f.values[0, 0] = 1.0
    assert f.vertex_spread(g) == pytest.approx(1.0)
    assert not f.is_continuous(g)


def test_sample_field_evaluates_per_edge(triangle_basis):
    f = sample_field(triangle_basis.graph, 8, lambda e, x: e + x)
    assert f.N == 8
    np.testing.assert_allclose(f.values[2], 2 + np.arange(9) / 8)


# ==================== FORWARD ====================

@pytest.mark.parametrize("name", ["cube", "triangle", "fig8"])
def test_constant_field_hits_only_the_constant(name):
    basis = basis_for(name)
    f = SampledField(np.ones((basis.edge_count, 33)))
    c = forward(basis, f).values
    assert c[0, 0] == pytest.approx(np.sqrt(basis.edge_count), abs=1e-12)
    rest = c.copy()
    rest[0, 0] = 0.0
    assert np.max(np.abs(rest)) < 1e-12


def test_nyquist_input_hits_only_the_oddcase(cube_basis):
    N = 64
    f = SampledField(np.tile((-1.0) ** np.arange(N + 1), (cube_basis.edge_count, 1)))
    c = forward(cube_basis, f).values
    top = c[cube_basis.oddcase, -1]
    assert abs(top) == pytest.approx(np.sqrt(12), abs=1e-12)
    rest = c.copy()
    rest[cube_basis.oddcase, -1] = 0.0
    assert np.max(np.abs(rest)) < 1e-12


def test_forward_shape_and_zero_tail(cube_basis, rng):
    f = continuous_random_field(cube_basis.graph, 16, rng)
    c = forward(cube_basis, f)
    assert c.values.shape == (25, 8)
    assert c.N == 16
    assert c.oddcase == cube_basis.oddcase
    assert np.all(c.values[0, 1:] == 0)


@pytest.mark.parametrize("name", ["cube", "loop_box"])
def test_forward_matches_naive(name, rng):
    basis = basis_for(name)
    for N in (16, 64):
        f = SampledField(rng.standard_normal((basis.edge_count, N + 1))
                         + 1j * rng.standard_normal((basis.edge_count, N + 1)))
        np.testing.assert_allclose(forward(basis, f).values, naive_forward(basis, f).values, atol=1e-12)


def test_worker_count_does_not_change_result(cube_basis, rng):
    f = continuous_random_field(cube_basis.graph, 32, rng)
    one = forward(cube_basis, f, workers=1)
    four = forward(cube_basis, f, workers=4)
    np.testing.assert_allclose(one.values, four.values, atol=1e-14)
    np.testing.assert_allclose(inverse(cube_basis, one, workers=1).values,
                               inverse(cube_basis, one, workers=3).values, atol=1e-14)


def test_forward_rejects_wrong_edge_count(cube_basis):
    with pytest.raises(TransformShapeError):
        forward(cube_basis, SampledField(np.zeros((5, 17))))


# ==================== INVERSE / ROUND TRIP ====================

@pytest.mark.parametrize("name", ["cube", "triangle", "bridge", "loop_box"])
def test_round_trip_and_parseval(name, rng):
    basis = basis_for(name)
    f = continuous_random_field(basis.graph, 64, rng)
    c = forward(basis, f)
    back = inverse(basis, c)
    assert np.max(np.abs(back.values - f.values)) < 1e-12
    assert np.sum(np.abs(c.values) ** 2) == pytest.approx(field_norm(f) ** 2, rel=1e-12)


def test_inverse_of_zero_is_zero(cube_basis):
    c = SpectralCoefficients(np.zeros((25, 8)), cube_basis.oddcase)
    assert np.all(inverse(cube_basis, c).values == 0)


def test_inverse_rejects_wrong_row_count(cube_basis):
    with pytest.raises(TransformShapeError):
        inverse(cube_basis, SpectralCoefficients(np.zeros((7, 8))))


def test_discontinuous_field_is_projected(cube_basis, rng):
    f = SampledField(rng.standard_normal((12, 17)))
    back = inverse(cube_basis, forward(cube_basis, f))
    assert back.is_continuous(cube_basis.graph)
    # projection: applying it twice changes nothing
    again = inverse(cube_basis, forward(cube_basis, back))
    np.testing.assert_allclose(again.values, back.values, atol=1e-12)


def test_field_norm_uses_trapezoid_weights():
    f = SampledField(np.ones((2, 5)))
    assert field_norm(f) == pytest.approx(np.sqrt(2.0))
    g = SampledField(np.array([[1.0, 0, 0, 0, 0]]))
    assert field_norm(g) == pytest.approx(np.sqrt(0.5 / 4))


# ==================== RESAMPLE ====================

def test_resample_interpolates_between_samples(cube_basis, rng):
    f = continuous_random_field(cube_basis.graph, 16, rng)
    c = forward(cube_basis, f)
    fine = inverse(cube_basis, resample(cube_basis, c, 64))
    assert fine.N == 64
    np.testing.assert_allclose(fine.values[:, ::4], f.values, atol=1e-12)


def test_resample_same_size_is_identity(cube_basis, rng):
    c = forward(cube_basis, continuous_random_field(cube_basis.graph, 16, rng))
    np.testing.assert_array_equal(resample(cube_basis, c, 16).values, c.values)


def test_resample_down_fails(cube_basis):
    c = SpectralCoefficients(np.zeros((25, 16)), cube_basis.oddcase)
    with pytest.raises(TransformShapeError):
        resample(cube_basis, c, 16)
