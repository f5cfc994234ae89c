import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.integrate import trapezoid

from gardner_ostrovsky.fourier import (
    TorusGrid,
    WaveProfile,
    apply_multiplier,
    convolve_quadrature,
    d2_inverse,
    derivative,
    kernel_G,
    kernel_G_printed,
    kernel_G_series,
    kernel_K,
    kernel_K_series,
    project_zero_mean,
    reflect,
    resample,
    shift,
    smoothing_op,
    smoothing_symbol,
)

coeff_arrays = arrays(np.float64, st.integers(1, 12), elements=st.floats(-1, 1))


def trig_poly(grid, a, b=None):
    """sum_k a_k cos(kx) + b_k sin(kx), k = 1..len(a)."""
    b = np.zeros_like(a) if b is None else b
    k = np.arange(1, len(a) + 1)
    x = grid.nodes[:, None]
    return WaveProfile(grid, (a * np.cos(k * x) + b * np.sin(k * x)).sum(axis=1))


def test_grid_validation():
    with pytest.raises(ValueError):
        TorusGrid(7)
    with pytest.raises(ValueError):
        TorusGrid(6)
    g = TorusGrid(16)
    assert g.nodes[0] == -np.pi
    assert np.isclose(g.spacing, 2 * np.pi / 16)


def test_coefficients_follow_convention():
    g = TorusGrid(32)
    f = WaveProfile.from_function(g, lambda x: 3 * np.cos(2 * x) + 4 * np.sin(5 * x))
    rc = f.rcoeffs
    # f_hat(k) = (1/2pi) int f e^{-ikx}
    assert np.isclose(rc[2], 1.5)
    assert np.isclose(rc[5], -2j)
    assert np.allclose(np.delete(rc, [2, 5]), 0, atol=1e-14)


def test_profile_is_read_only():
    f = WaveProfile(TorusGrid(8), np.zeros(8))
    with pytest.raises(ValueError):
        f.samples[0] = 1.0


def test_interpolant_matches_function_off_grid():
    g = TorusGrid(32)
    f = WaveProfile.from_function(g, lambda x: np.cos(3 * x) - 0.5 * np.sin(x))
    x = np.linspace(-3, 3, 17)
    assert np.allclose(f(x), np.cos(3 * x) - 0.5 * np.sin(x), atol=1e-13)


@settings(max_examples=50, deadline=None)
@given(coeff_arrays, coeff_arrays)
def test_second_derivative_inverts_d2_inverse(a, b):
    g = TorusGrid(64)
    m = min(len(a), len(b))
    f = trig_poly(g, a[:m], b[:m])
    back = derivative(d2_inverse(f), 2)
    assert np.max(np.abs(back.samples + f.samples)) <= 1e-12 * max(1.0, f.sup())


def test_d2_inverse_requires_zero_mean():
    f = WaveProfile(TorusGrid(16), np.ones(16))
    with pytest.raises(ValueError):
        d2_inverse(f)


def test_apply_multiplier_checks_symbol():
    f = trig_poly(TorusGrid(16), np.array([1.0, 0.5]))
    with pytest.raises(ValueError):
        apply_multiplier(f, lambda k: k.astype(float))  # odd symbol
    with pytest.raises(ValueError):
        apply_multiplier(f, lambda k: 1j * np.ones_like(k))


@settings(max_examples=30, deadline=None)
@given(coeff_arrays, st.floats(0, 3), st.floats(0.1, 3))
def test_smoothing_op_symbol(a, beta, c):
    g = TorusGrid(64)
    f = trig_poly(g, a)
    lf = smoothing_op(f, beta, c)
    k = np.arange(1, len(a) + 1)
    expect = trig_poly(g, a / (c + beta * k**2))
    assert np.allclose(lf.samples, expect.samples, atol=1e-13)
    assert smoothing_symbol(0, beta, c) == 1 / c


@settings(max_examples=40, deadline=None)
@given(coeff_arrays, coeff_arrays, st.floats(-10, 10), st.floats(-10, 10))
def test_shift_composes(a, b, s1, s2):
    g = TorusGrid(64)
    m = min(len(a), len(b))
    f = trig_poly(g, a[:m], b[:m])
    lhs = shift(shift(f, s1), s2)
    rhs = shift(f, s1 + s2)
    assert np.allclose(lhs.samples, rhs.samples, atol=1e-12)


def test_shift_translates():
    g = TorusGrid(32)
    f = WaveProfile.from_function(g, lambda x: np.cos(x) + np.sin(3 * x))
    s = 0.37
    expect = np.cos(g.nodes - s) + np.sin(3 * (g.nodes - s))
    assert np.allclose(shift(f, s).samples, expect, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(coeff_arrays, coeff_arrays, st.floats(-4, 4))
def test_reflect_is_involution(a, b, lam):
    g = TorusGrid(64)
    m = min(len(a), len(b))
    f = trig_poly(g, a[:m], b[:m])
    assert np.allclose(reflect(reflect(f, lam), lam).samples, f.samples, atol=1e-12)


def test_reflect_of_even_function_about_zero():
    g = TorusGrid(32)
    f = WaveProfile.from_function(g, lambda x: np.cos(x) + 0.2 * np.cos(4 * x))
    assert np.allclose(reflect(f, 0.0).samples, f.samples, atol=1e-14)


def test_resample_round_trip():
    g = TorusGrid(32)
    f = WaveProfile.from_function(g, lambda x: np.cos(x) + np.sin(5 * x))
    up = resample(f, 128)
    assert np.allclose(up.samples, np.cos(up.grid.nodes) + np.sin(5 * up.grid.nodes), atol=1e-13)
    assert np.allclose(resample(up, 32).samples, f.samples, atol=1e-13)


def test_project_zero_mean():
    f = WaveProfile.from_function(TorusGrid(16), lambda x: 2 + np.cos(x))
    p = project_zero_mean(f)
    assert abs(p.mean) < 1e-15
    assert np.allclose(p.samples, f.samples - 2)


def test_kernel_K_against_series():
    x = np.linspace(-np.pi, np.pi, 101)
    assert np.max(np.abs(kernel_K(x) - kernel_K_series(x, 20000))) < 1e-4
    assert abs(trapezoid(kernel_K(np.linspace(-np.pi, np.pi, 20001)), dx=2 * np.pi / 20000)) < 1e-8


def test_grid_series_matches_direct_summation():
    g = TorusGrid(200)
    for m in (3, 199, 200, 1234):
        assert np.allclose(kernel_K_series(g, m), kernel_K_series(g.nodes, m), atol=1e-14, rtol=0)
        assert np.allclose(kernel_G_series(g, 0.5, 0.2, m), kernel_G_series(g.nodes, 0.5, 0.2, m), atol=1e-14, rtol=0)


@pytest.mark.parametrize("beta,c", [(1, 1), (0.5, 0.2), (2, 3), (0.01, 5)])
def test_kernel_G_cosh_form(beta, c):
    g = TorusGrid(256)
    m = 10**6
    tail = 1 / (np.pi * beta * m)  # bound on the dropped terms
    assert np.max(np.abs(kernel_G(g.nodes, beta, c) - kernel_G_series(g, beta, c, m))) < max(1e-5, 2 * tail)


def test_kernel_G_printed_form_disagrees():
    g = TorusGrid(64)
    diff = np.abs(kernel_G_printed(g.nodes, 1, 1) - kernel_G_series(g, 1, 1, 10**5))
    assert diff.max() > 1e-2


def test_kernel_G_large_ratio_is_finite():
    vals = kernel_G(np.linspace(-np.pi, np.pi, 11), 1e-6, 10.0)
    assert np.all(np.isfinite(vals))


def test_quadrature_convolution_reproduces_d2_inverse():
    g = TorusGrid(512)
    f = WaveProfile.from_function(g, lambda x: np.cos(x) + 0.3 * np.sin(2 * x))
    conv = convolve_quadrature(kernel_K, f)
    assert np.max(np.abs(conv.samples - d2_inverse(f).samples)) < 1e-4
