import numpy as np
import pytest

from warpcollar.blend import (
    smoothstep,
    smoothstep_d1,
    smoothstep_d2,
    smoothstep_i1,
    smoothstep_i2,
    ss_d1_f,
    ss_f,
    ss_i1_f,
    ss_i2_f,
)


def test_endpoint_values():
    assert smoothstep(0.0) == 0.0
    assert smoothstep(1.0) == 1.0
    assert smoothstep_d1(0.0) == 0.0
    assert smoothstep_d1(1.0) == 0.0
    assert smoothstep_d2(0.0) == 0.0
    assert smoothstep_d2(1.0) == 0.0
    assert smoothstep_i1(1.0) == pytest.approx(0.5, abs=1e-15)
    assert smoothstep_i2(1.0) == pytest.approx(1.0 / 7.0, abs=1e-15)


def test_derivatives_match_finite_differences():
    u = np.linspace(0.05, 0.95, 41)
    h = 1e-6
    fd1 = (smoothstep(u + h) - smoothstep(u - h)) / (2 * h)
    np.testing.assert_allclose(smoothstep_d1(u), fd1, atol=5e-9)
    fd2 = (smoothstep_d1(u + h) - smoothstep_d1(u - h)) / (2 * h)
    np.testing.assert_allclose(smoothstep_d2(u), fd2, atol=5e-8)


def test_integrals_match_quadrature():
    u = np.linspace(0.0, 1.0, 2001)
    w = smoothstep(u)
    quad = np.concatenate([[0.0], np.cumsum((w[1:] + w[:-1]) / 2) * (u[1] - u[0])])
    np.testing.assert_allclose(smoothstep_i1(u), quad, atol=1e-7)


def test_monotone_and_bounded():
    u = np.linspace(-0.5, 1.5, 101)
    w = smoothstep(u)
    assert np.all(np.diff(w) >= 0)
    assert np.all((w >= 0) & (w <= 1))
    assert np.all(smoothstep_d1(u) >= 0)


def test_linear_extension_beyond_one():
    assert smoothstep_i1(1.5) == pytest.approx(1.0, abs=1e-15)
    assert smoothstep_i2(2.0) == pytest.approx(1.0 / 7.0 + 0.5 + 0.5, abs=1e-15)


def test_scalar_twins_agree_with_arrays():
    for u in np.linspace(-0.3, 1.3, 33):
        assert ss_f(u) == pytest.approx(float(smoothstep(u)), abs=0)
        assert ss_d1_f(u) == pytest.approx(float(smoothstep_d1(u)), abs=0)
        assert ss_i1_f(u) == pytest.approx(float(smoothstep_i1(u)), abs=0)
        assert ss_i2_f(u) == pytest.approx(float(smoothstep_i2(u)), abs=0)
