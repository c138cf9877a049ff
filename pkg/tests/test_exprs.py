import numpy as np
import pytest

from starprod.exprs import (
    DimensionMismatchError,
    constant,
    coordinate,
    eval_expr,
    gaussian_poly,
    monomial,
    orbit_polynomial,
    plane_wave,
    torus_harmonic,
)


def test_constant_everywhere():
    one = constant(1.0, 3)
    for x in ([0, 0, 0], [1.5, -2.0, 0.3]):
        assert eval_expr(one, x) == 1.0


def test_gaussian_center_value():
    f = gaussian_poly(2, {(0, 0): 1.0}, width=1.0)
    assert eval_expr(f, [0.0, 0.0]) == pytest.approx(1.0)


def test_plane_wave_at_pi():
    f = plane_wave([1.0, 2.0])
    assert eval_expr(f, [np.pi, 0.0]) == pytest.approx(-1.0)


def test_gaussian_three_point_axis():
    R = 1.7
    f = gaussian_poly(1, {(0,): 1.0}, width=1.0)
    vals = eval_expr(f, np.array([[-R], [0.0], [R]]))
    assert vals == pytest.approx([np.exp(-R * R / 2), 1.0, np.exp(-R * R / 2)])


def test_dimension_mismatch_raises():
    f = gaussian_poly(2, {(0, 0): 1.0}, width=1.0)
    with pytest.raises(DimensionMismatchError):
        eval_expr(f, [1.0, 2.0, 3.0])


def test_width_must_be_spd():
    with pytest.raises(ValueError):
        gaussian_poly(2, {(0, 0): 1.0}, width=[[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(ValueError):
        gaussian_poly(2, {(0, 0): 1.0}, width=[[1.0, 0.5], [0.0, 1.0]])


def test_torus_frequencies_integer():
    with pytest.raises(ValueError):
        torus_harmonic(1.5, 0)


def test_orbit_band_limit():
    with pytest.raises(ValueError):
        orbit_polynomial({(7, 0, 0): 1.0})


def test_product_of_gaussians_matches_pointwise():
    rng = np.random.default_rng(0)
    f = gaussian_poly(2, {(0, 0): 1.0, (1, 0): 0.5}, center=[0.3, -0.2], width=1.3, freq=[0.7, 0.0])
    g = gaussian_poly(2, {(0, 1): 2.0}, center=[-0.1, 0.4], width=0.8)
    prod = f * g
    pts = rng.uniform(-2, 2, size=(40, 2))
    assert np.allclose(eval_expr(prod, pts), eval_expr(f, pts) * eval_expr(g, pts), atol=1e-12)


def test_sum_and_scalar_algebra():
    f = gaussian_poly(2, {(0, 0): 1.0}, width=1.0)
    g = plane_wave([0.3, -0.1])
    h = 2.0 * f + g - f
    pts = np.random.default_rng(1).uniform(-1, 1, (20, 2))
    assert np.allclose(eval_expr(h, pts), eval_expr(f, pts) + eval_expr(g, pts), atol=1e-13)


def test_derivative_matches_finite_difference():
    f = gaussian_poly(2, {(0, 0): 1.0, (2, 1): 0.4}, center=[0.2, 0.1], width=1.1, freq=[0.5, -0.3])
    rng = np.random.default_rng(2)
    pts = rng.uniform(-1, 1, size=(15, 2))
    eps = 1e-6
    for axis in (0, 1):
        dp = np.zeros(2)
        dp[axis] = eps
        fd = (eval_expr(f, pts + dp) - eval_expr(f, pts - dp)) / (2 * eps)
        assert np.allclose(eval_expr(f.derivative(axis), pts), fd, atol=1e-7)


def test_torus_derivative_and_product():
    t = torus_harmonic(2, -1, 0.5)
    pts = np.random.default_rng(3).uniform(0, 2 * np.pi, (10, 2))
    assert np.allclose(eval_expr(t.derivative(0), pts), 2j * eval_expr(t, pts))
    t2 = torus_harmonic(1, 1)
    assert np.allclose(eval_expr(t * t2, pts), eval_expr(t, pts) * eval_expr(t2, pts))


def test_conjugate():
    f = gaussian_poly(2, {(1, 0): 1j}, width=1.0, freq=[0.4, 0.0])
    pts = np.random.default_rng(4).uniform(-1, 1, (10, 2))
    assert np.allclose(eval_expr(f.conjugate(), pts), np.conj(eval_expr(f, pts)))
    t = torus_harmonic(1, 2, 1 + 2j)
    assert np.allclose(eval_expr(t.conjugate(), pts), np.conj(eval_expr(t, pts)))


def test_restrict_axes_heisenberg_leaf():
    f = gaussian_poly(3, {(1, 0, 2): 1.0}, center=[0.1, 0.2, 0.3], width=np.diag([1.0, 2.0, 0.5]), freq=[0.0, 0.3, 0.7])
    z = 0.9
    f2 = f.restrict_axes([2], [z])
    pts2 = np.random.default_rng(5).uniform(-1, 1, (10, 2))
    pts3 = np.concatenate([pts2, np.full((10, 1), z)], axis=1)
    assert np.allclose(eval_expr(f2, pts2), eval_expr(f, pts3), atol=1e-13)


def test_coordinate_and_monomial():
    p = coordinate(0, 2)
    q = coordinate(1, 2)
    assert eval_expr(p, [1.5, 2.5]) == 1.5
    m = monomial({(2, 0): 1.0}, 2)
    assert eval_expr(m, [3.0, 1.0]) == 9.0
