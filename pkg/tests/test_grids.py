import numpy as np
import pytest

from oracles import gaussian_l2_norm_sq
from starprod.exprs import constant, eval_expr, gaussian_poly, monomial
from starprod.grids import GridSpec, SampledField, l2_inner, sample


def test_grid_invariants():
    with pytest.raises(ValueError):
        GridSpec.square(2, 5.0, 1)
    with pytest.raises(ValueError):
        GridSpec.square(2, -1.0, 8)


def test_sample_constant_all_ones():
    grid = GridSpec.square(2, 3.0, 9)
    s = sample(constant(1.0, 2), grid)
    assert np.all(s.values == 1.0)


def test_sample_matches_eval_on_every_node():
    grid = GridSpec.square(2, 4.0, 11)
    f = gaussian_poly(2, {(1, 1): 0.7}, width=0.9, freq=[0.2, -0.1])
    s = sample(f, grid)
    assert np.array_equal(s.values, eval_expr(f, grid.nodes()))


def test_odd_function_antisymmetric_on_symmetric_grid():
    grid = GridSpec.square(2, 3.0, 9)
    f = monomial({(1, 0): 1.0}, 2) * gaussian_poly(2, {(0, 0): 1.0}, width=1.0)
    v = sample(f, grid).values
    assert np.allclose(v, -v[::-1, ::-1], atol=1e-14)


def test_l2_constant_gives_volume():
    grid = GridSpec.square(2, 2.5, 21)
    one = sample(constant(1.0, 2), grid)
    assert abs(l2_inner(one, one) - grid.volume()) < 1e-12


def test_l2_positivity_and_conjugate_symmetry():
    rng = np.random.default_rng(0)
    grid = GridSpec.square(2, 2.0, 15)
    a = SampledField(grid, rng.normal(size=grid.samples) + 1j * rng.normal(size=grid.samples))
    b = SampledField(grid, rng.normal(size=grid.samples) + 1j * rng.normal(size=grid.samples))
    assert l2_inner(a, a).real > 0
    assert abs(l2_inner(a, a).imag) < 1e-14
    assert abs(l2_inner(a, b) - np.conj(l2_inner(b, a))) < 1e-14


def test_ground_state_normalized_against_analytic_oracle():
    hbar = 0.7
    grid = GridSpec.square(2, 6.5, 81)
    amp = (np.pi * hbar) ** -0.5
    psi0 = gaussian_poly(2, {(0, 0): amp}, width=1.0 / hbar)
    # analytic oracle: |amp|^2 * pi / (1/hbar) = 1
    assert gaussian_l2_norm_sq(amp, 1.0 / hbar) == pytest.approx(1.0)
    val = l2_inner(sample(psi0, grid), sample(psi0, grid))
    assert val.real == pytest.approx(1.0, abs=1e-10)


def test_grid_mismatch_raises():
    g1 = GridSpec.square(2, 2.0, 11)
    g2 = GridSpec.square(2, 2.0, 13)
    with pytest.raises(ValueError):
        l2_inner(sample(constant(1.0, 2), g1), sample(constant(1.0, 2), g2), g1)
