import numpy as np
import pytest

from oracles import classical_rotation, classical_shift
from starprod.exprs import constant, coordinate, eval_expr, gaussian_poly, monomial
from starprod.grids import GridSpec, l2_inner, sample
from starprod.spectral import (
    BlowupError,
    PairingResidualError,
    bargmann_apply,
    bargmann_exact_pair,
    bargmann_grid_pair,
    build_star_matrix,
    evolve,
    hermite_exprs,
    operator_norm,
    orthonormal_basis,
    trace_pairing_check,
    weyl_apply,
    wigner_direct,
    wigner_from_state,
)
from starprod.quad import NonDecayingError


@pytest.fixture(scope="module")
def grid():
    return GridSpec.square(2, 7.0, 49)


@pytest.fixture(scope="module")
def basis(grid):
    return orthonormal_basis(hermite_exprs(2, 1.0), grid)


def test_basis_gram_identity(grid, basis):
    n = len(basis)
    G = np.array([[l2_inner(basis.fields[i], basis.fields[j]) for j in range(n)] for i in range(n)])
    assert np.max(np.abs(G - np.eye(n))) <= 1e-8


def test_star_matrix_of_unit_is_identity(basis):
    A = build_star_matrix(constant(1.0, 2), basis, 0.7)
    assert np.max(np.abs(A.entries - np.eye(len(basis)))) <= 2 * A.error + 1e-12


def test_star_matrix_hermitian_for_real_symbol(basis):
    f = gaussian_poly(2, {(1, 0): 1.0}, width=1.0)
    A = build_star_matrix(f, basis, 0.7)
    assert np.max(np.abs(A.entries - np.conj(A.entries.T))) <= 2 * A.error + 1e-10


def test_single_gaussian_momentum_expectation_odd(grid):
    b1 = orthonormal_basis(hermite_exprs(1, 1.0), grid)
    A = build_star_matrix(gaussian_poly(2, {(1, 0): 1.0}, width=0.7), b1, 0.7)
    assert abs(A.entries[0, 0]) <= 2 * A.error + 1e-10


def test_operator_norm_known_values(basis):
    assert operator_norm(np.diag([3j, -2])).value == pytest.approx(3.0, abs=1e-9)
    A = build_star_matrix(constant(1.0, 2), basis, 0.5)
    assert operator_norm(A).value == pytest.approx(1.0, abs=1e-6)


def test_operator_norm_adjoint_and_cstar_identity():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    n1 = operator_norm(M).value
    n2 = operator_norm(np.conj(M.T)).value
    assert abs(n1 - n2) <= 1e-10 * max(n1, 1)
    n3 = operator_norm(np.conj(M.T) @ M).value
    assert abs(n3 - n1**2) <= 1e-8 * max(n3, 1)


def test_bargmann_coefficient_paths():
    assert np.allclose(bargmann_apply("z", [1.0], 0.5), [0.0, 1.0])
    assert np.allclose(bargmann_apply("zbar", [1.0], 0.5), [0.0])
    # zbar on psi = z gives the constant hbar
    assert np.allclose(bargmann_apply("zbar", [0.0, 1.0], 0.5), [0.5])
    with pytest.raises(ValueError):
        bargmann_apply("w", [1.0], 0.5)


def test_bargmann_grid_and_exact_consistency(grid):
    hbar = 0.7
    for side in ("z", "zbar"):
        for deg in range(5):
            c = np.zeros(deg + 1)
            c[deg] = 1.0
            sf, cf, err = bargmann_grid_pair(side, c, hbar, grid)
            assert np.max(np.abs(sf.values - cf.values)) <= 2 * err
            es, ec = bargmann_exact_pair(side, c, hbar, grid)
            assert np.max(np.abs(es.values - ec.values)) <= 1e-10


def test_weyl_momentum_operator():
    hbar = 0.6
    x = np.linspace(-7, 7, 141)
    psi = gaussian_poly(1, {(0,): 1.0}, width=1.0)
    pv = eval_expr(psi, x[:, None])
    # Op(p) psi = -i hbar psi'
    p_symbol = gaussian_poly(2, {(1, 0): 1.0}, width=np.diag([0.05, 0.05]))
    # use a broad envelope so the symbol is effectively p on the support
    out = weyl_apply(monomial({(1, 0): 1.0}, 2), pv, x, hbar, p_half_width=9.0, n_p=257)
    dpsi = eval_expr(psi.derivative(0), x[:, None])
    assert np.max(np.abs(out - (-1j * hbar) * dpsi)) <= 1e-6


def test_wigner_ground_state_matches_closed_form():
    hbar = 0.6
    grid = GridSpec.square(2, 6.0, 41)
    basis = orthonormal_basis(hermite_exprs(3, np.sqrt(hbar / 2)), grid)
    psi = gaussian_poly(1, {(0,): (np.pi * hbar) ** -0.25}, width=1.0 / hbar)
    qd = wigner_from_state(psi, hbar, basis)
    assert abs(qd.integral - 1.0) <= 1e-6
    assert qd.imag_residual <= 1e-6
    assert qd.basis_residual <= 1e-6
    closed = sample(gaussian_poly(2, {(0, 0): 1 / (np.pi * hbar)}, width=2.0 / hbar), grid)
    assert np.max(np.abs(qd.W.values - closed.values.real)) <= 1e-8
    direct = wigner_direct(psi, hbar, grid)
    assert np.max(np.abs(qd.W.values - direct.values)) <= 1e-8


def test_wigner_holdout_residual_error():
    hbar = 0.6
    grid = GridSpec.square(2, 6.0, 41)
    basis = orthonormal_basis(hermite_exprs(1, np.sqrt(hbar / 2)), grid)
    # an excited state not captured by the 1-element basis
    psi = gaussian_poly(1, {(1,): (np.pi * hbar) ** -0.25}, width=1.0 / hbar)
    hold = gaussian_poly(2, {(2, 0): 1.0}, width=1.0)
    with pytest.raises(PairingResidualError):
        wigner_from_state(psi, hbar, basis, holdout=(hold,))


def test_trace_identity_and_parity(grid):
    hbar = 0.6
    f = gaussian_poly(2, {(0, 0): 1.0}, width=1.0, center=[0.4, 0.0])
    g = gaussian_poly(2, {(1, 0): 1.0}, width=1.2)
    lhs, rhs, res = trace_pairing_check(f, g, hbar, grid)
    assert res <= 1e-10
    with pytest.raises(NonDecayingError):
        trace_pairing_check(f, constant(1.0, 2), hbar, grid)
    # odd x even about the origin: both sides vanish
    fo = gaussian_poly(2, {(1, 0): 1.0}, width=1.0)
    ge = gaussian_poly(2, {(0, 0): 1.0}, width=1.0)
    lhs, rhs, _ = trace_pairing_check(fo, ge, hbar, grid)
    assert abs(lhs) <= 1e-10 and abs(rhs) <= 1e-12


def test_evolve_constant_hamiltonian(grid):
    f0 = gaussian_poly(2, {(1, 0): 1.0}, width=1.0)
    traj, err = evolve(f0, constant(0.0, 2), 0.5, 1.0 / (1j * 0.5), np.linspace(0, 1, 5), grid)
    assert np.max(np.abs(traj[-1].values - traj[0].values)) <= 1e-14


def test_evolve_linear_hamiltonian_transport(grid):
    # H = q, prefactor 1/(i hbar): df/dt = 4 d_p f for this kernel family,
    # so the field transports as f0(p + 4t, q) (series oracle, frozen)
    hbar = 0.5
    f0 = gaussian_poly(2, {(1, 0): 1.0}, width=1.0)
    T = 0.06
    traj, err = evolve(f0, coordinate(1, 2), hbar, 1.0 / (1j * hbar), np.linspace(0, T, 7), grid)
    oracle = classical_shift(f0, 4 * T, grid)
    interior = (slice(6, -6), slice(6, -6))
    dev = np.max(np.abs(traj[-1].values[interior] - oracle[interior]))
    assert dev <= max(5 * err, 1e-7)


def test_evolve_harmonic_oscillator_full_period():
    # H = (p^2+q^2)/2: quadratic, so the star flow is the classical rotation
    # at angular speed 4; after t = pi/2 the observable returns to itself
    hbar = 0.5
    egrid = GridSpec.square(2, 7.0, 41)
    f0 = gaussian_poly(2, {(1, 0): 1.0}, width=1.0)
    H = monomial({(2, 0): 0.5, (0, 2): 0.5}, 2)
    T = np.pi / 2
    traj, err = evolve(f0, H, hbar, 1.0 / (1j * hbar), np.linspace(0, T, 161), egrid)
    dev = np.max(np.abs(traj[-1].values - traj[0].values))
    assert dev <= max(5 * err, 1e-5)
    # quarter period: rotation by pi/2 sends p-weighting to q-weighting
    quarter = classical_rotation(f0, np.pi / 2, egrid)
    traj2, err2 = evolve(f0, H, hbar, 1.0 / (1j * hbar), np.linspace(0, np.pi / 8, 41), egrid)
    dev2 = np.max(np.abs(traj2[-1].values - quarter))
    assert dev2 <= max(5 * err2, 1e-5)


def test_evolve_conserves_integral(grid):
    hbar = 0.5
    f0 = gaussian_poly(2, {(0, 0): 1.0, (1, 1): 0.3}, width=1.0, center=[0.3, 0.0])
    H = gaussian_poly(2, {(0, 0): 1.0, (2, 0): 0.5}, width=0.9)
    w = grid.trapezoid_weights()
    traj, err = evolve(f0, H, hbar, 1.0 / (1j * hbar), np.linspace(0, 0.5, 9), grid, halve_for_error=False)
    integrals = [np.sum(t.values * w) for t in traj]
    assert np.max(np.abs(np.diff(integrals))) <= 1e-10


def test_evolve_blowup_detection(grid):
    f0 = gaussian_poly(2, {(1, 0): 1.0}, width=1.0)
    with pytest.raises(BlowupError):
        # absurd prefactor makes RK4 blow up within a few steps
        evolve(f0, monomial({(2, 0): 0.5, (0, 2): 0.5}, 2), 0.5, 500.0, np.linspace(0, 2.0, 9), grid, halve_for_error=False)
