import numpy as np
import pytest

from starprod.cocycles import (
    Cocycle2,
    StepCancellationError,
    antisymmetrize,
    catalog_cocycle,
    cocycle_eval,
    delta_coboundary,
    delta_coboundary_1,
    van_est_2,
    van_est_2_richardson,
    _good_h,
)
from starprod.groupoids import (
    GroupoidElement,
    NonComposableError,
    arrow,
    compose,
    identity,
    inverse,
    random_composable_tuple,
    source,
    target,
)
from starprod.haar import HaarSpec, haar_nodes
from starprod.models import (
    constant_poisson,
    heisenberg_dual,
    su2_dual,
    symplectic_r2,
    torus2,
)
from starprod.quat import adjoint_action, qexp, qmul, rotation_matrix

ALL_MODELS = [
    symplectic_r2(),
    torus2(),
    heisenberg_dual(),
    su2_dual(),
    constant_poisson([[0.0, 1.3, 0.0], [-1.3, 0.0, 0.0], [0.0, 0.0, 0.0]]),
]


@pytest.mark.parametrize("model", ALL_MODELS, ids=lambda m: m.variant)
def test_groupoid_axioms(model):
    rng = np.random.default_rng(0)
    for _ in range(30):
        g3, g2, g1 = random_composable_tuple(model, rng, 3)
        lhs = compose(compose(g3, g2), g1)
        rhs = compose(g3, compose(g2, g1))
        assert np.allclose(lhs.array(), rhs.array(), atol=1e-12)
        # inverse then compose gives the identity at the source
        idd = compose(inverse(g1), g1)
        ref = identity(model, source(g1))
        assert np.max(np.abs(source(idd) - source(g1))) <= 1e-12
        assert np.max(np.abs(target(idd) - source(g1))) <= 1e-12
        assert np.max(np.abs(idd.array() - ref.array())) <= 1e-12


def test_pair_groupoid_composition_explicit():
    model = symplectic_r2()
    g1 = GroupoidElement(model, (1.0, 2.0, 0.0, 0.5))  # (x', y', x, y)
    g2 = GroupoidElement(model, (3.0, -1.0, 1.0, 2.0))
    out = compose(g2, g1)
    assert out.coords == (3.0, -1.0, 0.0, 0.5)


def test_heisenberg_target_formula():
    model = heisenberg_dual()
    a, b, c = 0.3, -0.7, 0.2
    x, y, z = 0.5, 1.5, 0.8
    g = GroupoidElement(model, (a, b, c, x, y, z))
    assert np.allclose(target(g), [x + z * b, y - z * a, z])


def test_non_composable_raises():
    model = symplectic_r2()
    g1 = GroupoidElement(model, (1.0, 2.0, 0.0, 0.5))
    g2 = GroupoidElement(model, (3.0, -1.0, 1.0, 2.5))
    with pytest.raises(NonComposableError):
        compose(g2, g1)


def test_su2_quaternion_drift_rejected():
    model = su2_dual()
    g = GroupoidElement(model, (1.1, 0.0, 0.0, 0.0, 0.1, 0.2, 0.3))
    with pytest.raises(ValueError):
        target(g)


# -- quaternions and adjoint action ------------------------------------


def test_adjoint_identity():
    X = np.array([0.3, -0.2, 0.9])
    assert np.allclose(adjoint_action([1.0, 0, 0, 0], X), X)


def test_adjoint_pi_rotation_about_z():
    q = qexp(np.array([0.0, 0.0, np.pi]))
    out = adjoint_action(q, [1.0, 0.0, 0.0])
    assert np.allclose(out, [-1.0, 0.0, 0.0], atol=1e-12)


def test_adjoint_norm_preserved():
    rng = np.random.default_rng(1)
    q = qexp(rng.normal(size=(1000, 3)))
    X = rng.normal(size=(1000, 3))
    out = adjoint_action(q, X)
    assert np.max(np.abs(np.linalg.norm(out, axis=1) - np.linalg.norm(X, axis=1))) <= 1e-12


def test_rotation_is_homomorphism():
    rng = np.random.default_rng(2)
    a = qexp(rng.normal(size=3))
    b = qexp(rng.normal(size=3))
    assert np.allclose(rotation_matrix(qmul(a, b)), rotation_matrix(a) @ rotation_matrix(b), atol=1e-12)


# -- Haar nodes ---------------------------------------------------------


@pytest.mark.parametrize("spec", [HaarSpec("su2-euler-grid", (10, 10, 10)), HaarSpec("su2-qmc", n_points=4096, seed=3)])
def test_haar_weights_normalized(spec):
    q, w = haar_nodes(spec)
    assert np.all(w > 0)
    assert abs(w.sum() - 1.0) <= 1e-12
    assert np.max(np.abs(np.linalg.norm(q, axis=1) - 1.0)) <= 1e-12


def test_haar_unit_integral_and_character():
    # brute-force dense-grid oracle for the adjoint character integral
    qd, wd = haar_nodes(HaarSpec("su2-euler-grid", (24, 24, 24)))
    chi_dense = float(np.sum(wd * np.trace(rotation_matrix(qd), axis1=-2, axis2=-1)))
    assert abs(chi_dense) <= 1e-12  # orthogonality: trivial rep not in adjoint
    q, w = haar_nodes(HaarSpec("su2-euler-grid", (10, 10, 10)))
    chi = float(np.sum(w * np.trace(rotation_matrix(q), axis1=-2, axis2=-1)))
    assert abs(chi - chi_dense) <= 1e-10
    assert abs(np.sum(w) - 1.0) <= 1e-12


def test_haar_zero_count_rejected():
    with pytest.raises(ValueError):
        HaarSpec("su2-euler-grid", (0, 4, 4))


# -- cocycles -----------------------------------------------------------


def test_triangle_cocycle_explicit_value():
    model = symplectic_r2()
    S = catalog_cocycle(model)
    # arrows with group elements (a', b') = (1, 0) after (a, b) = (0, 1)
    g1 = arrow(model, [0.0, 0.0], [0.0, 1.0])
    g2 = arrow(model, target(g1), [1.0, 0.0])
    assert cocycle_eval(S, g2, g1) == pytest.approx(0.5)


@pytest.mark.parametrize("model", ALL_MODELS, ids=lambda m: m.variant)
def test_cocycle_vanishes_on_identity_pairs(model):
    # brute-force check that catalog cocycles vanish when either arrow is a unit
    rng = np.random.default_rng(3)
    S = catalog_cocycle(model)
    for _ in range(20):
        (g1,) = random_composable_tuple(model, rng, 1)
        idt = identity(model, target(g1))
        ids = identity(model, source(g1))
        assert abs(cocycle_eval(S, idt, g1)) <= 1e-12
        assert abs(cocycle_eval(S, g1, ids)) <= 1e-12


def test_su2_cocycle_identity_pair_zero():
    model = su2_dual()
    S = catalog_cocycle(model)
    m = np.array([0.3, 0.1, -0.2])
    e = identity(model, m)
    assert cocycle_eval(S, e, e) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("model", ALL_MODELS, ids=lambda m: m.variant)
def test_cocycle_identity_on_random_triples(model):
    rng = np.random.default_rng(4)
    S = catalog_cocycle(model)
    tol = 1e-8 if model.variant == "su2-dual" else 1e-12
    worst = 0.0
    for _ in range(200):
        g3, g2, g1 = random_composable_tuple(model, rng, 3)
        worst = max(worst, abs(delta_coboundary(S, g3, g2, g1)))
    assert worst <= tol


def test_delta_of_good_one_cochain_matches_formula():
    # delta*(eps y' y) = eps (y y' - y' y'' + y y'') in the printed point labels
    model = symplectic_r2()
    rng = np.random.default_rng(5)
    for _ in range(20):
        P = rng.uniform(-1, 1, 2)
        Q = rng.uniform(-1, 1, 2)
        T = rng.uniform(-1, 1, 2)
        g1 = GroupoidElement(model, (*Q, *P))
        g2 = GroupoidElement(model, (*T, *Q))
        val = delta_coboundary_1(_good_h, g2, g1)
        # middle point y = Q2, source y' = P2, far y'' = T2
        assert val == pytest.approx(Q[1] * P[1] - P[1] * T[1] + Q[1] * T[1], abs=1e-13)


def test_delta_squared_zero_polynomial_family():
    model = symplectic_r2()
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(100):
        coef = rng.uniform(-1, 1, 4)

        def h(g):
            t, s = target(g), source(g)
            return coef[0] * t[0] * s[1] + coef[1] * t[1] ** 2 + coef[2] * s[0] + coef[3]

        S2 = Cocycle2(model, "raw", base=lambda g2, g1: delta_coboundary_1(h, g2, g1), antisymmetric=False)
        g3, g2, g1 = random_composable_tuple(model, rng, 3)
        worst = max(worst, abs(delta_coboundary(S2, g3, g2, g1)))
    assert worst <= 1e-12


def test_antisymmetrize_fixes_triangle_and_twists_epsilon():
    model = symplectic_r2()
    rng = np.random.default_rng(7)
    S = catalog_cocycle(model)
    St = antisymmetrize(S)
    Sg = catalog_cocycle(model, eps=0.7)
    Sgt = antisymmetrize(Sg)
    for _ in range(100):
        g2, g1 = random_composable_tuple(model, rng, 2)
        assert abs(St(g2, g1) - S(g2, g1)) <= 1e-12  # already antisymmetric
        assert abs(Sgt(g2, g1) + Sgt(inverse(g1), inverse(g2))) <= 1e-12
    # antisymmetrization preserves the cocycle identity
    worst = 0.0
    for _ in range(100):
        g3, g2, g1 = random_composable_tuple(model, rng, 3)
        worst = max(worst, abs(delta_coboundary(Sgt, g3, g2, g1)))
    assert worst <= 1e-12


def test_zero_cocycle_antisymmetrizes_to_zero():
    model = symplectic_r2()
    Z = Cocycle2(model, "zero")
    rng = np.random.default_rng(8)
    g2, g1 = random_composable_tuple(model, rng, 2)
    assert antisymmetrize(Z)(g2, g1) == 0.0


# -- van Est ------------------------------------------------------------


def test_van_est_triangle_gives_unit_bivector():
    S = catalog_cocycle(symplectic_r2())
    v = van_est_2(S, [0.4, -0.3], [1, 0], [0, 1], 0.05)
    assert v == pytest.approx(1.0, abs=1e-3)
    vr = van_est_2_richardson(S, [0.4, -0.3], [1, 0], [0, 1], 0.05)
    assert vr == pytest.approx(1.0, abs=1e-8)


def test_van_est_kills_pure_coboundary():
    model = symplectic_r2()
    Scob = Cocycle2(model, "raw", base=lambda g2, g1: delta_coboundary_1(_good_h, g2, g1), antisymmetric=False)
    v = van_est_2_richardson(Scob, [0.3, -0.2], [1, 0], [0, 1], 0.05)
    assert abs(v) <= 1e-8


def test_van_est_heisenberg_half_z():
    S = catalog_cocycle(heisenberg_dual())
    m = [0.4, 0.1, 0.7]
    v = van_est_2_richardson(S, m, [1, 0], [0, 1], 0.05)
    assert v == pytest.approx(0.35, abs=1e-8)


def test_van_est_su2_reproduces_bivector():
    S = catalog_cocycle(su2_dual())
    m = np.array([0.3, -0.2, 0.7])
    for x, y, expect in [
        ([1, 0, 0], [0, 1, 0], m[2] / 2),
        ([0, 1, 0], [0, 0, 1], m[0] / 2),
        ([1, 0, 0], [0, 0, 1], -m[1] / 2),
    ]:
        v = van_est_2_richardson(S, m, x, y, 0.04)
        assert v == pytest.approx(expect, rel=1e-6)


def test_van_est_step_cancellation_detected():
    # a cochain with a violent quartic part trips the two-step guard
    from starprod.groupoids import group_element as ge

    model = symplectic_r2()

    def base(g2, g1):
        t = ge(g2)[0] * ge(g1)[1]
        return t + 30.0 * t**3

    S = Cocycle2(model, "raw", base=base, antisymmetric=False)
    with pytest.raises(StepCancellationError):
        van_est_2(S, [0.0, 0.0], [1, 0], [0, 1], 0.5)


def test_van_est_equals_on_antisymmetrization():
    Sg = catalog_cocycle(symplectic_r2(), eps=0.5)
    m = [0.3, -0.2]
    v1 = van_est_2_richardson(Sg, m, [1, 0], [0, 1], 0.05)
    v2 = van_est_2_richardson(antisymmetrize(Sg), m, [1, 0], [0, 1], 0.05)
    assert v1 == pytest.approx(v2, abs=1e-8)
