"""Named verification suites shared by the CLI and the acceptance tests.

Every row carries its residual, the tolerance it was judged against, a
status (pass / fail / report), and the provenance of that tolerance
(analytic, quadrature, or scheme).  Measurement-only rows are flagged
"report" and never fail a run.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import engine
from .cocycles import (
    Cocycle2,
    antisymmetrize,
    catalog_cocycle,
    delta_coboundary,
    delta_coboundary_1,
    van_est_2_richardson,
    _good_h,
)
from .exprs import constant, eval_expr, gaussian_poly, orbit_polynomial, torus_harmonic
from .grids import GridSpec, sample
from .groupoids import inverse, random_composable_tuple
from .haar import HaarSpec
from .models import (
    PoissonModel,
    constant_poisson,
    heisenberg_dual,
    poisson_bracket,
    su2_dual,
    symplectic_r2,
    torus2,
    zero_model,
)
from .quat import qexp
from .ratphase import good_phase, heisenberg_phase, phase_associativity_check, triangle_phase
from .verify import associator, equivariance_check, good_first_order_check, semiclassical_sweep

__all__ = ["Row", "SUITES", "run_suite", "suite_names"]


@dataclass(frozen=True)
class Row:
    name: str
    residual: float
    tolerance: float | None
    status: str  # pass | fail | report
    provenance: str = "quadrature"


def _judge(name, residual, tolerance, provenance="quadrature") -> Row:
    status = "pass" if residual <= tolerance else "fail"
    return Row(name, float(residual), float(tolerance), status, provenance)


def _report(name, value, provenance="scheme") -> Row:
    return Row(name, float(value), None, "report", provenance)


def _test_pair():
    f = gaussian_poly(2, {(0, 0): 1.0, (1, 0): 0.3}, width=1.0, center=[0.4, 0.0])
    g = gaussian_poly(2, {(0, 0): 1.0, (0, 1): -0.2}, width=1.2, center=[0.0, 0.3])
    return f, g


def suite_unit_law(seed: int = 0, n_grid: int = 41) -> list[Row]:
    rows = []
    grid = GridSpec.square(2, 7.0, n_grid)
    one = constant(1.0, 2)
    f, _ = _test_pair()
    fs = sample(f, grid).values
    for tag, lam_of in (("moyal", lambda h: 2 * h), ("heisenberg-z1", lambda h: h), ("constant", lambda h: h)):
        hbar = 0.7
        left, le = engine.star_field_flat(one, f, grid, lam_of(hbar))
        right, re_ = engine.star_field_flat(f, one, grid, lam_of(hbar))
        tol = 2 * float(np.max(le) + np.max(re_)) + 1e-13
        dev = max(np.max(np.abs(left.values - fs)), np.max(np.abs(right.values - fs)))
        rows.append(_judge(f"unit-law/{tag}", dev, tol))
    t = torus_harmonic(2, -1, 0.7)
    onet = torus_harmonic(0, 0)
    d1 = engine.star_torus(onet, t, 0.7) - t
    d2 = engine.star_torus(t, onet, 0.7) - t
    dev = np.sqrt(sum(abs(c) ** 2 for _, c in d1.modes) + sum(abs(c) ** 2 for _, c in d2.modes))
    rows.append(_judge("unit-law/torus", dev, 1e-12, "analytic"))
    o = orbit_polynomial({(0, 0, 0): 1.0})
    r = engine.star_su2(o, o, [0.2, -0.1, 0.4], 1.0, HaarSpec("su2-euler-grid", (10, 10, 10)))
    rows.append(_judge("unit-law/su2-one-one", abs(r.value - 1.0), 2 * r.error + 1e-12, "scheme"))
    rows.append(_judge("zero/pointwise", abs(engine.star_zero(f, f, [0.3, 0.1]) - eval_expr(f, [0.3, 0.1]) ** 2), 1e-14, "analytic"))
    return rows


def suite_conjugation(seed: int = 0) -> list[Row]:
    rows = []
    hbar = 0.6
    f, g = _test_pair()
    m = np.array([0.25, -0.1])
    for tag, kwargs, model in (
        ("moyal", {}, symplectic_r2()),
        ("constant", {}, constant_poisson([[0.0, 1.0], [-1.0, 0.0]])),
    ):
        r1 = engine.star_point(model, f, g, m, hbar)
        r2 = engine.star_point(model, g.conjugate(), f.conjugate(), m, hbar)
        tol = 2 * (r1.error + r2.error) + 1e-12
        rows.append(_judge(f"conjugation/{tag}", abs(np.conj(r1.value) - r2.value), tol))
    mh = np.array([0.25, -0.1, 1.0])
    f3 = gaussian_poly(3, {(0, 0, 0): 1.0, (1, 0, 0): 0.3}, width=1.0)
    g3 = gaussian_poly(3, {(0, 1, 0): 1.0}, width=1.2)
    r1 = engine.star_heisenberg(f3, g3, mh, hbar)
    r2 = engine.star_heisenberg(g3.conjugate(), f3.conjugate(), mh, hbar)
    rows.append(_judge("conjugation/heisenberg", abs(np.conj(r1.value) - r2.value), 2 * (r1.error + r2.error) + 1e-12))
    ta = torus_harmonic(1, 2, 0.5 + 0.2j) + torus_harmonic(-1, 0, 1.0)
    tb = torus_harmonic(0, 1, 1.3)
    d = engine.star_torus(ta, tb, hbar).conjugate() - engine.star_torus(tb.conjugate(), ta.conjugate(), hbar)
    rows.append(_judge("conjugation/torus", np.sqrt(sum(abs(c) ** 2 for _, c in d.modes)), 1e-12, "analytic"))
    fo = orbit_polynomial({(1, 0, 0): 1.0, (0, 1, 1): 0.5})
    ko = orbit_polynomial({(0, 0, 1): 1.0, (2, 0, 0): 0.25})
    haar = HaarSpec("su2-euler-grid", (12, 12, 12))
    X = np.array([0.3, 0.2, -0.4])
    r1 = engine.star_su2(fo, ko, X, 1.0, haar)
    r2 = engine.star_su2(ko.conjugate(), fo.conjugate(), X, 1.0, haar)
    rows.append(_judge("conjugation/su2", abs(np.conj(r1.value) - r2.value), 3 * (r1.error + r2.error) + 1e-12, "scheme"))
    return rows


def suite_trace(seed: int = 0, n_pairs: int = 5) -> list[Row]:
    from .spectral import trace_pairing_check

    rng = np.random.default_rng(seed)
    grid = GridSpec.square(2, 7.5, 49)
    rows = []
    for i in range(n_pairs):
        c1, c2 = rng.uniform(-0.5, 0.5, size=(2, 2))
        w1, w2 = rng.uniform(0.8, 1.5, size=2)
        f = gaussian_poly(2, {(0, 0): 1.0, (1, 0): rng.uniform(-0.3, 0.3)}, center=c1, width=w1)
        g = gaussian_poly(2, {(0, 0): 1.0, (0, 1): rng.uniform(-0.3, 0.3)}, center=c2, width=w2)
        prod, err = engine.star_field_flat(f, g, grid, 2 * 0.6)
        w = grid.trapezoid_weights()
        lhs = np.sum(prod.values * w)
        rhs = np.sum(sample(f, grid).values * sample(g, grid).values * w)
        tol = 2 * float(np.sum(np.abs(err) * w)) + 1e-10
        rows.append(_judge(f"trace/pair-{i}", abs(lhs - rhs), tol))
    return rows


def _cocycle_cases():
    return [
        (symplectic_r2(), catalog_cocycle(symplectic_r2()), 1e-12),
        (symplectic_r2(), catalog_cocycle(symplectic_r2(), eps=0.5), 1e-12),
        (heisenberg_dual(), catalog_cocycle(heisenberg_dual()), 1e-12),
        (constant_poisson([[0.0, 1.3], [-1.3, 0.0]]), catalog_cocycle(constant_poisson([[0.0, 1.3], [-1.3, 0.0]])), 1e-12),
        (torus2(), catalog_cocycle(torus2()), 1e-12),
        (su2_dual(), catalog_cocycle(su2_dual()), 1e-8),
    ]


def suite_cocycle(seed: int = 0, n_triples: int = 1000) -> list[Row]:
    rng = np.random.default_rng(seed)
    rows = []
    for model, S, tol in _cocycle_cases():
        worst = 0.0
        for _ in range(n_triples):
            g3, g2, g1 = random_composable_tuple(model, rng, 3)
            worst = max(worst, abs(delta_coboundary(S, g3, g2, g1)))
        label = S.form if S.form != "good-epsilon" else "good-epsilon"
        rows.append(_judge(f"cocycle-identity/{label}", worst, tol, "analytic"))
        St = antisymmetrize(S)
        worst = 0.0
        for _ in range(100):
            g2, g1 = random_composable_tuple(model, rng, 2)
            worst = max(worst, abs(St(g2, g1) + St(inverse(g1), inverse(g2))))
        rows.append(_judge(f"antisymmetry/{label}", worst, 1e-12, "analytic"))
    # delta* of delta* vanishes on random polynomial 1-cochains
    model = symplectic_r2()
    worst = 0.0
    for _ in range(200):
        coef = rng.uniform(-1, 1, size=4)

        def h(g):
            from .groupoids import source, target

            t, s = target(g), source(g)
            return coef[0] * t[0] * s[1] + coef[1] * t[1] + coef[2] * s[0] * s[1] + coef[3]

        S2 = Cocycle2(model, "raw", base=lambda g2, g1: delta_coboundary_1(h, g2, g1), antisymmetric=False)
        g3, g2, g1 = random_composable_tuple(model, rng, 3)
        worst = max(worst, abs(delta_coboundary(S2, g3, g2, g1)))
    rows.append(_judge("delta-squared-zero", worst, 1e-12, "analytic"))
    return rows


def suite_vanest(seed: int = 0, step: float = 0.05) -> list[Row]:
    rng = np.random.default_rng(seed)
    rows = []
    for model, S, _ in _cocycle_cases():
        m = rng.uniform(-0.8, 0.8, size=model.dim)
        if model.variant == "heisenberg-dual":
            m[2] = 0.8
        k = 2 if model.variant != "su2-dual" else 3
        worst = 0.0
        from .groupoids import arrow_dim

        k = arrow_dim(model)
        for i in range(k):
            for j in range(i + 1, k):
                x = np.eye(k)[i]
                y = np.eye(k)[j]
                ve = van_est_2_richardson(S, m, x, y, step)
                if model.variant in ("symplectic-r2", "torus2"):
                    target_val = 1.0
                elif model.variant == "heisenberg-dual":
                    target_val = m[2] / 2
                elif model.variant == "constant":
                    target_val = model.bivector_matrix()[i, j]
                else:
                    cross = np.cross(x[:3], y[:3])
                    target_val = 0.5 * float(m @ cross)
                scale = max(abs(target_val), 1.0)
                worst = max(worst, abs(ve - target_val) / scale)
        rows.append(_judge(f"vanest/{S.form}", worst, 1e-6, "analytic"))
    # the van Est map kills coboundaries and ignores antisymmetrization
    model = symplectic_r2()
    Scob = Cocycle2(model, "raw", base=lambda g2, g1: delta_coboundary_1(_good_h, g2, g1), antisymmetric=False)
    ve = van_est_2_richardson(Scob, [0.3, -0.2], [1, 0], [0, 1], step)
    rows.append(_judge("vanest/coboundary-killed", abs(ve), 1e-8, "analytic"))
    Sg = catalog_cocycle(symplectic_r2(), eps=0.5)
    v1 = van_est_2_richardson(Sg, [0.3, -0.2], [1, 0], [0, 1], step)
    v2 = van_est_2_richardson(antisymmetrize(Sg), [0.3, -0.2], [1, 0], [0, 1], step)
    rows.append(_judge("vanest/antisymmetrize-invariant", abs(v1 - v2), 1e-8, "analytic"))
    return rows


def suite_associativity(seed: int = 0, haar_counts=(8, 8, 8)) -> list[Row]:
    rows = []
    hbar = 1.0
    f = gaussian_poly(2, {(0, 0): 1.0}, width=2.0, center=[0.3, 0.0])
    g = gaussian_poly(2, {(0, 0): 1.0, (1, 0): 0.2}, width=2.0)
    h = gaussian_poly(2, {(0, 0): 1.0}, width=2.0, center=[0.0, -0.3])
    res, err = associator(symplectic_r2(), f, g, h, [0.1, 0.1], hbar)
    rows.append(_judge("associator/moyal", res, err))
    ta, tb, tc = torus_harmonic(1, 0), torus_harmonic(0, 1), torus_harmonic(1, -1)
    res, _ = associator(torus2(), ta, tb, tc, [0.0, 0.0], 0.7)
    rows.append(_judge("associator/torus", res, 1e-12, "analytic"))
    verdict = phase_associativity_check(triangle_phase)
    rows.append(_judge("phase-assoc/triangle", 0.0 if verdict.equal else 1.0, 0.5, "analytic"))
    verdict = phase_associativity_check(good_phase(Fraction(1, 2)))
    rows.append(_judge("phase-assoc/good-eps", 0.0 if verdict.equal else 1.0, 0.5, "analytic"))
    verdict = phase_associativity_check(heisenberg_phase(Fraction(1)))
    rows.append(_judge("phase-assoc/heisenberg", 0.0 if verdict.equal else 1.0, 0.5, "analytic"))
    fo = orbit_polynomial({(1, 0, 0): 1.0})
    ko = orbit_polynomial({(0, 1, 0): 1.0, (0, 0, 1): 0.3})
    ho = orbit_polynomial({(0, 0, 1): 1.0})
    mag, err = associator(su2_dual(), fo, ko, ho, [0.3, 0.1, 0.4], 1.0, haar=HaarSpec("su2-euler-grid", haar_counts))
    rows.append(_report("associator/su2-magnitude", mag))
    rows.append(_report("associator/su2-scheme-error", err))
    return rows


def suite_equivariance(seed: int = 0, n_rot: int = 10, haar_counts=(12, 12, 12), band2: bool = True) -> list[Row]:
    rng = np.random.default_rng(seed)
    rows = []
    haar = HaarSpec("su2-euler-grid", haar_counts)
    f = orbit_polynomial({(1, 0, 0): 1.0, (0, 1, 1): 0.5})
    k = orbit_polynomial({(0, 0, 1): 1.0, (2, 0, 0): 0.25})
    X = np.array([0.3, 0.2, -0.4])
    worst, tol = 0.0, 0.0
    for i in range(n_rot):
        q0 = qexp(rng.normal(size=3))
        res, err = equivariance_check(f, k, X, 1.0, q0, haar)
        worst = max(worst, res)
        tol = max(tol, 3 * err)
    rows.append(_judge("equivariance/su2-rotations", worst, tol + 1e-14, "scheme"))
    q0 = np.array([1.0, 0.0, 0.0, 0.0])
    res, _ = equivariance_check(f, k, X, 1.0, q0, haar)
    rows.append(_judge("equivariance/identity", res, 1e-14, "analytic"))
    one = orbit_polynomial({(0, 0, 0): 1.0})
    res, _ = equivariance_check(one, one, X, 1.0, qexp(rng.normal(size=3)), haar)
    rows.append(_judge("equivariance/units", res, 1e-12, "analytic"))
    return rows


def suite_bargmann(seed: int = 0, max_degree: int = 4) -> list[Row]:
    from .spectral import bargmann_exact_pair, bargmann_grid_pair

    rows = []
    hbar = 0.7
    grid = GridSpec.square(2, 7.0, 49)
    for side in ("z", "zbar"):
        worst_q, tol_q, worst_e = 0.0, 0.0, 0.0
        for deg in range(max_degree + 1):
            c = np.zeros(deg + 1)
            c[deg] = 1.0
            sfield, cfield, err = bargmann_grid_pair(side, c, hbar, grid)
            worst_q = max(worst_q, float(np.max(np.abs(sfield.values - cfield.values))))
            tol_q = max(tol_q, 2 * err)
            es, ec = bargmann_exact_pair(side, c, hbar, grid)
            worst_e = max(worst_e, float(np.max(np.abs(es.values - ec.values))))
        rows.append(_judge(f"bargmann/{side}-grid", worst_q, tol_q))
        rows.append(_judge(f"bargmann/{side}-exact-rule", worst_e, 1e-10, "analytic"))
    return rows


def suite_wigner(seed: int = 0) -> list[Row]:
    from .spectral import hermite_exprs, orthonormal_basis, wigner_from_state, wigner_direct

    rows = []
    hbar = 0.6
    s = np.sqrt(hbar / 2)
    grid = GridSpec.square(2, 6.0, 41)
    basis = orthonormal_basis(hermite_exprs(3, s), grid)
    psi = gaussian_poly(1, {(0,): (np.pi * hbar) ** -0.25}, width=1.0 / hbar)
    hold = gaussian_poly(2, {(1, 1): 1.0}, width=1.0)
    qd = wigner_from_state(psi, hbar, basis, holdout=(hold,))
    rows.append(_judge("wigner/basis-pairing", qd.basis_residual, 1e-6))
    rows.append(_judge("wigner/unit-integral", abs(qd.integral - 1.0), 1e-6))
    rows.append(_judge("wigner/imag-residual", qd.imag_residual, 1e-6))
    rows.append(_judge("wigner/holdout", max(qd.holdout_residuals), 1e-6))
    direct = wigner_direct(psi, hbar, grid)
    rows.append(_judge("wigner/vs-direct-transform", float(np.max(np.abs(qd.W.values - direct.values))), 1e-8, "analytic"))
    return rows


SUITES = {
    "unit-law": suite_unit_law,
    "conjugation": suite_conjugation,
    "trace": suite_trace,
    "cocycle": suite_cocycle,
    "vanest": suite_vanest,
    "associativity": suite_associativity,
    "equivariance": suite_equivariance,
    "bargmann": suite_bargmann,
    "wigner": suite_wigner,
}


def suite_names():
    return sorted(SUITES)


def run_suite(name: str, seed: int = 0, **kwargs) -> list[Row]:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](seed=seed, **kwargs)
