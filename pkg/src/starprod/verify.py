"""Cross-cutting verification campaigns: associativity, semiclassical sweeps,
equivariance, and the norm-continuity report."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exprs import FunctionExpr, eval_expr
from .grids import GridSpec
from .models import PoissonModel, poisson_bracket, good_epsilon_commutator_factor
from .haar import HaarSpec, haar_nodes
from .quad import QuadratureSpec, decay_radius
from . import engine
from .engine import (
    flat_lambda,
    flat_star_values,
    star_point,
    star_su2,
    su2_star_values,
)
from .quat import rotation_matrix

__all__ = [
    "SweepReport",
    "semiclassical_sweep",
    "associator",
    "equivariance_check",
    "norm_curve",
    "good_first_order_check",
    "rotate_orbit_function",
]


# ---------------------------------------------------------------------
# semiclassical sweeps
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class SweepReport:
    """Residual-vs-hbar record with the fitted convergence slope.

    `slope` extrapolates the successive-pair slopes to hbar -> 0 (Richardson
    style, since the pair slopes converge at O(hbar^2)); `lsq_slope` is the
    plain least-squares log-log fit over all samples.
    """

    hbars: tuple
    residuals: tuple
    slope: float
    slope_halfwidth: float
    lsq_slope: float

    def __post_init__(self):
        hs = np.asarray(self.hbars)
        if len(hs) >= 2 and not np.all(np.diff(hs) < 0):
            raise ValueError("hbar samples must be strictly decreasing")
        if any(r < 0 for r in self.residuals):
            raise ValueError("residuals must be nonnegative")


def _fit_slopes(hbars, residuals):
    hs = np.asarray(hbars, dtype=float)
    rs = np.asarray(residuals, dtype=float)
    if np.any(rs <= 0):
        return 0.0, 0.0, 0.0
    lsq = float(np.polyfit(np.log(hs), np.log(rs), 1)[0])
    pair = np.log(rs[:-1] / rs[1:]) / np.log(hs[:-1] / hs[1:])
    if len(pair) >= 2:
        hsq = (hs[:-1] * hs[1:])[..., None]  # geometric-mean hbar^2 per pair
        coef = np.polyfit(hsq[:, 0], pair, 1)
        slope = float(coef[1])
        half = float(abs(pair[-1] - pair[-2]) + np.max(np.abs(np.polyval(coef, hsq[:, 0]) - pair)))
    else:
        slope, half = float(pair[-1]), float("inf")
    return slope, half, lsq


def commutator_residual(model: PoissonModel, f, g, m, hbar: float, eps: float = 0.0, quad=None, haar=None) -> float:
    """| (f*g - g*f)(m) / (i c hbar) - {f,g}(m) | with the model's commutator factor."""
    cfac = good_epsilon_commutator_factor() if eps != 0.0 else model.commutator_factor
    r1 = star_point(model, f, g, m, hbar, quad=quad, eps=eps, haar=haar)
    r2 = star_point(model, g, f, m, hbar, quad=quad, eps=eps, haar=haar)
    comm = (np.asarray(r1.value) - np.asarray(r2.value)) / (1j * cfac * hbar)
    pb = eval_expr(poisson_bracket(model, f, g), np.asarray(m, dtype=float))
    return float(np.abs(comm - pb))


def semiclassical_sweep(model: PoissonModel, f, g, m, hbars, eps: float = 0.0, quad=None, haar=None) -> SweepReport:
    """Residual of the first-order commutator law over a decreasing hbar list."""
    hbars = [float(h) for h in hbars]
    if len(hbars) < 4:
        raise ValueError("need at least 4 hbar samples")
    res = [commutator_residual(model, f, g, m, h, eps=eps, quad=quad, haar=haar) for h in hbars]
    slope, half, lsq = _fit_slopes(hbars, res)
    return SweepReport(tuple(hbars), tuple(res), slope, half, lsq)


# ---------------------------------------------------------------------
# associativity
# ---------------------------------------------------------------------


def _flat_assoc_side(f, g, h, m, lam, quad, tv_phase, left: bool):
    """One nested product: ((f*g)*h(m) when left else (f*(g*h))(m)."""
    m = np.asarray(m, dtype=float)
    ax = quad.axis()
    uu, vv = np.meshgrid(ax, ax, indexing="ij")
    lattice = m[None, None, :] + np.stack([uu, vv], axis=-1)
    pts = lattice.reshape(-1, 2)
    inner_vals, inner_errs = flat_star_values(f, g, pts, lam, quad, tv_phase) if left else flat_star_values(g, h, pts, lam, quad, tv_phase)
    P = inner_vals.reshape(len(ax), len(ax))
    Perr = inner_errs.reshape(len(ax), len(ax))

    def run(idx):
        a = ax[idx]
        hstep = a[1] - a[0]
        ww = np.full(len(a), hstep)
        ww[0] = ww[-1] = hstep / 2
        sub = np.ix_(idx, idx)
        k_ut = np.exp(1j * np.outer(a, a) / lam)
        k_vs = np.exp(-1j * np.outer(a, a) / lam)
        offs = np.stack(np.meshgrid(a, a, indexing="ij"), axis=-1)
        if left:
            Fv = P[sub]
            Gv = eval_expr(h, m[None, None, :] + offs)
        else:
            Fv = eval_expr(f, m[None, None, :] + offs)
            Gv = P[sub]
        A = (Fv * ww[:, None]).T @ k_ut if False else np.einsum("uv,ut->vt", Fv * ww[:, None], k_ut)
        B = np.einsum("vs,st->vt", k_vs, Gv * ww[:, None])
        core = A * B
        if tv_phase != 0.0:
            core = core * np.exp(1j * tv_phase * np.outer(a, a))
        return np.einsum("vt,v,t->", core, ww, ww) / (2 * np.pi * abs(lam)) ** 2

    full = run(np.arange(quad.samples))
    half = run(quad.coarse_indices())
    w1 = quad.weights()
    hexpr = h if left else f
    habs = np.abs(eval_expr(hexpr, m[None, None, :] + np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1)))
    propagated = (
        float(np.einsum("uv,u,v->", Perr, w1, w1))
        * float(np.einsum("st,s,t->", habs, w1, w1))
        / (2 * np.pi * abs(lam)) ** 2
    )
    return full, abs(full - half) + propagated


def associator(model: PoissonModel, f, g, h, m, hbar: float, eps: float = 0.0, quad=None, haar: HaarSpec | None = None):
    """(|((f*g)*h - f*(g*h))(m)|, combined error estimate)."""
    if model.variant == "zero":
        return 0.0, 0.0
    if model.variant == "torus2":
        lhs = engine.star_torus(engine.star_torus(f, g, hbar), h, hbar)
        rhs = engine.star_torus(f, engine.star_torus(g, h, hbar), hbar)
        diff = lhs - rhs
        mag = float(np.sqrt(sum(abs(c) ** 2 for _, c in diff.modes)))
        return mag, 0.0
    if model.variant == "su2-dual":
        return _associator_su2(f, g, h, m, hbar, haar or HaarSpec("su2-euler-grid", (8, 8, 8)))
    if model.variant in ("symplectic-r2", "heisenberg-dual", "constant"):
        if model.variant != "symplectic-r2":
            raise NotImplementedError("nested quadrature is wired for the flat R^2 backends")
        lam = -hbar if eps != 0.0 else flat_lambda(model, hbar)
        tv = -eps / hbar if eps != 0.0 else 0.0
        if quad is None:
            R = max(decay_radius(f), decay_radius(g), decay_radius(h))
            quad = QuadratureSpec.auto(R, lam)
        lv, le = _flat_assoc_side(f, g, h, m, lam, quad, tv, left=True)
        rv, re = _flat_assoc_side(f, g, h, m, lam, quad, tv, left=False)
        return float(abs(lv - rv)), float(le + re)
    raise ValueError(model.variant)


def _associator_su2(f, g, h, X, hbar: float, haar: HaarSpec):
    X = np.asarray(X, dtype=float)
    q, w = haar_nodes(haar)
    rot = rotation_matrix(q)

    def side(left: bool):
        bases = rot @ X
        inner = su2_star_values(f, g, bases, hbar, haar) if left else su2_star_values(g, h, bases, hbar, haar)
        outer_f = inner if left else eval_expr(f, bases)
        outer_g = eval_expr(h, bases) if left else inner
        num, den = engine._su2_double_sum(outer_f, outer_g, q, w, X, hbar)
        return num / den

    lv = side(True)
    rv = side(False)
    # scheme error from the halved node set
    half = haar.halved()
    qh, wh = haar_nodes(half)
    roth = rotation_matrix(qh)

    def side_half(left: bool):
        bases = roth @ X
        inner = su2_star_values(f, g, bases, hbar, half) if left else su2_star_values(g, h, bases, hbar, half)
        outer_f = inner if left else eval_expr(f, bases)
        outer_g = eval_expr(h, bases) if left else inner
        num, den = engine._su2_double_sum(outer_f, outer_g, qh, wh, X, hbar)
        return num / den

    err = abs((side_half(True) - side_half(False)) - (lv - rv))
    return float(abs(lv - rv)), float(err)


# ---------------------------------------------------------------------
# equivariance and the norm curve
# ---------------------------------------------------------------------


def rotate_orbit_function(f: FunctionExpr, q0) -> FunctionExpr:
    """(g0 . f)(X) = f(Ad_{g0}^{-1} X) for an orbit polynomial."""
    from .engine import _poly_substitute_affine
    from .exprs import orbit_polynomial

    R = rotation_matrix(np.asarray(q0, dtype=float))
    poly: dict = {}
    for t in f.terms:
        sub = _poly_substitute_affine(t.poly_dict, np.zeros(3), R.T)
        for k, v in sub.items():
            poly[k] = poly.get(k, 0.0) + v
    return orbit_polynomial(poly)


def equivariance_check(f, k, X, hbar: float, q0, haar: HaarSpec):
    """|(g0.f)*(g0.k)(Ad_{g0}X) - (f*k)(X)| with the scheme error."""
    X = np.asarray(X, dtype=float)
    base = star_su2(f, k, X, hbar, haar)
    R0 = rotation_matrix(np.asarray(q0, dtype=float))
    rot = star_su2(rotate_orbit_function(f, q0), rotate_orbit_function(k, q0), R0 @ X, hbar, haar)
    return float(abs(rot.value - base.value)), float(base.error + rot.error)


def norm_curve(f: FunctionExpr, hbars, grid: GridSpec, orders: int = 2, scale: float = 1.0):
    """||f||_hbar Galerkin estimates over a decreasing hbar list."""
    from .spectral import build_star_matrix, hermite_exprs, operator_norm, orthonormal_basis

    basis = orthonormal_basis(hermite_exprs(orders, scale), grid)
    out = []
    for h in hbars:
        A = build_star_matrix(f, basis, float(h))
        out.append(operator_norm(A).value)
    return out


# ---------------------------------------------------------------------
# epsilon-twist first-order structure
# ---------------------------------------------------------------------


def good_first_order_check(f, g, m, hbar: float, eps: float, quad=None):
    """Richardson-extract the O(hbar) term of the epsilon-twisted product.

    Returns (extracted, target) with target = -i[{f,g} + (eps/2) d_y f d_y g].
    """
    from .engine import star_good

    m = np.asarray(m, dtype=float)
    fg = complex(eval_expr(f, m) * eval_expr(g, m))

    def t_of(h):
        r = star_good(f, g, m, h, eps, quad)
        return (r.value - fg) / h

    t1 = t_of(hbar)
    t2 = t_of(hbar / 2)
    extracted = 2 * t2 - t1
    model = PoissonModel("symplectic-r2", 2, 2, 4.0)
    pb = eval_expr(poisson_bracket(model, f, g), m)
    dyf = eval_expr(f.derivative(1), m)
    dyg = eval_expr(g.derivative(1), m)
    target = -1j * (pb + 0.5 * eps * dyf * dyg)
    return complex(extracted), complex(target)
