"""Operator layer: star matrices, norms, Segal-Bargmann, Wigner, evolution.

The left star-action is compressed onto a grid-orthonormalized Hermite-
Gaussian basis; norms are therefore Galerkin lower bounds that converge
from below as the basis grows.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .exprs import FunctionExpr, constant, eval_expr, gaussian_poly
from .grids import GridSpec, SampledField, l2_inner, sample
from .engine import star_field_flat
from .models import PoissonModel

__all__ = [
    "hermite_exprs",
    "OrthonormalBasis",
    "orthonormal_basis",
    "StarMatrix",
    "build_star_matrix",
    "operator_norm",
    "NormEstimate",
    "bargmann_apply",
    "bargmann_state",
    "bargmann_grid_pair",
    "weyl_apply",
    "QuasiDistribution",
    "wigner_from_state",
    "wigner_direct",
    "trace_pairing_check",
    "evolve",
    "PairingResidualError",
    "BlowupError",
]

LEFT_ACTION_HALF = 0.5  # z * (psi G) = 2 (z psi) G for this kernel family


def _hermite_coeffs_1d(n: int) -> dict:
    """Physicists' Hermite H_n as {degree: coeff}."""
    h0, h1 = {0: 1.0}, {1: 2.0}
    if n == 0:
        return h0
    prev, cur = h0, h1
    for k in range(1, n):
        nxt: dict = {}
        for d, c in cur.items():
            nxt[d + 1] = nxt.get(d + 1, 0.0) + 2 * c
        for d, c in prev.items():
            nxt[d] = nxt.get(d, 0.0) - 2 * k * c
        prev, cur = cur, nxt
    return cur


def hermite_exprs(orders: int, scale: float) -> list[FunctionExpr]:
    """H_j(p/s) H_k(q/s) exp(-(p^2+q^2)/(2 s^2)) for j, k < orders, graded order."""
    out = []
    pairs = sorted(
        ((j, k) for j in range(orders) for k in range(orders)),
        key=lambda jk: (jk[0] + jk[1], jk),
    )
    for j, k in pairs:
        hj = _hermite_coeffs_1d(j)
        hk = _hermite_coeffs_1d(k)
        poly = {}
        for dj, cj in hj.items():
            for dk, ck in hk.items():
                poly[(dj, dk)] = cj * ck / scale ** (dj + dk)
        out.append(gaussian_poly(2, poly, width=1.0 / scale**2))
    return out


@dataclass(frozen=True)
class OrthonormalBasis:
    """Grid-orthonormalized combinations e_k = sum_j coeffs[k, j] raw_j."""

    raw: tuple
    coeffs: np.ndarray
    grid: GridSpec
    fields: tuple

    def __len__(self):
        return len(self.fields)


def orthonormal_basis(raw_exprs, grid: GridSpec) -> OrthonormalBasis:
    """Modified Gram-Schmidt in the grid L2 inner product."""
    vals = [sample(e, grid).values.astype(complex) for e in raw_exprs]
    n = len(vals)
    coeffs = np.eye(n, dtype=complex)
    w = grid.trapezoid_weights()

    def inner(a, b):
        return np.sum(np.conj(a) * b * w)

    for k in range(n):
        for j in range(k):
            r = inner(vals[j], vals[k])
            vals[k] = vals[k] - r * vals[j]
            coeffs[k] = coeffs[k] - r * coeffs[j]
        nrm = np.sqrt(inner(vals[k], vals[k]).real)
        if nrm < 1e-12:
            raise ValueError("basis is numerically dependent on this grid")
        vals[k] = vals[k] / nrm
        coeffs[k] = coeffs[k] / nrm
    fields = tuple(SampledField(grid, v) for v in vals)
    return OrthonormalBasis(tuple(raw_exprs), coeffs, grid, fields)


@dataclass(frozen=True)
class StarMatrix:
    basis: OrthonormalBasis
    entries: np.ndarray  # A[j, k] = <e_j, f * e_k>
    backend: str
    hbar: float
    error: float


def build_star_matrix(f: FunctionExpr, basis: OrthonormalBasis, hbar: float, lam: float | None = None, backend: str = "moyal") -> StarMatrix:
    """A[j, k] = <e_j, f * e_k> through the field path of the flat kernel."""
    lam = 2.0 * hbar if lam is None else lam
    grid = basis.grid
    n = len(basis)
    A = np.zeros((n, n), dtype=complex)
    err = 0.0
    w = grid.trapezoid_weights()
    for k in range(n):
        fe, ferr = star_field_flat(f, basis.fields[k], grid, lam)
        for j in range(n):
            A[j, k] = np.sum(np.conj(basis.fields[j].values) * fe.values * w)
        # |<e_j, delta>| <= ||delta||_L2 since the e_j are grid-orthonormal
        err = max(err, float(np.sqrt(np.sum(w * ferr**2))))
    return StarMatrix(basis, A, backend, hbar, err)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    residual: float
    iterations: int
    converged: bool


def operator_norm(A, tol: float = 1e-10, max_iter: int = 10_000) -> NormEstimate:
    """Largest singular value by power iteration on A^dagger A."""
    M = A.entries if isinstance(A, StarMatrix) else np.asarray(A)
    n = M.shape[1]
    v = np.ones(n, dtype=complex) + 1e-3 * np.arange(n)
    v /= np.linalg.norm(v)
    H = np.conj(M.T) @ M
    prev = 0.0
    for it in range(1, max_iter + 1):
        w = H @ v
        lam = np.linalg.norm(w)
        if lam == 0:
            return NormEstimate(0.0, 0.0, it, True)
        v = w / lam
        if abs(lam - prev) <= tol * lam:
            return NormEstimate(float(np.sqrt(lam)), float(abs(lam - prev) / lam), it, True)
        prev = lam
    return NormEstimate(float(np.sqrt(prev)), float(abs(lam - prev) / max(lam, 1e-300)), max_iter, False)


# ---------------------------------------------------------------------
# Segal-Bargmann
# ---------------------------------------------------------------------


def bargmann_apply(side: str, coeffs, hbar: float) -> np.ndarray:
    """Coefficient action on psi(z) = sum_k c_k z^k: side 'z' returns z*psi,
    side 'zbar' returns hbar * d(psi)/dz."""
    c = np.asarray(coeffs, dtype=complex)
    if side == "z":
        return np.concatenate([[0.0], c])
    if side == "zbar":
        if len(c) == 1:
            return np.zeros(1, dtype=complex)
        return hbar * c[1:] * np.arange(1, len(c))
    raise ValueError("side must be 'z' or 'zbar'")


def _z_power_poly(k: int) -> dict:
    """(q + i p)^k as a poly dict over (p, q)."""
    out = {}
    for j in range(k + 1):  # choose j powers of (i p)
        out[(j, k - j)] = comb(k, j) * (1j) ** j
    return out


def bargmann_state(coeffs, hbar: float) -> FunctionExpr:
    """psi(z) exp(-(p^2+q^2)/(2 hbar)) with z = q + i p."""
    c = np.asarray(coeffs, dtype=complex)
    poly: dict = {}
    for k, ck in enumerate(c):
        if ck == 0:
            continue
        for mono, v in _z_power_poly(k).items():
            poly[mono] = poly.get(mono, 0.0) + ck * v
    return gaussian_poly(2, poly, width=1.0 / hbar)


def _bargmann_factor(side: str) -> FunctionExpr:
    if side == "z":
        return gaussian_poly(2, _z_power_poly(1))
    return gaussian_poly(2, {k: np.conj(v) for k, v in _z_power_poly(1).items()})


def bargmann_grid_pair(side: str, coeffs, hbar: float, grid: GridSpec):
    """(star path, coefficient path) as fields; they agree within quadrature error.

    The star path applies z* (or zbar*) through the kernel at parameter hbar
    and halves the structural factor 2 of the left action on this subspace.
    """
    z_expr = _bargmann_factor(side)
    state = bargmann_state(coeffs, hbar)
    star_field, err = star_field_flat(z_expr, state, grid, hbar)
    star_vals = LEFT_ACTION_HALF * star_field.values
    out_state = bargmann_state(bargmann_apply(side, coeffs, hbar), hbar)
    coeff_vals = sample(out_state, grid).values
    return SampledField(grid, star_vals), SampledField(grid, coeff_vals), float(np.max(np.abs(err)))


def bargmann_exact_pair(side: str, coeffs, hbar: float, grid: GridSpec):
    """Closed-form star action (exact for a linear left factor) vs coefficients.

    For linear f the kernel integral equals f*g = f g + i*lam*(d_p f d_q g -
    d_q f d_p g) identically; this is the sharp machine-precision form of the
    Segal-Bargmann relations.
    """
    lam = hbar
    z_expr = _bargmann_factor(side)
    state = bargmann_state(coeffs, hbar)
    exact = z_expr * state + (1j * lam) * (
        z_expr.derivative(0) * state.derivative(1) - z_expr.derivative(1) * state.derivative(0)
    )
    star_vals = LEFT_ACTION_HALF * sample(exact, grid).values
    out_state = bargmann_state(bargmann_apply(side, coeffs, hbar), hbar)
    return SampledField(grid, star_vals), sample(out_state, grid)


# ---------------------------------------------------------------------
# Weyl operators and the Wigner distribution
# ---------------------------------------------------------------------


class PairingResidualError(ArithmeticError):
    pass


def weyl_apply(h: FunctionExpr, psi_vals: np.ndarray, x_axis: np.ndarray, hbar: float, p_half_width: float, n_p: int) -> np.ndarray:
    """(Op(h) psi)(x) = (1/2 pi hbar) int h(p, (x+y)/2) e^{i p (x-y)/hbar} psi(y) dy dp."""
    y = x_axis
    hy = y[1] - y[0]
    wy = np.full(len(y), hy)
    wy[0] = wy[-1] = hy / 2
    p = np.linspace(-p_half_width, p_half_width, n_p)
    hp = p[1] - p[0]
    wp = np.full(n_p, hp)
    wp[0] = wp[-1] = hp / 2
    # h on the (p, (x+y)/2) lattice
    out = np.zeros(len(x_axis), dtype=complex)
    mid = 0.5 * (x_axis[:, None] + y[None, :])  # (x, y)
    pts = np.stack(
        [np.broadcast_to(p[None, None, :], mid.shape + (n_p,)),
         np.broadcast_to(mid[:, :, None], mid.shape + (n_p,))],
        axis=-1,
    )
    hv = eval_expr(h, pts)  # (x, y, p)
    phase = np.exp(1j * np.einsum("p,xy->xyp", p, x_axis[:, None] - y[None, :]) / hbar)
    out = np.einsum("xyp,xyp,y,p,y->x", hv, phase, psi_vals, wp, wy)
    return out / (2 * np.pi * hbar)


@dataclass(frozen=True)
class QuasiDistribution:
    W: SampledField
    hbar: float
    integral: float
    imag_residual: float
    basis_residual: float
    holdout_residuals: tuple


def _state_values(psi: FunctionExpr, x_axis: np.ndarray) -> np.ndarray:
    return eval_expr(psi, x_axis[:, None])


def wigner_from_state(
    psi: FunctionExpr,
    hbar: float,
    basis: OrthonormalBasis,
    holdout=(),
    x_axis: np.ndarray | None = None,
    n_p: int | None = None,
    residual_tol: float = 1e-6,
) -> QuasiDistribution:
    """Reconstruct W on the basis span so <e_k, W> = <psi, Op(e_k) psi> for all k.

    Realness and unit integral are checked; a held-out observable whose
    pairing residual exceeds `residual_tol` raises PairingResidualError.
    """
    grid = basis.grid
    if x_axis is None:
        x_axis = np.linspace(-grid.half_widths[1], grid.half_widths[1], 2 * grid.samples[1] + 1)
    if n_p is None:
        n_p = 2 * grid.samples[0] + 1
    pv = _state_values(psi, x_axis)
    hx = x_axis[1] - x_axis[0]
    wx = np.full(len(x_axis), hx)
    wx[0] = wx[-1] = hx / 2
    p_half = grid.half_widths[0]

    def expectation(raw_combination):
        op_psi = np.zeros(len(x_axis), dtype=complex)
        for cj, raw in zip(raw_combination, basis.raw):
            if cj == 0:
                continue
            op_psi = op_psi + cj * weyl_apply(raw, pv, x_axis, hbar, p_half, n_p)
        return np.sum(np.conj(pv) * op_psi * wx)

    t = np.array([expectation(basis.coeffs[k]) for k in range(len(basis))])
    Wv = np.zeros(grid.samples, dtype=complex)
    for tk, fk in zip(t, basis.fields):
        Wv = Wv + tk * fk.values
    imag_res = float(np.max(np.abs(Wv.imag)))
    Wf = SampledField(grid, Wv.real)
    w2 = grid.trapezoid_weights()
    integral = float(np.sum(Wf.values * w2))
    # defining pairing on the basis elements
    basis_res = 0.0
    for tk, fk in zip(t, basis.fields):
        pair = np.sum(np.conj(fk.values) * Wv * w2)
        basis_res = max(basis_res, abs(pair - tk))
    hr = []
    for h in holdout:
        hv = sample(h, grid).values
        lhs = np.sum(np.conj(hv) * Wv * w2)
        rhs = np.sum(np.conj(pv) * weyl_apply(h, pv, x_axis, hbar, p_half, n_p) * wx)
        hr.append(abs(lhs - rhs))
        if abs(lhs - rhs) > residual_tol:
            raise PairingResidualError(f"held-out pairing residual {abs(lhs - rhs):.3e} > {residual_tol}")
    return QuasiDistribution(Wf, hbar, integral, imag_res, basis_res, tuple(hr))


def wigner_direct(psi: FunctionExpr, hbar: float, grid: GridSpec, n_y: int = 257) -> SampledField:
    """Independent Wigner transform W(p,q) = (1/2 pi hbar) int conj(psi)(q + y/2) psi(q - y/2) e^{i p y / hbar} dy."""
    paxis, qaxis = grid.axes()
    ymax = 2 * grid.half_widths[1]
    y = np.linspace(-ymax, ymax, n_y)
    hy = y[1] - y[0]
    wy = np.full(n_y, hy)
    wy[0] = wy[-1] = hy / 2
    a = _state_values(psi, (qaxis[:, None] + y[None, :] / 2).reshape(-1)).reshape(len(qaxis), n_y)
    b = _state_values(psi, (qaxis[:, None] - y[None, :] / 2).reshape(-1)).reshape(len(qaxis), n_y)
    ph = np.exp(1j * np.outer(paxis, y) / hbar)
    W = np.einsum("py,qy,y->pq", ph, np.conj(a) * b, wy) / (2 * np.pi * hbar)
    return SampledField(grid, W.real)


# ---------------------------------------------------------------------
# trace pairing and Heisenberg evolution
# ---------------------------------------------------------------------


def trace_pairing_check(f: FunctionExpr, g: FunctionExpr, hbar: float, grid: GridSpec, lam: float | None = None):
    """(int f*g, int f g, residual) on the same grid; requires decaying f, g."""
    from .quad import NonDecayingError

    if not (f.is_decaying() and g.is_decaying()):
        raise NonDecayingError("trace pairing needs decaying factors")
    lam = 2.0 * hbar if lam is None else lam
    prod, err = star_field_flat(f, g, grid, lam)
    w = grid.trapezoid_weights()
    lhs = np.sum(prod.values * w)
    rhs = np.sum(sample(f, grid).values * sample(g, grid).values * w)
    return complex(lhs), complex(rhs), float(abs(lhs - rhs))


class BlowupError(ArithmeticError):
    pass


def _poly_degree(expr: FunctionExpr) -> int | None:
    """Total degree when expr is a pure polynomial, else None."""
    deg = 0
    for t in expr.terms:
        if t.width is not None or t.freq is not None:
            return None
        deg = max(deg, max((sum(k) for k, _ in t.poly), default=0))
    return deg


def _spectral_derivative(values: np.ndarray, grid: GridSpec, axis: int) -> np.ndarray:
    """Periodic spectral derivative, dealiased with the 2/3 rule (the mask
    stabilizes RK4 advection against corner modes the field never occupies)."""
    n = grid.samples[axis]
    N = n - 1
    L = 2 * grid.half_widths[axis]
    k = 2 * np.pi * np.fft.fftfreq(N, d=L / N)
    mult = 1j * k
    mult[np.abs(k) > (2.0 / 3.0) * np.max(np.abs(k))] = 0.0
    core = values[:-1, :-1]
    shape = [1, 1]
    shape[axis] = N
    dcore = np.fft.ifftn(np.fft.fftn(core, axes=(axis,)) * mult.reshape(shape), axes=(axis,))
    out = np.empty_like(values, dtype=complex)
    out[:-1, :-1] = dcore
    out[-1, :-1] = dcore[0, :]
    out[:-1, -1] = dcore[:, 0]
    out[-1, -1] = dcore[0, 0]
    return out


def evolve(
    f0: FunctionExpr | SampledField,
    H: FunctionExpr,
    hbar: float,
    prefactor: complex,
    t_grid: np.ndarray,
    grid: GridSpec,
    lam: float | None = None,
    halve_for_error: bool = True,
):
    """Heisenberg evolution df/dt = prefactor * (f*H - H*f) by RK4 on the field.

    For polynomial H of degree <= 2 the star commutator equals its truncated
    series 2*i*lam*{f, H} identically, so the right-hand side is evaluated
    that way (spectral derivatives of the field); other decaying H go through
    the Fourier-mode product.  Returns (fields at the t_grid nodes,
    step-halving error).  Raises BlowupError when the sup norm grows by 10x.
    """
    lam = 2.0 * hbar if lam is None else lam
    t_grid = np.asarray(t_grid, dtype=float)
    deg = _poly_degree(H)
    if deg is not None and deg <= 2:
        Hq = sample(H.derivative(1), grid).values
        Hp = sample(H.derivative(0), grid).values

        def rhs(fv):
            fp = _spectral_derivative(fv, grid, 0)
            fq = _spectral_derivative(fv, grid, 1)
            return prefactor * (2j * lam) * (fp * Hq - fq * Hp)

    else:
        Hf = sample(H, grid) if isinstance(H, FunctionExpr) else H

        def rhs(fv):
            a, _ = star_field_flat(SampledField(grid, fv), Hf, grid, lam)
            b, _ = star_field_flat(Hf, SampledField(grid, fv), grid, lam)
            return prefactor * (a.values - b.values)

    def run(substeps: int):
        fv = (sample(f0, grid) if isinstance(f0, FunctionExpr) else f0).values.astype(complex)
        out = [fv.copy()]
        norm0 = np.max(np.abs(fv)) + 1e-300
        for i in range(len(t_grid) - 1):
            dt = (t_grid[i + 1] - t_grid[i]) / substeps
            for _ in range(substeps):
                k1 = rhs(fv)
                k2 = rhs(fv + 0.5 * dt * k1)
                k3 = rhs(fv + 0.5 * dt * k2)
                k4 = rhs(fv + dt * k3)
                fv = fv + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            if np.max(np.abs(fv)) > 10 * norm0:
                raise BlowupError(f"field norm grew by more than 10x at t={t_grid[i+1]}")
            out.append(fv.copy())
        return out

    traj = run(1)
    err = 0.0
    if halve_for_error:
        traj2 = run(2)
        err = float(max(np.max(np.abs(a - b)) for a, b in zip(traj, traj2)))
    return [SampledField(grid, v) for v in traj], err
