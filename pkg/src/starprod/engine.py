"""Star-product backends for every catalog model.

All flat backends evaluate one oscillatory kernel family

    (f * g)(m) = (2 pi |lam|)^{-2r} int f(m+a) g(m+b)
                 exp[(i/lam) sum_k (a1_k b2_k - a2_k b1_k)] da db

over the leaf through m (r Darboux blocks), with the normalization fixed
analytically by 1 * 1 = 1.  Per-model kernel parameter:

    moyal                 lam = 2*hbar      prefactor (4 pi hbar)^-2
    heisenberg, leaf z    lam = z*hbar      prefactor (2 pi |z| hbar)^-2
    constant Poisson      lam = hbar        per Darboux block
    epsilon-twisted pair  lam = -hbar       extra phase -eps*t*v/hbar
    torus (cover limit)   lam = -hbar       realized as the exact Fourier algebra

The quadrature path is a tensor trapezoid rule obeying the oscillation
policy; pure plane waves bypass it through the exact Fresnel closed form;
field outputs use the exact Fourier-mode form of the same kernel.  Every
quadrature result carries |full - half resolution| as its error estimate.
"""
from __future__ import annotations

import numpy as np

from .exprs import FunctionExpr, eval_expr
from .grids import GridSpec, SampledField, sample
from .haar import HaarSpec, haar_nodes
from .models import PoissonModel
from .quad import NonDecayingError, QuadratureSpec, StarResult, decay_radius
from .quat import rotation_matrix

__all__ = [
    "star_zero",
    "star_moyal",
    "star_heisenberg",
    "star_constant",
    "star_good",
    "star_torus",
    "star_su2",
    "star_point",
    "normalization_constant",
    "flat_star_values",
    "plane_wave_phase",
    "star_field_flat",
    "flat_lambda",
    "LeafCollapseError",
    "NormalizationError",
    "darboux_leaf_basis",
    "torus_modes",
]

Z_MIN = 1e-8
COND_MIN = 1e-6


class LeafCollapseError(ValueError):
    """|z| too small for the z != 0 branch; caller should use the classical branch."""


class NormalizationError(ArithmeticError):
    """|int exp(iS/hbar)| below threshold; normalization is ill-conditioned."""


def flat_lambda(model: PoissonModel, hbar: float, z: float = 1.0) -> float:
    """Signed kernel parameter of the model's flat product."""
    if model.variant == "symplectic-r2":
        return 2.0 * hbar
    if model.variant == "heisenberg-dual":
        return z * hbar
    if model.variant == "constant":
        return hbar
    if model.variant == "torus2":
        return -hbar
    raise ValueError(f"{model.variant!r} has no flat kernel")


# ---------------------------------------------------------------------
# pointwise quadrature of the 2D flat kernel
# ---------------------------------------------------------------------


def _flat_quad_batch(f, g, points, lam, quad: QuadratureSpec, tv_phase: float = 0.0):
    """Separated-contraction quadrature at many points; returns (values, errors).

    `tv_phase` multiplies in exp(i*tv_phase*t*v), coupling f's second offset
    with g's second offset (the epsilon-twisted kernel needs it).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))

    def run(idx):
        a = quad.axis()[idx]
        h = a[1] - a[0]
        ww = np.full(len(a), h)
        ww[0] = ww[-1] = h / 2
        uu, vv = np.meshgrid(a, a, indexing="ij")
        offs = np.stack([uu, vv], axis=-1)  # (n, n, 2)
        fvals = eval_expr(f, pts[:, None, None, :] + offs[None])  # (M, u, v)
        gvals = eval_expr(g, pts[:, None, None, :] + offs[None])  # (M, s, t)
        k_ut = np.exp(1j * np.outer(a, a) / lam)
        k_vs = np.exp(-1j * np.outer(a, a) / lam)
        A = np.einsum("muv,ut->mvt", fvals * ww[None, :, None], k_ut)
        B = np.einsum("vs,mst->mvt", k_vs, gvals * ww[None, :, None])
        core = A * B
        if tv_phase != 0.0:
            core = core * np.exp(1j * tv_phase * np.outer(a, a))[None]
        total = np.einsum("mvt,v,t->m", core, ww, ww)
        return total / (2 * np.pi * abs(lam)) ** 2

    full = run(np.arange(quad.samples))
    half = run(quad.coarse_indices())
    return full, np.abs(full - half)


def flat_star_values(f, g, points, lam, quad: QuadratureSpec, tv_phase: float = 0.0):
    """Quadrature values of the 2D flat product at arbitrary points."""
    if not (f.is_decaying() and g.is_decaying()):
        raise NonDecayingError("quadrature path requires Gaussian-decaying factors")
    return _flat_quad_batch(f, g, points, lam, quad, tv_phase)


def plane_wave_phase(lam: float, kf, kg) -> complex:
    """Exact kernel action on plane waves: the product picks up
    exp(-i*lam*(kf_1*kg_2 - kf_2*kg_1))."""
    return complex(np.exp(-1j * lam * (kf[0] * kg[1] - kf[1] * kg[0])))


def _plane_wave_closed_form(f: FunctionExpr, g: FunctionExpr, m, lam: float) -> complex:
    tf, tg = f.terms[0], g.terms[0]
    af = tf.poly_dict[tuple([0] * f.dim)]
    ag = tg.poly_dict[tuple([0] * g.dim)]
    kf = np.asarray(tf.freq)
    kg = np.asarray(tg.freq)
    m = np.asarray(m, dtype=float)
    return af * ag * plane_wave_phase(lam, kf, kg) * np.exp(1j * (kf + kg) @ m)


def _auto_quad(f, g, lam, quad: QuadratureSpec | None, min_samples: int = 33) -> QuadratureSpec:
    if quad is not None:
        return quad
    R = max(decay_radius(f), decay_radius(g))
    return QuadratureSpec.auto(R, lam, min_samples=min_samples)


# ---------------------------------------------------------------------
# higher-rank flat kernel (constant Poisson on R^d)
# ---------------------------------------------------------------------


def darboux_leaf_basis(P: np.ndarray):
    """Columns spanning range(P) with pairing e_i^T P e_j = standard J blocks.

    Returns (basis matrix of shape (d, 2r), r).
    """
    from scipy.linalg import schur

    P = np.asarray(P, dtype=float)
    T, U = schur(P)
    cols = []
    d = P.shape[0]
    j = 0
    while j < d:
        if j + 1 < d and abs(T[j, j + 1]) > 1e-12:
            sig = T[j, j + 1]
            a, b = U[:, j], U[:, j + 1]
            if sig < 0:
                a, b, sig = b, a, -sig
            s = np.sqrt(sig)
            cols.extend([a / s, b / s])  # now e1^T P e2 = sig/ s^2 = 1
            j += 2
        else:
            j += 1
    if not cols:
        return np.zeros((d, 0)), 0
    B = np.stack(cols, axis=1)
    return B, B.shape[1] // 2


def _const_quad_point(f, g, m, B, r, lam, quad: QuadratureSpec):
    """Rank-r blocked quadrature via kron'd kernels; O(n^{3r})."""

    def run(idx):
        a = quad.axis()[idx]
        h = a[1] - a[0]
        ww = np.full(len(a), h)
        ww[0] = ww[-1] = h / 2
        n = len(a)
        mesh = np.meshgrid(*([a] * (2 * r)), indexing="ij")
        coords = np.stack(mesh, axis=-1)  # (n,)*2r + (2r,)
        pts = np.asarray(m, dtype=float) + coords @ B.T
        F = eval_expr(f, pts)
        G = eval_expr(g, pts)
        wt = ww.copy()
        k1 = np.exp(1j * np.outer(a, a) / lam)  # (u_k, t_k)
        k2 = np.exp(-1j * np.outer(a, a) / lam)  # (v_k, s_k)
        # fold weights into F and G (all axes)
        for ax in range(2 * r):
            shape = [1] * (2 * r)
            shape[ax] = n
            F = F * wt.reshape(shape)
            G = G * wt.reshape(shape)
        # matrixize: F[(u-axes),(v-axes)], G[(s-axes),(t-axes)]
        u_axes = list(range(0, 2 * r, 2))
        v_axes = list(range(1, 2 * r, 2))
        Fm = np.transpose(F, u_axes + v_axes).reshape(n**r, n**r)
        Gm = np.transpose(G, u_axes + v_axes).reshape(n**r, n**r)  # (s..., t...)
        K1 = k1
        K2 = k2
        for _ in range(r - 1):
            K1 = np.kron(K1, k1)
            K2 = np.kron(K2, k2)
        # sum_{U,V,S,T} F[U,V] K1[U,T] K2[V,S] G[S,T]
        A = Fm.T @ K1  # (V, T)
        Bmat = K2 @ Gm  # (V, T)
        total = np.sum(A * Bmat)
        return total / (2 * np.pi * abs(lam)) ** (2 * r)

    full = run(np.arange(quad.samples))
    half = run(quad.coarse_indices())
    return full, abs(full - half)


# ---------------------------------------------------------------------
# backends
# ---------------------------------------------------------------------


def star_zero(f: FunctionExpr, g: FunctionExpr, m) -> complex:
    """Zero Poisson structure: the product is pointwise."""
    return complex(eval_expr(f, m) * eval_expr(g, m))


def star_moyal(f, g, m, hbar: float, quad: QuadratureSpec | None = None) -> StarResult:
    """Integral-form flat product on symplectic R^2, kernel parameter 2*hbar.

    Plane-wave pairs are routed to the exact Fresnel closed form; everything
    else goes through policy-checked quadrature.
    """
    if hbar == 0:
        return StarResult(star_zero(f, g, m), 1.0, 0.0, "pointwise")
    lam = 2.0 * hbar
    norm = (4 * np.pi * hbar) ** 2
    if f.is_plane_wave() and g.is_plane_wave():
        return StarResult(_plane_wave_closed_form(f, g, m, lam), norm, 0.0, "closed-form")
    quad = _auto_quad(f, g, lam, quad)
    vals, errs = flat_star_values(f, g, np.atleast_2d(m), lam, quad)
    return StarResult(complex(vals[0]), norm, float(errs[0]))


def star_heisenberg(f, g, m, hbar: float, quad: QuadratureSpec | None = None) -> StarResult:
    """Product on the Heisenberg dual at m = (x, y, z).

    z = 0 (or hbar = 0) is the pointwise branch; otherwise the leaf kernel
    at parameter z*hbar.  Only the restriction of f, g to the leaf enters.
    """
    m = np.asarray(m, dtype=float)
    z = m[2]
    if z == 0 or hbar == 0:
        return StarResult(star_zero(f, g, m), 1.0, 0.0, "pointwise")
    if abs(z) < Z_MIN:
        raise LeafCollapseError(f"|z| = {abs(z)} below threshold; use the classical branch")
    lam = z * hbar
    norm = (2 * np.pi * abs(z) * hbar) ** 2
    f2 = f.restrict_axes([2], [z])
    g2 = g.restrict_axes([2], [z])
    if f2.is_plane_wave() and g2.is_plane_wave():
        return StarResult(_plane_wave_closed_form(f2, g2, m[:2], lam), norm, 0.0, "closed-form")
    quad = _auto_quad(f2, g2, lam, quad)
    vals, errs = flat_star_values(f2, g2, np.atleast_2d(m[:2]), lam, quad)
    return StarResult(complex(vals[0]), norm, float(errs[0]))


def star_constant(f, g, m, hbar: float, model: PoissonModel, quad: QuadratureSpec | None = None) -> StarResult:
    """Constant-Poisson product: leaf x leaf quadrature over range(Pi)."""
    if hbar == 0:
        return StarResult(star_zero(f, g, m), 1.0, 0.0, "pointwise")
    P = model.bivector_matrix()
    B, r = darboux_leaf_basis(P)
    if r == 0:
        return StarResult(star_zero(f, g, m), 1.0, 0.0, "pointwise")
    lam = hbar
    norm = (2 * np.pi * hbar) ** (2 * r)
    if not (f.is_decaying() and g.is_decaying()):
        raise NonDecayingError("quadrature path requires Gaussian-decaying factors")
    if quad is None:
        R = max(decay_radius(f), decay_radius(g))
        quad = QuadratureSpec.auto(R, lam, min_samples=33 if r == 1 else 17)
    if r == 1:
        m = np.asarray(m, dtype=float)

        def on_leaf(expr):
            return _pullback(expr, m, B)

        vals, errs = _flat_quad_batch(on_leaf(f), on_leaf(g), np.zeros((1, 2)), lam, quad)
        return StarResult(complex(vals[0]), norm, float(errs[0]))
    val, err = _const_quad_point(f, g, m, B, r, lam, quad)
    return StarResult(complex(val), norm, float(err))


def _pullback(expr: FunctionExpr, m, B) -> FunctionExpr:
    """Restrict a flat expression to the affine leaf m + B*alpha as an expression
    in the leaf coordinates alpha (only valid for 2-column B)."""
    from .exprs import GaussTerm, FunctionExpr as FE

    terms = []
    for t in expr.terms:
        # substitute x = m + B a into each factor
        c = np.asarray(t.center)
        delta = np.asarray(m, dtype=float) - c
        w = t.width_matrix()
        if w is None:
            raise NonDecayingError("quadrature path requires Gaussian-decaying factors")
        wB = B.T @ w @ B
        lin = B.T @ w @ delta  # gradient of the cross term
        const = np.exp(-0.5 * delta @ w @ delta)
        # exp(-(a + wB^-1 lin)^T wB (a + ...)/2) completion
        mu = -np.linalg.solve(wB, lin)
        const = const * np.exp(0.5 * mu @ wB @ mu - 0.0)
        # recompute exactly: -(1/2)(delta + B a)^T w (delta + B a)
        #   = -(1/2) a^T wB a - a^T (B^T w delta) - (1/2) delta^T w delta
        #   = -(1/2)(a - mu)^T wB (a - mu) + (1/2) mu^T wB mu - (1/2) delta^T w delta
        freq = None
        phase = 1.0 + 0j
        if t.freq is not None:
            kf = np.asarray(t.freq)
            freq = B.T @ kf
            phase = np.exp(1j * kf @ np.asarray(m, dtype=float) - 0j)
            # e^{i k.(m + Ba)} = e^{ik.m} e^{i(B^T k).a}
        # polynomial in (x - c) = (delta + B a): substitute coordinates,
        # then re-express in y = a - mu (the new gaussian center)
        poly = _poly_substitute_affine(t.poly_dict, delta, B)
        from .exprs import _poly_shift

        poly = _poly_shift(poly, mu) if np.any(mu != 0) else poly
        scale = const * phase
        poly = {k: v * scale for k, v in poly.items()}
        terms.append(GaussTerm.make(poly, mu, wB, freq))
    return FE("gaussian-poly", B.shape[1], terms=tuple(terms))


def _poly_substitute_affine(poly: dict, delta, B) -> dict:
    """p(x) with x_j -> delta_j + sum_k B[j,k] a_k, returned as poly in a."""
    d_in, d_out = B.shape
    out = {tuple([0] * d_out): 0.0}
    base = {tuple([0] * d_out): 1.0}
    # linear forms for each input coordinate
    lin = []
    for j in range(d_in):
        lj = {tuple([0] * d_out): complex(delta[j])}
        for k in range(d_out):
            if B[j, k] != 0:
                idx = [0] * d_out
                idx[k] = 1
                lj[tuple(idx)] = complex(B[j, k])
        lin.append(lj)
    from .exprs import _poly_mul

    for mono, coef in poly.items():
        term = {tuple([0] * d_out): complex(coef)}
        for j, e in enumerate(mono):
            for _ in range(e):
                term = _poly_mul(term, lin[j])
        for k, v in term.items():
            out[k] = out.get(k, 0.0) + v
    return {k: v for k, v in out.items() if v != 0}


def star_good(f, g, m, hbar: float, eps: float, quad: QuadratureSpec | None = None) -> StarResult:
    """Pair-groupoid product with the epsilon-twisted cocycle.

    Kernel parameter -hbar plus the coupling exp(-i*eps*(y''-y)(y'-y)/hbar);
    the normalization stays (2 pi hbar)^2 for every eps (the y^2 counterterm
    is already absorbed).
    """
    if hbar == 0:
        return StarResult(star_zero(f, g, m), 1.0, 0.0, "pointwise")
    lam = -hbar
    norm = (2 * np.pi * hbar) ** 2
    tv = -eps / hbar
    if eps == 0 and f.is_plane_wave() and g.is_plane_wave():
        return StarResult(_plane_wave_closed_form(f, g, m, lam), norm, 0.0, "closed-form")
    quad = _auto_quad(f, g, lam, quad)
    vals, errs = flat_star_values(f, g, np.atleast_2d(m), lam, quad, tv_phase=tv)
    return StarResult(complex(vals[0]), norm, float(errs[0]))


# ---------------------------------------------------------------------
# noncommutative torus: exact Fourier algebra
# ---------------------------------------------------------------------


def torus_modes(f: FunctionExpr) -> dict:
    if f.kind != "torus-harmonic":
        raise TypeError("torus backend needs torus-harmonic expressions")
    return dict(f.modes)


def star_torus(f: FunctionExpr, g: FunctionExpr, hbar: float) -> FunctionExpr:
    """Twisted product on Fourier modes: e_m * e_n = e^{i hbar (m1 n2 - m2 n1)} e_{m+n}.

    This is the exact algebra determined by the universal-cover kernel at
    parameter -hbar (validated against that integral in the test suite); it
    is bilinear and needs no quadrature.
    """
    out: dict = {}
    for mm, cm in torus_modes(f).items():
        for nn, cn in torus_modes(g).items():
            key = (mm[0] + nn[0], mm[1] + nn[1])
            phase = np.exp(1j * hbar * (mm[0] * nn[1] - mm[1] * nn[0]))
            out[key] = out.get(key, 0.0) + cm * cn * phase
    return FunctionExpr("torus-harmonic", 2, modes=tuple(sorted((k, v) for k, v in out.items() if v != 0)))


# ---------------------------------------------------------------------
# SU(2) coadjoint product
# ---------------------------------------------------------------------


def _su2_phase_parts(q: np.ndarray, X: np.ndarray):
    """Per-node pieces of S(g_i, g_j, X) = c_i(1-qj0) + c_j(qi0-1) + d_i.qvec_j."""
    c = q[:, 1:] @ X
    d = np.cross(q[:, 1:], np.broadcast_to(X, (q.shape[0], 3)))
    return c, d


def _su2_double_sum(fvals, kvals, q, w, X, hbar, chunk: int = 512):
    """(sum_ij w_i w_j fvals_i kvals_j e^{iS_ij/hbar}, same with f=k=1)."""
    c, d = _su2_phase_parts(q, X)
    q0 = q[:, 0]
    wf = w * fvals
    wk = w * kvals
    num = 0.0 + 0j
    den = 0.0 + 0j
    n = len(w)
    for j0 in range(0, n, chunk):
        sl = slice(j0, min(j0 + chunk, n))
        S = (
            c[:, None] * (1.0 - q0[None, sl])
            + (q0[:, None] - 1.0) * c[None, sl]
            + d @ q[sl, 1:].T
        )
        E = np.exp(1j * S / hbar)
        num += (wf @ E) @ wk[sl]
        den += (w @ E) @ w[sl]
    return num, den


def star_su2(f, k, X, hbar: float, haar: HaarSpec, cond_min: float = COND_MIN) -> StarResult:
    """Double Haar integral over SU(2) x SU(2) with the antisymmetrized
    half-Killing cocycle; C_{X,hbar} is the reciprocal of the f=k=1 integral."""
    X = np.asarray(X, dtype=float)
    if hbar == 0 or np.allclose(X, 0.0):
        val = complex(eval_expr(f, X) * eval_expr(k, X))
        return StarResult(val, 1.0, 0.0, "pointwise")

    def run(spec):
        q, w = haar_nodes(spec)
        rot = rotation_matrix(q)
        pts = rot @ X
        fv = eval_expr(f, pts)
        kv = eval_expr(k, pts)
        num, den = _su2_double_sum(fv, kv, q, w, X, hbar)
        return num, den

    num, den = run(haar)
    if abs(den) < cond_min:
        raise NormalizationError(f"|int exp(iS/hbar)| = {abs(den):.3e} below threshold")
    num2, den2 = run(haar.halved())
    val = num / den
    val2 = num2 / den2 if abs(den2) > cond_min / 10 else val
    return StarResult(complex(val), complex(1.0 / den), abs(val - val2), "haar")


def su2_normalization(X, hbar: float, haar: HaarSpec):
    """(C_{X,hbar}, |C^{-1}|) for conditioning reports; C_{0,hbar} = 1."""
    X = np.asarray(X, dtype=float)
    if np.allclose(X, 0.0):
        return 1.0 + 0j, 1.0
    q, w = haar_nodes(haar)
    ones = np.ones(len(w))
    num, den = _su2_double_sum(ones, ones, q, w, X, hbar)
    if abs(den) < COND_MIN:
        raise NormalizationError(f"|int exp(iS/hbar)| = {abs(den):.3e} below threshold")
    return 1.0 / den, abs(den)


def su2_star_values(f, k, bases, hbar: float, haar: HaarSpec, chunk: int = 64):
    """(f*k)(Y) for a batch of base points Y (used by the associator)."""
    q, w = haar_nodes(haar)
    rot = rotation_matrix(q)
    out = np.empty(len(bases), dtype=complex)
    for i0 in range(0, len(bases), chunk):
        for idx in range(i0, min(i0 + chunk, len(bases))):
            Y = np.asarray(bases[idx], dtype=float)
            pts = rot @ Y
            fv = eval_expr(f, pts)
            kv = eval_expr(k, pts)
            num, den = _su2_double_sum(fv, kv, q, w, Y, hbar)
            out[idx] = num / den
    return out


# ---------------------------------------------------------------------
# field outputs: exact Fourier-mode quadrature of the flat kernel
# ---------------------------------------------------------------------


def _as_field(fn, grid: GridSpec) -> SampledField:
    if isinstance(fn, SampledField):
        if fn.grid != grid:
            raise ValueError("field grid mismatch")
        return fn
    return sample(fn, grid)


def _twisted_mode_product(fh_sh, gh_sh, kvals, lam):
    """Doubled-lattice mode array of the twisted convolution (shifted order)."""
    N = fh_sh.shape[0]
    if N % 2 != 0:
        raise ValueError("mode path needs an odd grid sample count (even mode count)")
    out = np.zeros((2 * N, 2 * N), dtype=complex)
    E = np.exp(1j * lam * np.outer(kvals, kvals))  # E[a, b] = exp(i lam k_a k_b)
    for p1 in range(N):
        row = fh_sh[p1]
        row_phase = np.conj(E[p1])[None, :]  # exp(-i lam kf1 kg2) along axis 1
        for p2 in range(N):
            amp = row[p2]
            if amp == 0:
                continue
            ph = E[p2][:, None] * row_phase  # exp(+i lam kf2 kg1) along axis 0
            out[p1 : p1 + N, p2 : p2 + N] += amp * (gh_sh * ph)
    return out


def star_field_flat(f, g, grid: GridSpec, lam: float, band_fraction: float = 1.0):
    """(f*g) sampled on the grid via the exact plane-wave rule on DFT modes.

    Equivalent to the oscillatory integral up to box periodization; the
    error estimate is |full - half band limit| per node.
    """
    F = _as_field(f, grid).values
    G = _as_field(g, grid).values
    n = grid.samples[0]
    if grid.samples != (n, n) or len(set(grid.half_widths)) != 1:
        raise ValueError("mode path needs a square grid")
    N = n - 1
    L = 2 * grid.half_widths[0]
    fh = np.fft.fftshift(np.fft.fft2(F[:-1, :-1])) / N**2
    gh = np.fft.fftshift(np.fft.fft2(G[:-1, :-1])) / N**2
    kvals = 2 * np.pi * (np.arange(N) - N // 2) / L

    def run(fh_s, gh_s):
        out_sh = _twisted_mode_product(fh_s, gh_s, kvals, lam)
        # evaluate on the doubled lattice, subsample even nodes
        N2 = 2 * N
        vals = np.fft.ifft2(np.fft.ifftshift(out_sh)) * N2**2
        # the doubled lattice holds modes m in [-N, N); physical nodes at
        # spacing h/2 over the same box; original nodes are the even ones
        sub = vals[::2, ::2]
        full = np.empty((n, n), dtype=complex)
        full[:-1, :-1] = sub
        full[-1, :-1] = sub[0, :]
        full[:-1, -1] = sub[:, 0]
        full[-1, -1] = sub[0, 0]
        return full

    full = run(fh, gh)
    cut = N // 4
    mask = np.zeros((N, N))
    lo, hi = N // 2 - cut, N // 2 + cut
    mask[lo:hi, lo:hi] = 1.0
    half = run(fh * mask, gh * mask)
    err = np.abs(full - half)
    return SampledField(grid, full), err


# ---------------------------------------------------------------------
# dispatcher and normalization report
# ---------------------------------------------------------------------


def star_point(model: PoissonModel, f, g, m, hbar: float, quad=None, eps: float = 0.0, haar: HaarSpec | None = None) -> StarResult:
    """Evaluate (f*g)(m) on the requested model."""
    if model.variant == "zero":
        return StarResult(star_zero(f, g, m), 1.0, 0.0, "pointwise")
    if model.variant == "symplectic-r2":
        if eps != 0.0:
            return star_good(f, g, m, hbar, eps, quad)
        return star_moyal(f, g, m, hbar, quad)
    if model.variant == "heisenberg-dual":
        return star_heisenberg(f, g, m, hbar, quad)
    if model.variant == "constant":
        return star_constant(f, g, m, hbar, model, quad)
    if model.variant == "torus2":
        prod = star_torus(f, g, hbar)
        return StarResult(eval_expr(prod, np.asarray(m, dtype=float)), (2 * np.pi * hbar) ** 2, 0.0, "fourier")
    if model.variant == "su2-dual":
        return star_su2(f, g, m, hbar, haar or HaarSpec("su2-euler-grid", (12, 12, 12)))
    raise ValueError(model.variant)


def normalization_constant(model: PoissonModel, m, hbar: float, quad=None, haar: HaarSpec | None = None):
    """C_m with its method tag.

    Analytic for the flat models (the Fresnel integral of the kernel),
    numeric on su(2) where it is the reciprocal of the phase integral.
    """
    if model.variant == "zero":
        return 1.0 + 0j, "analytic"
    if model.variant == "symplectic-r2":
        return complex((4 * np.pi * hbar) ** 2), "analytic"
    if model.variant == "torus2":
        return complex((2 * np.pi * hbar) ** 2), "analytic"
    if model.variant == "heisenberg-dual":
        z = np.asarray(m, dtype=float)[2]
        if z == 0:
            return 1.0 + 0j, "analytic"
        return complex((2 * np.pi * z * hbar) ** 2), "analytic"
    if model.variant == "constant":
        _, r = darboux_leaf_basis(model.bivector_matrix())
        return complex((2 * np.pi * hbar) ** (2 * r)), "analytic"
    if model.variant == "su2-dual":
        C, _ = su2_normalization(m, hbar, haar or HaarSpec("su2-euler-grid", (12, 12, 12)))
        return complex(C), "numeric"
    raise ValueError(model.variant)
