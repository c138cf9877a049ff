"""Closed-form test functions on phase space.

Every integrand admitted by the engine is built from a small catalog:
Gaussian x polynomial x plane wave on R^n, integer-frequency harmonics on
the 2-torus, and polynomials restricted to adjoint orbits in R^3.  The
catalog is closed under sums, products, derivatives and multiplication by
coordinates, which is exactly what the Poisson-bracket and oracle code
needs, and every member has absolutely convergent Gaussian integrals
whenever a width matrix is present.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "FunctionExpr",
    "GaussTerm",
    "gaussian_poly",
    "plane_wave",
    "constant",
    "coordinate",
    "monomial",
    "torus_harmonic",
    "orbit_polynomial",
    "eval_expr",
]

ORBIT_BAND_LIMIT = 6

Poly = Mapping[tuple, complex]


def _poly_clean(p: Mapping) -> dict:
    return {tuple(int(i) for i in k): complex(v) for k, v in p.items() if v != 0}


def _poly_add(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0.0) + v
        if out[k] == 0:
            del out[k]
    return out


def _poly_mul(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(i + j for i, j in zip(ka, kb))
            out[k] = out.get(k, 0.0) + va * vb
    return {k: v for k, v in out.items() if v != 0}


def _poly_scale(a: Mapping, c: complex) -> dict:
    return {k: c * v for k, v in a.items()} if c != 0 else {}


def _poly_diff(a: Mapping, axis: int) -> dict:
    out: dict = {}
    for k, v in a.items():
        if k[axis] == 0:
            continue
        kk = list(k)
        kk[axis] -= 1
        out[tuple(kk)] = out.get(tuple(kk), 0.0) + v * k[axis]
    return out


def _poly_shift(a: Mapping, delta: np.ndarray) -> dict:
    """Rewrite a polynomial in y = x - c as a polynomial in x - (c + delta)...

    i.e. substitute y -> y' + delta monomial by monomial (binomial expansion).
    """
    dim = len(delta)
    out: dict = {tuple([0] * dim): 0.0}
    from math import comb

    for k, v in a.items():
        # expand prod_j (y'_j + delta_j)^{k_j}
        expansions = []
        for j in range(dim):
            terms = [(e, comb(k[j], e) * delta[j] ** (k[j] - e)) for e in range(k[j] + 1)]
            expansions.append(terms)
        stack = [((), complex(v))]
        for terms in expansions:
            stack = [(idx + (e,), coef * w) for idx, coef in stack for e, w in terms]
        for idx, coef in stack:
            out[idx] = out.get(idx, 0.0) + coef
    return {k: v for k, v in out.items() if v != 0}


def _poly_eval(a: Mapping, y: np.ndarray) -> np.ndarray:
    """Evaluate at points y of shape (..., dim)."""
    out = np.zeros(y.shape[:-1], dtype=complex)
    for k, v in a.items():
        term = np.full(y.shape[:-1], v, dtype=complex)
        for j, e in enumerate(k):
            if e:
                term = term * y[..., j] ** e
        out = out + term
    return out


@dataclass(frozen=True)
class GaussTerm:
    """One term poly(x - center) * exp(-(x-c)^T W (x-c)/2) * exp(i freq.x)."""

    poly: tuple  # sorted tuple of (multi-index, coeff)
    center: tuple
    width: tuple | None  # row tuples of the SPD matrix, or None (no decay)
    freq: tuple | None

    @staticmethod
    def make(poly: Mapping, center, width, freq) -> "GaussTerm":
        poly = _poly_clean(poly)
        return GaussTerm(
            poly=tuple(sorted(poly.items(), key=lambda kv: kv[0])),
            center=tuple(float(c) for c in center),
            width=None if width is None else tuple(tuple(float(x) for x in row) for row in width),
            freq=None if freq is None else tuple(float(x) for x in freq),
        )

    @property
    def poly_dict(self) -> dict:
        return dict(self.poly)

    def width_matrix(self) -> np.ndarray | None:
        return None if self.width is None else np.array(self.width, dtype=float)


class DimensionMismatchError(ValueError):
    pass


class ExprKindError(TypeError):
    pass


def _check_spd(w: np.ndarray) -> None:
    if not np.allclose(w, w.T, atol=1e-12):
        raise ValueError("width matrix must be symmetric")
    eigs = np.linalg.eigvalsh(0.5 * (w + w.T))
    if np.min(eigs) <= 0:
        raise ValueError("width matrix must be positive-definite")


@dataclass(frozen=True)
class FunctionExpr:
    """A closed-form test function; the only integrands the engine accepts."""

    kind: str
    dim: int
    terms: tuple = ()  # GaussTerm tuple for the gaussian-poly family
    modes: tuple = ()  # ((m1, m2), coeff) pairs for torus harmonics

    # -- constructors ------------------------------------------------

    def __post_init__(self):
        if self.kind in ("gaussian-poly", "plane-wave", "constant", "orbit-polynomial"):
            for t in self.terms:
                if len(t.center) != self.dim:
                    raise DimensionMismatchError("term dimension mismatch")
                if t.width is not None:
                    _check_spd(np.array(t.width))
            if self.kind == "orbit-polynomial":
                if self.dim != 3:
                    raise DimensionMismatchError("orbit polynomials live on R^3")
                deg = max((sum(k) for t in self.terms for k, _ in t.poly), default=0)
                if deg > ORBIT_BAND_LIMIT:
                    raise ValueError(f"orbit polynomial degree {deg} exceeds band limit {ORBIT_BAND_LIMIT}")
        elif self.kind == "torus-harmonic":
            if self.dim != 2:
                raise DimensionMismatchError("torus harmonics live on T^2")
            for (m1, m2), _ in self.modes:
                if int(m1) != m1 or int(m2) != m2:
                    raise ValueError("torus frequencies must be integers")
        else:
            raise ExprKindError(f"unknown expression kind {self.kind!r}")

    # -- evaluation --------------------------------------------------

    def __call__(self, x) -> np.ndarray:
        return eval_expr(self, x)

    # -- algebra -----------------------------------------------------

    def __add__(self, other: "FunctionExpr") -> "FunctionExpr":
        if isinstance(other, (int, float, complex)):
            other = constant(other, self.dim)
        if self.dim != other.dim:
            raise DimensionMismatchError("dimension mismatch in sum")
        if self.kind == "torus-harmonic" or other.kind == "torus-harmonic":
            if self.kind != other.kind:
                raise ExprKindError("cannot mix torus harmonics with flat expressions")
            out: dict = dict(self.modes)
            for m, c in other.modes:
                out[m] = out.get(m, 0.0) + c
            return FunctionExpr("torus-harmonic", 2, modes=tuple(sorted((m, v) for m, v in out.items() if v != 0)))
        kind = "orbit-polynomial" if self.kind == other.kind == "orbit-polynomial" else "gaussian-poly"
        return FunctionExpr(kind, self.dim, terms=self.terms + other.terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (other * (-1.0))

    def __mul__(self, other) -> "FunctionExpr":
        if isinstance(other, (int, float, complex)):
            if self.kind == "torus-harmonic":
                return FunctionExpr("torus-harmonic", 2, modes=tuple((m, c * other) for m, c in self.modes))
            terms = tuple(GaussTerm.make(_poly_scale(t.poly_dict, other), t.center, t.width, t.freq) for t in self.terms)
            return FunctionExpr(self.kind if self.kind == "orbit-polynomial" else "gaussian-poly", self.dim, terms=terms)
        if self.dim != other.dim:
            raise DimensionMismatchError("dimension mismatch in product")
        if self.kind == "torus-harmonic" and other.kind == "torus-harmonic":
            out: dict = {}
            for m, c in self.modes:
                for n, d in other.modes:
                    key = (m[0] + n[0], m[1] + n[1])
                    out[key] = out.get(key, 0.0) + c * d
            return FunctionExpr("torus-harmonic", 2, modes=tuple(sorted((m, v) for m, v in out.items() if v != 0)))
        if self.kind == "torus-harmonic" or other.kind == "torus-harmonic":
            raise ExprKindError("cannot mix torus harmonics with flat expressions")
        terms = tuple(_term_mul(a, b) for a in self.terms for b in other.terms)
        kind = "orbit-polynomial" if self.kind == other.kind == "orbit-polynomial" else "gaussian-poly"
        return FunctionExpr(kind, self.dim, terms=terms)

    __rmul__ = __mul__

    def derivative(self, axis: int) -> "FunctionExpr":
        """Closed-form partial derivative along a coordinate axis."""
        if self.kind == "torus-harmonic":
            return FunctionExpr(
                "torus-harmonic", 2,
                modes=tuple((m, 1j * m[axis] * c) for m, c in self.modes if m[axis] != 0),
            )
        out = []
        for t in self.terms:
            p = t.poly_dict
            # polynomial factor
            dp = _poly_diff(p, axis)
            if dp:
                out.append(GaussTerm.make(dp, t.center, t.width, t.freq))
            # gaussian factor contributes -(W (x-c))_axis
            if t.width is not None:
                w = t.width_matrix()
                lin: dict = {}
                for j in range(self.dim):
                    if w[axis, j] != 0:
                        idx = [0] * self.dim
                        idx[j] = 1
                        lin[tuple(idx)] = -w[axis, j]
                if lin:
                    out.append(GaussTerm.make(_poly_mul(p, lin), t.center, t.width, t.freq))
            # plane-wave factor contributes i*freq_axis
            if t.freq is not None and t.freq[axis] != 0:
                out.append(GaussTerm.make(_poly_scale(p, 1j * t.freq[axis]), t.center, t.width, t.freq))
        if not out:
            return constant(0.0, self.dim)
        kind = "orbit-polynomial" if self.kind == "orbit-polynomial" else "gaussian-poly"
        return FunctionExpr(kind, self.dim, terms=tuple(out))

    def conjugate(self) -> "FunctionExpr":
        if self.kind == "torus-harmonic":
            return FunctionExpr(
                "torus-harmonic", 2,
                modes=tuple(sorted(((-m[0], -m[1]), np.conj(c)) for m, c in self.modes)),
            )
        terms = tuple(
            GaussTerm.make(
                {k: np.conj(v) for k, v in t.poly},
                t.center, t.width,
                None if t.freq is None else tuple(-f for f in t.freq),
            )
            for t in self.terms
        )
        return FunctionExpr(self.kind, self.dim, terms=terms)

    def is_decaying(self) -> bool:
        """True when every term carries an SPD Gaussian width (integrable)."""
        if self.kind == "torus-harmonic":
            return True
        return all(t.width is not None for t in self.terms)

    def is_plane_wave(self) -> bool:
        """True for a single undamped plane wave c*exp(i k.x)."""
        if len(self.terms) != 1:
            return False
        t = self.terms[0]
        return t.width is None and t.freq is not None and list(t.poly_dict.keys()) == [tuple([0] * self.dim)]

    def restrict_axes(self, axes: Iterable[int], values: np.ndarray) -> "FunctionExpr":
        """Freeze the listed axes at given values, returning an expression in the rest."""
        axes = list(axes)
        keep = [j for j in range(self.dim) if j not in axes]
        out = []
        for t in self.terms:
            if t.width is not None:
                w = t.width_matrix()
                if np.any(w[np.ix_(axes, keep)] != 0):
                    raise ValueError("cannot restrict: width couples frozen and free axes")
            # evaluate the frozen part of every factor
            c = np.asarray(t.center)
            scale = 1.0 + 0j
            if t.width is not None:
                dv = np.asarray(values) - c[axes]
                scale *= np.exp(-0.5 * dv @ t.width_matrix()[np.ix_(axes, axes)] @ dv)
            if t.freq is not None:
                scale *= np.exp(1j * np.dot(np.asarray(t.freq)[axes], values))
            poly: dict = {}
            for k, v in t.poly:
                coef = v
                for a, val in zip(axes, np.asarray(values) - c[axes]):
                    coef *= val ** k[a]
                key = tuple(k[j] for j in keep)
                poly[key] = poly.get(key, 0.0) + coef
            out.append(GaussTerm.make(
                _poly_scale(poly, scale),
                c[keep],
                None if t.width is None else t.width_matrix()[np.ix_(keep, keep)],
                None if t.freq is None else np.asarray(t.freq)[keep],
            ))
        # merge like terms so perturbations vanishing on the slice drop out exactly
        merged: dict = {}
        for t in out:
            key = (t.center, t.width, t.freq)
            if key in merged:
                merged[key] = _poly_add(merged[key], t.poly_dict)
            else:
                merged[key] = t.poly_dict
        final = tuple(
            GaussTerm.make(p, k[0], k[1], k[2]) for k, p in merged.items() if _poly_clean(p)
        )
        return FunctionExpr("gaussian-poly", len(keep), terms=final)


def _term_mul(a: GaussTerm, b: GaussTerm) -> GaussTerm:
    dim = len(a.center)
    ca, cb = np.asarray(a.center), np.asarray(b.center)
    wa, wb = a.width_matrix(), b.width_matrix()
    if wa is None and wb is None:
        w, mu, k0 = None, ca, 1.0
        pb = _poly_shift(b.poly_dict, cb - ca) if np.any(ca != cb) else b.poly_dict
        pa = a.poly_dict
    else:
        w = (wa if wa is not None else 0) + (wb if wb is not None else 0)
        rhs = (wa @ ca if wa is not None else 0) + (wb @ cb if wb is not None else 0)
        mu = np.linalg.solve(w, rhs)
        expo = -0.5 * (
            (ca @ wa @ ca if wa is not None else 0.0)
            + (cb @ wb @ cb if wb is not None else 0.0)
            - mu @ w @ mu
        )
        k0 = np.exp(expo)
        pa = _poly_shift(a.poly_dict, mu - ca) if np.any(mu != ca) else a.poly_dict
        pb = _poly_shift(b.poly_dict, mu - cb) if np.any(mu != cb) else b.poly_dict
    fa = np.asarray(a.freq) if a.freq is not None else np.zeros(dim)
    fb = np.asarray(b.freq) if b.freq is not None else np.zeros(dim)
    f = fa + fb
    return GaussTerm.make(_poly_scale(_poly_mul(pa, pb), k0), mu, w, f if np.any(f != 0) else None)


# -- public constructors ---------------------------------------------


def gaussian_poly(dim: int, poly: Mapping, center=None, width=None, freq=None) -> FunctionExpr:
    """poly(x - center) * exp(-(x-c)^T W (x-c) / 2) * exp(i freq.x).

    `width` may be a scalar (isotropic), a matrix, or None for no decay.
    """
    center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
    if width is not None:
        width = np.asarray(width, dtype=float)
        if width.ndim == 0:
            width = float(width) * np.eye(dim)
    term = GaussTerm.make(poly, center, width, freq)
    return FunctionExpr("gaussian-poly", dim, terms=(term,))


def plane_wave(freq, dim: int | None = None, amplitude: complex = 1.0) -> FunctionExpr:
    freq = np.asarray(freq, dtype=float)
    dim = len(freq) if dim is None else dim
    term = GaussTerm.make({tuple([0] * dim): amplitude}, np.zeros(dim), None, freq)
    return FunctionExpr("plane-wave", dim, terms=(term,))


def constant(value: complex, dim: int) -> FunctionExpr:
    term = GaussTerm.make({tuple([0] * dim): value}, np.zeros(dim), None, None)
    return FunctionExpr("constant", dim, terms=(term,))


def coordinate(axis: int, dim: int) -> FunctionExpr:
    idx = [0] * dim
    idx[axis] = 1
    return monomial({tuple(idx): 1.0}, dim)


def monomial(poly: Mapping, dim: int) -> FunctionExpr:
    term = GaussTerm.make(poly, np.zeros(dim), None, None)
    return FunctionExpr("gaussian-poly", dim, terms=(term,))


def torus_harmonic(m1: int, m2: int, coeff: complex = 1.0) -> FunctionExpr:
    if int(m1) != m1 or int(m2) != m2:
        raise ValueError("torus frequencies must be integers")
    return FunctionExpr("torus-harmonic", 2, modes=(((int(m1), int(m2)), complex(coeff)),))


def orbit_polynomial(poly: Mapping) -> FunctionExpr:
    term = GaussTerm.make(poly, np.zeros(3), None, None)
    return FunctionExpr("orbit-polynomial", 3, terms=(term,))


def eval_expr(f: FunctionExpr, x) -> np.ndarray:
    """Exact closed-form evaluation at points of shape (..., dim)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 1
    if x.shape[-1] != f.dim:
        raise DimensionMismatchError(f"point dimension {x.shape[-1]} != expression dimension {f.dim}")
    pts = x[None, :] if scalar else x
    out = np.zeros(pts.shape[:-1], dtype=complex)
    if f.kind == "torus-harmonic":
        for (m1, m2), c in f.modes:
            out = out + c * np.exp(1j * (m1 * pts[..., 0] + m2 * pts[..., 1]))
    else:
        for t in f.terms:
            y = pts - np.asarray(t.center)
            val = _poly_eval(t.poly_dict, y)
            if t.width is not None:
                w = t.width_matrix()
                val = val * np.exp(-0.5 * np.einsum("...i,ij,...j->...", y, w, y))
            if t.freq is not None:
                val = val * np.exp(1j * pts @ np.asarray(t.freq))
            out = out + val
    return out[0] if scalar else out
