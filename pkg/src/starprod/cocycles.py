"""Groupoid 2-cocycles, the simplicial coboundary, and a finite-difference van Est map.

The catalog cocycles are normalized so that the van Est map returns the
model's Poisson bivector exactly (the scale various source formulas attach
to the same cocycle differs; the van Est normalization is the one every
downstream check relies on).  Concretely each catalog entry is, up to the
epsilon twist, the antisymmetrized coboundary of the model's half-pairing
1-cochain.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groupoids import (
    GroupoidElement,
    arrow,
    arrow_dim,
    compose,
    group_element,
    inverse,
    source,
    target,
)
from .models import PoissonModel
from . import quat

__all__ = [
    "Cocycle2",
    "cocycle_eval",
    "delta_coboundary",
    "delta_coboundary_1",
    "antisymmetrize",
    "van_est_2",
    "van_est_2_richardson",
    "catalog_cocycle",
    "StepCancellationError",
]


class StepCancellationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Cocycle2:
    """Real-valued function on composable pairs, tagged with its catalog form."""

    model: PoissonModel
    form: str  # triangle-area | good-epsilon | heisenberg | constant | su2-antisym | zero | antisymmetrized | raw
    params: tuple = ()
    base: object = None  # wrapped cocycle or callable for derived forms
    antisymmetric: bool = True

    def __call__(self, g2: GroupoidElement, g1: GroupoidElement) -> float:
        return cocycle_eval(self, g2, g1)


def _tri(g2: GroupoidElement, g1: GroupoidElement) -> float:
    a2 = group_element(g2)
    a1 = group_element(g1)
    return 0.5 * (a2[0] * a1[1] - a2[1] * a1[0])


def _good_h(g: GroupoidElement) -> float:
    # 1-cochain h(arrow) = y_target * y_source on the pair groupoid
    return float(target(g)[1] * source(g)[1])


def _heis(g2: GroupoidElement, g1: GroupoidElement) -> float:
    a2 = group_element(g2)
    a1 = group_element(g1)
    z = source(g1)[2]
    return z * (a2[0] * a1[1] - a1[0] * a2[1]) / 4.0


def _const(g2: GroupoidElement, g1: GroupoidElement) -> float:
    P = g1.model.bivector_matrix()
    v2 = group_element(g2)
    v1 = group_element(g1)
    return 0.5 * float(v2 @ P @ v1)


def _su2_alpha(g: GroupoidElement) -> float:
    # -tr(U(q) M(source)) = q_vec . source: half-Killing pairing
    return float(quat.pairing(group_element(g), source(g)))


def _su2(g2: GroupoidElement, g1: GroupoidElement) -> float:
    d = delta_coboundary_1(_su2_alpha, g2, g1)
    d_flip = delta_coboundary_1(_su2_alpha, inverse(g1), inverse(g2))
    return 0.5 * (d - d_flip)


def cocycle_eval(S: Cocycle2, g2: GroupoidElement, g1: GroupoidElement) -> float:
    """Value on a composable pair (raises if the pair does not compose)."""
    compose(g2, g1)  # composability check
    if S.form == "zero":
        return 0.0
    if S.form == "triangle-area":
        return _tri(g2, g1)
    if S.form == "good-epsilon":
        eps = S.params[0]
        return _tri(g2, g1) + eps * delta_coboundary_1(_good_h, g2, g1)
    if S.form == "heisenberg":
        return _heis(g2, g1)
    if S.form == "constant":
        return _const(g2, g1)
    if S.form == "su2-antisym":
        return _su2(g2, g1)
    if S.form == "antisymmetrized":
        base = S.base
        return 0.5 * (base(g2, g1) - base(inverse(g1), inverse(g2)))
    if S.form == "raw":
        return S.base(g2, g1)
    raise ValueError(f"unknown cocycle form {S.form!r}")


def catalog_cocycle(model: PoissonModel, eps: float | None = None) -> Cocycle2:
    """The model's catalog cocycle (van Est-normalized)."""
    if model.variant == "zero":
        return Cocycle2(model, "zero")
    if model.variant in ("symplectic-r2", "torus2"):
        if eps is not None:
            return Cocycle2(model, "good-epsilon", params=(float(eps),), antisymmetric=False)
        return Cocycle2(model, "triangle-area")
    if model.variant == "constant":
        return Cocycle2(model, "constant")
    if model.variant == "heisenberg-dual":
        return Cocycle2(model, "heisenberg")
    if model.variant == "su2-dual":
        return Cocycle2(model, "su2-antisym")
    raise ValueError(model.variant)


def delta_coboundary_1(h, g2: GroupoidElement, g1: GroupoidElement) -> float:
    """delta* of a 1-cochain: h(g1) - h(g2 g1) + h(g2)."""
    return h(g1) - h(compose(g2, g1)) + h(g2)


def delta_coboundary(c, g3: GroupoidElement, g2: GroupoidElement, g1: GroupoidElement) -> float:
    """delta* of a 2-cochain on a composable triple.

    delta*c = c(g2,g1) - c(g3 g2, g1) + c(g3, g2 g1) - c(g3, g2).
    """
    return (
        c(g2, g1)
        - c(compose(g3, g2), g1)
        + c(g3, compose(g2, g1))
        - c(g3, g2)
    )


def antisymmetrize(S: Cocycle2) -> Cocycle2:
    """S~(g2,g1) = (S(g2,g1) - S(g1^-1, g2^-1)) / 2; preserves the cocycle identity."""
    if S.antisymmetric and S.form != "raw":
        return S
    return Cocycle2(S.model, "antisymmetrized", base=S, antisymmetric=True)


# -- van Est -----------------------------------------------------------


def _mixed_partial(S, model, m, u_outer, u_inner, h: float) -> float:
    """d^2/(d delta d eps) S(arrow(t, delta*u_outer), arrow(m, eps*u_inner)) at 0."""

    def val(d, e):
        g1 = arrow(model, m, e * u_inner)
        g2 = arrow(model, target(g1), d * u_outer)
        return S(g2, g1)

    return (val(h, h) - val(h, -h) - val(-h, h) + val(-h, -h)) / (4 * h * h)


def _van_est_once(S, model, m, x, y, h: float) -> float:
    return _mixed_partial(S, model, m, x, y, h) - _mixed_partial(S, model, m, y, x, h)


def van_est_2(S: Cocycle2, m, x, y, step: float, check: bool = True) -> float:
    """VE(S)(x, y) at m by central finite differences on right-translated arrows.

    The ordering is calibrated so VE(triangle-area) = +1 on (d_a, d_b),
    matching the bivector d_p ^ d_q.  Converges at O(step^2); a second
    evaluation at step/2 guards against cancellation noise.
    """
    m = np.asarray(m, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    model = S.model
    k = arrow_dim(model)
    if len(x) != k or len(y) != k:
        raise ValueError(f"tangent vectors must have length {k}")
    if step <= 0:
        raise ValueError("step must be positive")
    v1 = _van_est_once(S, model, m, x, y, step)
    if check:
        v2 = _van_est_once(S, model, m, x, y, step / 2)
        scale = max(abs(v1), abs(v2), 1e-8)
        if abs(v1 - v2) > 0.10 * scale + 1e-9:
            raise StepCancellationError(
                f"van Est step {step} unreliable: {v1} vs {v2} at step/2"
            )
    return v1


def van_est_2_richardson(S: Cocycle2, m, x, y, step: float) -> float:
    """Richardson extrapolation over steps (h, h/2); error O(step^4)."""
    v_h = van_est_2(S, m, x, y, step, check=False)
    v_h2 = van_est_2(S, m, x, y, step / 2, check=False)
    return (4 * v_h2 - v_h) / 3.0
