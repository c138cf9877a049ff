"""Catalog of Poisson models and their closed-form brackets.

Each model records the integral kernel's hbar convention: the oscillatory
phase of its product is (printed bracket polynomial) / (c * hbar), with
c in {1, 2}.  It also records the commutator constant c_comm for which
(f*g - g*f)/(i * c_comm * hbar) -> {f, g} at first order; these differ
between models because the source formulas mix e^{iS/2hbar} and
e^{iS/hbar} kernels and both triangle orientations.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exprs import FunctionExpr, constant, monomial, _poly_mul, _poly_scale, GaussTerm

__all__ = [
    "PoissonModel",
    "HbarParam",
    "zero_model",
    "symplectic_r2",
    "constant_poisson",
    "torus2",
    "heisenberg_dual",
    "su2_dual",
    "poisson_bracket",
]


@dataclass(frozen=True)
class HbarParam:
    value: float

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("hbar must be positive; hbar=0 is the pointwise-product branch")


@dataclass(frozen=True)
class PoissonModel:
    variant: str  # zero | symplectic-r2 | constant | torus2 | heisenberg-dual | su2-dual
    dim: int
    hbar_convention: int  # kernel phase is (bracket polynomial)/(c*hbar)
    commutator_factor: float  # (f*g-g*f)/(i*c*hbar) -> {f,g}
    bivector: tuple | None = None  # constant model only

    def __post_init__(self):
        if self.hbar_convention not in (1, 2):
            raise ValueError("hbar convention factor must be 1 or 2")
        if self.variant == "constant":
            P = self.bivector_matrix()
            if P is None or not np.allclose(P, -P.T, atol=1e-12):
                raise ValueError("constant-Poisson bivector must be antisymmetric")

    def bivector_matrix(self) -> np.ndarray | None:
        return None if self.bivector is None else np.array(self.bivector, dtype=float)


def zero_model(dim: int) -> PoissonModel:
    return PoissonModel("zero", dim, 1, 1.0)


def symplectic_r2() -> PoissonModel:
    # printed kernel e^{i[...]/(2 hbar)} with prefactor (4 pi hbar)^-2
    return PoissonModel("symplectic-r2", 2, 2, 4.0)


def constant_poisson(bivector) -> PoissonModel:
    P = np.asarray(bivector, dtype=float)
    return PoissonModel("constant", P.shape[0], 1, 2.0, bivector=tuple(map(tuple, P)))


def torus2() -> PoissonModel:
    return PoissonModel("torus2", 2, 1, -2.0)


def heisenberg_dual() -> PoissonModel:
    # leaf kernel at height z is the flat kernel with parameter z*hbar
    return PoissonModel("heisenberg-dual", 3, 1, 4.0)


def su2_dual() -> PoissonModel:
    return PoissonModel("su2-dual", 3, 1, 2.0)


def good_epsilon_commutator_factor() -> float:
    """Eq.-level constant for the epsilon-twisted pair product: f*g-g*f ~ -2i hbar {f,g}."""
    return -2.0


def _bivector_entries(model: PoissonModel):
    """Yield (j, k, coefficient) with {x_j, x_k} = coeff, j < k; None means 1."""
    if model.variant == "zero":
        return []
    if model.variant in ("symplectic-r2", "torus2"):
        return [(0, 1, None)]
    if model.variant == "constant":
        P = model.bivector_matrix()
        out = []
        for j in range(model.dim):
            for k in range(j + 1, model.dim):
                if P[j, k] != 0:
                    out.append((j, k, P[j, k]))
        return out
    if model.variant == "heisenberg-dual":
        # Pi = (z/2) d_x ^ d_y
        return [(0, 1, monomial({(0, 0, 1): 0.5}, 3))]
    if model.variant == "su2-dual":
        # {f,g}(X) = (1/2) X . (grad f x grad g)
        return [
            (1, 2, monomial({(1, 0, 0): 0.5}, 3)),
            (2, 0, monomial({(0, 1, 0): 0.5}, 3)),
            (0, 1, monomial({(0, 0, 1): 0.5}, 3)),
        ]
    raise ValueError(f"unknown model variant {model.variant!r}")


def poisson_bracket(model: PoissonModel, f: FunctionExpr, g: FunctionExpr) -> FunctionExpr:
    """Closed-form {f, g} for the model's bivector; zero model returns 0."""
    if f.dim != model.dim or g.dim != model.dim:
        raise ValueError("expressions not defined on the model's base")
    acc = None
    for j, k, coeff in _bivector_entries(model):
        term = f.derivative(j) * g.derivative(k) - f.derivative(k) * g.derivative(j)
        if coeff is not None:
            term = term * coeff if np.isscalar(coeff) else coeff * term
        acc = term if acc is None else acc + term
    if acc is None:
        if model.variant == "torus2":
            return FunctionExpr("torus-harmonic", 2, modes=())
        return constant(0.0, model.dim)
    return acc
