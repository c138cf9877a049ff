"""Concrete parameterizations of the integrating groupoids.

All catalog groupoids are action groupoids G x M => M: an arrow is a pair
(group element, source point) and the target is the action applied to the
source.  Coordinate layouts per model:

    symplectic-r2 / torus2 : (x', y', x, y)   target first, source second
    constant               : (v[0:d], x[0:d]) covector element, source
    heisenberg-dual        : (a, b, c, x, y, z)
    su2-dual               : (q0, q1, q2, q3, X1, X2, X3)

Torus arrows live on the universal cover R^2; base points are only reduced
mod 2pi when comparing against torus functions, never here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import PoissonModel
from . import quat

__all__ = [
    "GroupoidElement",
    "NonComposableError",
    "source",
    "target",
    "compose",
    "inverse",
    "identity",
    "arrow",
    "arrow_dim",
    "random_base_point",
    "random_composable_tuple",
]

COMPOSABILITY_TOL = 1e-10


class NonComposableError(ValueError):
    pass


@dataclass(frozen=True)
class GroupoidElement:
    model: PoissonModel
    coords: tuple

    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


def _make(model: PoissonModel, coords) -> GroupoidElement:
    return GroupoidElement(model, tuple(float(c) for c in np.asarray(coords)))


def _split(g: GroupoidElement):
    v = g.array()
    m = g.model
    if m.variant in ("symplectic-r2", "torus2"):
        return v[:2], v[2:]  # (target-source difference handled in target())
    if m.variant == "constant":
        return v[: m.dim], v[m.dim :]
    if m.variant == "heisenberg-dual":
        return v[:3], v[3:]
    if m.variant == "su2-dual":
        return v[:4], v[4:]
    raise ValueError(f"model {m.variant!r} has no groupoid parameterization")


def group_element(g: GroupoidElement) -> np.ndarray:
    """The 'group part' of the arrow (pair models: target - source)."""
    head, base = _split(g)
    if g.model.variant in ("symplectic-r2", "torus2"):
        return head - base
    if g.model.variant == "su2-dual":
        return quat.qnormalize(head)
    return head


def source(g: GroupoidElement) -> np.ndarray:
    return _split(g)[1]


def target(g: GroupoidElement) -> np.ndarray:
    head, base = _split(g)
    m = g.model
    if m.variant in ("symplectic-r2", "torus2"):
        return head
    if m.variant == "constant":
        return base + m.bivector_matrix() @ head
    if m.variant == "heisenberg-dual":
        a, b, _c = head
        x, y, z = base
        return np.array([x + z * b, y - z * a, z])
    if m.variant == "su2-dual":
        return quat.adjoint_action(quat.qnormalize(head), base)
    raise ValueError(m.variant)


def identity(model: PoissonModel, m) -> GroupoidElement:
    m = np.asarray(m, dtype=float)
    if model.variant in ("symplectic-r2", "torus2"):
        return _make(model, np.concatenate([m, m]))
    if model.variant == "constant":
        return _make(model, np.concatenate([np.zeros(model.dim), m]))
    if model.variant == "heisenberg-dual":
        return _make(model, np.concatenate([np.zeros(3), m]))
    if model.variant == "su2-dual":
        return _make(model, np.concatenate([[1.0, 0.0, 0.0, 0.0], m]))
    raise ValueError(model.variant)


def _check_composable(g2: GroupoidElement, g1: GroupoidElement) -> None:
    if g2.model != g1.model:
        raise NonComposableError("arrows from different models")
    gap = np.max(np.abs(source(g2) - target(g1)))
    if gap > COMPOSABILITY_TOL:
        raise NonComposableError(f"source(g2) != target(g1): gap {gap:.3e}")


def compose(g2: GroupoidElement, g1: GroupoidElement) -> GroupoidElement:
    """g2 after g1; requires source(g2) = target(g1) within tolerance."""
    _check_composable(g2, g1)
    m = g1.model
    h2, h1 = group_element(g2), group_element(g1)
    base = source(g1)
    if m.variant in ("symplectic-r2", "torus2"):
        return _make(m, np.concatenate([target(g2), base]))
    if m.variant == "constant":
        return _make(m, np.concatenate([h2 + h1, base]))
    if m.variant == "heisenberg-dual":
        a2, b2, c2 = h2
        a1, b1, c1 = h1
        bch = np.array([a2 + a1, b2 + b1, c2 + c1 + 0.5 * (a2 * b1 - b2 * a1)])
        return _make(m, np.concatenate([bch, base]))
    if m.variant == "su2-dual":
        return _make(m, np.concatenate([quat.qmul(h2, h1), base]))
    raise ValueError(m.variant)


def inverse(g: GroupoidElement) -> GroupoidElement:
    m = g.model
    h = group_element(g)
    t = target(g)
    if m.variant in ("symplectic-r2", "torus2"):
        return _make(m, np.concatenate([source(g), t]))
    if m.variant == "constant":
        return _make(m, np.concatenate([-h, t]))
    if m.variant == "heisenberg-dual":
        return _make(m, np.concatenate([-h, t]))
    if m.variant == "su2-dual":
        return _make(m, np.concatenate([quat.qconj(h), t]))
    raise ValueError(m.variant)


# -- arrow charts near the identity (used by the van Est map) ---------


def arrow_dim(model: PoissonModel) -> int:
    """Dimension of the reduced arrow chart at the identity."""
    if model.variant in ("symplectic-r2", "torus2"):
        return 2
    if model.variant == "constant":
        return model.dim  # full covector chart; S vanishes along ker(Pi) anyway
    if model.variant == "heisenberg-dual":
        return 2  # isotropy direction c is quotiented out
    if model.variant == "su2-dual":
        return 3
    raise ValueError(model.variant)


def arrow(model: PoissonModel, m, u) -> GroupoidElement:
    """Chart u -> arrow with source m, arrow(m, 0) = id_m."""
    m = np.asarray(m, dtype=float)
    u = np.asarray(u, dtype=float)
    if model.variant in ("symplectic-r2", "torus2"):
        return _make(model, np.concatenate([m + u, m]))
    if model.variant == "constant":
        return _make(model, np.concatenate([u, m]))
    if model.variant == "heisenberg-dual":
        return _make(model, np.concatenate([[u[0], u[1], 0.0], m]))
    if model.variant == "su2-dual":
        return _make(model, np.concatenate([quat.qexp(u), m]))
    raise ValueError(model.variant)


# -- random sampling ---------------------------------------------------


def random_base_point(model: PoissonModel, rng: np.random.Generator) -> np.ndarray:
    m = rng.uniform(-1.0, 1.0, size=model.dim)
    if model.variant == "heisenberg-dual":
        m[2] = rng.uniform(0.5, 1.5)  # stay on a regular leaf
    return m


def random_composable_tuple(model: PoissonModel, rng: np.random.Generator, n: int = 2):
    """n arrows (g_n, ..., g_1) with source(g_{k+1}) = target(g_k) exactly."""
    m = random_base_point(model, rng)
    out = []
    for _ in range(n):
        u = rng.uniform(-1.0, 1.0, size=arrow_dim(model))
        g = arrow(model, m, u)
        out.append(g)
        m = target(g)
    return tuple(reversed(out))
