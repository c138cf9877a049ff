"""Uniform grids, sampled fields and the L2 pairing used by the spectral layer."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exprs import FunctionExpr, eval_expr

__all__ = ["GridSpec", "SampledField", "sample", "l2_inner", "pairwise_sum"]


@dataclass(frozen=True)
class GridSpec:
    """Uniform lattice over [-R_i, R_i]^dim, endpoints included."""

    dim: int
    half_widths: tuple
    samples: tuple

    def __post_init__(self):
        if len(self.half_widths) != self.dim or len(self.samples) != self.dim:
            raise ValueError("per-axis parameters must match the dimension")
        if any(n < 2 for n in self.samples):
            raise ValueError("need at least 2 samples per axis")
        if any(r <= 0 for r in self.half_widths):
            raise ValueError("half-widths must be positive")

    @staticmethod
    def square(dim: int, half_width: float, n: int) -> "GridSpec":
        return GridSpec(dim, tuple([float(half_width)] * dim), tuple([int(n)] * dim))

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(-r, r, n) for r, n in zip(self.half_widths, self.samples)]

    def nodes(self) -> np.ndarray:
        """All nodes, shape samples + (dim,), row-major."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack(mesh, axis=-1)

    def spacings(self) -> np.ndarray:
        return np.array([2 * r / (n - 1) for r, n in zip(self.half_widths, self.samples)])

    def trapezoid_weights(self) -> np.ndarray:
        """Tensor-product trapezoid weights, shape = samples."""
        w = None
        for r, n in zip(self.half_widths, self.samples):
            h = 2 * r / (n - 1)
            wi = np.full(n, h)
            wi[0] = wi[-1] = h / 2
            w = wi if w is None else np.multiply.outer(w, wi)
        return w

    def volume(self) -> float:
        return float(np.prod([2 * r for r in self.half_widths]))


@dataclass(frozen=True)
class SampledField:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        if tuple(self.values.shape) != tuple(self.grid.samples):
            raise ValueError("field shape does not match grid")


def sample(f: FunctionExpr, grid: GridSpec) -> SampledField:
    """Tensor of exact values at the grid nodes."""
    return SampledField(grid, eval_expr(f, grid.nodes()))


def pairwise_sum(a: np.ndarray) -> complex:
    """Deterministic pairwise reduction (np.sum is pairwise for 1-d float arrays)."""
    return complex(np.sum(a.ravel()))


def l2_inner(a: SampledField, b: SampledField, grid: GridSpec | None = None) -> complex:
    """Trapezoid L2 inner product, conjugate-linear in the first slot."""
    grid = grid or a.grid
    if a.grid != grid or b.grid != grid:
        raise ValueError("fields live on different grids")
    w = grid.trapezoid_weights()
    return pairwise_sum(np.conj(a.values) * b.values * w)
