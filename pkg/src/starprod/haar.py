"""Normalized Haar quadrature on SU(2).

Two schemes: a deterministic ZYZ Euler product grid (midpoint rule on the
periodic angles, Gauss-Legendre against sin(beta) on the polar angle) and
a seeded Sobol quasi-Monte-Carlo scheme mapping [0,1)^3 uniformly onto S^3.
The Euler gamma angle runs over [0, 4*pi): the cocycle lives on SU(2), not
SO(3), so the double cover must be integrated in full.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.stats import qmc

from .quat import qmul

__all__ = ["HaarSpec", "haar_nodes", "euler_grid", "sobol_points"]


@dataclass(frozen=True)
class HaarSpec:
    scheme: str  # "su2-euler-grid" | "su2-qmc"
    counts: tuple = (12, 12, 12)  # (n_alpha, n_beta, n_gamma) for the grid
    n_points: int = 4096  # qmc
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in ("su2-euler-grid", "su2-qmc"):
            raise ValueError(f"unknown Haar scheme {self.scheme!r}")
        if self.scheme == "su2-euler-grid" and any(n < 1 for n in self.counts):
            raise ValueError("zero node count")
        if self.scheme == "su2-qmc" and self.n_points < 1:
            raise ValueError("zero node count")

    def halved(self) -> "HaarSpec":
        if self.scheme == "su2-euler-grid":
            return HaarSpec(self.scheme, tuple(max(1, n // 2) for n in self.counts), seed=self.seed)
        return HaarSpec(self.scheme, n_points=max(1, self.n_points // 2), seed=self.seed)


def _zyz_quaternion(alpha, beta, gamma):
    qa = np.stack([np.cos(alpha / 2), np.zeros_like(alpha), np.zeros_like(alpha), np.sin(alpha / 2)], axis=-1)
    qb = np.stack([np.cos(beta / 2), np.zeros_like(beta), np.sin(beta / 2), np.zeros_like(beta)], axis=-1)
    qg = np.stack([np.cos(gamma / 2), np.zeros_like(gamma), np.zeros_like(gamma), np.sin(gamma / 2)], axis=-1)
    return qmul(qmul(qa, qb), qg)


def euler_grid(n_alpha: int, n_beta: int, n_gamma: int):
    """Product nodes: midpoints in alpha in [0,2pi), gamma in [0,4pi); Gauss in beta."""
    alpha = (np.arange(n_alpha) + 0.5) * (2 * np.pi / n_alpha)
    gamma = (np.arange(n_gamma) + 0.5) * (4 * np.pi / n_gamma)
    xb, wb = leggauss(n_beta)
    beta = np.arccos(xb)  # Gauss-Legendre in cos(beta) integrates sin(beta) d(beta) exactly
    a, b, g = np.meshgrid(alpha, beta, gamma, indexing="ij")
    quats = _zyz_quaternion(a.ravel(), b.ravel(), g.ravel())
    w = np.ones(n_alpha)[:, None, None] * wb[None, :, None] * np.ones(n_gamma)[None, None, :]
    weights = w.ravel()
    return quats, weights / np.sum(weights)


def sobol_points(n: int, seed: int):
    """Uniform points on S^3 from a seeded Sobol sequence (Shoemake map)."""
    eng = qmc.Sobol(d=3, scramble=True, seed=seed)
    u = eng.random(n)
    q = np.stack(
        [
            np.sqrt(1 - u[:, 0]) * np.sin(2 * np.pi * u[:, 1]),
            np.sqrt(1 - u[:, 0]) * np.cos(2 * np.pi * u[:, 1]),
            np.sqrt(u[:, 0]) * np.sin(2 * np.pi * u[:, 2]),
            np.sqrt(u[:, 0]) * np.cos(2 * np.pi * u[:, 2]),
        ],
        axis=-1,
    )
    return q, np.full(n, 1.0 / n)


def haar_nodes(spec: HaarSpec):
    """Quadrature nodes (unit quaternions) and weights summing to 1."""
    if spec.scheme == "su2-euler-grid":
        return euler_grid(*spec.counts)
    return sobol_points(spec.n_points, spec.seed)
