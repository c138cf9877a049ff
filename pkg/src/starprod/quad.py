"""Quadrature specifications and the oscillation-resolution policy."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .haar import HaarSpec

__all__ = ["QuadratureSpec", "StarResult", "OscillationPolicyError", "NonDecayingError", "decay_radius"]


class OscillationPolicyError(ValueError):
    """Grid spacing too coarse for the kernel's oscillation at this hbar."""


class NonDecayingError(ValueError):
    """Integrand without Gaussian decay requested on the quadrature path."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncated-box tensor quadrature for one flat star integral.

    The kernel phase is (u t - v s)/lam per leaf block; resolving it needs
    spacing <= pi*|lam|/(4R) (>= 8 nodes per period of the fastest phase
    factor e^{i u R / lam}).  For the printed kernels lam = c*hbar times the
    leaf factor, so at z=1 this is the spacing <= pi*c*hbar/(4R) rule.
    Construction fails when the policy is violated.
    """

    half_width: float
    samples: int
    lam: float  # signed kernel parameter of the fastest block
    haar: HaarSpec | None = None

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half-width must be positive")
        if self.samples < 3 or self.samples % 2 == 0:
            raise ValueError("samples per axis must be odd and >= 3")
        if self.spacing() > self.policy_bound() * (1 + 1e-12):
            raise OscillationPolicyError(
                f"spacing {self.spacing():.4g} exceeds pi*|lam|/(4R) = {self.policy_bound():.4g}"
            )

    def spacing(self) -> float:
        return 2 * self.half_width / (self.samples - 1)

    def policy_bound(self) -> float:
        return np.pi * abs(self.lam) / (4 * self.half_width)

    @staticmethod
    def auto(
        half_width: float,
        lam: float,
        min_samples: int = 33,
        max_samples: int = 2001,
        haar: HaarSpec | None = None,
    ) -> "QuadratureSpec":
        """Smallest odd sample count satisfying the spacing policy."""
        bound = np.pi * abs(lam) / (4 * half_width)
        n = max(min_samples, int(np.ceil(2 * half_width / bound)) + 1)
        if n % 2 == 0:
            n += 1
        if n > max_samples:
            raise OscillationPolicyError(
                f"resolving the phase needs {n} samples per axis (> {max_samples}); "
                "shrink the test functions or increase hbar"
            )
        return QuadratureSpec(half_width, n, lam, haar=haar)

    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.samples)

    def weights(self) -> np.ndarray:
        h = self.spacing()
        w = np.full(self.samples, h)
        w[0] = w[-1] = h / 2
        return w

    def coarse_indices(self) -> np.ndarray:
        return np.arange(0, self.samples, 2)


@dataclass(frozen=True)
class StarResult:
    """Star-product output with the normalization used and an error estimate."""

    value: object  # complex or ndarray
    normalization: complex
    error: float
    method: str = "quadrature"

    def __post_init__(self):
        if self.error < 0:
            raise ValueError("error estimate must be nonnegative")


def decay_radius(expr, tol: float = 1e-12, floor: float = 4.0) -> float:
    """Conservative box half-width outside which |expr| < tol.

    Uses the weakest Gaussian direction of each term plus a slack for
    polynomial growth.  Raises NonDecayingError when some term has no width.
    """
    radius = floor
    for t in expr.terms:
        w = t.width_matrix()
        if w is None:
            raise NonDecayingError("expression has a term without Gaussian decay")
        sigma = float(np.min(np.linalg.eigvalsh(w)))
        amp = sum(abs(v) for _, v in t.poly)
        deg = max((sum(k) for k, _ in t.poly), default=0)
        # solve 0.5*sigma*r^2 = log(amp/tol) + deg*log(1+r) iteratively
        r = np.sqrt(2 * max(np.log(max(amp, 1.0) / tol), 1.0) / sigma)
        for _ in range(20):
            r = np.sqrt(2 * (np.log(max(amp, 1.0) / tol) + deg * np.log1p(r)) / sigma)
        radius = max(radius, r + float(np.max(np.abs(t.center))))
    return float(radius)
