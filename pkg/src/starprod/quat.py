"""Unit quaternions, the covering map to SO(3), and su(2) pairings.

Conventions: a quaternion q = (q0, q1, q2, q3) with |q| = 1 represents
U(q) = q0*I - i*(q1*s1 + q2*s2 + q3*s3) in SU(2) (s_k the Pauli matrices),
and R(q) = Ad_{U(q)} is the usual right-handed rotation.  Vectors x in R^3
are identified with su(2) via M(x) = -(i/2) x.s, so [M(a), M(b)] = M(a x b)
and tr(U(q) M(x)) = -q_vec . x.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "qmul",
    "qconj",
    "qnormalize",
    "qexp",
    "rotation_matrix",
    "adjoint_action",
    "pairing",
    "pair_vec",
]

UNIT_TOL = 1e-12


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, av = a[..., 0], a[..., 1:]
    b0, bv = b[..., 0], b[..., 1:]
    s = a0 * b0 - np.einsum("...i,...i->...", av, bv)
    v = a0[..., None] * bv + b0[..., None] * av + np.cross(av, bv)
    return np.concatenate([s[..., None], v], axis=-1)


def qconj(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    out = q.copy()
    out[..., 1:] *= -1
    return out


def qnormalize(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q, axis=-1, keepdims=True)
    if np.any(np.abs(n - 1.0) > 1e-6):
        raise ValueError("quaternion drifted too far from the unit sphere")
    return q / n


def qexp(u: np.ndarray) -> np.ndarray:
    """exp of the su(2) element M(u): rotation about u by angle |u|."""
    u = np.asarray(u, dtype=float)
    theta = np.linalg.norm(u, axis=-1)
    half = theta / 2.0
    with np.errstate(invalid="ignore", divide="ignore"):
        sc = np.where(theta > 1e-300, np.sin(half) / np.where(theta == 0, 1.0, theta), 0.5)
    q0 = np.cos(half)
    qv = sc[..., None] * u
    return np.concatenate([q0[..., None], qv], axis=-1)


def rotation_matrix(q: np.ndarray) -> np.ndarray:
    """SO(3) image of a unit quaternion, shape (..., 3, 3)."""
    q = np.asarray(q, dtype=float)
    w, x, y, z = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    r = np.empty(q.shape[:-1] + (3, 3))
    r[..., 0, 0] = 1 - 2 * (y * y + z * z)
    r[..., 0, 1] = 2 * (x * y - w * z)
    r[..., 0, 2] = 2 * (x * z + w * y)
    r[..., 1, 0] = 2 * (x * y + w * z)
    r[..., 1, 1] = 1 - 2 * (x * x + z * z)
    r[..., 1, 2] = 2 * (y * z - w * x)
    r[..., 2, 0] = 2 * (x * z - w * y)
    r[..., 2, 1] = 2 * (y * z + w * x)
    r[..., 2, 2] = 1 - 2 * (x * x + y * y)
    return r


def adjoint_action(q: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Rotate x in R^3 by the SO(3) image of the unit quaternion q."""
    q = qnormalize(q)
    return np.einsum("...ij,...j->...i", rotation_matrix(q), np.asarray(x, dtype=float))


def pairing(q: np.ndarray, x: np.ndarray) -> np.ndarray:
    """-tr(U(q) M(x)) = q_vec . x, the half-Killing pairing on arrows."""
    return np.einsum("...i,...i->...", np.asarray(q)[..., 1:], np.asarray(x, dtype=float))


def pair_vec(qa: np.ndarray, qb: np.ndarray) -> np.ndarray:
    """Vector part of qa^{-1} * qb for unit quaternions, batched."""
    return qmul(qconj(qa), qb)[..., 1:]
