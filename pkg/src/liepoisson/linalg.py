"""Small subspace utilities shared by the sequence and extension checks."""

from __future__ import annotations

import numpy as np

__all__ = [
    "orthonormal_columns",
    "projector",
    "complement_residual",
    "projector_distance",
]


def orthonormal_columns(basis: np.ndarray) -> np.ndarray:
    """Orthonormalize the columns of ``basis`` (must be independent)."""
    b = np.atleast_2d(np.asarray(basis))
    if b.shape[1] == 0:
        return b
    q, r = np.linalg.qr(b)
    if np.min(np.abs(np.diag(r))) < 1e-12 * max(1.0, np.max(np.abs(r))):
        raise ValueError("subspace basis is not linearly independent")
    return q


def projector(basis: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the column span (conjugate-aware)."""
    q = orthonormal_columns(basis)
    return q @ q.conj().T


def complement_residual(vectors: np.ndarray, basis: np.ndarray) -> float:
    """Largest norm of the component of any column of ``vectors`` outside
    the span of ``basis``; 0 means containment."""
    v = np.atleast_2d(np.asarray(vectors))
    if v.shape[1] == 0:
        return 0.0
    p = projector(basis) if basis.shape[1] else np.zeros((v.shape[0], v.shape[0]))
    out = v - p @ v
    return float(np.max(np.linalg.norm(out, axis=0)))


def projector_distance(basis_a: np.ndarray, basis_b: np.ndarray) -> float:
    """Spectral norm of the difference of the two orthogonal projectors.

    Equals the sine of the largest principal angle when the subspaces have
    the same dimension, and 1 when they do not.
    """
    n = basis_a.shape[0]
    pa = projector(basis_a) if basis_a.shape[1] else np.zeros((n, n))
    pb = projector(basis_b) if basis_b.shape[1] else np.zeros((n, n))
    return float(np.linalg.norm(pa - pb, 2))
