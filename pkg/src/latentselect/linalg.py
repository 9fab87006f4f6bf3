"""Dense float32 sample matrices and the small linear algebra on them.

A data matrix is a C-contiguous 2-D float32 ndarray: rows are samples,
columns are features. Arithmetic accumulates in float64 and results are
stored back as float32, which bounds drift without doubling memory.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, EmptyInputError, InsufficientDataError


def as_matrix(values, *, allow_empty: bool = False) -> np.ndarray:
    """Coerce to a validated data matrix (2-D, float32, C-order, finite)."""
    m = np.ascontiguousarray(values, dtype=np.float32)
    if m.ndim != 2:
        raise DimensionError(f"data matrix must be 2-D, got shape {m.shape}")
    if m.shape[0] == 0 and not allow_empty:
        raise EmptyInputError("data matrix has no rows")
    if not np.all(np.isfinite(m)):
        raise DimensionError("data matrix contains NaN or Inf entries")
    return m


def as_vector(values) -> np.ndarray:
    v = np.ascontiguousarray(values, dtype=np.float32)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got shape {v.shape}")
    return v


def squared_distance(a, b) -> float:
    """Squared Euclidean distance, float64 accumulation, float32 result."""
    a = as_vector(a)
    b = as_vector(b)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    d = a.astype(np.float64) - b.astype(np.float64)
    return float(np.float32(np.dot(d, d)))


def squared_distances_to(points: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Squared distance from every row of ``points`` to the vector ``p``.

    Same arithmetic contract as squared_distance; returns a float32 array.
    """
    d = points.astype(np.float64) - np.asarray(p, dtype=np.float64)
    return np.einsum("ij,ij->i", d, d).astype(np.float32)


def column_mean(m) -> np.ndarray:
    """Per-column arithmetic mean with float64 accumulation."""
    m = as_matrix(m)
    return m.astype(np.float64).mean(axis=0)


def covariance(m) -> np.ndarray:
    """Sample covariance of the columns (1/(n-1) denominator), float64.

    The result is made exactly symmetric by mirroring the upper triangle
    into the lower one.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if n < 2:
        raise InsufficientDataError(f"covariance needs >= 2 rows, got {n}")
    x = m.astype(np.float64)
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    i, j = np.tril_indices(cov.shape[0], k=-1)
    cov[i, j] = cov[j, i]
    return cov
