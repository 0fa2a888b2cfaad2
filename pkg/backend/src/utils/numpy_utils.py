#!/usr/bin/env python3
"""
Numpy utilities for consistent array handling across schemas and services.
Tolerance checks used by the record invariants live here so every module
measures "unitary" and "Hermitian" the same way.
"""

from typing import Any, Dict, List, Union

import numpy as np

from utils.errors import InvalidArgumentError


def ensure_complex_array(data: Union[np.ndarray, List, Any]) -> np.ndarray:
    """
    Ensure data is a complex128 numpy array.

    Args:
        data: Input data (numpy array, list, or array-like)

    Returns:
        Numpy array with complex128 dtype (copied only when conversion is needed)
    """
    if not isinstance(data, np.ndarray):
        return np.array(data, dtype=np.complex128)
    if data.dtype != np.complex128:
        return data.astype(np.complex128)
    return data


def freeze_array(data: np.ndarray) -> np.ndarray:
    """Return a read-only copy so records stay immutable after construction."""
    frozen = np.array(data, copy=True)
    frozen.setflags(write=False)
    return frozen


def validate_finite_array(data: np.ndarray, context: str = "Array") -> None:
    """
    Validate that numpy array contains only finite values.

    Raises:
        InvalidArgumentError: If array contains NaN or inf
    """
    if not np.isfinite(data).all():
        raise InvalidArgumentError(f"{context}: Array contains non-finite values (NaN/inf)")


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Entrywise max-abs distance; shapes must agree."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"Shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def unitarity_error(matrix: np.ndarray) -> float:
    """‖M M† − I‖_max."""
    identity = np.eye(matrix.shape[0], dtype=np.complex128)
    return max_abs_diff(matrix @ matrix.conj().T, identity)


def hermiticity_error(matrix: np.ndarray) -> float:
    """‖M − M†‖_max."""
    return max_abs_diff(matrix, matrix.conj().T)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[A, B] = AB − BA."""
    return a @ b - b @ a


def calculate_sample_stats(z1: np.ndarray, z2: np.ndarray) -> Dict[str, Any]:
    """
    Mean vector and covariance matrix of paired real samples.

    Returns:
        Dictionary with mean [2], covariance [2][2] and n
    """
    stacked = np.vstack([np.asarray(z1, dtype=float), np.asarray(z2, dtype=float)])
    n = stacked.shape[1]
    covariance = np.cov(stacked) if n > 1 else np.zeros((2, 2))
    return {
        "mean": [float(v) for v in stacked.mean(axis=1)],
        "covariance": [[float(v) for v in row] for row in covariance],
        "n": int(n),
    }
