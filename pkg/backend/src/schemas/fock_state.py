#!/usr/bin/env python3
"""
Truncated Fock-space records: state vectors, density operators and mode operators.
All three are immutable after construction; arrays are stored read-only.
Multimode objects live on the tensor-product number basis in declared mode order
(row-major: the last mode varies fastest).
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from utils.errors import InvalidArgumentError
from utils.numpy_utils import (
    ensure_complex_array,
    freeze_array,
    hermiticity_error,
    validate_finite_array,
)

NORM_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-10
EIGENVALUE_FLOOR = -1e-8
EIGEN_SPOT_CHECK_DIM = 64


def _validate_cutoffs(cutoffs: Tuple[int, ...], context: str) -> Tuple[int, ...]:
    cutoffs = tuple(int(c) for c in cutoffs)
    if not cutoffs:
        raise InvalidArgumentError(f"{context}: at least one mode is required")
    if any(c < 1 for c in cutoffs):
        raise InvalidArgumentError(f"{context}: cutoffs must be >= 1, got {cutoffs}")
    return cutoffs


@dataclass(frozen=True, eq=False)
class FockVector:
    """Pure state amplitudes over |0⟩..|cutoff−1⟩ (per mode)."""

    cutoffs: Tuple[int, ...]
    amplitudes: np.ndarray      # Shape: [prod(cutoffs)]
    normalized: bool = field(init=False)

    def __post_init__(self) -> None:
        context = f"FockVector{self.cutoffs}"
        object.__setattr__(self, "cutoffs", _validate_cutoffs(self.cutoffs, context))
        amplitudes = ensure_complex_array(self.amplitudes).reshape(-1)
        if amplitudes.size != self.dimension:
            raise InvalidArgumentError(
                f"{context}: amplitude length {amplitudes.size} != dimension {self.dimension}"
            )
        validate_finite_array(amplitudes, context)
        norm_sq = float(np.vdot(amplitudes, amplitudes).real)
        if norm_sq > 1.0 + NORM_TOLERANCE:
            raise InvalidArgumentError(f"{context}: squared norm {norm_sq} exceeds 1")
        object.__setattr__(self, "amplitudes", freeze_array(amplitudes))
        object.__setattr__(self, "normalized", abs(np.sqrt(norm_sq) - 1.0) <= NORM_TOLERANCE)

    @property
    def dimension(self) -> int:
        return int(np.prod(self.cutoffs))

    @property
    def cutoff(self) -> int:
        """Single-mode cutoff."""
        if len(self.cutoffs) != 1:
            raise InvalidArgumentError(f"FockVector{self.cutoffs}: not a single-mode state")
        return self.cutoffs[0]

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def truncation_error(self) -> float:
        return max(0.0, 1.0 - self.norm_squared)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Mixed state over the tensor-product number basis."""

    cutoffs: Tuple[int, ...]
    matrix: np.ndarray          # Shape: [dim, dim]

    def __post_init__(self) -> None:
        context = f"DensityOperator{self.cutoffs}"
        object.__setattr__(self, "cutoffs", _validate_cutoffs(self.cutoffs, context))
        matrix = ensure_complex_array(self.matrix)
        dim = self.dimension
        if matrix.shape != (dim, dim):
            raise InvalidArgumentError(f"{context}: matrix shape {matrix.shape} != ({dim}, {dim})")
        validate_finite_array(matrix, context)

        herm = hermiticity_error(matrix)
        if herm > HERMITIAN_TOLERANCE:
            raise InvalidArgumentError(f"{context}: not Hermitian (residual {herm:.3e})")

        trace = float(np.trace(matrix).real)
        if trace > 1.0 + NORM_TOLERANCE or trace < 0.0:
            raise InvalidArgumentError(f"{context}: trace {trace} outside [0, 1]")

        if dim <= EIGEN_SPOT_CHECK_DIM:
            smallest = float(np.linalg.eigvalsh(matrix).min())
            if smallest < EIGENVALUE_FLOOR:
                raise InvalidArgumentError(f"{context}: negative eigenvalue {smallest:.3e}")

        object.__setattr__(self, "matrix", freeze_array(matrix))

    @property
    def dimension(self) -> int:
        return int(np.prod(self.cutoffs))

    @property
    def num_modes(self) -> int:
        return len(self.cutoffs)

    @property
    def cutoff(self) -> int:
        if len(self.cutoffs) != 1:
            raise InvalidArgumentError(f"DensityOperator{self.cutoffs}: not single-mode")
        return self.cutoffs[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def truncation_error(self) -> float:
        return max(0.0, 1.0 - self.trace)

    def diagonal(self) -> np.ndarray:
        return np.clip(np.diagonal(self.matrix).real, 0.0, None)

    @classmethod
    def from_vector(cls, vector: FockVector) -> "DensityOperator":
        psi = np.asarray(vector.amplitudes)
        return cls(cutoffs=vector.cutoffs, matrix=np.outer(psi, psi.conj()))


@dataclass(frozen=True, eq=False)
class ModeOperator:
    """Operator matrix over the tensor-product number basis."""

    cutoffs: Tuple[int, ...]
    matrix: np.ndarray
    hermitian: bool = False
    label: Optional[str] = None

    def __post_init__(self) -> None:
        context = f"ModeOperator{self.cutoffs}" + (f" '{self.label}'" if self.label else "")
        object.__setattr__(self, "cutoffs", _validate_cutoffs(self.cutoffs, context))
        matrix = ensure_complex_array(self.matrix)
        dim = self.dimension
        if matrix.shape != (dim, dim):
            raise InvalidArgumentError(f"{context}: matrix shape {matrix.shape} != ({dim}, {dim})")
        if self.hermitian:
            herm = hermiticity_error(matrix)
            if herm > HERMITIAN_TOLERANCE:
                raise InvalidArgumentError(f"{context}: flagged Hermitian but residual {herm:.3e}")
        object.__setattr__(self, "matrix", freeze_array(matrix))

    @property
    def dimension(self) -> int:
        return int(np.prod(self.cutoffs))

    def dag(self) -> "ModeOperator":
        return ModeOperator(self.cutoffs, self.matrix.conj().T, self.hermitian)

    def __matmul__(self, other: "ModeOperator") -> "ModeOperator":
        if self.cutoffs != other.cutoffs:
            raise InvalidArgumentError(
                f"Operator cutoffs differ: {self.cutoffs} vs {other.cutoffs}"
            )
        return ModeOperator(self.cutoffs, self.matrix @ other.matrix)

    def apply(self, vector: FockVector) -> np.ndarray:
        """Raw amplitudes of op|ψ⟩ (may exceed unit norm, so not wrapped)."""
        if vector.cutoffs != self.cutoffs:
            raise InvalidArgumentError(
                f"State cutoffs {vector.cutoffs} != operator cutoffs {self.cutoffs}"
            )
        return self.matrix @ vector.amplitudes
