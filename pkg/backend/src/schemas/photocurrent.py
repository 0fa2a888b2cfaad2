#!/usr/bin/env python3
"""
Photocurrent records: single joint outcomes, columnar sample batches, and the
leading-order photocurrent operators of a scheme.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Sequence, Tuple

import numpy as np
import pandas as pd

from schemas.fock_state import ModeOperator
from utils.errors import InvalidArgumentError
from utils.numpy_utils import calculate_sample_stats, freeze_array, validate_finite_array


@dataclass(frozen=True)
class PhotocurrentSample:
    """One joint outcome: raw detector counts and rescaled (z1, z2)."""
    counts: Tuple[int, ...]
    z1: float
    z2: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.z1) and np.isfinite(self.z2)):
            raise InvalidArgumentError(f"PhotocurrentSample{self.counts}: non-finite z")
        if any(c < 0 for c in self.counts):
            raise InvalidArgumentError(f"PhotocurrentSample{self.counts}: negative count")

    @classmethod
    def from_parquet_dict(cls, data: dict) -> "PhotocurrentSample":
        """Reconstruct from a row of the samples table."""
        count_keys = sorted((k for k in data if k.startswith("i")), key=lambda k: int(k[1:]))
        return cls(
            counts=tuple(int(data[k]) for k in count_keys),
            z1=float(data["z1"]),
            z2=float(data["z2"]),
        )


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Columnar list of PhotocurrentSample outcomes for one scheme run."""

    scheme: str
    counts: np.ndarray      # Shape: [n, K], int64, detector-label order
    z1: np.ndarray          # Shape: [n]
    z2: np.ndarray          # Shape: [n]

    def __post_init__(self) -> None:
        context = f"SampleBatch({self.scheme})"
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2:
            raise InvalidArgumentError(f"{context}: counts must be 2D, got shape {counts.shape}")
        z1 = np.asarray(self.z1, dtype=np.float64).reshape(-1)
        z2 = np.asarray(self.z2, dtype=np.float64).reshape(-1)
        if not (z1.size == z2.size == counts.shape[0]):
            raise InvalidArgumentError(
                f"{context}: lengths differ (counts {counts.shape[0]}, z1 {z1.size}, z2 {z2.size})"
            )
        validate_finite_array(z1, context)
        validate_finite_array(z2, context)
        object.__setattr__(self, "counts", freeze_array(counts))
        object.__setattr__(self, "z1", freeze_array(z1))
        object.__setattr__(self, "z2", freeze_array(z2))

    def __len__(self) -> int:
        return int(self.z1.size)

    def __iter__(self) -> Iterator[PhotocurrentSample]:
        for row, a, b in zip(self.counts, self.z1, self.z2):
            yield PhotocurrentSample(tuple(int(c) for c in row), float(a), float(b))

    @property
    def num_detectors(self) -> int:
        return int(self.counts.shape[1])

    @property
    def complex_currents(self) -> np.ndarray:
        return self.z1 + 1j * self.z2

    def stats(self) -> Dict[str, Any]:
        return calculate_sample_stats(self.z1, self.z2)

    def column_names(self) -> List[str]:
        return [f"i{k + 1}" for k in range(self.num_detectors)] + ["z1", "z2"]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            {f"i{k + 1}": self.counts[:, k] for k in range(self.num_detectors)}
        )
        frame["z1"] = self.z1
        frame["z2"] = self.z2
        return frame

    @classmethod
    def concatenate(cls, batches: Sequence["SampleBatch"]) -> "SampleBatch":
        """Merge chunks in the given order."""
        if not batches:
            raise InvalidArgumentError("SampleBatch.concatenate: no batches")
        schemes = {b.scheme for b in batches}
        if len(schemes) != 1:
            raise InvalidArgumentError(f"SampleBatch.concatenate: mixed schemes {sorted(schemes)}")
        return cls(
            scheme=batches[0].scheme,
            counts=np.concatenate([b.counts for b in batches], axis=0),
            z1=np.concatenate([b.z1 for b in batches]),
            z2=np.concatenate([b.z2 for b in batches]),
        )

    @classmethod
    def from_samples(cls, scheme: str, samples: Sequence[PhotocurrentSample]) -> "SampleBatch":
        return cls(
            scheme=scheme,
            counts=np.array([s.counts for s in samples], dtype=np.int64),
            z1=np.array([s.z1 for s in samples]),
            z2=np.array([s.z2 for s in samples]),
        )


# Parquet schema definition (samples table)
SAMPLES_PARQUET_SCHEMA = {
    "i<k>": "int64",
    "z1": "double",
    "z2": "double",
}


@dataclass(frozen=True, eq=False)
class LeadingOrderCoefficients:
    """
    Linear expansion of the rescaled complex current at large LO amplitude:
        Z ≈ Σ_l (c_l a_l + e_l a†_l) + Σ_k (p_k v_k + q_k v†_k)
    over network input columns l and detector noise modes v_k.
    """
    signal_coefficients: np.ndarray     # c_l, shape [K]
    conjugate_coefficients: np.ndarray  # e_l, shape [K]
    noise_coefficients: np.ndarray      # p_k, shape [detectors]
    noise_conjugate_coefficients: np.ndarray  # q_k, shape [detectors]

    @property
    def noise_overlap(self) -> float:
        """|Σ p_k q_k| / (‖p‖‖q‖); zero when the two effective noise modes are independent."""
        norm = np.linalg.norm(self.noise_coefficients) * np.linalg.norm(
            self.noise_conjugate_coefficients
        )
        if norm == 0:
            return 0.0
        return float(abs(np.sum(self.noise_coefficients * self.noise_conjugate_coefficients)) / norm)


@dataclass(frozen=True)
class PhotocurrentOperators:
    """Hermitian Z1, Z2 on signal ⊗ idler (⊗ u1 ⊗ u2 when η < 1)."""
    scheme: str
    eta: float
    mode_labels: Tuple[str, ...]
    z1: ModeOperator
    z2: ModeOperator
    coefficients: Dict[str, complex] = field(default_factory=dict)

    @property
    def cutoffs(self) -> Tuple[int, ...]:
        return self.z1.cutoffs

    def complex_current(self) -> np.ndarray:
        """Matrix of Z = Z1 + iZ2."""
        return np.asarray(self.z1.matrix) + 1j * np.asarray(self.z2.matrix)
