#!/usr/bin/env python3
"""
Photon-count distributions and detector efficiency.
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from utils.errors import InvalidArgumentError
from utils.numpy_utils import freeze_array, validate_finite_array

MASS_TOLERANCE = 1e-10
NEGATIVE_FLOOR = -1e-14


@dataclass(frozen=True, eq=False)
class CountDistribution:
    """Probabilities over counts m = 0..N_max plus the mass lost to truncation."""

    probs: np.ndarray       # Shape: [N_max + 1]
    deficit: float = 0.0

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64).reshape(-1)
        validate_finite_array(probs, "CountDistribution")
        if probs.size == 0:
            raise InvalidArgumentError("CountDistribution: empty probability vector")
        if probs.min() < NEGATIVE_FLOOR:
            raise InvalidArgumentError(
                f"CountDistribution: negative probability {probs.min():.3e}"
            )
        # Roundoff negatives are clamped; their mass moves into the deficit
        clamped = np.clip(probs, 0.0, None)
        deficit = float(self.deficit) + float(probs.sum() - clamped.sum())
        total = float(clamped.sum())
        if clamped.max() > 1.0 + MASS_TOLERANCE:
            raise InvalidArgumentError(f"CountDistribution: entry {clamped.max()} exceeds 1")
        if abs(total + deficit - 1.0) > MASS_TOLERANCE:
            raise InvalidArgumentError(
                f"CountDistribution: sum {total:.12f} + deficit {deficit:.3e} != 1"
            )
        object.__setattr__(self, "probs", freeze_array(np.minimum(clamped, 1.0)))
        object.__setattr__(self, "deficit", max(0.0, deficit))

    @classmethod
    def from_probs(cls, probs: np.ndarray) -> "CountDistribution":
        """Deficit inferred as the missing mass (truncated inputs)."""
        probs = np.clip(np.asarray(probs, dtype=np.float64), 0.0, None)
        return cls(probs=probs, deficit=max(0.0, 1.0 - float(probs.sum())))

    def mean(self) -> float:
        return float(np.dot(np.arange(self.probs.size), self.probs))

    def padded(self, size: int) -> np.ndarray:
        """Probabilities zero-padded (never truncated) to at least `size` entries."""
        out = np.zeros(max(size, self.probs.size))
        out[: self.probs.size] = self.probs
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {"probs": [float(p) for p in self.probs], "deficit": float(self.deficit)}


@dataclass(frozen=True)
class Efficiency:
    """Detector quantum efficiency η ∈ (0, 1]."""
    eta: float

    def __post_init__(self) -> None:
        if not (0.0 < float(self.eta) <= 1.0):
            raise InvalidArgumentError(f"Efficiency: eta {self.eta} outside (0, 1]")
        object.__setattr__(self, "eta", float(self.eta))

    @property
    def is_ideal(self) -> bool:
        return self.eta == 1.0

    @property
    def noise_gain(self) -> float:
        """√((1−η)/η), the weight of the vacuum-ancilla quadratures."""
        return float(np.sqrt((1.0 - self.eta) / self.eta))


def as_efficiency(eta: "float | Efficiency") -> Efficiency:
    return eta if isinstance(eta, Efficiency) else Efficiency(float(eta))


@dataclass(frozen=True, eq=False)
class JointCountDistribution:
    """Joint count probabilities over several detectors (one axis per detector)."""

    probs: np.ndarray       # Shape: [N_1, ..., N_K]
    deficit: float = 0.0

    def __post_init__(self) -> None:
        probs = np.clip(np.asarray(self.probs, dtype=np.float64), 0.0, None)
        validate_finite_array(probs, "JointCountDistribution")
        total = float(probs.sum())
        if total > 1.0 + MASS_TOLERANCE:
            raise InvalidArgumentError(f"JointCountDistribution: total mass {total} exceeds 1")
        object.__setattr__(self, "probs", freeze_array(probs))
        object.__setattr__(self, "deficit", max(0.0, float(self.deficit)))

    @property
    def num_detectors(self) -> int:
        return int(self.probs.ndim)

    def marginal(self, detector: int) -> CountDistribution:
        axes = tuple(k for k in range(self.probs.ndim) if k != detector)
        return CountDistribution(probs=self.probs.sum(axis=axes), deficit=self.deficit)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Joint inverse-CDF draws, shape [n, K]."""
        flat = self.probs.reshape(-1)
        cdf = np.cumsum(flat)
        cdf /= cdf[-1]
        index = np.minimum(np.searchsorted(cdf, rng.random(n), side="right"), flat.size - 1)
        return np.stack(np.unravel_index(index, self.probs.shape), axis=1).astype(np.int64)
