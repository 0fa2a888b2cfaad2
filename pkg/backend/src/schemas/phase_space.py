#!/usr/bin/env python3
"""
Phase-space grid records.

An α-grid covers Re, Im ∈ [−L, L) with M points per axis,
    x_j = −L + j·h,  h = 2L/M,
and values are indexed [i_re, i_im]. Characteristic functions live on the dual
grid u_a = (a − M/2)·dλ with dλ = π/(2L), the spacing that makes one FFT pair
the two grids.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple

import numpy as np
from scipy.integrate import trapezoid

from utils.errors import InvalidArgumentError
from utils.numpy_utils import freeze_array, validate_finite_array

logger = logging.getLogger(__name__)

IMAG_RESIDUE_TOLERANCE = 1e-9
NEGATIVE_RIPPLE_TOLERANCE = -1e-6


class GridKind(Enum):
    CHARACTERISTIC = "characteristic"
    WIGNER = "wigner"
    PROPENSITY = "propensity"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class GridGeometry:
    """Extent and resolution shared by paired α/λ grids."""
    half_extent: float
    points_per_axis: int

    def __post_init__(self) -> None:
        context = f"GridGeometry(L={self.half_extent}, M={self.points_per_axis})"
        if not (math.isfinite(self.half_extent) and self.half_extent > 0):
            raise InvalidArgumentError(f"{context}: half extent must be positive")
        m = int(self.points_per_axis)
        if m < 4 or m & (m - 1):
            raise InvalidArgumentError(f"{context}: points per axis must be a power of two >= 4")
        object.__setattr__(self, "half_extent", float(self.half_extent))
        object.__setattr__(self, "points_per_axis", m)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / self.points_per_axis

    @property
    def dual_spacing(self) -> float:
        return math.pi / (2.0 * self.half_extent)

    def axis(self) -> np.ndarray:
        return -self.half_extent + self.spacing * np.arange(self.points_per_axis)

    def dual_axis(self) -> np.ndarray:
        m = self.points_per_axis
        return (np.arange(m) - m // 2) * self.dual_spacing

    def mesh(self) -> np.ndarray:
        """Complex α values, shape [M, M] indexed [i_re, i_im]."""
        x = self.axis()
        re, im = np.meshgrid(x, x, indexing="ij")
        return re + 1j * im

    def dual_mesh(self) -> np.ndarray:
        u = self.dual_axis()
        re, im = np.meshgrid(u, u, indexing="ij")
        return re + 1j * im

    def bin_edges(self) -> np.ndarray:
        """Histogram edges x_j ± h/2 (M + 1 values)."""
        return -self.half_extent - 0.5 * self.spacing + self.spacing * np.arange(self.points_per_axis + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {"half_extent": self.half_extent, "points_per_axis": self.points_per_axis}


@dataclass(frozen=True, eq=False)
class PhaseSpaceGrid:
    """Values of χ, W, K or an empirical density on a square grid."""

    geometry: GridGeometry
    values: np.ndarray          # Shape: [M, M], indexed [i_re, i_im]
    kind: GridKind
    imag_residue: float = 0.0
    outside_fraction: float = 0.0   # Empirical grids: samples beyond the extent

    def __post_init__(self) -> None:
        context = f"PhaseSpaceGrid({self.kind.value})"
        m = self.geometry.points_per_axis
        values = np.asarray(self.values)
        if values.shape != (m, m):
            raise InvalidArgumentError(f"{context}: values shape {values.shape} != ({m}, {m})")
        validate_finite_array(values, context)

        residue = float(self.imag_residue)
        if self.kind is GridKind.CHARACTERISTIC:
            values = values.astype(np.complex128)
        else:
            if np.iscomplexobj(values):
                residue = max(residue, float(np.max(np.abs(values.imag))))
                values = values.real
            values = values.astype(np.float64)
            if residue > IMAG_RESIDUE_TOLERANCE:
                logger.warning(f"{context}: imaginary residue {residue:.3e} above {IMAG_RESIDUE_TOLERANCE}")
        if not 0.0 <= self.outside_fraction <= 1.0:
            raise InvalidArgumentError(f"{context}: outside fraction {self.outside_fraction} not in [0, 1]")
        object.__setattr__(self, "values", freeze_array(values))
        object.__setattr__(self, "imag_residue", residue)

    @property
    def half_extent(self) -> float:
        return self.geometry.half_extent

    @property
    def points_per_axis(self) -> int:
        return self.geometry.points_per_axis

    def total_mass(self) -> float:
        """∫ values d²α (trapezoid), or the plain bin sum for empirical densities."""
        if self.kind is GridKind.CHARACTERISTIC:
            raise InvalidArgumentError("total_mass: not defined for characteristic grids")
        h = self.geometry.spacing
        if self.kind is GridKind.EMPIRICAL:
            return float(self.values.sum() * h * h)
        return float(trapezoid(trapezoid(self.values, dx=h, axis=1), dx=h))

    def min_value(self) -> float:
        return float(np.min(self.values.real))

    def moments(self) -> Tuple[np.ndarray, np.ndarray]:
        """Mean (Re, Im) and 2×2 covariance of the normalized distribution."""
        weights = self.values.real
        mass = float(weights.sum())
        if mass <= 0:
            raise InvalidArgumentError("moments: grid carries no positive mass")
        alpha = self.geometry.mesh()
        coords = np.stack([alpha.real.reshape(-1), alpha.imag.reshape(-1)])
        w = weights.reshape(-1) / mass
        mean = coords @ w
        centred = coords - mean[:, None]
        covariance = (centred * w[None, :]) @ centred.T
        return mean, covariance

    def marginal(self, axis: int = 0) -> np.ndarray:
        """Density of Re α (axis=0) or Im α (axis=1), integrated over the other."""
        if axis not in (0, 1):
            raise InvalidArgumentError(f"marginal: axis {axis} not in (0, 1)")
        return trapezoid(self.values.real, dx=self.geometry.spacing, axis=1 - axis)

    def is_compatible(self, other: "PhaseSpaceGrid") -> bool:
        return self.geometry == other.geometry

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            **self.geometry.to_dict(),
            "imag_residue": self.imag_residue,
            "outside_fraction": self.outside_fraction,
        }
