#!/usr/bin/env python3
"""
Probe-filtered output distributions (propensities) of a two-photocurrent device.

In the characteristic domain the device statistics factor as
    Ξ(γ) = χ_a(γ) · χ_b(−γ̄) · e^{−(1−η)|γ|²/η},
with signal a, probe (idler) b and efficiency η. One transform then yields K.
The probe enters at −γ̄, i.e. its Wigner function reflected through the real
axis, so that K has mean ⟨a⟩ + conj⟨b⟩ like the sampled Z = a + b†.
η = 1 skips the Gaussian factor.

Direct-space counterparts (grid convolutions, Husimi Q, the normalized G_η)
serve as oracles.
"""

import logging
import math
from typing import Optional, Union

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.signal import fftconvolve

from core.fockcore import annihilation
from schemas.counts import Efficiency, as_efficiency
from schemas.fock_state import DensityOperator
from schemas.phase_space import (
    NEGATIVE_RIPPLE_TOLERANCE,
    GridGeometry,
    GridKind,
    PhaseSpaceGrid,
)
from services.phasespace.characteristic import characteristic_values, symplectic_fourier_transform
from utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 256
MIN_HALF_EXTENT = 6.0
EXTENT_MARGIN = 5.0
NORMALIZATION_TOLERANCE = 5e-3


def mean_field(rho: DensityOperator) -> complex:
    """⟨a⟩ of a single-mode state."""
    if rho.num_modes != 1:
        raise InvalidArgumentError("mean_field: single-mode state required")
    if rho.cutoff == 1:
        return 0j
    a = np.asarray(annihilation(rho.cutoff).matrix)
    return complex(np.trace(np.asarray(rho.matrix) @ a))


def default_geometry(
    signal: DensityOperator,
    probe: DensityOperator,
    points_per_axis: int = DEFAULT_POINTS,
) -> GridGeometry:
    """L = max(6, |centroid| + 5) with centroid ⟨a⟩ + conj⟨b⟩."""
    centroid = mean_field(signal) + np.conj(mean_field(probe))
    return GridGeometry(max(MIN_HALF_EXTENT, abs(centroid) + EXTENT_MARGIN), points_per_axis)


def propensity(
    signal: DensityOperator,
    probe: DensityOperator,
    geometry: Optional[GridGeometry] = None,
    eta: Union[float, Efficiency] = 1.0,
) -> PhaseSpaceGrid:
    """
    K_η on the α grid from the product of characteristic functions.

    Raises:
        InvalidArgumentError: η outside (0, 1] or non-single-mode inputs
    """
    efficiency = as_efficiency(eta)
    geometry = geometry or default_geometry(signal, probe)
    gamma = geometry.dual_mesh()

    xi = characteristic_values(signal, gamma) * characteristic_values(probe, -np.conj(gamma))
    if not efficiency.is_ideal:
        xi = xi * np.exp(-(1.0 - efficiency.eta) * np.abs(gamma) ** 2 / efficiency.eta)

    values = symplectic_fourier_transform(xi, geometry)
    grid = PhaseSpaceGrid(
        geometry=geometry,
        values=values,
        kind=GridKind.PROPENSITY,
        imag_residue=float(np.max(np.abs(values.imag))),
    )

    mass = grid.total_mass()
    if abs(mass - 1.0) > NORMALIZATION_TOLERANCE:
        logger.warning(f"propensity: grid mass {mass:.5f} deviates from 1 by more than 0.5%")
    if grid.min_value() < NEGATIVE_RIPPLE_TOLERANCE:
        logger.warning(f"propensity: negative ripple {grid.min_value():.2e}")
    logger.debug(
        f"propensity: eta={efficiency.eta}, L={geometry.half_extent}, "
        f"M={geometry.points_per_axis}, mass={mass:.6f}"
    )
    return grid


def gaussian_filter(eta: Union[float, Efficiency], geometry: GridGeometry) -> PhaseSpaceGrid:
    """G_η(α) = η/(π(1−η)) · exp(−η|α|²/(1−η)); undefined at η = 1."""
    efficiency = as_efficiency(eta)
    if efficiency.is_ideal:
        raise InvalidArgumentError("gaussian_filter: G_eta degenerates to a delta at eta = 1")
    ratio = efficiency.eta / (1.0 - efficiency.eta)
    values = ratio / math.pi * np.exp(-ratio * np.abs(geometry.mesh()) ** 2)
    return PhaseSpaceGrid(geometry=geometry, values=values, kind=GridKind.PROPENSITY)


def reflect_conjugate(grid: PhaseSpaceGrid) -> np.ndarray:
    """values(ᾱ): Im index j ↦ M − j (mod M), matching x_j ↦ −x_j on the grid."""
    return np.roll(np.flip(np.asarray(grid.values), axis=1), 1, axis=1)


def convolve_grids(a: PhaseSpaceGrid, b: PhaseSpaceGrid, kind: GridKind = GridKind.PROPENSITY) -> PhaseSpaceGrid:
    """(a ⋆ b)(α) = ∫ a(β) b(α − β) d²β on the shared α grid."""
    if not a.is_compatible(b):
        raise InvalidArgumentError("convolve_grids: grid geometries differ")
    m = a.points_per_axis
    h = a.geometry.spacing
    full = fftconvolve(np.asarray(a.values), np.asarray(b.values), mode="full")
    values = full[m // 2:m // 2 + m, m // 2:m // 2 + m] * h * h
    return PhaseSpaceGrid(geometry=a.geometry, values=values, kind=kind)


def propensity_by_convolution(
    signal_wigner: PhaseSpaceGrid,
    probe_wigner: PhaseSpaceGrid,
    eta: Union[float, Efficiency] = 1.0,
) -> PhaseSpaceGrid:
    """K_η = [W_a ⋆ W_b(conj ·)] ⋆ G_η directly on the grid."""
    efficiency = as_efficiency(eta)
    reflected = PhaseSpaceGrid(
        geometry=probe_wigner.geometry, values=reflect_conjugate(probe_wigner), kind=GridKind.WIGNER
    )
    grid = convolve_grids(signal_wigner, reflected)
    if not efficiency.is_ideal:
        grid = convolve_grids(grid, gaussian_filter(efficiency, grid.geometry))
    return grid


def husimi_q(rho: DensityOperator, geometry: GridGeometry) -> PhaseSpaceGrid:
    """Q(α) = (1/π)⟨α|ρ|α⟩, evaluated directly."""
    if rho.num_modes != 1:
        raise InvalidArgumentError("husimi_q: single-mode state required")
    matrix = np.asarray(rho.matrix)
    cutoff = matrix.shape[0]
    alpha = geometry.mesh().reshape(-1)

    coherent = np.empty((alpha.size, cutoff), dtype=np.complex128)
    coherent[:, 0] = np.exp(-0.5 * np.abs(alpha) ** 2)
    for n in range(1, cutoff):
        coherent[:, n] = coherent[:, n - 1] * alpha / math.sqrt(n)

    overlap = np.sum(np.conj(coherent) * (coherent @ matrix.T), axis=1).real / math.pi
    m = geometry.points_per_axis
    return PhaseSpaceGrid(geometry=geometry, values=overlap.reshape(m, m), kind=GridKind.PROPENSITY)


def rotation_variation(grid: PhaseSpaceGrid, radius: float = 1.0, samples: int = 360) -> float:
    """max − min of the grid interpolated on the circle |α| = radius."""
    axis = grid.geometry.axis()
    interpolator = RegularGridInterpolator((axis, axis), np.asarray(grid.values), method="cubic")
    angles = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    points = np.stack([radius * np.cos(angles), radius * np.sin(angles)], axis=1)
    values = interpolator(points)
    return float(values.max() - values.min())


def value_at(grid: PhaseSpaceGrid, alpha: complex) -> float:
    """Linear interpolation of the grid at one point."""
    axis = grid.geometry.axis()
    interpolator = RegularGridInterpolator((axis, axis), np.asarray(grid.values))
    return float(interpolator([[alpha.real, alpha.imag]])[0])
