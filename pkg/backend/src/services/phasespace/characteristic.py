#!/usr/bin/env python3
"""
Characteristic and Wigner functions of single-mode states.

χ(γ) = Tr[ρ D(γ)] is evaluated from one eigendecomposition of the generator
P = i(a† − a): with γ = r e^{iθ},
    D(γ) = R(θ) e^{−irP} R(θ)†,   R(θ) = e^{iθ a†a},
so each grid point costs a phase sum instead of a matrix exponential.

The Wigner function (and the propensity) follow from one transform,
    F(α) = (1/π²) ∫ f(λ) e^{λ̄α − λᾱ} d²λ,
normalized so that ∫ W d²α = 1 (vacuum W(0) = 2/π).
"""

import logging
import math
from typing import Tuple

import numpy as np

from core.fockcore import annihilation
from schemas.fock_state import DensityOperator
from schemas.phase_space import GridGeometry, GridKind, PhaseSpaceGrid
from utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

BOUNDARY_TOLERANCE = 1e-4
POINT_BLOCK = 4096


def characteristic_cutoff(cutoff: int) -> float:
    """|γ| beyond which χ is treated as zero: 2√N + 6."""
    return 2.0 * math.sqrt(cutoff) + 6.0


def working_cutoff(cutoff: int) -> int:
    """Cutoff on which the displacement generator is diagonalized."""
    return int(math.ceil((characteristic_cutoff(cutoff) + math.sqrt(cutoff) + 5.0) ** 2))


def _single_mode(rho: DensityOperator, context: str) -> np.ndarray:
    if rho.num_modes != 1:
        raise InvalidArgumentError(f"{context}: single-mode state required, got {rho.num_modes} modes")
    return np.asarray(rho.matrix)


def _diagonal_blocks(rho: np.ndarray, vectors: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    B[k, d] = Σ_{m−n=d} ρ_nm V_mk conj(V_nk) for offsets d = −(N−1)..N−1.
    """
    n = rho.shape[0]
    v = vectors[:n, :]                                  # [N, K]
    offsets = np.arange(-(n - 1), n)
    # outer[n, m, k] = ρ_nm V_mk conj(V_nk); summing the offset diagonals gives B
    outer = rho[:, :, None] * v[None, :, :] * np.conj(v)[:, None, :]
    blocks = np.stack(
        [np.trace(outer, offset=int(d), axis1=0, axis2=1) for d in offsets], axis=1
    )                                                   # [K, D]
    return offsets, blocks


def characteristic_values(rho: DensityOperator, points: np.ndarray) -> np.ndarray:
    """
    χ at arbitrary complex points (any shape); zero beyond characteristic_cutoff.
    """
    matrix = _single_mode(rho, "characteristic_values")
    cutoff = matrix.shape[0]
    points = np.asarray(points, dtype=np.complex128)
    flat = points.reshape(-1)
    radius_limit = characteristic_cutoff(cutoff)

    result = np.zeros(flat.size, dtype=np.complex128)
    if cutoff == 1:
        inside = np.abs(flat) <= radius_limit
        result[inside] = matrix[0, 0] * np.exp(-0.5 * np.abs(flat[inside]) ** 2)
        return result.reshape(points.shape)

    n_work = working_cutoff(cutoff)
    a = np.asarray(annihilation(n_work).matrix)
    generator = 1j * (a.conj().T - a)
    eigenvalues, eigenvectors = np.linalg.eigh(generator)
    offsets, blocks = _diagonal_blocks(matrix, eigenvectors)
    logger.debug(
        f"characteristic_values: cutoff {cutoff}, working cutoff {n_work}, {flat.size} points"
    )

    radii = np.abs(flat)
    angles = np.angle(flat)
    inside = np.flatnonzero(radii <= radius_limit)
    for start in range(0, inside.size, POINT_BLOCK):
        idx = inside[start:start + POINT_BLOCK]
        rotations = np.exp(1j * np.outer(angles[idx], offsets))          # [P, D]
        projected = rotations @ blocks.T                                  # [P, K]
        phases = np.exp(-1j * np.outer(radii[idx], eigenvalues))          # [P, K]
        result[idx] = np.sum(phases * projected, axis=1)
    return result.reshape(points.shape)


def _check_boundary(values: np.ndarray, geometry: GridGeometry, cutoff: int, context: str) -> None:
    """Warn when χ has not decayed at the edge of the λ grid or at the radial cutoff."""
    radii = np.abs(geometry.dual_mesh())
    edge = min(characteristic_cutoff(cutoff), float(np.max(np.abs(geometry.dual_axis()))))
    ring = radii >= 0.95 * edge
    leakage = float(np.max(np.abs(values[ring]))) if np.any(ring) else 0.0
    if leakage > BOUNDARY_TOLERANCE:
        logger.warning(
            f"{context}: |chi| = {leakage:.2e} near the boundary; widen the grid resolution"
        )


def characteristic_function(rho: DensityOperator, geometry: GridGeometry) -> PhaseSpaceGrid:
    """χ(γ) = Tr[ρ D(γ)] on the dual (λ) grid."""
    values = characteristic_values(rho, geometry.dual_mesh())
    _check_boundary(values, geometry, rho.cutoff, "characteristic_function")
    return PhaseSpaceGrid(geometry=geometry, values=values, kind=GridKind.CHARACTERISTIC)


def symplectic_fourier_transform(values: np.ndarray, geometry: GridGeometry) -> np.ndarray:
    """
    F(α) = (1/π²) ∫ f(λ) e^{λ̄α − λᾱ} d²λ from λ-grid samples to the α grid.

    With 2·dλ·h = 2π/M the kernel separates into one FFT along Im λ and one
    inverse FFT along Re λ, up to alternating signs. The unpaired Nyquist row
    and column (a = 0, b = 0) are dropped.
    """
    m = geometry.points_per_axis
    f = np.array(values, dtype=np.complex128)
    if f.shape != (m, m):
        raise InvalidArgumentError(f"symplectic_fourier_transform: shape {f.shape} != ({m}, {m})")
    f[0, :] = 0.0
    f[:, 0] = 0.0
    signs = (-1.0) ** np.arange(m)
    g = f * np.outer(signs, signs)
    h = np.fft.fft(g, axis=1)                   # Σ_b e^{−2πi b j/M}: index [a, j]
    k = m * np.fft.ifft(h, axis=0)              # Σ_a e^{+2πi a k/M}: index [k, j]
    scale = geometry.dual_spacing ** 2 / math.pi ** 2
    return scale * np.outer(signs, signs) * k.T


def wigner_function(rho: DensityOperator, geometry: GridGeometry) -> PhaseSpaceGrid:
    """W(α) as the transform of χ; ∫ W d²α = 1."""
    chi = characteristic_function(rho, geometry)
    values = symplectic_fourier_transform(np.asarray(chi.values), geometry)
    grid = PhaseSpaceGrid(
        geometry=geometry,
        values=values,
        kind=GridKind.WIGNER,
        imag_residue=float(np.max(np.abs(values.imag))),
    )
    logger.debug(f"wigner_function: mass {grid.total_mass():.6f}, min {grid.min_value():.4f}")
    return grid


def direct_transform(values: np.ndarray, geometry: GridGeometry) -> np.ndarray:
    """O(M⁴) quadrature of the same transform; small grids only (test oracle)."""
    m = geometry.points_per_axis
    if m > 32:
        raise InvalidArgumentError(f"direct_transform: {m} points per axis is too many")
    f = np.array(values, dtype=np.complex128)
    f[0, :] = 0.0
    f[:, 0] = 0.0
    lam = geometry.dual_mesh().reshape(-1)
    alpha = geometry.mesh().reshape(-1)
    kernel = np.exp(np.outer(alpha, np.conj(lam)) - np.outer(np.conj(alpha), lam))
    return (kernel @ f.reshape(-1)).reshape(m, m) * geometry.dual_spacing ** 2 / math.pi ** 2
