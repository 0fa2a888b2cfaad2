#!/usr/bin/env python3
"""
Truncated Fock-space linear algebra: canonical bosonic operators, standard
states, tensor products and partial traces.

Every constructor takes an explicit cutoff (basis |0⟩..|cutoff−1⟩). Matrices are
dense; the target dimensions stay far below the point where sparse storage pays
off, except in linopt.apply_network.
"""

import logging
import math
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from schemas.fock_state import DensityOperator, FockVector, ModeOperator
from utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

FockObject = Union[FockVector, DensityOperator, ModeOperator]


def _require_cutoff(cutoff: int, minimum: int, context: str) -> int:
    cutoff = int(cutoff)
    if cutoff < minimum:
        raise InvalidArgumentError(f"{context}: cutoff must be >= {minimum}, got {cutoff}")
    return cutoff


def coherent_cutoff(z: complex) -> int:
    """Cutoff keeping the Poisson tail of |z⟩ below ~1e−8: ceil(|z|² + 6|z| + 10)."""
    r = abs(z)
    return int(math.ceil(r * r + 6.0 * r + 10.0))


# ---------------------------------------------------------------------------
# Canonical operators
# ---------------------------------------------------------------------------

def annihilation(cutoff: int) -> ModeOperator:
    """a with entries √n at (n−1, n)."""
    cutoff = _require_cutoff(cutoff, 2, "annihilation")
    matrix = np.diag(np.sqrt(np.arange(1, cutoff, dtype=np.float64)), k=1)
    return ModeOperator((cutoff,), matrix, label="a")


def creation(cutoff: int) -> ModeOperator:
    cutoff = _require_cutoff(cutoff, 2, "creation")
    matrix = np.diag(np.sqrt(np.arange(1, cutoff, dtype=np.float64)), k=-1)
    return ModeOperator((cutoff,), matrix, label="a†")


def number_operator(cutoff: int) -> ModeOperator:
    cutoff = _require_cutoff(cutoff, 1, "number_operator")
    return ModeOperator((cutoff,), np.diag(np.arange(cutoff, dtype=np.float64)),
                        hermitian=True, label="n")


def identity(cutoffs: Sequence[int]) -> ModeOperator:
    cutoffs = tuple(int(c) for c in cutoffs)
    return ModeOperator(cutoffs, np.eye(int(np.prod(cutoffs))), hermitian=True, label="1")


def quadrature(phi: float, cutoff: int) -> ModeOperator:
    """â(φ) = (a†e^{iφ} + a e^{−iφ})/2; vacuum variance 1/4."""
    a = annihilation(cutoff).matrix
    matrix = 0.5 * (a.conj().T * np.exp(1j * phi) + a * np.exp(-1j * phi))
    return ModeOperator((cutoff,), matrix, hermitian=True, label=f"a({phi:.4g})")


def displacement(gamma: complex, cutoff: int) -> ModeOperator:
    """
    D(γ) = exp(γa† − γ̄a) by dense scaling-and-squaring.

    Unitary only up to truncation: rows/columns near the top level are corrupted,
    low-lying states are accurate while |γ|² stays well below the cutoff.
    """
    a = annihilation(cutoff).matrix
    generator = gamma * a.conj().T - np.conj(gamma) * a
    return ModeOperator((cutoff,), expm(generator), label="D")


def displacement_closed_form(gamma: complex, cutoff: int) -> ModeOperator:
    """
    Untruncated matrix elements ⟨m|D(γ)|n⟩ via generalized Laguerre polynomials.
    Used as an independent oracle for displacement().
    """
    cutoff = _require_cutoff(cutoff, 1, "displacement_closed_form")
    x = abs(gamma) ** 2
    prefactor = np.exp(-x / 2.0)
    matrix = np.zeros((cutoff, cutoff), dtype=np.complex128)
    for m in range(cutoff):
        for n in range(cutoff):
            if m >= n:
                ratio = np.exp(0.5 * (gammaln(n + 1) - gammaln(m + 1)))
                matrix[m, n] = (ratio * gamma ** (m - n) * prefactor
                                * eval_genlaguerre(n, m - n, x))
            else:
                ratio = np.exp(0.5 * (gammaln(m + 1) - gammaln(n + 1)))
                matrix[m, n] = (ratio * (-np.conj(gamma)) ** (n - m) * prefactor
                                * eval_genlaguerre(m, n - m, x))
    return ModeOperator((cutoff,), matrix, label="D")


def embed(op: ModeOperator, mode: int, cutoffs: Sequence[int]) -> ModeOperator:
    """Single-mode operator acting on `mode` of a multimode space."""
    cutoffs = tuple(int(c) for c in cutoffs)
    if not 0 <= mode < len(cutoffs):
        raise InvalidArgumentError(f"embed: mode {mode} outside {len(cutoffs)} modes")
    if op.cutoffs != (cutoffs[mode],):
        raise InvalidArgumentError(
            f"embed: operator cutoff {op.cutoffs} != mode cutoff {cutoffs[mode]}"
        )
    left = int(np.prod(cutoffs[:mode]))
    right = int(np.prod(cutoffs[mode + 1:]))
    matrix = np.kron(np.kron(np.eye(left), op.matrix), np.eye(right))
    return ModeOperator(cutoffs, matrix, hermitian=op.hermitian, label=op.label)


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

def fock_vector(n: int, cutoff: int) -> FockVector:
    """Number state |n⟩."""
    if not 0 <= n < cutoff:
        raise InvalidArgumentError(f"fock_vector: n={n} needs cutoff > n, got {cutoff}")
    amplitudes = np.zeros(cutoff, dtype=np.complex128)
    amplitudes[n] = 1.0
    return FockVector((cutoff,), amplitudes)


def coherent_vector(z: complex, cutoff: int) -> FockVector:
    """
    Coherent state amplitudes c_n = exp(−|z|²/2) zⁿ/√(n!), truncated.

    Warns (does not raise) when |z|² + 6|z| ≥ cutoff; the lost mass is reported by
    the returned vector's truncation_error.
    """
    cutoff = _require_cutoff(cutoff, 1, "coherent_vector")
    r = abs(z)
    if r * r + 6.0 * r >= cutoff:
        logger.warning(
            f"coherent_vector: cutoff {cutoff} is small for |z|={r:.4g}; "
            f"suggested {coherent_cutoff(z)}"
        )
    n = np.arange(cutoff)
    if r == 0.0:
        amplitudes = np.zeros(cutoff, dtype=np.complex128)
        amplitudes[0] = 1.0
    else:
        log_mag = -0.5 * r * r + n * np.log(r) - 0.5 * gammaln(n + 1)
        amplitudes = np.exp(log_mag) * np.exp(1j * n * np.angle(z))
    vector = FockVector((cutoff,), amplitudes)
    if vector.truncation_error > 1e-8:
        logger.debug(f"coherent_vector: truncation_error={vector.truncation_error:.3e}")
    return vector


def coherent_density(z: complex, cutoff: int) -> DensityOperator:
    return DensityOperator.from_vector(coherent_vector(z, cutoff))


def fock_density(n: int, cutoff: int) -> DensityOperator:
    return DensityOperator.from_vector(fock_vector(n, cutoff))


def thermal_density(mean: float, cutoff: int) -> DensityOperator:
    """Geometric photon-number distribution with mean n̄, truncated."""
    if mean < 0:
        raise InvalidArgumentError(f"thermal_density: mean {mean} < 0")
    cutoff = _require_cutoff(cutoff, 1, "thermal_density")
    if mean == 0:
        probs = np.zeros(cutoff)
        probs[0] = 1.0
    else:
        ratio = mean / (1.0 + mean)
        probs = (1.0 - ratio) * ratio ** np.arange(cutoff)
    return DensityOperator((cutoff,), np.diag(probs))


def thermal_cutoff(mean: float, tail: float = 1e-10) -> int:
    """Smallest cutoff with geometric tail mass below `tail`."""
    if mean <= 0:
        return 1
    ratio = mean / (1.0 + mean)
    return int(math.ceil(math.log(tail) / math.log(ratio)))


def diagonal_density(probs: Sequence[float]) -> DensityOperator:
    probs = np.asarray(probs, dtype=np.float64)
    return DensityOperator((probs.size,), np.diag(probs))


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------

def tensor(items: Sequence[FockObject]) -> FockObject:
    """Kronecker product in declared mode order; all items must share a kind."""
    if not items:
        raise InvalidArgumentError("tensor: empty list")
    kind = type(items[0])
    if any(type(item) is not kind for item in items):
        kinds = sorted({type(item).__name__ for item in items})
        raise InvalidArgumentError(f"tensor: mixed kinds {kinds}")

    cutoffs: Tuple[int, ...] = tuple(c for item in items for c in item.cutoffs)
    if kind is FockVector:
        amplitudes = items[0].amplitudes
        for item in items[1:]:
            amplitudes = np.kron(amplitudes, item.amplitudes)
        return FockVector(cutoffs, amplitudes)

    matrix = items[0].matrix
    for item in items[1:]:
        matrix = np.kron(matrix, item.matrix)
    if kind is DensityOperator:
        return DensityOperator(cutoffs, matrix)
    hermitian = all(item.hermitian for item in items)
    return ModeOperator(cutoffs, matrix, hermitian=hermitian)


def partial_trace(rho: DensityOperator, keep: Sequence[int]) -> DensityOperator:
    """Reduced state on `keep` (in the order given)."""
    keep = [int(k) for k in keep]
    n_modes = rho.num_modes
    if not keep or len(set(keep)) != len(keep):
        raise InvalidArgumentError(f"partial_trace: keep must be non-empty and unique, got {keep}")
    if any(k < 0 or k >= n_modes for k in keep):
        raise InvalidArgumentError(f"partial_trace: keep {keep} outside {n_modes} modes")

    tensor_form = np.asarray(rho.matrix).reshape(rho.cutoffs + rho.cutoffs)
    current = n_modes
    for mode in sorted(set(range(n_modes)) - set(keep), reverse=True):
        tensor_form = np.trace(tensor_form, axis1=mode, axis2=mode + current)
        current -= 1

    kept_sorted = sorted(keep)
    order = [kept_sorted.index(k) for k in keep]
    tensor_form = tensor_form.transpose(order + [o + len(keep) for o in order])
    cutoffs = tuple(rho.cutoffs[k] for k in keep)
    dim = int(np.prod(cutoffs))
    return DensityOperator(cutoffs, tensor_form.reshape(dim, dim))


def expectation(rho: DensityOperator, op: ModeOperator) -> complex:
    """Tr(ρ·op)."""
    if rho.cutoffs != op.cutoffs:
        raise InvalidArgumentError(f"expectation: cutoffs {rho.cutoffs} vs {op.cutoffs}")
    return complex(np.trace(rho.matrix @ op.matrix))


def pure_ensemble(rho: DensityOperator, floor: float = 1e-14) -> List[Tuple[float, np.ndarray]]:
    """Eigen-ensemble (weight, vector) of ρ, dropping weights below `floor`."""
    weights, vectors = np.linalg.eigh(np.asarray(rho.matrix))
    return [
        (float(w), vectors[:, i])
        for i, w in enumerate(weights)
        if w > floor
    ]
