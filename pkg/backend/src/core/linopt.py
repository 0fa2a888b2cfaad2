#!/usr/bin/env python3
"""
Passive linear-optical networks: beam splitters, the canonical four- and
three-port couplers, the triple-coupler element decomposition, and lifting
scattering matrices to unitaries on truncated multimode Fock spaces.

Lifting exponentiates the quadratic generator Ĥ = Σ h_kl a†_k a_l with
S = exp(i h). With that choice U a†_k U† = Σ_l S_lk a†_l, so a photon entering
port k leaves in port l with amplitude S_lk, the same map S applies to coherent
amplitudes. The lift is exact on every sector whose total photon number is below
the smallest per-mode cutoff.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm, schur
from scipy.sparse.linalg import expm_multiply

from core.fockcore import annihilation
from schemas.fock_state import FockVector, ModeOperator
from schemas.optics import BeamSplitter, ElementSequence, PhaseFit, PhaseShifter, ScatteringMatrix
from utils.errors import InvalidArgumentError, ResourceLimitError
from utils.settings import get_settings

logger = logging.getLogger(__name__)

TRIPLE_COUPLER_ANGLE = math.acos(1.0 / 3.0)


# ---------------------------------------------------------------------------
# Scattering matrices
# ---------------------------------------------------------------------------

def beamsplitter_matrix(tau: float) -> ScatteringMatrix:
    """2×2 S = [[√τ, √(1−τ)], [−√(1−τ), √τ]]."""
    if not 0.0 <= tau <= 1.0:
        raise InvalidArgumentError(f"beamsplitter_matrix: tau {tau} outside [0, 1]")
    return ScatteringMatrix(BeamSplitter((0, 1), tau).block())


def phase_shifter_matrix(angle: float) -> ScatteringMatrix:
    return ScatteringMatrix(np.array([[np.exp(1j * angle)]]))


def discrete_fourier_matrix(size: int, inverse: bool = False) -> ScatteringMatrix:
    """
    Unitary DFT F_kl = e^{±2πi kl/size}/√size (+ by default, − when inverse).
    Size 4 uses exact powers of i.
    """
    if size < 1:
        raise InvalidArgumentError(f"discrete_fourier_matrix: size {size} < 1")
    k = np.arange(size)
    exponents = np.outer(k, k) % size
    if size == 4:
        powers = np.array([1, 1j, -1, -1j], dtype=np.complex128)
        entries = powers[exponents] if not inverse else powers[(-exponents) % 4]
    else:
        sign = -1.0 if inverse else 1.0
        entries = np.exp(sign * 2j * np.pi * exponents / size)
    return ScatteringMatrix(entries / np.sqrt(size))


def eightport_matrix() -> ScatteringMatrix:
    """
    Canonical 4×4 coupler: (1/2)[[1,1,1,1],[1,i,−1,−i],[1,−1,1,−1],[1,−i,−1,i]].

    Row 3 is the unitary 4-point DFT row (1, −1, 1, −1); the printed row
    (1, −1, i, −1) is not unitary.
    """
    return discrete_fourier_matrix(4)


def triple_coupler_matrix() -> ScatteringMatrix:
    """Symmetric 3×3 coupler (1/√3)·ω^{kl}, ω = e^{2πi/3}."""
    return discrete_fourier_matrix(3)


def triple_coupler_decomposition() -> ElementSequence:
    """
    Four 50:50 beam splitters and two phase shifters realising the symmetric
    triple coupler up to external phases. Modes 0, 1, 2 are the three lines
    top to bottom.

    The Mach–Zehnder arm between the two upper splitters carries φ₁ = arccos(1/3)
    (this fixes |S_0l| = 1/√3); the lower arm carries φ₁/2, which makes the
    remaining rows balanced.
    """
    phi1 = TRIPLE_COUPLER_ANGLE
    elements = (
        BeamSplitter((1, 2), 0.5),
        PhaseShifter(2, phi1 / 2.0),
        BeamSplitter((0, 1), 0.5),
        PhaseShifter(0, phi1),
        BeamSplitter((0, 1), 0.5),
        BeamSplitter((1, 2), 0.5),
    )
    return ElementSequence(num_modes=3, elements=elements)


def fit_external_phases(composed: ScatteringMatrix, target: ScatteringMatrix) -> PhaseFit:
    """
    Diagonal phases with diag(e^{iβ}) · composed · diag(e^{iα}) ≈ target.

    Input phases are fixed from the first row, output phases from the first
    column; the residual measures how well the remaining entries agree.
    """
    c = np.asarray(composed.entries)
    t = np.asarray(target.entries)
    if c.shape != t.shape:
        raise InvalidArgumentError(f"fit_external_phases: shapes {c.shape} vs {t.shape}")
    if np.min(np.abs(c[0, :])) < 1e-12 or np.min(np.abs(c[:, 0])) < 1e-12:
        raise InvalidArgumentError("fit_external_phases: first row/column must be nonzero")

    input_phases = np.angle(t[0, :] / c[0, :])
    output_phases = np.angle(t[:, 0] / (c[:, 0] * np.exp(1j * input_phases[0])))
    output_phases = output_phases - output_phases[0]
    corrected = (np.exp(1j * output_phases)[:, None] * c) * np.exp(1j * input_phases)[None, :]
    residual = float(np.max(np.abs(corrected - t)))
    return PhaseFit(input_phases=input_phases, output_phases=output_phases, residual=residual)


# ---------------------------------------------------------------------------
# Fock-space lift
# ---------------------------------------------------------------------------

def generator_matrix(S: ScatteringMatrix) -> np.ndarray:
    """Hermitian h with S = exp(i h); eigenphases taken in (−π, π]."""
    T, Z = schur(np.asarray(S.entries), output="complex")
    phases = np.angle(np.diag(T))
    phases = np.where(phases <= -np.pi, phases + 2 * np.pi, phases)
    h = Z @ np.diag(phases) @ Z.conj().T
    return 0.5 * (h + h.conj().T)


def _check_dimension(cutoffs: Tuple[int, ...], limit: int, context: str) -> int:
    dim = int(np.prod(cutoffs))
    if dim > limit:
        raise ResourceLimitError(
            f"{context}: Fock dimension {dim} exceeds limit {limit}",
            context={"cutoffs": list(cutoffs), "dimension": dim, "limit": limit},
        )
    return dim


def _validate_lift(S: ScatteringMatrix, cutoffs: Sequence[int]) -> Tuple[int, ...]:
    cutoffs = tuple(int(c) for c in cutoffs)
    if len(cutoffs) != S.size:
        raise InvalidArgumentError(
            f"lift: {len(cutoffs)} cutoffs for a {S.size}-mode network"
        )
    if any(c < 1 for c in cutoffs):
        raise InvalidArgumentError(f"lift: cutoffs must be >= 1, got {cutoffs}")
    return cutoffs


def lift_to_fock(S: ScatteringMatrix, cutoffs: Sequence[int]) -> ModeOperator:
    """Dense unitary U = exp(iĤ) on the truncated multimode Fock space."""
    cutoffs = _validate_lift(S, cutoffs)
    dim = _check_dimension(cutoffs, get_settings().dense_limit, "lift_to_fock")
    logger.debug(f"Lifting {S.size}-mode network to cutoffs {cutoffs} (dim {dim})")

    h = generator_matrix(S)
    ladders = _dense_ladders(cutoffs)
    hamiltonian = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(S.size):
        for l in range(S.size):
            if h[k, l] != 0:
                hamiltonian += h[k, l] * (ladders[k].conj().T @ ladders[l])
    return ModeOperator(cutoffs, expm(1j * hamiltonian), label="U")


def _dense_ladders(cutoffs: Tuple[int, ...]) -> list:
    ladders = []
    for mode, cutoff in enumerate(cutoffs):
        a = annihilation(cutoff).matrix if cutoff >= 2 else np.zeros((1, 1))
        left = int(np.prod(cutoffs[:mode]))
        right = int(np.prod(cutoffs[mode + 1:]))
        ladders.append(np.kron(np.kron(np.eye(left), a), np.eye(right)))
    return ladders


def _sparse_ladders(cutoffs: Tuple[int, ...]) -> list:
    ladders = []
    for mode, cutoff in enumerate(cutoffs):
        if cutoff >= 2:
            a = sp.diags(np.sqrt(np.arange(1, cutoff, dtype=np.float64)), 1,
                         shape=(cutoff, cutoff), format="csr")
        else:
            a = sp.csr_matrix((1, 1))
        left = sp.identity(int(np.prod(cutoffs[:mode])), format="csr")
        right = sp.identity(int(np.prod(cutoffs[mode + 1:])), format="csr")
        ladders.append(sp.kron(sp.kron(left, a, format="csr"), right, format="csr"))
    return ladders


def network_generator(S: ScatteringMatrix, cutoffs: Sequence[int]) -> sp.csr_matrix:
    """Sparse Ĥ = Σ h_kl a†_k a_l."""
    cutoffs = _validate_lift(S, cutoffs)
    h = generator_matrix(S)
    ladders = _sparse_ladders(cutoffs)
    dim = int(np.prod(cutoffs))
    hamiltonian = sp.csr_matrix((dim, dim), dtype=np.complex128)
    for k in range(S.size):
        for l in range(S.size):
            if abs(h[k, l]) > 0:
                hamiltonian = hamiltonian + h[k, l] * (ladders[k].conj().T @ ladders[l])
    return hamiltonian.tocsr()


def apply_network(
    S: ScatteringMatrix,
    amplitudes: np.ndarray,
    cutoffs: Sequence[int],
    generator: Optional[sp.csr_matrix] = None,
) -> np.ndarray:
    """
    U|ψ⟩ for a multimode amplitude vector without forming U.

    Uses the sparse generator and a Krylov/Taylor action of the exponential,
    so the state dimension can reach TWOPHOTO_DIM_LIMIT.
    """
    cutoffs = _validate_lift(S, cutoffs)
    dim = _check_dimension(cutoffs, get_settings().dim_limit, "apply_network")
    psi = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if psi.size != dim:
        raise InvalidArgumentError(f"apply_network: vector length {psi.size} != {dim}")
    if generator is None:
        generator = network_generator(S, cutoffs)
    return expm_multiply(1j * generator, psi)


def propagate_vector(S: ScatteringMatrix, vector: FockVector) -> FockVector:
    """Convenience wrapper returning a FockVector on the same cutoffs."""
    out = apply_network(S, vector.amplitudes, vector.cutoffs)
    return FockVector(vector.cutoffs, out)
