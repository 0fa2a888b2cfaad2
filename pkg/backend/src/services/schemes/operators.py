#!/usr/bin/env python3
"""
Leading-order photocurrent operators of the detection schemes.

At large LO amplitude every scheme's rescaled complex current reduces to a
linear form in the signal, idler and detector-noise modes. The noise modes
enter through two combinations,
    U1 = Σ p_k v_k / ‖p‖,   U2 = Σ conj(q_k) v_k / ‖q‖,
which commute with each other's adjoints (Σ p_k q_k = 0), so they are kept as
two independent vacuum ancillas u1, u2. Operators act on
signal ⊗ idler (η = 1) or signal ⊗ idler ⊗ u1 ⊗ u2 (η < 1).
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from adapters.base_scheme import DetectionScheme, PortRole
from adapters.registry import get_scheme
from core.fockcore import annihilation, embed
from core.linopt import triple_coupler_matrix
from schemas.counts import Efficiency, as_efficiency
from schemas.fock_state import ModeOperator
from schemas.photocurrent import PhotocurrentOperators
from schemas.reports import OperatorComparison
from schemas.scheme_config import SchemeKind
from utils.errors import InvalidArgumentError
from utils.numpy_utils import commutator, max_abs_diff

logger = logging.getLogger(__name__)

COEFFICIENT_TOLERANCE = 1e-12
DEFAULT_CUTOFFS = (8, 8)
DEFAULT_NOISE_CUTOFF = 4


def _resolve(scheme: Union[str, SchemeKind, DetectionScheme]) -> DetectionScheme:
    return scheme if isinstance(scheme, DetectionScheme) else get_scheme(scheme)


def photocurrent_operators(
    scheme: Union[str, SchemeKind, DetectionScheme],
    eta: Union[float, Efficiency] = 1.0,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
    noise_cutoff: int = DEFAULT_NOISE_CUTOFF,
    lo_phase: float = 0.0,
) -> PhotocurrentOperators:
    """
    Build Hermitian Z1, Z2 from a scheme's leading-order coefficients.

    Args:
        scheme: Scheme adapter or registry key
        eta: Detector efficiency; η < 1 adds the two noise ancillas
        cutoffs: (signal, idler) Fock cutoffs
        noise_cutoff: Cutoff of each noise ancilla

    Returns:
        PhotocurrentOperators with Z = Z1 + iZ2
    """
    adapter = _resolve(scheme)
    efficiency = as_efficiency(eta)
    if len(cutoffs) != 2:
        raise InvalidArgumentError(f"photocurrent_operators: need (signal, idler) cutoffs, got {cutoffs}")

    topo = adapter.topology
    coeffs = adapter.leading_order_coefficients(efficiency.eta, lo_phase)
    signal_col = topo.column(PortRole.SIGNAL)
    idler_col = topo.column(PortRole.IDLER)

    # Remaining input ports carry vacuum or the LO c-number; their operator weight must vanish
    for col, role in enumerate(topo.column_roles):
        if role is PortRole.VACUUM:
            weight = max(abs(coeffs.signal_coefficients[col]), abs(coeffs.conjugate_coefficients[col]))
            if weight > COEFFICIENT_TOLERANCE:
                logger.warning(f"{adapter.name}: vacuum port {col} has weight {weight:.3e}")

    mode_cutoffs: Tuple[int, ...] = tuple(int(c) for c in cutoffs)
    labels: Tuple[str, ...] = ("signal", topo.idler_name)
    noisy = not efficiency.is_ideal
    if noisy:
        mode_cutoffs = mode_cutoffs + (noise_cutoff, noise_cutoff)
        labels = labels + ("u1", "u2")

    ladders = [embed(annihilation(n), k, mode_cutoffs).matrix for k, n in enumerate(mode_cutoffs)]
    a_s, a_i = np.asarray(ladders[0]), np.asarray(ladders[1])
    c_s, e_s = coeffs.signal_coefficients[signal_col], coeffs.conjugate_coefficients[signal_col]
    c_i, e_i = coeffs.signal_coefficients[idler_col], coeffs.conjugate_coefficients[idler_col]

    z = c_s * a_s + e_s * a_s.conj().T + c_i * a_i + e_i * a_i.conj().T
    coefficients: Dict[str, complex] = {
        "signal": complex(c_s),
        "signal_conjugate": complex(e_s),
        "idler": complex(c_i),
        "idler_conjugate": complex(e_i),
    }
    if noisy:
        p_norm = float(np.linalg.norm(coeffs.noise_coefficients))
        q_norm = float(np.linalg.norm(coeffs.noise_conjugate_coefficients))
        u1, u2 = np.asarray(ladders[2]), np.asarray(ladders[3])
        z = z + p_norm * u1 + q_norm * u2.conj().T
        coefficients["noise"] = complex(p_norm)
        coefficients["noise_conjugate"] = complex(q_norm)
        logger.debug(f"{adapter.name}: noise overlap {coeffs.noise_overlap:.3e}")

    z1 = 0.5 * (z + z.conj().T)
    z2 = (z - z.conj().T) / 2j
    return PhotocurrentOperators(
        scheme=adapter.name,
        eta=efficiency.eta,
        mode_labels=labels,
        z1=ModeOperator(mode_cutoffs, z1, hermitian=True, label="Z1"),
        z2=ModeOperator(mode_cutoffs, z2, hermitian=True, label="Z2"),
        coefficients=coefficients,
    )


def low_lying_states(cutoffs: Sequence[int], max_photons: int = 4) -> np.ndarray:
    """Flat indices of basis states with n_k ≤ N_k − 2 and Σ n_k ≤ max_photons."""
    grids = np.meshgrid(*[np.arange(n) for n in cutoffs], indexing="ij")
    occupations = np.stack([g.reshape(-1) for g in grids], axis=1)
    below_top = np.all(occupations <= np.asarray(cutoffs) - 2, axis=1)
    return np.flatnonzero(below_top & (occupations.sum(axis=1) <= max_photons))


def commutator_residual(ops: PhotocurrentOperators, max_photons: int = 4) -> float:
    """max |[Z1, Z2]|ψ⟩| over low-lying basis states (truncation spares them)."""
    comm = commutator(np.asarray(ops.z1.matrix), np.asarray(ops.z2.matrix))
    columns = low_lying_states(ops.cutoffs, max_photons)
    return float(np.max(np.abs(comm[:, columns]))) if columns.size else 0.0


def compare_operators(
    scheme_a: Union[str, SchemeKind, DetectionScheme],
    scheme_b: Union[str, SchemeKind, DetectionScheme],
    eta: Union[float, Efficiency] = 1.0,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
    noise_cutoff: int = DEFAULT_NOISE_CUTOFF,
) -> OperatorComparison:
    """Max-abs Z1/Z2 deltas after identifying each scheme's idler with the other's."""
    ops_a = photocurrent_operators(scheme_a, eta, cutoffs, noise_cutoff)
    ops_b = photocurrent_operators(scheme_b, eta, cutoffs, noise_cutoff)
    notes: List[str] = []
    if ops_a.mode_labels[1] != ops_b.mode_labels[1]:
        notes.append(f"idler {ops_a.mode_labels[1]} ({ops_a.scheme}) <-> "
                     f"{ops_b.mode_labels[1]} ({ops_b.scheme})")
    comparison = OperatorComparison(
        scheme_a=ops_a.scheme,
        scheme_b=ops_b.scheme,
        eta=ops_a.eta,
        z1_delta=max_abs_diff(np.asarray(ops_a.z1.matrix), np.asarray(ops_b.z1.matrix)),
        z2_delta=max_abs_diff(np.asarray(ops_a.z2.matrix), np.asarray(ops_b.z2.matrix)),
        notes=notes,
    )
    logger.info(
        f"Operator comparison {comparison.scheme_a} vs {comparison.scheme_b} "
        f"(eta={comparison.eta}): max delta {comparison.max_delta:.3e}"
    )
    return comparison


# ---------------------------------------------------------------------------
# Six-port Fourier currents
# ---------------------------------------------------------------------------

def _three_mode_ladders(cutoffs: Sequence[int]) -> List[np.ndarray]:
    if len(cutoffs) != 3:
        raise InvalidArgumentError(f"six-port currents need three cutoffs, got {cutoffs}")
    cutoffs = tuple(int(c) for c in cutoffs)
    return [np.asarray(embed(annihilation(n), k, cutoffs).matrix) for k, n in enumerate(cutoffs)]


def sixport_fourier_currents(cutoffs: Sequence[int] = (5, 5, 5)) -> Tuple[np.ndarray, ...]:
    """
    ℐ_s = (1/√3) Σ_n I_n e^{−iθ_n(s−1)} with I_n = b†_n b_n and
    b_n = Σ_k T_nk a_k the triple-coupler outputs (a1 signal, a2 LO, a3 idler).
    """
    a = _three_mode_ladders(cutoffs)
    T = np.asarray(triple_coupler_matrix().entries)
    outputs = [sum(T[n, k] * a[k] for k in range(3)) for n in range(3)]
    intensities = [b.conj().T @ b for b in outputs]
    thetas = 2.0 * np.pi * np.arange(3) / 3.0
    return tuple(
        sum(np.exp(-1j * thetas[n] * s) * intensities[n] for n in range(3)) / np.sqrt(3.0)
        for s in range(3)
    )


def sixport_fourier_identities(cutoffs: Sequence[int] = (5, 5, 5)) -> Tuple[np.ndarray, ...]:
    """
    Bilinear forms the Fourier currents reduce to:
        ℐ1 = (a1†a1 + a2†a2 + a3†a3)/√3
        ℐ2 = (a1†a2 + a2†a3 + a3†a1)/√3
        ℐ3 = (a1†a3 + a2†a1 + a3†a2)/√3
    """
    a = _three_mode_ladders(cutoffs)
    return tuple(
        sum(a[k].conj().T @ a[(k + shift) % 3] for k in range(3)) / np.sqrt(3.0)
        for shift in range(3)
    )


def sixport_identity_residual(cutoffs: Sequence[int] = (5, 5, 5)) -> float:
    currents = sixport_fourier_currents(cutoffs)
    identities = sixport_fourier_identities(cutoffs)
    return max(max_abs_diff(c, i) for c, i in zip(currents, identities))


def operator_mean(ops: PhotocurrentOperators, rho: np.ndarray) -> complex:
    """Tr(ρ Z) on the operator space (ρ given as a dense matrix)."""
    rho = np.asarray(rho)
    if rho.shape != ops.z1.matrix.shape:
        raise InvalidArgumentError(
            f"operator_mean: state shape {rho.shape} != operator shape {ops.z1.matrix.shape}"
        )
    return complex(np.trace(rho @ ops.complex_current()))


def operator_covariance(ops: PhotocurrentOperators, rho: np.ndarray) -> np.ndarray:
    """Symmetrized covariance of (Z1, Z2) in state ρ."""
    rho = np.asarray(rho)
    mats = [np.asarray(ops.z1.matrix), np.asarray(ops.z2.matrix)]
    means = [np.trace(rho @ m).real for m in mats]
    cov = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            sym = 0.5 * (mats[i] @ mats[j] + mats[j] @ mats[i])
            cov[i, j] = np.trace(rho @ sym).real - means[i] * means[j]
    return cov


def vacuum_projector(ops: PhotocurrentOperators) -> np.ndarray:
    dim = ops.z1.dimension
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[0, 0] = 1.0
    return rho


def predicted_moments(
    ops: PhotocurrentOperators, rho: Optional[np.ndarray] = None
) -> Tuple[complex, np.ndarray]:
    """(mean of Z, covariance of (Z1, Z2)); vacuum on every mode by default."""
    rho = vacuum_projector(ops) if rho is None else rho
    return operator_mean(ops, rho), operator_covariance(ops, rho)
