#!/usr/bin/env python3
"""
Abstract base for two-photocurrent detection schemes.
Encapsulates everything scheme-specific (network, port wiring, detector
labelling, demodulation weights, rescale) behind one interface; the sampling
backends and the operator builder only call these methods.

Rescaled complex current, for every scheme:
    Z = Σ_k w_k I_k / (η s)
with detector counts I_k in label order, weights w_k and scale s given by the
scheme. z1 = Re Z, z2 = Im Z.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum, auto
from typing import Tuple

import numpy as np

from schemas.optics import ScatteringMatrix
from schemas.photocurrent import LeadingOrderCoefficients
from schemas.scheme_config import SchemeConfig, SchemeKind
from utils.errors import InvalidArgumentError


class PortRole(Enum):
    """What feeds a network input column."""
    SIGNAL = auto()
    IDLER = auto()
    LOCAL_OSCILLATOR = auto()
    VACUUM = auto()


@dataclass(frozen=True)
class SchemeTopology:
    """Immutable wiring constants for a scheme."""
    kind: SchemeKind
    column_roles: Tuple[PortRole, ...]      # Role of each network input column
    detector_rows: Tuple[int, ...]          # Network output row read by detector i1..iK
    detector_labels: Tuple[str, ...]        # Display names (e.g. "I1")
    idler_name: str                         # How the scheme calls its idler mode

    def __post_init__(self) -> None:
        if sorted(self.detector_rows) != list(range(len(self.column_roles))):
            raise InvalidArgumentError(
                f"{self.kind.value}: detector rows {self.detector_rows} must permute the outputs"
            )
        for role in (PortRole.SIGNAL, PortRole.IDLER, PortRole.LOCAL_OSCILLATOR):
            if self.column_roles.count(role) != 1:
                raise InvalidArgumentError(f"{self.kind.value}: need exactly one {role.name} port")

    @property
    def num_modes(self) -> int:
        return len(self.column_roles)

    @property
    def num_detectors(self) -> int:
        return len(self.detector_rows)

    def column(self, role: PortRole) -> int:
        return self.column_roles.index(role)


class DetectionScheme(ABC):
    """Scheme adapter; subclasses fix the network and the demodulation."""

    @property
    @abstractmethod
    def topology(self) -> SchemeTopology:
        """Port wiring and detector labelling."""

    @abstractmethod
    def network(self) -> ScatteringMatrix:
        """Passive network between the input ports and the detectors."""

    @abstractmethod
    def demodulation_weights(self) -> np.ndarray:
        """Complex weights w_k per detector (label order)."""

    @property
    def name(self) -> str:
        return self.topology.kind.value

    # -- per-config quantities ------------------------------------------------

    def validate(self, cfg: SchemeConfig) -> None:
        if cfg.scheme is not self.topology.kind:
            raise InvalidArgumentError(
                f"Config for {cfg.scheme.value} passed to the {self.name} scheme"
            )

    def lo_input_amplitude(self, cfg: SchemeConfig) -> complex:
        """Coherent amplitude injected at the LO column."""
        return cfg.lo_complex

    def input_transmission(self, cfg: SchemeConfig) -> float:
        """Amplitude transmission applied to signal and idler before the network."""
        return 1.0

    def current_scale(self, cfg: SchemeConfig) -> float:
        """η·s, the divisor of the weighted count sum."""
        return cfg.eta.eta * cfg.lo_amplitude

    # -- derived --------------------------------------------------------------

    def detector_matrix(self) -> np.ndarray:
        """Network rows reordered to detector-label order."""
        return np.asarray(self.network().entries)[list(self.topology.detector_rows), :]

    def input_amplitudes(self, cfg: SchemeConfig) -> np.ndarray:
        """Coherent amplitude per network column (coherent inputs only)."""
        topo = self.topology
        amplitudes = np.zeros(topo.num_modes, dtype=np.complex128)
        transmission = self.input_transmission(cfg)
        amplitudes[topo.column(PortRole.SIGNAL)] = transmission * cfg.signal.coherent_amplitude
        amplitudes[topo.column(PortRole.IDLER)] = transmission * cfg.idler.coherent_amplitude
        amplitudes[topo.column(PortRole.LOCAL_OSCILLATOR)] = self.lo_input_amplitude(cfg)
        return amplitudes

    def detector_means(self, cfg: SchemeConfig) -> np.ndarray:
        """Mean counts η|d_k|² for coherent inputs, label order."""
        outputs = self.detector_matrix() @ self.input_amplitudes(cfg)
        return cfg.eta.eta * np.abs(outputs) ** 2

    def photocurrents(self, counts: np.ndarray, cfg: SchemeConfig) -> Tuple[np.ndarray, np.ndarray]:
        """(z1, z2) from raw counts [n, K] in label order."""
        counts = np.asarray(counts)
        if counts.shape[-1] != self.topology.num_detectors:
            raise InvalidArgumentError(
                f"{self.name}: expected {self.topology.num_detectors} detectors, "
                f"got {counts.shape[-1]}"
            )
        current = counts.astype(np.float64) @ self.demodulation_weights() / self.current_scale(cfg)
        return current.real, current.imag

    def leading_order_coefficients(self, eta: float, lo_phase: float = 0.0) -> LeadingOrderCoefficients:
        """
        Expansion coefficients of Z to zeroth order in 1/|z|.

        With b_k = √η Σ_l S_kl a_l + √(1−η) v_k and the LO entering column L as a
        c-number of phase φ:
            c_l = Σ_k w_k e^{−iφ} conj(S_kL) S_kl
            e_l = Σ_k w_k e^{iφ} S_kL conj(S_kl)
            p_k = w_k e^{−iφ} conj(S_kL) g,  q_k = w_k e^{iφ} S_kL g,  g = √((1−η)/η)
        """
        S = self.detector_matrix()
        weights = self.demodulation_weights()
        lo = self.topology.column(PortRole.LOCAL_OSCILLATOR)
        phase = np.exp(1j * lo_phase)
        lo_column = S[:, lo]
        gain = np.sqrt((1.0 - eta) / eta)
        c = (weights * np.conj(phase * lo_column)) @ S
        e = (weights * phase * lo_column) @ np.conj(S)
        p = weights * np.conj(phase * lo_column) * gain
        q = weights * phase * lo_column * gain
        return LeadingOrderCoefficients(
            signal_coefficients=c,
            conjugate_coefficients=e,
            noise_coefficients=p,
            noise_conjugate_coefficients=q,
        )
