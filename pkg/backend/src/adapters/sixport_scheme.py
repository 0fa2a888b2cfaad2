#!/usr/bin/env python3
"""
Six-port (triple) homodyne detector.

The symmetric triple coupler mixes signal (column 0), local oscillator
(column 1) and idler (column 2); three detectors read the outputs in order.
The counts are Fourier transformed,

    ℐ_s = (1/√3) Σ_n I_n e^{−iθ_n (s−1)},  θ_n = 2π(n−1)/3,

and the reduced currents are

    z1 = √3 Re ℐ2 / (η|z|),   z2 = −√3 Im ℐ2 / (η|z|).

The sign of z2 is the orientation calibration: with it Z = z1 + i z2 equals
√3 conj(ℐ2)/(η|z|) = Σ_n e^{iθ_n} I_n/(η|z|) → a_signal + a_idler†.
"""

from typing import Tuple

import numpy as np

from adapters.base_scheme import DetectionScheme, PortRole, SchemeTopology
from core.linopt import triple_coupler_matrix
from schemas.optics import ScatteringMatrix
from schemas.scheme_config import SchemeConfig, SchemeKind

SIXPORT_TOPOLOGY = SchemeTopology(
    kind=SchemeKind.SIX_PORT,
    column_roles=(PortRole.SIGNAL, PortRole.LOCAL_OSCILLATOR, PortRole.IDLER),
    detector_rows=(0, 1, 2),
    detector_labels=("I1", "I2", "I3"),
    idler_name="a3",
)

THETAS = 2.0 * np.pi * np.arange(3) / 3.0


def fourier_currents(counts: np.ndarray) -> np.ndarray:
    """ℐ_s for s = 1, 2, 3 from counts [..., 3]; returns shape [..., 3]."""
    counts = np.asarray(counts, dtype=np.float64)
    s = np.arange(3)
    kernel = np.exp(-1j * np.outer(THETAS, s)) / np.sqrt(3.0)     # [n, s]
    return counts @ kernel


class SixPortScheme(DetectionScheme):
    """Triple homodyne with a three-point transform of the photocurrents."""

    @property
    def topology(self) -> SchemeTopology:
        return SIXPORT_TOPOLOGY

    def network(self) -> ScatteringMatrix:
        return triple_coupler_matrix()

    def demodulation_weights(self) -> np.ndarray:
        return np.exp(1j * THETAS)

    def photocurrents(self, counts: np.ndarray, cfg: SchemeConfig) -> Tuple[np.ndarray, np.ndarray]:
        """Reduced currents through the Fourier-transformed photocurrents."""
        transformed = fourier_currents(counts)
        i2 = transformed[..., 1]
        scale = self.current_scale(cfg)
        return np.sqrt(3.0) * i2.real / scale, -np.sqrt(3.0) * i2.imag / scale
