#!/usr/bin/env python3
"""
Heterodyne detection at the modal level.

A single detector is read in four time bins per beat period. Four frequency
slots reach it: the local oscillator (column 0), the signal (column 1), a spare
vacuum slot (column 2) and the image band (column 3, the idler). Slot f
contributes to bin t with amplitude e^{−2πi t f/4}/2, i.e. the inverse 4-point
DFT. Before mixing, the signal band is transmitted with amplitude √τ and the
LO with √(1−τ), so the LO reaching the detector has magnitude k = |z|√(1−τ).
Demodulating at the beat frequency,

    ℐ = Σ_t n_t e^{iπt/2},   Z = ℐ / (η k √τ),

reproduces Z = a + c† at leading order as τ → 1 with k fixed.
"""

import numpy as np

from adapters.base_scheme import DetectionScheme, PortRole, SchemeTopology
from core.linopt import discrete_fourier_matrix
from schemas.optics import ScatteringMatrix
from schemas.scheme_config import SchemeConfig, SchemeKind

HETERODYNE_TOPOLOGY = SchemeTopology(
    kind=SchemeKind.HETERODYNE,
    column_roles=(PortRole.LOCAL_OSCILLATOR, PortRole.SIGNAL, PortRole.VACUUM, PortRole.IDLER),
    detector_rows=(0, 1, 2, 3),
    detector_labels=("N1", "N2", "N3", "N4"),
    idler_name="c",
)

TIME_BINS = 4


class HeterodyneScheme(DetectionScheme):
    """Single-detector beat-note measurement with an image-band idler."""

    @property
    def topology(self) -> SchemeTopology:
        return HETERODYNE_TOPOLOGY

    def network(self) -> ScatteringMatrix:
        return discrete_fourier_matrix(TIME_BINS, inverse=True)

    def demodulation_weights(self) -> np.ndarray:
        return np.exp(0.5j * np.pi * np.arange(TIME_BINS))

    def lo_input_amplitude(self, cfg: SchemeConfig) -> complex:
        return cfg.heterodyne_mixing * np.exp(1j * cfg.lo_phase)

    def input_transmission(self, cfg: SchemeConfig) -> float:
        return float(np.sqrt(cfg.heterodyne_tau))

    def current_scale(self, cfg: SchemeConfig) -> float:
        return cfg.eta.eta * cfg.heterodyne_mixing * np.sqrt(cfg.heterodyne_tau)
