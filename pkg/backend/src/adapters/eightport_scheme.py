#!/usr/bin/env python3
"""
Eight-port (double) homodyne detector.

Four input ports feed the unitary 4-point DFT coupler. Port wiring: the signal
enters column 0, the unexcited port column 1, the idler column 2 and the local
oscillator column 3. Detectors I1..I4 read output rows 2, 0, 1, 3, so that

    z1 = (I2 − I1) / (η|z|),   z2 = (I4 − I3) / (η|z|)

gives Z = a_signal + a_idler† at leading order. The normalized coupler carries
the factor 1/2 that the unnormalized output-mode expressions leave out, which
is why the rescale is η|z| and not 2η|z|.
"""

import numpy as np

from adapters.base_scheme import DetectionScheme, PortRole, SchemeTopology
from core.linopt import eightport_matrix
from schemas.optics import ScatteringMatrix
from schemas.scheme_config import SchemeKind

EIGHTPORT_TOPOLOGY = SchemeTopology(
    kind=SchemeKind.EIGHT_PORT,
    column_roles=(PortRole.SIGNAL, PortRole.VACUUM, PortRole.IDLER, PortRole.LOCAL_OSCILLATOR),
    detector_rows=(2, 0, 1, 3),
    detector_labels=("I1", "I2", "I3", "I4"),
    idler_name="a2",
)

# Label order I1..I4: difference pairs (I2 − I1) and i(I4 − I3)
EIGHTPORT_WEIGHTS = np.array([-1.0, 1.0, -1j, 1j], dtype=np.complex128)


class EightPortScheme(DetectionScheme):
    """Double homodyne: two balanced difference currents."""

    @property
    def topology(self) -> SchemeTopology:
        return EIGHTPORT_TOPOLOGY

    def network(self) -> ScatteringMatrix:
        return eightport_matrix()

    def demodulation_weights(self) -> np.ndarray:
        return EIGHTPORT_WEIGHTS
