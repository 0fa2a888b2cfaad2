#!/usr/bin/env python3
"""
Passive linear-optics records: scattering matrices on mode amplitudes and
element sequences of beam splitters and phase shifters.

Beam-splitter convention (global): on the ordered mode pair (j, k)
    S = [[√τ, √(1−τ)], [−√(1−τ), √τ]]
Phase shifter on mode j multiplies the amplitude by e^{iφ}.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from utils.errors import InvalidArgumentError
from utils.numpy_utils import ensure_complex_array, freeze_array, unitarity_error

UNITARY_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class ScatteringMatrix:
    """Unitary K×K matrix mapping input mode amplitudes to output amplitudes."""

    entries: np.ndarray     # Shape: [K, K]; out_k = Σ_l S_kl in_l

    def __post_init__(self) -> None:
        entries = ensure_complex_array(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidArgumentError(f"ScatteringMatrix: must be square, got {entries.shape}")
        error = unitarity_error(entries)
        if error > UNITARY_TOLERANCE:
            raise InvalidArgumentError(
                f"ScatteringMatrix[{entries.shape[0]}]: not unitary (residual {error:.3e})"
            )
        object.__setattr__(self, "entries", freeze_array(entries))

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    def __matmul__(self, other: "ScatteringMatrix") -> "ScatteringMatrix":
        return ScatteringMatrix(self.entries @ other.entries)

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """Propagate coherent amplitudes through the network."""
        return self.entries @ ensure_complex_array(amplitudes)


@dataclass(frozen=True)
class BeamSplitter:
    """Beam splitter on an ordered mode pair."""
    modes: Tuple[int, int]
    tau: float              # Transmissivity |S_00|²

    def __post_init__(self) -> None:
        if not 0.0 <= self.tau <= 1.0:
            raise InvalidArgumentError(f"BeamSplitter{self.modes}: tau {self.tau} outside [0, 1]")
        if len(self.modes) != 2 or self.modes[0] == self.modes[1]:
            raise InvalidArgumentError(f"BeamSplitter: need two distinct modes, got {self.modes}")

    def block(self) -> np.ndarray:
        t = np.sqrt(self.tau)
        r = np.sqrt(1.0 - self.tau)
        return np.array([[t, r], [-r, t]], dtype=np.complex128)

    def embed(self, num_modes: int) -> np.ndarray:
        j, k = self.modes
        if max(j, k) >= num_modes or min(j, k) < 0:
            raise InvalidArgumentError(f"BeamSplitter{self.modes}: outside {num_modes} modes")
        full = np.eye(num_modes, dtype=np.complex128)
        block = self.block()
        full[np.ix_([j, k], [j, k])] = block
        return full

    def to_dict(self) -> Dict[str, Any]:
        return {"element": "beam_splitter", "modes": list(self.modes), "tau": self.tau}


@dataclass(frozen=True)
class PhaseShifter:
    """Phase shift e^{iφ} on one mode."""
    mode: int
    angle: float            # Radians

    def embed(self, num_modes: int) -> np.ndarray:
        if not 0 <= self.mode < num_modes:
            raise InvalidArgumentError(f"PhaseShifter({self.mode}): outside {num_modes} modes")
        full = np.eye(num_modes, dtype=np.complex128)
        full[self.mode, self.mode] = np.exp(1j * self.angle)
        return full

    def to_dict(self) -> Dict[str, Any]:
        return {"element": "phase_shifter", "mode": self.mode, "angle": self.angle}


Element = Union[BeamSplitter, PhaseShifter]


@dataclass(frozen=True)
class ElementSequence:
    """Ordered optical elements; the first element acts first on the light."""
    num_modes: int
    elements: Tuple[Element, ...]

    def __post_init__(self) -> None:
        if self.num_modes < 1:
            raise InvalidArgumentError(f"ElementSequence: num_modes {self.num_modes} < 1")
        object.__setattr__(self, "elements", tuple(self.elements))
        for element in self.elements:
            element.embed(self.num_modes)   # range check

    def compose(self) -> ScatteringMatrix:
        total = np.eye(self.num_modes, dtype=np.complex128)
        for element in self.elements:
            total = element.embed(self.num_modes) @ total
        return ScatteringMatrix(total)

    def to_list(self) -> List[Dict[str, Any]]:
        return [element.to_dict() for element in self.elements]


@dataclass(frozen=True, eq=False)
class PhaseFit:
    """Diagonal phase corrections with D_out · composed · D_in ≈ target."""
    input_phases: np.ndarray     # Radians, shape [K]
    output_phases: np.ndarray    # Radians, shape [K]
    residual: float              # max-abs entrywise error after correction

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input_phases": [float(v) for v in self.input_phases],
            "output_phases": [float(v) for v in self.output_phases],
            "residual": float(self.residual),
        }
