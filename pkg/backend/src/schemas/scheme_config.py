#!/usr/bin/env python3
"""
Scheme configuration records: which detector, which input states, LO settings,
efficiency, backend, cutoffs and sampling parameters.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from schemas.counts import Efficiency
from utils.errors import InvalidArgumentError


class SchemeKind(Enum):
    """Detection scheme; values are the config/registry keys."""
    EIGHT_PORT = "eight-port"
    SIX_PORT = "six-port"
    HETERODYNE = "heterodyne"


class BackendKind(Enum):
    COHERENT_EXACT = "coherent-exact"     # Independent Poisson counts, coherent inputs only
    FOCK_TRUNCATED = "fock-truncated"     # Multimode Fock propagation, any input state


class StateKind(Enum):
    VACUUM = "vacuum"
    COHERENT = "coherent"
    FOCK = "fock"
    THERMAL = "thermal"
    DENSITY = "density"


@dataclass(frozen=True)
class StateSpec:
    """Declarative single-mode input state."""
    kind: StateKind = StateKind.VACUUM
    amplitude: complex = 0j         # coherent
    n: int = 0                      # fock
    mean: float = 0.0               # thermal
    path: Optional[str] = None      # density matrix file (.npy or .json)
    cutoff: Optional[int] = None    # explicit Fock cutoff

    def __post_init__(self) -> None:
        context = f"StateSpec({self.kind.value})"
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        if self.kind is StateKind.FOCK and self.n < 0:
            raise InvalidArgumentError(f"{context}: n={self.n} < 0")
        if self.kind is StateKind.THERMAL and self.mean < 0:
            raise InvalidArgumentError(f"{context}: mean={self.mean} < 0")
        if self.kind is StateKind.DENSITY and not self.path:
            raise InvalidArgumentError(f"{context}: density state requires a path")
        if self.cutoff is not None and self.cutoff < 1:
            raise InvalidArgumentError(f"{context}: cutoff {self.cutoff} < 1")
        if self.kind is StateKind.FOCK and self.cutoff is not None and self.cutoff <= self.n:
            raise InvalidArgumentError(f"{context}: cutoff {self.cutoff} must exceed n={self.n}")

    @property
    def is_coherent(self) -> bool:
        return self.kind in (StateKind.VACUUM, StateKind.COHERENT)

    @property
    def coherent_amplitude(self) -> complex:
        if not self.is_coherent:
            raise InvalidArgumentError(f"StateSpec({self.kind.value}) has no coherent amplitude")
        return self.amplitude if self.kind is StateKind.COHERENT else 0j

    def mean_photons(self) -> float:
        """Mean photon number (file-backed states report NaN until loaded)."""
        if self.kind is StateKind.VACUUM:
            return 0.0
        if self.kind is StateKind.COHERENT:
            return abs(self.amplitude) ** 2
        if self.kind is StateKind.FOCK:
            return float(self.n)
        if self.kind is StateKind.THERMAL:
            return self.mean
        return float("nan")

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"kind": self.kind.value}
        if self.kind is StateKind.COHERENT:
            payload["amplitude"] = [self.amplitude.real, self.amplitude.imag]
        elif self.kind is StateKind.FOCK:
            payload["n"] = self.n
        elif self.kind is StateKind.THERMAL:
            payload["mean"] = self.mean
        elif self.kind is StateKind.DENSITY:
            payload["path"] = self.path
        if self.cutoff is not None:
            payload["cutoff"] = self.cutoff
        return payload


def vacuum() -> StateSpec:
    return StateSpec(StateKind.VACUUM)


def coherent(amplitude: complex, cutoff: Optional[int] = None) -> StateSpec:
    return StateSpec(StateKind.COHERENT, amplitude=complex(amplitude), cutoff=cutoff)


def fock(n: int, cutoff: Optional[int] = None) -> StateSpec:
    return StateSpec(StateKind.FOCK, n=n, cutoff=cutoff)


def thermal(mean: float, cutoff: Optional[int] = None) -> StateSpec:
    return StateSpec(StateKind.THERMAL, mean=mean, cutoff=cutoff)


@dataclass(frozen=True)
class FockCutoffs:
    """Cutoffs for the FockTruncated backend (None = automatic)."""
    signal: Optional[int] = None
    idler: Optional[int] = None
    output: Optional[int] = None    # per detected mode after the network
    lo: Optional[int] = None        # working cutoff for the LO displacement


@dataclass(frozen=True)
class SchemeConfig:
    """One simulated detector run."""
    scheme: SchemeKind
    signal: StateSpec = field(default_factory=vacuum)
    idler: StateSpec = field(default_factory=vacuum)
    lo_amplitude: float = 1e4           # |z|
    lo_phase: float = 0.0               # φ, radians; 0 is the calibrated phase
    eta: Efficiency = field(default_factory=lambda: Efficiency(1.0))
    heterodyne_mixing: float = 10.0     # k = |z|√(1−τ)
    backend: BackendKind = BackendKind.COHERENT_EXACT
    cutoffs: FockCutoffs = field(default_factory=FockCutoffs)
    sample_count: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        context = f"SchemeConfig({self.scheme.value}, {self.backend.value})"
        if isinstance(self.eta, (int, float)):
            object.__setattr__(self, "eta", Efficiency(float(self.eta)))
        if not self.lo_amplitude > 0 or not math.isfinite(self.lo_amplitude):
            raise InvalidArgumentError(f"{context}: lo_amplitude must be positive, got {self.lo_amplitude}")
        if self.sample_count < 0:
            raise InvalidArgumentError(f"{context}: sample_count {self.sample_count} < 0")
        if self.seed < 0:
            raise InvalidArgumentError(f"{context}: seed {self.seed} < 0")

        if self.backend is BackendKind.COHERENT_EXACT:
            for role, spec in (("signal", self.signal), ("idler", self.idler)):
                if not spec.is_coherent:
                    raise InvalidArgumentError(
                        f"{context}: coherent-exact backend needs coherent inputs, "
                        f"{role} is {spec.kind.value}"
                    )

        if self.scheme is SchemeKind.HETERODYNE:
            if not 0 < self.heterodyne_mixing < self.lo_amplitude:
                raise InvalidArgumentError(
                    f"{context}: heterodyne mixing k={self.heterodyne_mixing} must lie in "
                    f"(0, |z|={self.lo_amplitude}) so that tau > 0"
                )

        if self.backend is BackendKind.FOCK_TRUNCATED:
            z = self.lo_amplitude
            lo_cutoff = self.lo_cutoff
            if z * z + 6 * z >= lo_cutoff:
                raise InvalidArgumentError(
                    f"{context}: |z|^2 + 6|z| = {z * z + 6 * z:.3g} must be below "
                    f"the LO cutoff {lo_cutoff}"
                )

    @property
    def lo_complex(self) -> complex:
        """z = |z| e^{iφ}."""
        return complex(self.lo_amplitude * math.cos(self.lo_phase),
                       self.lo_amplitude * math.sin(self.lo_phase))

    @property
    def lo_cutoff(self) -> int:
        if self.cutoffs.lo is not None:
            return self.cutoffs.lo
        z = self.lo_amplitude
        return int(math.ceil(z * z + 6 * z + 10))

    @property
    def heterodyne_tau(self) -> float:
        """Signal-band transmissivity τ = 1 − (k/|z|)²."""
        return 1.0 - (self.heterodyne_mixing / self.lo_amplitude) ** 2

    def physics_key(self) -> Tuple[Any, ...]:
        """Inputs that must agree for two runs to be comparable."""
        return (self.signal, self.idler, self.eta.eta)

    def with_overrides(self, **changes: Any) -> "SchemeConfig":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scheme": self.scheme.value,
            "signal": self.signal.to_dict(),
            "idler": self.idler.to_dict(),
            "lo_amplitude": self.lo_amplitude,
            "lo_phase": self.lo_phase,
            "eta": self.eta.eta,
            "heterodyne_mixing": self.heterodyne_mixing,
            "backend": self.backend.value,
            "cutoffs": {
                "signal": self.cutoffs.signal,
                "idler": self.cutoffs.idler,
                "output": self.cutoffs.output,
                "lo": self.cutoffs.lo,
            },
            "sample_count": self.sample_count,
            "seed": self.seed,
        }
