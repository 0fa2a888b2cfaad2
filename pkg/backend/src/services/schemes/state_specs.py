#!/usr/bin/env python3
"""
Materialize declarative StateSpec inputs as truncated density operators.
"""

import json
import logging
from pathlib import Path
from typing import Optional

import numpy as np

from core.fockcore import (
    coherent_cutoff,
    coherent_density,
    fock_density,
    thermal_cutoff,
    thermal_density,
)
from schemas.fock_state import DensityOperator
from schemas.scheme_config import StateKind, StateSpec
from utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


def default_cutoff(spec: StateSpec) -> int:
    """Cutoff used when the spec does not carry one."""
    if spec.cutoff is not None:
        return spec.cutoff
    if spec.kind is StateKind.VACUUM:
        return 1
    if spec.kind is StateKind.COHERENT:
        return coherent_cutoff(spec.amplitude)
    if spec.kind is StateKind.FOCK:
        return spec.n + 1
    if spec.kind is StateKind.THERMAL:
        return thermal_cutoff(spec.mean)
    return load_density_matrix(spec.path).cutoff


def load_density_matrix(path: Optional[str]) -> DensityOperator:
    """
    Read a single-mode density matrix from .npy (complex square array) or .json
    ({"real": [[...]], "imag": [[...]]}).
    """
    if not path:
        raise InvalidArgumentError("load_density_matrix: no path given")
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Density matrix file not found: {path}")

    if file_path.suffix == ".npy":
        matrix = np.load(file_path)
    elif file_path.suffix == ".json":
        with open(file_path) as f:
            payload = json.load(f)
        real = np.asarray(payload["real"], dtype=np.float64)
        imag = np.asarray(payload.get("imag", np.zeros_like(real)), dtype=np.float64)
        matrix = real + 1j * imag
    else:
        raise InvalidArgumentError(f"Unsupported density matrix format '{file_path.suffix}'")

    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidArgumentError(f"Density matrix in {path} must be square, got {matrix.shape}")
    logger.debug(f"Loaded density matrix {matrix.shape} from {path}")
    return DensityOperator((matrix.shape[0],), matrix)


def to_density(spec: StateSpec, cutoff: Optional[int] = None) -> DensityOperator:
    """Density operator of a spec at the given (or default) cutoff."""
    if cutoff is None:
        cutoff = default_cutoff(spec)
    if spec.kind is StateKind.VACUUM:
        return coherent_density(0j, cutoff)
    if spec.kind is StateKind.COHERENT:
        return coherent_density(spec.amplitude, cutoff)
    if spec.kind is StateKind.FOCK:
        return fock_density(spec.n, cutoff)
    if spec.kind is StateKind.THERMAL:
        return thermal_density(spec.mean, cutoff)

    rho = load_density_matrix(spec.path)
    if cutoff == rho.cutoff:
        return rho
    if cutoff > rho.cutoff:
        padded = np.zeros((cutoff, cutoff), dtype=np.complex128)
        padded[: rho.cutoff, : rho.cutoff] = rho.matrix
        return DensityOperator((cutoff,), padded)
    return DensityOperator((cutoff,), np.asarray(rho.matrix)[:cutoff, :cutoff])

