#!/usr/bin/env python3
"""
CSV codec for phase-space grids.

Layout: '#'-prefixed header lines (key: value), then columns
alpha_re, alpha_im, K in row-major order (Re index outer, Im index inner).
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from schemas.phase_space import GridGeometry, GridKind, PhaseSpaceGrid
from utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

NORMALIZATION_NOTE = "integral of K over d2alpha = 1 (alpha = alpha_re + i alpha_im)"
GRID_COLUMNS = ("alpha_re", "alpha_im", "K")


def write_propensity_csv(
    grid: PhaseSpaceGrid,
    file_path: Union[str, Path],
    eta: float,
    extra: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write a real-valued grid with its convention header."""
    if grid.kind is GridKind.CHARACTERISTIC:
        raise InvalidArgumentError("write_propensity_csv: characteristic grids are complex")
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)

    header = {
        "normalization": NORMALIZATION_NOTE,
        "kind": grid.kind.value,
        "eta": eta,
        "half_extent": grid.half_extent,
        "points_per_axis": grid.points_per_axis,
    }
    header.update(extra or {})

    alpha = grid.geometry.mesh()
    frame = pd.DataFrame({
        "alpha_re": alpha.real.reshape(-1),
        "alpha_im": alpha.imag.reshape(-1),
        "K": np.asarray(grid.values).reshape(-1),
    })
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for key, value in header.items():
            f.write(f"# {key}: {value}\n")
        frame.to_csv(f, index=False, lineterminator="\n")
    logger.info(f"Wrote {grid.kind.value} grid ({grid.points_per_axis}^2 points) to {path}")
    return path


def _read_header(path: Path) -> Dict[str, str]:
    header: Dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].partition(":")
            header[key.strip()] = value.strip()
    return header


def read_propensity_csv(file_path: Union[str, Path]) -> Tuple[PhaseSpaceGrid, Dict[str, str]]:
    """
    Parse a grid CSV back into a PhaseSpaceGrid plus its header fields.

    Raises:
        InvalidArgumentError: missing header fields or inconsistent shape
    """
    path = Path(file_path)
    if not path.exists():
        raise FileNotFoundError(f"Grid file not found: {file_path}")
    header = _read_header(path)
    try:
        geometry = GridGeometry(float(header["half_extent"]), int(header["points_per_axis"]))
        kind = GridKind(header.get("kind", GridKind.PROPENSITY.value))
    except (KeyError, ValueError) as e:
        raise InvalidArgumentError(f"read_propensity_csv: bad header in {path}: {e}")

    frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    if tuple(frame.columns) != GRID_COLUMNS:
        raise InvalidArgumentError(f"read_propensity_csv: columns {tuple(frame.columns)} != {GRID_COLUMNS}")
    m = geometry.points_per_axis
    if len(frame) != m * m:
        raise InvalidArgumentError(f"read_propensity_csv: {len(frame)} rows for a {m}x{m} grid")
    values = frame["K"].to_numpy(dtype=np.float64).reshape(m, m)
    return PhaseSpaceGrid(geometry=geometry, values=values, kind=kind), header
