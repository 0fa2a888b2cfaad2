#!/usr/bin/env python3
"""
decompose: element list of the triple coupler and its phase-corrected residual.
"""

import logging
from typing import Optional, Sequence

import click
import numpy as np

from cli.commands.common import common_options, load_config, output_dir, print_table
from core.linopt import TRIPLE_COUPLER_ANGLE, fit_external_phases, triple_coupler_decomposition, triple_coupler_matrix
from core.sample_writer import write_json

logger = logging.getLogger(__name__)


@click.command("decompose")
@common_options
def decompose_command(
    config_path: Optional[str], seed: Optional[int], out_dir: Optional[str], threads: int,
    formats: Sequence[str],
) -> None:
    """Write decomposition.json (elements, external phases, residual)."""
    experiment = load_config(config_path, seed, out_dir, formats)
    sequence = triple_coupler_decomposition()
    composed = sequence.compose()
    fit = fit_external_phases(composed, triple_coupler_matrix())

    write_json(
        {
            "phi1": TRIPLE_COUPLER_ANGLE,
            "elements": sequence.to_list(),
            "entry_magnitudes": np.abs(np.asarray(composed.entries)).tolist(),
            "phase_fit": fit.to_dict(),
        },
        output_dir(experiment) / "decomposition.json",
    )
    print_table(
        f"Triple coupler (phi1 = arccos(1/3) = {TRIPLE_COUPLER_ANGLE:.6f})",
        ["step", "element"],
        [(i + 1, str(element)) for i, element in enumerate(sequence.to_list())],
    )
    logger.info(f"Residual after external phases: {fit.residual:.3e}")
