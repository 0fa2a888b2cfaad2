#!/usr/bin/env python3
"""
propensity: analytic output distribution K for the configured signal and probe.
"""

import json
import logging
from typing import Optional, Sequence

import click

from cli.commands.common import common_options, load_config, output_dir, print_table
from core.grid_io import write_propensity_csv
from services.phasespace.propensity import default_geometry, propensity
from services.schemes.state_specs import to_density

logger = logging.getLogger(__name__)


@click.command("propensity")
@common_options
def propensity_command(
    config_path: Optional[str], seed: Optional[int], out_dir: Optional[str], threads: int,
    formats: Sequence[str],
) -> None:
    """Write propensity.csv (alpha_re, alpha_im, K; row-major)."""
    experiment = load_config(config_path, seed, out_dir, formats)
    model = experiment.require_scheme()
    signal_spec, probe_spec = model.signal.to_spec(), model.idler.to_spec()
    signal, probe = to_density(signal_spec), to_density(probe_spec)

    geometry = experiment.geometry(default_geometry(signal, probe).half_extent)
    grid = propensity(signal, probe, geometry, model.eta)
    path = write_propensity_csv(
        grid,
        output_dir(experiment) / "propensity.csv",
        eta=model.eta,
        extra={
            "signal": json.dumps(signal_spec.to_dict(), sort_keys=True),
            "probe": json.dumps(probe_spec.to_dict(), sort_keys=True),
        },
    )

    mean, cov = grid.moments()
    print_table(
        f"Propensity (eta={model.eta}, L={geometry.half_extent:g}, N={geometry.points_per_axis})",
        ["quantity", "value"],
        [
            ("mass", grid.total_mass()),
            ("max K", float(grid.values.max())),
            ("min K", grid.min_value()),
            ("mean", f"{mean[0]:.6g} + {mean[1]:.6g}i"),
            ("variance (re, im)", f"{cov[0, 0]:.6g}, {cov[1, 1]:.6g}"),
            ("file", str(path)),
        ],
    )
