#!/usr/bin/env python3
"""
simulate: draw photocurrent samples for one scheme config.
"""

import logging
from typing import Optional, Sequence

import click

from cli.commands.common import common_options, load_config, output_dir, print_table
from cli.config_models import to_scheme_config
from core.sample_writer import sample_summary, write_json, write_samples
from services.schemes.scheme_runner import run_scheme

logger = logging.getLogger(__name__)


@click.command()
@common_options
def simulate(
    config_path: Optional[str], seed: Optional[int], out_dir: Optional[str], threads: int,
    formats: Sequence[str],
) -> None:
    """Write samples.<fmt> (i1..iK, z1, z2) and summary.json."""
    experiment = load_config(config_path, seed, out_dir, formats)
    cfg = to_scheme_config(experiment.require_scheme(), experiment.seed)
    batch = run_scheme(cfg, threads)

    out = output_dir(experiment)
    for fmt in experiment.formats:
        write_samples(batch, out / f"samples.{fmt}", fmt)
    summary = sample_summary(batch, experiment.seed, cfg.eta.eta, cfg.lo_amplitude)
    write_json(summary, out / "summary.json")

    mean, cov = summary["mean"], summary["covariance"]
    print_table(
        f"{batch.scheme} ({summary['n']} samples, seed {experiment.seed})",
        ["quantity", "z1", "z2"],
        [("mean", mean[0], mean[1]), ("variance", cov[0][0], cov[1][1]), ("covariance", cov[0][1], "")],
    )
