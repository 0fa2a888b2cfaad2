#!/usr/bin/env python3
"""
equivalence: operator- and sample-level comparison of two schemes.
"""

import logging
from typing import Optional, Sequence

import click

from cli.commands.common import common_options, load_config, output_dir, print_table
from cli.config_models import to_scheme_config
from core.sample_writer import write_json
from services.schemes.equivalence import equivalence_report
from utils.errors import EquivalenceFailure

logger = logging.getLogger(__name__)


@click.command("equivalence")
@common_options
def equivalence_command(
    config_path: Optional[str], seed: Optional[int], out_dir: Optional[str], threads: int,
    formats: Sequence[str],
) -> None:
    """Write equivalence.json; exit 3 when the verdict is not-equivalent."""
    experiment = load_config(config_path, seed, out_dir, formats)
    model_a, model_b = experiment.require_pair()
    # Independent streams for the two runs
    cfg_a = to_scheme_config(model_a, experiment.seed, "schemes.0")
    cfg_b = to_scheme_config(model_b, experiment.seed + 1, "schemes.1")

    report = equivalence_report(
        cfg_a,
        cfg_b,
        significance=experiment.significance,
        threads=threads,
        with_operators=experiment.compare_operators,
    )
    path = write_json({**report.to_dict(), "seed": experiment.seed}, output_dir(experiment) / "equivalence.json")

    rows = [
        ("KS z1 p", report.ks_z1.pvalue),
        ("KS z2 p", report.ks_z2.pvalue),
        ("variance ratio z1", report.variance_ratio[0]),
        ("variance ratio z2", report.variance_ratio[1]),
    ]
    if report.operator_delta is not None:
        rows.append(("operator max delta", report.operator_delta))
    if report.homogeneity is not None:
        rows.append(("chi2 homogeneity p", report.homogeneity.pvalue))
    rows.append(("verdict", report.verdict))
    print_table(f"{report.scheme_a} vs {report.scheme_b}", ["check", "value"], rows)

    if not report.equivalent:
        raise EquivalenceFailure(
            f"{report.scheme_a} and {report.scheme_b} judged not equivalent",
            context={"report": str(path)},
        )
