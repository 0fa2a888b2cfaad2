#!/usr/bin/env python3
"""
loss-check: binomial vs beam-splitter detector loss on a set of states.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

import click

from cli.commands.common import common_options, load_config, output_dir, print_table
from core.sample_writer import write_json
from services.detection.photodet import equivalence_check
from services.schemes.state_specs import to_density
from utils.errors import EquivalenceFailure

logger = logging.getLogger(__name__)


@click.command("loss-check")
@common_options
def loss_check_command(
    config_path: Optional[str], seed: Optional[int], out_dir: Optional[str], threads: int,
    formats: Sequence[str],
) -> None:
    """Write loss_check.json; exit 3 if any difference exceeds the tolerance."""
    experiment = load_config(config_path, seed, out_dir, formats)
    settings = experiment.loss_check

    entries: List[Dict[str, Any]] = []
    for state in settings.states:
        spec = state.to_spec()
        rho = to_density(spec, settings.cutoff)
        for eta in settings.etas:
            report = equivalence_check(rho, eta)
            entries.append({"state": spec.to_dict(), **report.to_dict()})

    worst = max((e["max_abs_difference"] for e in entries), default=0.0)
    path = write_json(
        {"cutoff": settings.cutoff, "tolerance": settings.tolerance, "max_abs_difference": worst,
         "entries": entries},
        output_dir(experiment) / "loss_check.json",
    )
    print_table(
        f"Loss models at cutoff {settings.cutoff}",
        ["state", "eta", "max |binomial - beam splitter|"],
        [(e["state"]["kind"], e["eta"], e["max_abs_difference"]) for e in entries],
    )
    if worst > settings.tolerance:
        raise EquivalenceFailure(
            f"Loss models differ by {worst:.3e} > {settings.tolerance:.1e}", context={"report": str(path)}
        )
