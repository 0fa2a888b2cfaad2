#!/usr/bin/env python3
"""
Command-line runner for two-photocurrent experiments.

Every subcommand reads one JSON config, writes its artifacts under the output
directory and exits with 0 (success), 1 (validation), 2 (runtime/resource) or
3 (verdict failure). Errors are reported as one JSON object on stderr.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any

# Add backend/src to path when run as a script
backend_src = Path(__file__).parent.parent
if str(backend_src) not in sys.path:
    sys.path.insert(0, str(backend_src))

import click
from rich.console import Console
from rich.logging import RichHandler

from cli.commands.decompose import decompose_command
from cli.commands.equivalence import equivalence_command
from cli.commands.loss_check import loss_check_command
from cli.commands.propensity import propensity_command
from cli.commands.simulate import simulate
from utils.errors import TwoPhotocurrentError

logger = logging.getLogger(__name__)

IO_EXIT_CODE = 2


class ErrorHandlingGroup(click.Group):
    """Maps library errors to exit codes and JSON on stderr."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except TwoPhotocurrentError as e:
            click.echo(json.dumps(e.to_dict(), default=str), err=True)
            ctx.exit(e.exit_code)
        except OSError as e:
            click.echo(json.dumps({"error": type(e).__name__, "message": str(e), "context": {}}), err=True)
            ctx.exit(IO_EXIT_CODE)


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


@click.group(cls=ErrorHandlingGroup)
@click.option("--verbose", "-v", is_flag=True, help="Debug logging.")
def cli(verbose: bool) -> None:
    """Simulate and compare two-photocurrent detectors."""
    configure_logging(verbose)


cli.add_command(simulate)
cli.add_command(propensity_command)
cli.add_command(equivalence_command)
cli.add_command(loss_check_command)
cli.add_command(decompose_command)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
