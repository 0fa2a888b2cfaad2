#!/usr/bin/env python3
"""
Options and helpers shared by the subcommands.
"""

import functools
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Optional, Sequence, Tuple

import click
from rich.console import Console
from rich.table import Table

from cli.config_models import ExperimentConfig, load_experiment_config

console = Console()


def common_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """--config, --seed, --out, --threads, --format."""
    @click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                  help="Experiment config (JSON).")
    @click.option("--seed", type=click.IntRange(min=0), default=None, help="Override the config seed.")
    @click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
                  help="Override the output directory.")
    @click.option("--threads", type=click.IntRange(min=0), default=0, show_default=True,
                  help="Sampling worker threads (0 = one per CPU).")
    @click.option("--format", "formats", type=click.Choice(["csv", "json", "parquet"]), multiple=True,
                  help="Sample file format(s); repeatable.")
    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        return func(*args, **kwargs)
    return wrapper


def load_config(
    config_path: Optional[str], seed: Optional[int], out_dir: Optional[str], formats: Sequence[str]
) -> ExperimentConfig:
    overrides: Dict[str, Any] = {
        "seed": seed,
        "output_dir": out_dir,
        "formats": list(formats) if formats else None,
    }
    return load_experiment_config(config_path, overrides)


def output_dir(experiment: ExperimentConfig) -> Path:
    path = Path(experiment.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def print_table(title: str, columns: Sequence[str], rows: Iterable[Tuple[Any, ...]]) -> None:
    table = Table(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*[_format(cell) for cell in row])
    console.print(table)


def _format(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
