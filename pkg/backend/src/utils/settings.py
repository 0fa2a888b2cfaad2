#!/usr/bin/env python3
"""
Runtime settings loaded from the environment (and an optional .env file).
"""

import logging
import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

from utils.errors import ConfigValidationError

logger = logging.getLogger(__name__)

DEFAULT_DIM_LIMIT = 200_000
DEFAULT_DENSE_LIMIT = 4096
DEFAULT_POISSON_NORMAL_THRESHOLD = 1e6
DEFAULT_DEFICIT_THRESHOLD = 1e-6
DEFAULT_CHUNK_SIZE = 16384


@dataclass(frozen=True)
class Settings:
    """Resource limits and numerical thresholds shared by all services."""
    dim_limit: int = DEFAULT_DIM_LIMIT
    dense_limit: int = DEFAULT_DENSE_LIMIT
    poisson_normal_threshold: float = DEFAULT_POISSON_NORMAL_THRESHOLD
    deficit_threshold: float = DEFAULT_DEFICIT_THRESHOLD
    chunk_size: int = DEFAULT_CHUNK_SIZE

    def __post_init__(self) -> None:
        if self.dim_limit < 1 or self.dense_limit < 1:
            raise ConfigValidationError(
                "Dimension limits must be positive", field_path="TWOPHOTO_DIM_LIMIT"
            )
        if self.chunk_size < 1:
            raise ConfigValidationError(
                "Chunk size must be positive", field_path="TWOPHOTO_CHUNK_SIZE"
            )
        if not 0.0 <= self.deficit_threshold < 1.0:
            raise ConfigValidationError(
                "Deficit threshold must lie in [0, 1)", field_path="TWOPHOTO_DEFICIT_THRESHOLD"
            )


def _env_number(name: str, default, cast):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(float(raw)) if cast is int else cast(raw)
    except ValueError:
        raise ConfigValidationError(f"Environment variable {name}={raw!r} is not numeric",
                                    field_path=name)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load settings once per process."""
    load_dotenv()
    settings = Settings(
        dim_limit=_env_number("TWOPHOTO_DIM_LIMIT", DEFAULT_DIM_LIMIT, int),
        dense_limit=_env_number("TWOPHOTO_DENSE_LIMIT", DEFAULT_DENSE_LIMIT, int),
        poisson_normal_threshold=_env_number(
            "TWOPHOTO_POISSON_NORMAL_THRESHOLD", DEFAULT_POISSON_NORMAL_THRESHOLD, float
        ),
        deficit_threshold=_env_number(
            "TWOPHOTO_DEFICIT_THRESHOLD", DEFAULT_DEFICIT_THRESHOLD, float
        ),
        chunk_size=_env_number("TWOPHOTO_CHUNK_SIZE", DEFAULT_CHUNK_SIZE, int),
    )
    logger.debug(f"Loaded settings: {settings}")
    return settings
