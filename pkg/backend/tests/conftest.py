"""
Shared fixtures for the backend test suite.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

backend_src = Path(__file__).parent.parent / "src"
if str(backend_src) not in sys.path:
    sys.path.insert(0, str(backend_src))

from schemas.scheme_config import SchemeConfig, SchemeKind, coherent, vacuum  # noqa: E402
from utils.settings import get_settings  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per process; tests that patch the environment need a reload."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def coherent_config():
    """Factory for coherent-input scheme configs."""
    def build(scheme: str = "eight-port", alpha: complex = 1.0, **overrides) -> SchemeConfig:
        fields = {
            "scheme": SchemeKind(scheme),
            "signal": coherent(alpha) if alpha else vacuum(),
            "idler": vacuum(),
            "lo_amplitude": 1e4,
            "sample_count": 100_000,
            "seed": 7,
        }
        fields.update(overrides)
        return SchemeConfig(**fields)
    return build
